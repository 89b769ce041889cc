#include "bq/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace bq {

namespace {

enum class Tok {
  ident, var, number, lparen, rparen, lbrace, rbrace, comma, dot, dotdot, colon, bar, minus,
  lt, le, gt, ge, eq, ne, end,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourcePos pos{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Tok::end, "", pos});
        return out;
      }
      const char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = i_;
        while (i_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
          advance();
        std::string text(src_.substr(start, i_ - start));
        const bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
        out.push_back({var ? Tok::var : Tok::ident, std::move(text), pos});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i_;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
        if (i_ + 1 < src_.size() && src_[i_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[i_ + 1]))) {
          advance();
          while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
        }
        out.push_back({Tok::number, std::string(src_.substr(start, i_ - start)), pos});
      } else {
        out.push_back(punct(pos));
      }
    }
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < src_.size()) {
      if (src_[i_] == '%') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token punct(SourcePos pos) {
    const char c = src_[i_];
    const char next = i_ + 1 < src_.size() ? src_[i_ + 1] : '\0';
    auto one = [&](Tok t) {
      advance();
      return Token{t, std::string(1, c), pos};
    };
    auto two = [&](Tok t) {
      std::string text{c, next};
      advance();
      advance();
      return Token{t, text, pos};
    };
    switch (c) {
      case '(': return one(Tok::lparen);
      case ')': return one(Tok::rparen);
      case '{': return one(Tok::lbrace);
      case '}': return one(Tok::rbrace);
      case ',': return one(Tok::comma);
      case ':': return one(Tok::colon);
      case '|': return one(Tok::bar);
      case '-': return one(Tok::minus);
      case '=': return one(Tok::eq);
      case '.': return next == '.' ? two(Tok::dotdot) : one(Tok::dot);
      case '<': return next == '=' ? two(Tok::le) : one(Tok::lt);
      case '>': return next == '=' ? two(Tok::ge) : one(Tok::gt);
      case '!':
        if (next == '=') return two(Tok::ne);
        break;
      default: break;
    }
    throw ParseError(ErrorKind::syntax, pos, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"domain", "fluent",  "action", "initially", "executable",
                                       "causes", "if",      "goal",   "horizon",   "discount"};
  return k;
}

bool is_comparison(Tok t) {
  return t == Tok::lt || t == Tok::le || t == Tok::gt || t == Tok::ge || t == Tok::eq ||
         t == Tok::ne;
}

CompareOp to_op(Tok t) {
  switch (t) {
    case Tok::lt: return CompareOp::lt;
    case Tok::le: return CompareOp::le;
    case Tok::gt: return CompareOp::gt;
    case Tok::ge: return CompareOp::ge;
    case Tok::eq: return CompareOp::eq;
    default: return CompareOp::ne;
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ActionTheory run() {
    while (peek().kind != Tok::end) statement();
    check_declarations();
    return std::move(theory_);
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    take();
    return true;
  }
  bool accept_keyword(const char* kw) {
    if (peek().kind != Tok::ident || peek().text != kw) return false;
    take();
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(ErrorKind::syntax, t.pos, "expected " + what + ", found " + found);
  }
  const Token& expect(Tok t, const char* what) {
    if (peek().kind != t) fail(what);
    return take();
  }
  std::string name(const char* what) {
    if (peek().kind != Tok::ident || keywords().count(peek().text)) fail(what);
    return take().text;
  }

  void statement() {
    const Token& head = peek();
    if (head.kind == Tok::ident && keywords().count(head.text) && head.text != "if" &&
        head.text != "causes") {
      const std::string kw = take().text;
      if (kw == "domain") return domain(head.pos);
      if (kw == "fluent") return signatures(theory_.fluents);
      if (kw == "action") return signatures(theory_.actions);
      if (kw == "initially") return initially();
      if (kw == "executable") return executable(head.pos);
      if (kw == "goal") {
        theory_.goal.literals = literal_set();
        expect(Tok::dot, "'.'");
        return;
      }
      if (kw == "horizon") {
        const Token& t = expect(Tok::number, "horizon length");
        int value = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
          throw ParseError(ErrorKind::syntax, t.pos, "horizon must be an integer");
        theory_.horizon = value;
        expect(Tok::dot, "'.'");
        return;
      }
      if (kw == "discount") {
        const Token& t = expect(Tok::number, "discount factor");
        theory_.discount = std::stod(t.text);
        expect(Tok::dot, "'.'");
        return;
      }
    }
    // Optional "static" prefix; contextual, so a fluent may still be called static.
    if (head.kind == Tok::ident && head.text == "static" &&
        (peek(1).kind == Tok::minus || (peek(1).kind == Tok::ident && peek(1).text != "causes" && peek(1).text != "if"))) {
      const SourcePos pos = take().pos;
      return static_law(pos);
    }
    law(head.pos);
  }

  void static_law(SourcePos pos) {
    StaticLaw law;
    law.pos = pos;
    law.head = literal();
    if (!accept_keyword("if")) fail("'if'");
    condition(law.condition, law.guards);
    expect(Tok::dot, "'.'");
    theory_.static_laws.push_back(std::move(law));
  }

  void domain(SourcePos pos) {
    DomainDecl d;
    d.pos = pos;
    d.name = name("domain name");
    expect(Tok::eq, "'='");
    if (accept(Tok::lbrace)) {
      if (!accept(Tok::rbrace)) {
        do {
          d.constants.push_back(constant("domain constant"));
        } while (accept(Tok::comma));
        expect(Tok::rbrace, "'}'");
      }
    } else {
      const Token& lo = expect(Tok::number, "range start");
      expect(Tok::dotdot, "'..'");
      const Token& hi = expect(Tok::number, "range end");
      long a = 0, b = 0;
      if (lo.text.find('.') != std::string::npos || hi.text.find('.') != std::string::npos)
        throw ParseError(ErrorKind::syntax, lo.pos, "range bounds must be integers");
      a = std::stol(lo.text);
      b = std::stol(hi.text);
      for (long v = a; v <= b; ++v) d.constants.push_back(std::to_string(v));
    }
    expect(Tok::dot, "'.'");
    std::set<std::string> seen;
    for (const auto& c : d.constants)
      if (!seen.insert(c).second)
        throw ParseError(ErrorKind::declaration, pos, "constant '" + c + "' repeated in domain");
    if (theory_.find_domain(d.name))
      throw ParseError(ErrorKind::declaration, pos, "duplicate declaration of domain '" + d.name + "'");
    theory_.domains.push_back(std::move(d));
  }

  std::string constant(const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      if (t.text.find('.') != std::string::npos) fail(what);
      return take().text;
    }
    return name(what);
  }

  void signatures(std::vector<Signature>& into) {
    do {
      Signature s;
      s.pos = peek().pos;
      s.name = name("predicate name");
      if (accept(Tok::lparen)) {
        do {
          s.arg_types.push_back(name("type name"));
        } while (accept(Tok::comma));
        expect(Tok::rparen, "')'");
      }
      if (theory_.find_fluent(s.name) || theory_.find_action(s.name))
        throw ParseError(ErrorKind::declaration, s.pos, "duplicate declaration of '" + s.name + "'");
      into.push_back(std::move(s));
    } while (accept(Tok::comma));
    expect(Tok::dot, "'.'");
  }

  void initially() {
    do {
      expect(Tok::lbrace, "'{'");
      ConjunctiveFormula f;
      if (!accept(Tok::rbrace)) {
        do {
          f.literals.push_back(literal());
        } while (accept(Tok::comma));
        expect(Tok::rbrace, "'}'");
      }
      theory_.initial_states.push_back(std::move(f));
    } while (accept(Tok::bar));
    expect(Tok::dot, "'.'");
  }

  void executable(SourcePos pos) {
    ExecutabilityLaw law;
    law.pos = pos;
    law.action = atom();
    if (accept_keyword("if")) condition(law.condition, law.guards);
    expect(Tok::dot, "'.'");
    theory_.executability_laws.push_back(std::move(law));
  }

  void law(SourcePos pos) {
    Literal head = literal();
    if (accept_keyword("causes")) {
      if (!head.positive)
        throw ParseError(ErrorKind::syntax, pos, "an action cannot be negated");
      CausalLaw law;
      law.pos = pos;
      law.action = std::move(head.atom);
      law.effects.literals = literal_set();
      if (accept(Tok::colon)) law.reward = reward();
      if (accept_keyword("if")) condition(law.condition, law.guards);
      expect(Tok::dot, "'.'");
      theory_.causal_laws.push_back(std::move(law));
      return;
    }
    if (accept_keyword("if")) {
      StaticLaw law;
      law.pos = pos;
      law.head = std::move(head);
      condition(law.condition, law.guards);
      expect(Tok::dot, "'.'");
      theory_.static_laws.push_back(std::move(law));
      return;
    }
    fail("'causes' or 'if'");
  }

  Reward reward() {
    SourcePos pos = peek().pos;
    std::string text = accept(Tok::minus) ? "-" : "";
    text += expect(Tok::number, "reward value").text;
    auto r = Reward::parse(text);
    if (!r) throw ParseError(ErrorKind::syntax, pos, "reward '" + text + "' is not a decimal with at most 6 fractional digits");
    return *r;
  }

  std::vector<Literal> literal_set() {
    std::vector<Literal> out;
    const bool braced = accept(Tok::lbrace);
    if (braced && accept(Tok::rbrace)) return out;
    do {
      out.push_back(literal());
    } while (accept(Tok::comma));
    if (braced) expect(Tok::rbrace, "'}'");
    return out;
  }

  void condition(ConjunctiveFormula& formula, std::vector<Comparison>& guards) {
    const bool braced = accept(Tok::lbrace);
    if (braced && accept(Tok::rbrace)) return;
    do {
      item(formula, guards);
    } while (accept(Tok::comma));
    if (braced) expect(Tok::rbrace, "'}'");
  }

  void item(ConjunctiveFormula& formula, std::vector<Comparison>& guards) {
    const Token& t = peek();
    if (t.kind == Tok::var || t.kind == Tok::number) {
      guards.push_back(comparison(term()));
      return;
    }
    if (t.kind == Tok::minus) {
      formula.literals.push_back(literal());
      return;
    }
    Atom a = atom();
    if (is_comparison(peek().kind)) {
      if (!a.args.empty()) fail("literal");
      guards.push_back(comparison(Term::constant(a.name)));
      guards.back().pos = a.pos;
      return;
    }
    formula.literals.push_back({std::move(a), true});
  }

  Comparison comparison(Term lhs) {
    Comparison c;
    c.pos = peek().pos;
    c.lhs = std::move(lhs);
    if (!is_comparison(peek().kind)) fail("comparison operator");
    c.op = to_op(take().kind);
    c.rhs = term();
    return c;
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::var) return Term::var(take().text);
    return Term::constant(constant("term"));
  }

  Literal literal() {
    const bool negative = accept(Tok::minus);
    return {atom(), !negative};
  }

  Atom atom() {
    Atom a;
    a.pos = peek().pos;
    a.name = name("atom");
    if (accept(Tok::lparen)) {
      do {
        a.args.push_back(term());
      } while (accept(Tok::comma));
      expect(Tok::rparen, "')'");
    }
    return a;
  }

  void check_declarations() const {
    auto check = [&](const std::vector<Signature>& sigs) {
      for (const auto& s : sigs)
        for (const auto& type : s.arg_types)
          if (!theory_.find_domain(type))
            throw ParseError(ErrorKind::declaration, s.pos, "unknown type name '" + type + "'");
    };
    check(theory_.fluents);
    check(theory_.actions);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ActionTheory theory_;
};

}  // namespace

ActionTheory parse_theory(std::string_view source) {
  return Parser(Lexer(source).run()).run();
}

}  // namespace bq

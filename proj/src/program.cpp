#include "bq/program.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "bq/error.hpp"

namespace bq {

std::string to_string(RuleKind kind) {
  static const char* const core[] = {"action", "literal", "literal-neg", "contrary", "contrary-neg",
                                     "initial", "initial-choice", "initial-choice-neg", "exec", "effect",
                                     "reward", "q", "inertia", "consistency", "occ", "abocc", "goal"};
  const auto k = static_cast<std::size_t>(kind);
  if (k <= static_cast<std::size_t>(RuleKind::goal)) return core[k];
  switch (kind) {
    case RuleKind::atom_fact: return "atom";
    case RuleKind::static_law: return "static";
    case RuleKind::enforce_exec: return "enforce-exec";
    case RuleKind::strict_initial: return "strict-initial";
    case RuleKind::require_goal: return "require-goal";
    case RuleKind::discount_fact: return "factor";
    case RuleKind::q_seed: return "q-seed";
    default: return "user";
  }
}

AtomId NormalProgram::intern(std::string_view text) {
  auto it = index_.find(std::string(text));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<AtomId>(names_.size());
  names_.emplace_back(text);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<AtomId> NormalProgram::find(std::string_view text) const {
  auto it = index_.find(std::string(text));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void NormalProgram::add(ProgramRule rule, RuleOrigin origin) {
  rules.push_back(std::move(rule));
  origins.push_back(std::move(origin));
}

std::string NormalProgram::rule_text(const ProgramRule& rule) const {
  std::string out = rule.head ? name(*rule.head) : "";
  if (rule.positive.empty() && rule.negative.empty()) return out + ".";
  out += rule.head ? " :- " : ":- ";
  bool first = true;
  for (AtomId a : rule.positive) {
    out += (first ? "" : ", ") + name(a);
    first = false;
  }
  for (AtomId a : rule.negative) {
    out += (first ? "not " : ", not ") + name(a);
    first = false;
  }
  return out + ".";
}

std::string q_layer_text(const QLayerRule& rule, double gamma) {
  const std::string g = format_real(gamma);
  const std::string t = std::to_string(rule.time);
  const std::string t1 = std::to_string(rule.time + 1);
  const std::string r = rule.reward.to_string();
  std::string out = "q(V+" + r + "*" + g + "^" + t + "," + rule.action + "," + t1 + ") :- q(V,A," + t +
                    "), factor(" + g + "), reward(" + r + "," + rule.action + "," + t1 + "), occ(" +
                    rule.action + "," + t + "), exec(" + rule.action + "," + t + ")";
  for (const auto& l : rule.condition) out += ", holds(" + l + "," + t + ")";
  for (const auto& l : rule.effects) out += ", holds(" + l + "," + t1 + ")";
  return out + ".";
}

std::string emit_program_text(const NormalProgram& program) {
  std::ostringstream out;
  if (program.horizon) out << "%! horizon " << *program.horizon << ".\n";
  if (program.gamma) out << "%! gamma " << format_real(*program.gamma) << ".\n";
  for (const auto& rule : program.rules) out << program.rule_text(rule) << "\n";
  for (const auto& q : program.q_layer) out << "%! " << q_layer_text(q, program.gamma.value_or(0.0)) << "\n";
  return out.str();
}

AtomParts split_atom(std::string_view text) {
  AtomParts parts;
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    parts.predicate = std::string(text);
    return parts;
  }
  parts.predicate = std::string(text.substr(0, open));
  int depth = 0;
  std::size_t start = open + 1;
  for (std::size_t i = open + 1; i + 1 < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (c == ',' && depth == 0) {
      parts.args.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.args.emplace_back(text.substr(start, text.size() - 1 - start));
  return parts;
}

namespace {

struct Statement {
  std::string text;
  SourcePos pos;
  bool directive = false;
};

// Splits on top-level '.', dropping comments and keeping "%!" directives.
std::vector<Statement> statements(std::string_view src) {
  std::vector<Statement> out;
  Statement current;
  int line = 1, col = 1, depth = 0;
  bool started = false;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const char c = src[i];
    if (c == '%' && depth == 0 && !started) {
      std::size_t end = src.find('\n', i);
      if (end == std::string_view::npos) end = src.size();
      if (i + 1 < src.size() && src[i + 1] == '!') {
        std::string body(src.substr(i + 2, end - i - 2));
        while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
        out.push_back({std::move(body), {line, col}, true});
      }
      col += static_cast<int>(end - i);
      i = end - 1;
      continue;
    }
    if (!started && !std::isspace(static_cast<unsigned char>(c))) {
      started = true;
      current.pos = {line, col};
    }
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    if (!started) continue;
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) throw ParseError(ErrorKind::syntax, {line, col - 1}, "unbalanced ')'");
    if (c == '.' && depth == 0) {
      out.push_back(std::move(current));
      current = {};
      started = false;
      continue;
    }
    current.text += c;
  }
  if (started) throw ParseError(ErrorKind::syntax, current.pos, "statement is not terminated by '.'");
  return out;
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

std::vector<std::string> split_top(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == ',' && depth == 0) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.emplace_back(s.substr(start));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string atom_text(std::string_view raw, SourcePos pos) {
  std::string a = strip_spaces(raw);
  if (a.empty()) throw ParseError(ErrorKind::syntax, pos, "empty atom");
  if (!std::islower(static_cast<unsigned char>(a.front())))
    throw ParseError(ErrorKind::syntax, pos, "atom '" + a + "' must start with a lowercase letter");
  for (char c : a)
    if (!std::isalnum(static_cast<unsigned char>(c)) && std::string_view("_(),.-").find(c) == std::string_view::npos)
      throw ParseError(ErrorKind::syntax, pos, "unexpected character '" + std::string(1, c) + "' in atom '" + a + "'");
  return a;
}

int parse_int(std::string_view s, SourcePos pos) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(ErrorKind::syntax, pos, "expected an integer, got '" + std::string(s) + "'");
  return v;
}

QLayerRule parse_q_layer(std::string_view text, SourcePos pos) {
  const auto arrow = text.find(":-");
  if (arrow == std::string_view::npos) throw ParseError(ErrorKind::syntax, pos, "Q layer entry has no body");
  const auto head = split_atom(strip_spaces(text.substr(0, arrow)));
  if (head.predicate != "q" || head.args.size() != 3)
    throw ParseError(ErrorKind::syntax, pos, "malformed Q layer head");
  QLayerRule rule;
  rule.action = head.args[1];
  rule.time = parse_int(head.args[2], pos) - 1;
  // V+<r>*<gamma>^<T>
  const std::string& term = head.args[0];
  const auto plus = term.find('+'), star = term.find('*');
  if (term.rfind("V+", 0) != 0 || star == std::string::npos)
    throw ParseError(ErrorKind::syntax, pos, "malformed Q layer value term '" + term + "'");
  auto r = Reward::parse(std::string_view(term).substr(plus + 1, star - plus - 1));
  if (!r) throw ParseError(ErrorKind::syntax, pos, "malformed reward in '" + term + "'");
  rule.reward = *r;
  for (const auto& item : split_top(text.substr(arrow + 2))) {
    const auto parts = split_atom(strip_spaces(item));
    if (parts.predicate != "holds" || parts.args.size() != 2) continue;
    const int t = parse_int(parts.args[1], pos);
    (t == rule.time ? rule.condition : rule.effects).push_back(parts.args[0]);
  }
  return rule;
}

}  // namespace

NormalProgram parse_program(std::string_view text) {
  NormalProgram program;
  for (const auto& st : statements(text)) {
    std::string_view body = trim(st.text);
    if (st.directive) {
      // Directive bodies keep their own trailing '.'.
      if (!body.empty() && body.back() == '.') body.remove_suffix(1);
      if (body.rfind("horizon", 0) == 0) {
        program.horizon = parse_int(trim(body.substr(7)), st.pos);
      } else if (body.rfind("gamma", 0) == 0) {
        const std::string g(trim(body.substr(5)));
        try {
          program.gamma = std::stod(g);
        } catch (const std::exception&) {
          throw ParseError(ErrorKind::syntax, st.pos, "malformed gamma '" + g + "'");
        }
      } else if (body.rfind("q(", 0) == 0) {
        program.q_layer.push_back(parse_q_layer(body, st.pos));
      } else {
        throw ParseError(ErrorKind::syntax, st.pos, "unknown directive '" + std::string(body) + "'");
      }
      continue;
    }
    ProgramRule rule;
    const auto arrow = body.find(":-");
    const std::string_view head = trim(arrow == std::string_view::npos ? body : body.substr(0, arrow));
    if (!head.empty()) rule.head = program.intern(atom_text(head, st.pos));
    if (arrow != std::string_view::npos) {
      for (const auto& raw : split_top(body.substr(arrow + 2))) {
        std::string_view item = trim(raw);
        if (item.rfind("not ", 0) == 0 || item.rfind("not\t", 0) == 0)
          rule.negative.push_back(program.intern(atom_text(item.substr(4), st.pos)));
        else
          rule.positive.push_back(program.intern(atom_text(item, st.pos)));
      }
    } else if (head.empty()) {
      throw ParseError(ErrorKind::syntax, st.pos, "empty statement");
    }
    program.add(std::move(rule), {RuleKind::user, -1, {}});
  }
  return program;
}

bool structurally_equal(const NormalProgram& a, const NormalProgram& b) {
  if (a.horizon != b.horizon || a.gamma != b.gamma || a.q_layer != b.q_layer) return false;
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (a.rule_text(a.rules[i]) != b.rule_text(b.rules[i])) return false;
  return true;
}

}  // namespace bq

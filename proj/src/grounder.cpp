#include "bq/grounder.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace bq {

namespace {

using Binding = std::map<std::string, std::string>;

[[noreturn]] void fail(SourcePos pos, const std::string& msg) {
  throw ParseError(ErrorKind::grounding, pos, msg);
}

class LawScope {
 public:
  LawScope(const ActionTheory& theory, SourcePos pos) : theory_(theory), pos_(pos) {}

  void bind_action(const Atom& a) { bind(a, theory_.find_action(a.name), "action"); }
  void bind_fluent(const Atom& a) { bind(a, theory_.find_fluent(a.name), "fluent"); }
  void bind_formula(const ConjunctiveFormula& f) {
    for (const auto& l : f.literals) bind_fluent(l.atom);
  }
  void check_guards(const std::vector<Comparison>& guards) const {
    for (const auto& g : guards)
      for (const Term* t : {&g.lhs, &g.rhs})
        if (t->variable && !types_.count(t->text))
          fail(g.pos, "unbounded variable '" + t->text + "' (appears only in a comparison)");
  }

  /// All substitutions of the bound variables, in declaration order of the
  /// variables and of the domain constants.
  std::vector<Binding> substitutions() const {
    std::vector<Binding> out{Binding{}};
    for (const auto& var : order_) {
      const std::string& type = types_.at(var);
      const DomainDecl* dom = theory_.find_domain(type);
      if (!dom) fail(pos_, "unknown type name '" + type + "'");
      if (dom->constants.empty()) fail(pos_, "empty domain '" + type + "' for variable '" + var + "'");
      std::vector<Binding> next;
      next.reserve(out.size() * dom->constants.size());
      for (const auto& b : out)
        for (const auto& c : dom->constants) {
          Binding nb = b;
          nb[var] = c;
          next.push_back(std::move(nb));
        }
      out = std::move(next);
    }
    return out;
  }

 private:
  void bind(const Atom& a, const Signature* sig, const char* kind) {
    if (!sig) fail(a.pos, std::string("undeclared ") + kind + " '" + a.name + "'");
    if (sig->arg_types.size() != a.args.size())
      fail(a.pos, std::string(kind) + " '" + a.name + "' expects " +
                      std::to_string(sig->arg_types.size()) + " argument(s)");
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (!a.args[i].variable) continue;
      const std::string& var = a.args[i].text;
      auto [it, inserted] = types_.emplace(var, sig->arg_types[i]);
      if (inserted) {
        order_.push_back(var);
      } else if (it->second != sig->arg_types[i]) {
        fail(a.pos, "variable '" + var + "' used with types '" + it->second + "' and '" +
                        sig->arg_types[i] + "'");
      }
    }
  }

  const ActionTheory& theory_;
  SourcePos pos_;
  std::map<std::string, std::string> types_;
  std::vector<std::string> order_;
};

std::optional<long long> as_integer(const std::string& s) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

const std::string& resolve(const Term& t, const Binding& b) {
  return t.variable ? b.at(t.text) : t.text;
}

bool holds(const Comparison& c, const Binding& b) {
  const std::string& l = resolve(c.lhs, b);
  const std::string& r = resolve(c.rhs, b);
  int cmp = 0;
  auto li = as_integer(l);
  auto ri = as_integer(r);
  if (li && ri) {
    cmp = *li < *ri ? -1 : (*li > *ri ? 1 : 0);
  } else {
    cmp = l.compare(r);
    cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
  }
  switch (c.op) {
    case CompareOp::lt: return cmp < 0;
    case CompareOp::le: return cmp <= 0;
    case CompareOp::gt: return cmp > 0;
    case CompareOp::ge: return cmp >= 0;
    case CompareOp::eq: return cmp == 0;
    case CompareOp::ne: return cmp != 0;
  }
  return false;
}

bool all_hold(const std::vector<Comparison>& guards, const Binding& b) {
  return std::all_of(guards.begin(), guards.end(), [&](const Comparison& c) { return holds(c, b); });
}

Atom substitute(const Atom& a, const Binding& b) {
  Atom out = a;
  for (auto& t : out.args)
    if (t.variable) t = Term::constant(b.at(t.text));
  return out;
}

ConjunctiveFormula substitute(const ConjunctiveFormula& f, const Binding& b) {
  ConjunctiveFormula out;
  out.literals.reserve(f.literals.size());
  for (const auto& l : f.literals) out.literals.push_back({substitute(l.atom, b), l.positive});
  out.canonicalize();
  return out;
}

/// Universally expands a guard-free formula: union over all substitutions.
ConjunctiveFormula expand(const ActionTheory& theory, const ConjunctiveFormula& f, SourcePos pos) {
  LawScope scope(theory, pos);
  scope.bind_formula(f);
  ConjunctiveFormula out;
  for (const auto& b : scope.substitutions()) {
    auto inst = substitute(f, b);
    out.literals.insert(out.literals.end(), inst.literals.begin(), inst.literals.end());
  }
  out.canonicalize();
  return out;
}

template <class Law>
void sort_unique(std::vector<Law>& laws) {
  std::vector<std::pair<std::string, Law>> keyed;
  keyed.reserve(laws.size());
  for (auto& l : laws) keyed.emplace_back(l.str(), std::move(l));
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  laws.clear();
  for (std::size_t i = 0; i < keyed.size(); ++i)
    if (i == 0 || keyed[i].first != keyed[i - 1].first) laws.push_back(std::move(keyed[i].second));
}

}  // namespace

ActionTheory ground_theory(const ActionTheory& theory) {
  ActionTheory out;
  out.domains = theory.domains;
  out.fluents = theory.fluents;
  out.actions = theory.actions;
  out.horizon = theory.horizon;
  out.discount = theory.discount;

  for (const auto& law : theory.causal_laws) {
    LawScope scope(theory, law.pos);
    scope.bind_action(law.action);
    scope.bind_formula(law.effects);
    scope.bind_formula(law.condition);
    scope.check_guards(law.guards);
    for (const auto& b : scope.substitutions()) {
      if (!all_hold(law.guards, b)) continue;
      CausalLaw g;
      g.action = substitute(law.action, b);
      g.effects = substitute(law.effects, b);
      g.reward = law.reward;
      g.condition = substitute(law.condition, b);
      g.pos = law.pos;
      out.causal_laws.push_back(std::move(g));
    }
  }
  for (const auto& law : theory.executability_laws) {
    LawScope scope(theory, law.pos);
    scope.bind_action(law.action);
    scope.bind_formula(law.condition);
    scope.check_guards(law.guards);
    for (const auto& b : scope.substitutions()) {
      if (!all_hold(law.guards, b)) continue;
      ExecutabilityLaw g;
      g.action = substitute(law.action, b);
      g.condition = substitute(law.condition, b);
      g.pos = law.pos;
      out.executability_laws.push_back(std::move(g));
    }
  }
  for (const auto& law : theory.static_laws) {
    LawScope scope(theory, law.pos);
    scope.bind_fluent(law.head.atom);
    scope.bind_formula(law.condition);
    scope.check_guards(law.guards);
    for (const auto& b : scope.substitutions()) {
      if (!all_hold(law.guards, b)) continue;
      StaticLaw g;
      g.head = {substitute(law.head.atom, b), law.head.positive};
      g.condition = substitute(law.condition, b);
      g.pos = law.pos;
      out.static_laws.push_back(std::move(g));
    }
  }
  sort_unique(out.causal_laws);
  sort_unique(out.executability_laws);
  sort_unique(out.static_laws);

  for (const auto& f : theory.initial_states) {
    SourcePos pos = f.literals.empty() ? SourcePos{} : f.literals.front().atom.pos;
    auto g = expand(theory, f, pos);
    if (std::find(out.initial_states.begin(), out.initial_states.end(), g) == out.initial_states.end())
      out.initial_states.push_back(std::move(g));
  }
  out.goal = expand(theory, theory.goal,
                    theory.goal.literals.empty() ? SourcePos{} : theory.goal.literals.front().atom.pos);
  return out;
}

}  // namespace bq

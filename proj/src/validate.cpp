#include "bq/validate.hpp"

#include <algorithm>
#include <set>

namespace bq {

namespace {

void vars_of(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args)
    if (t.variable) out.insert(t.text);
}

void vars_of(const ConjunctiveFormula& f, std::set<std::string>& out) {
  for (const auto& l : f.literals) vars_of(l.atom, out);
}

void vars_of(const std::vector<Comparison>& guards, std::set<std::string>& out) {
  for (const auto& g : guards)
    for (const Term* t : {&g.lhs, &g.rhs})
      if (t->variable) out.insert(t->text);
}

class Checker {
 public:
  explicit Checker(const ActionTheory& t) : theory_(t) {}

  ValidationReport run() {
    discount();
    horizon();
    if (theory_.initial_states.empty())
      add(Severity::error, "missing initial states", "no 'initially' statement", {});
    for (const auto& f : theory_.initial_states) {
      if (!f.is_consistent())
        add(Severity::error, "inconsistent initial description", "{" + f.str() + "}", pos_of(f));
      constants(f);
    }
    if (!theory_.goal.is_consistent())
      add(Severity::warning, "inconsistent goal", theory_.goal.str(), pos_of(theory_.goal));
    constants(theory_.goal);

    std::set<std::string> executable_names;
    for (const auto& law : theory_.executability_laws) {
      executable_names.insert(law.action.name);
      std::set<std::string> in_action, in_condition;
      vars_of(law.action, in_action);
      vars_of(law.condition, in_condition);
      vars_of(law.guards, in_condition);
      for (const auto& v : in_action)
        if (!in_condition.count(v))
          add(Severity::error, "variable scoping",
              "variable '" + v + "' of the action does not appear in the condition: " + law.str(),
              law.pos);
      constants(law.action, theory_.find_action(law.action.name));
      constants(law.condition);
    }
    for (const auto& law : theory_.causal_laws) {
      std::set<std::string> in_effects, bound;
      vars_of(law.effects, in_effects);
      vars_of(law.action, bound);
      vars_of(law.condition, bound);
      vars_of(law.guards, bound);
      for (const auto& v : in_effects)
        if (!bound.count(v))
          add(Severity::error, "variable scoping",
              "effect variable '" + v + "' appears in neither the action nor the condition: " +
                  law.str(),
              law.pos);
      if (!law.effects.is_consistent())
        add(Severity::error, "inconsistent effects", law.str(), law.pos);
      if (!law.condition.is_consistent())
        add(Severity::warning, "inconsistent condition", law.str(), law.pos);
      constants(law.action, theory_.find_action(law.action.name));
      constants(law.effects);
      constants(law.condition);
    }
    for (const auto& law : theory_.static_laws) {
      constants(law.head.atom, theory_.find_fluent(law.head.atom.name));
      constants(law.condition);
    }
    for (const auto& law : theory_.causal_laws)
      if (!executable_names.count(law.action.name) && warned_.insert(law.action.name).second)
        add(Severity::warning, "no executability law",
            "action '" + law.action.name + "' has causal laws but is never executable", law.pos);
    return std::move(report_);
  }

 private:
  void add(Severity s, std::string code, std::string detail, SourcePos pos) {
    report_.violations.push_back({s, std::move(code), std::move(detail), pos});
  }

  static SourcePos pos_of(const ConjunctiveFormula& f) {
    return f.literals.empty() ? SourcePos{} : f.literals.front().atom.pos;
  }

  void discount() {
    if (!theory_.discount) {
      add(Severity::error, "missing discount", "no 'discount' statement", {});
    } else if (!(*theory_.discount > 0.0 && *theory_.discount < 1.0)) {
      add(Severity::error, "discount out of range",
          "discount " + format_real(*theory_.discount) + " is not in (0, 1)", {});
    }
  }

  void horizon() {
    if (!theory_.horizon) {
      add(Severity::error, "missing horizon", "no 'horizon' statement", {});
    } else if (*theory_.horizon < 0) {
      add(Severity::error, "horizon out of range",
          "horizon " + std::to_string(*theory_.horizon) + " is negative", {});
    }
  }

  void constants(const Atom& a, const Signature* sig) {
    if (!sig) {
      add(Severity::error, "undeclared symbol", "'" + a.name + "' is not declared", a.pos);
      return;
    }
    if (sig->arg_types.size() != a.args.size()) {
      add(Severity::error, "arity mismatch", a.str(), a.pos);
      return;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (a.args[i].variable) continue;
      const DomainDecl* dom = theory_.find_domain(sig->arg_types[i]);
      if (!dom || std::find(dom->constants.begin(), dom->constants.end(), a.args[i].text) ==
                      dom->constants.end())
        add(Severity::error, "undeclared constant",
            "'" + a.args[i].text + "' in " + a.str() + " is not in domain '" +
                sig->arg_types[i] + "'",
            a.pos);
    }
  }

  void constants(const ConjunctiveFormula& f) {
    for (const auto& l : f.literals) constants(l.atom, theory_.find_fluent(l.atom.name));
  }

  const ActionTheory& theory_;
  ValidationReport report_;
  std::set<std::string> warned_;
};

}  // namespace

bool ValidationReport::ok() const {
  return std::none_of(violations.begin(), violations.end(),
                      [](const Violation& v) { return v.severity == Severity::error; });
}

std::string ValidationReport::str() const {
  std::string out;
  for (const auto& v : violations) {
    out += v.severity == Severity::error ? "error" : "warning";
    if (v.pos.line > 0) out += " at " + v.pos.str();
    out += ": " + v.code + ": " + v.detail + "\n";
  }
  return out;
}

ValidationReport validate_theory(const ActionTheory& theory) { return Checker(theory).run(); }

}  // namespace bq

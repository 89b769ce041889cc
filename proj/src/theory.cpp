#include "bq/theory.hpp"

#include <algorithm>
#include <sstream>

namespace bq {

namespace {

bool formula_ground(const ConjunctiveFormula& f) {
  return std::all_of(f.literals.begin(), f.literals.end(),
                     [](const Literal& l) { return l.atom.is_ground(); });
}

std::string guards_str(const std::vector<Comparison>& guards) {
  std::string out;
  for (const auto& g : guards) {
    out += ", ";
    out += g.str();
  }
  return out;
}

// "if psi[, guards]", with `{}` standing for the empty condition.
std::string condition_str(const ConjunctiveFormula& condition,
                          const std::vector<Comparison>& guards) {
  if (condition.empty() && guards.empty()) return "{}";
  std::string out = condition.str();
  std::string rest = guards_str(guards);
  if (out.empty()) rest.erase(0, 2);
  return out + rest;
}

}  // namespace

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.variable; });
}

std::string Atom::str() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].text;
  }
  return out + ")";
}

bool ConjunctiveFormula::is_consistent() const {
  for (std::size_t i = 0; i < literals.size(); ++i)
    for (std::size_t j = i + 1; j < literals.size(); ++j)
      if (literals[i].atom == literals[j].atom && literals[i].positive != literals[j].positive)
        return false;
  return true;
}

void ConjunctiveFormula::canonicalize() {
  auto key = [](const Literal& l) { return std::make_pair(l.atom.str(), !l.positive); };
  std::sort(literals.begin(), literals.end(),
            [&](const Literal& a, const Literal& b) { return key(a) < key(b); });
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
}

std::string ConjunctiveFormula::str() const {
  std::string out;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) out += ", ";
    out += literals[i].str();
  }
  return out;
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "!=";
  }
  return "?";
}

std::string Comparison::str() const {
  return lhs.text + " " + to_string(op) + " " + rhs.text;
}

std::string CausalLaw::str() const {
  std::string out = action.str() + " causes " + (effects.empty() ? "{}" : effects.str()) +
                    " : " + reward.to_string();
  if (!condition.empty() || !guards.empty()) out += " if " + condition_str(condition, guards);
  return out + ".";
}

std::string ExecutabilityLaw::str() const {
  return "executable " + action.str() + " if " + condition_str(condition, guards) + ".";
}

std::string StaticLaw::str() const {
  return head.str() + " if " + condition_str(condition, guards) + ".";
}

std::string Signature::str() const {
  if (arg_types.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < arg_types.size(); ++i) {
    if (i) out += ", ";
    out += arg_types[i];
  }
  return out + ")";
}

const DomainDecl* ActionTheory::find_domain(const std::string& name) const {
  for (const auto& d : domains)
    if (d.name == name) return &d;
  return nullptr;
}

const Signature* ActionTheory::find_fluent(const std::string& name) const {
  for (const auto& s : fluents)
    if (s.name == name) return &s;
  return nullptr;
}

const Signature* ActionTheory::find_action(const std::string& name) const {
  for (const auto& s : actions)
    if (s.name == name) return &s;
  return nullptr;
}

bool ActionTheory::is_ground() const {
  for (const auto& f : initial_states)
    if (!formula_ground(f)) return false;
  if (!formula_ground(goal)) return false;
  for (const auto& law : causal_laws)
    if (!law.action.is_ground() || !formula_ground(law.effects) ||
        !formula_ground(law.condition) || !law.guards.empty())
      return false;
  for (const auto& law : executability_laws)
    if (!law.action.is_ground() || !formula_ground(law.condition) || !law.guards.empty())
      return false;
  for (const auto& law : static_laws)
    if (!law.head.atom.is_ground() || !formula_ground(law.condition) || !law.guards.empty())
      return false;
  return true;
}

std::string print_theory(const ActionTheory& theory) {
  std::ostringstream out;
  for (const auto& d : theory.domains) {
    out << "domain " << d.name << " = {";
    for (std::size_t i = 0; i < d.constants.size(); ++i) out << (i ? ", " : "") << d.constants[i];
    out << "}.\n";
  }
  for (const auto& f : theory.fluents) out << "fluent " << f.str() << ".\n";
  for (const auto& a : theory.actions) out << "action " << a.str() << ".\n";

  // Law kinds in lexicographic order of their names: causal, executable, static.
  auto emit_sorted = [&](std::vector<std::string> lines) {
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << "\n";
  };
  std::vector<std::string> lines;
  for (const auto& law : theory.causal_laws) lines.push_back(law.str());
  emit_sorted(std::move(lines));
  lines = {};
  for (const auto& law : theory.executability_laws) lines.push_back(law.str());
  emit_sorted(std::move(lines));
  lines = {};
  for (const auto& law : theory.static_laws) lines.push_back(law.str());
  emit_sorted(std::move(lines));

  if (!theory.initial_states.empty()) {
    out << "initially ";
    for (std::size_t i = 0; i < theory.initial_states.size(); ++i)
      out << (i ? " | " : "") << "{" << theory.initial_states[i].str() << "}";
    out << ".\n";
  }
  if (!theory.goal.empty()) out << "goal " << theory.goal.str() << ".\n";
  if (theory.horizon) out << "horizon " << *theory.horizon << ".\n";
  if (theory.discount) out << "discount " << format_real(*theory.discount) << ".\n";
  return out.str();
}

}  // namespace bq

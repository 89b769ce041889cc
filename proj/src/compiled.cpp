#include "bq/compiled.hpp"

#include <algorithm>

#include "bq/error.hpp"

namespace bq {

LiteralSet::LiteralSet(std::size_t fluents, std::span<const Lit> lits) : marks_(fluents, 0) {
  for (Lit l : lits) insert(l);
}

bool LiteralSet::contains_all(std::span<const Lit> lits) const {
  return std::all_of(lits.begin(), lits.end(), [&](Lit l) { return contains(l); });
}

bool LiteralSet::insert(Lit l) {
  auto& m = marks_[l.fluent()];
  if (m & bit(l)) return false;
  m |= bit(l);
  return true;
}

bool LiteralSet::is_consistent() const {
  return std::none_of(marks_.begin(), marks_.end(), [](std::uint8_t m) { return m == 3; });
}

bool LiteralSet::is_complete() const {
  return std::none_of(marks_.begin(), marks_.end(), [](std::uint8_t m) { return m == 0; });
}

bool LiteralSet::subset_of(const LiteralSet& other) const {
  for (std::size_t i = 0; i < marks_.size(); ++i)
    if ((marks_[i] & other.marks_[i]) != marks_[i]) return false;
  return true;
}

std::vector<Lit> LiteralSet::literals() const {
  std::vector<Lit> out;
  for (std::size_t i = 0; i < marks_.size(); ++i) {
    if (marks_[i] & 1) out.emplace_back(static_cast<FluentId>(i), true);
    if (marks_[i] & 2) out.emplace_back(static_cast<FluentId>(i), false);
  }
  return out;
}

std::size_t LiteralSet::size() const {
  std::size_t n = 0;
  for (auto m : marks_) n += (m & 1) + ((m >> 1) & 1);
  return n;
}

WorldState WorldState::from_literals(const LiteralSet& set) {
  std::vector<bool> truth(set.universe());
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = set.contains(Lit(static_cast<FluentId>(i), true));
  return WorldState(std::move(truth));
}

bool WorldState::holds_all(std::span<const Lit> lits) const {
  return std::all_of(lits.begin(), lits.end(), [&](Lit l) { return holds(l); });
}

LiteralSet WorldState::to_set() const {
  LiteralSet s(truth_.size());
  for (std::size_t i = 0; i < truth_.size(); ++i) s.insert(Lit(static_cast<FluentId>(i), truth_[i]));
  return s;
}

std::optional<FluentId> CompiledTheory::find_fluent(const std::string& text) const {
  auto it = fluent_index_.find(text);
  if (it == fluent_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> CompiledTheory::find_action(const std::string& text) const {
  auto it = action_index_.find(text);
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

std::string CompiledTheory::literal_text(Lit l) const {
  return (l.positive() ? "" : "-") + fluents[l.fluent()];
}

std::vector<std::string> CompiledTheory::state_literals(const WorldState& s) const {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(literal_text(Lit(static_cast<FluentId>(i), s.value(i))));
  return out;
}

std::string CompiledTheory::state_text(const WorldState& s) const {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += literal_text(Lit(static_cast<FluentId>(i), s.value(i)));
  }
  return out + "}";
}

namespace {

std::vector<std::string> instances(const ActionTheory& theory, const std::vector<Signature>& sigs) {
  std::vector<std::string> out;
  for (const auto& sig : sigs) {
    std::vector<std::vector<std::string>> tuples{{}};
    for (const auto& type : sig.arg_types) {
      const DomainDecl* dom = theory.find_domain(type);
      if (!dom) throw Error(ErrorKind::declaration, "unknown type name '" + type + "'");
      std::vector<std::vector<std::string>> next;
      for (const auto& t : tuples)
        for (const auto& c : dom->constants) {
          auto nt = t;
          nt.push_back(c);
          next.push_back(std::move(nt));
        }
      tuples = std::move(next);
    }
    for (const auto& t : tuples) {
      Atom a{sig.name, {}, {}};
      for (const auto& c : t) a.args.push_back(Term::constant(c));
      out.push_back(a.str());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

CompiledTheory compile_theory(const ActionTheory& ground) {
  if (!ground.is_ground()) throw Error(ErrorKind::validation, "theory is not ground");
  if (!ground.horizon || !ground.discount)
    throw Error(ErrorKind::validation, "theory lacks horizon or discount");

  CompiledTheory c;
  c.fluents = instances(ground, ground.fluents);
  c.actions = instances(ground, ground.actions);
  for (std::size_t i = 0; i < c.fluents.size(); ++i) c.fluent_index_[c.fluents[i]] = static_cast<FluentId>(i);
  for (std::size_t i = 0; i < c.actions.size(); ++i) c.action_index_[c.actions[i]] = static_cast<ActionId>(i);
  c.horizon = *ground.horizon;
  c.gamma = *ground.discount;

  auto lit = [&](const Literal& l) {
    auto id = c.find_fluent(l.atom.str());
    if (!id) throw Error(ErrorKind::validation, l.atom.pos.str() + ": unknown fluent atom '" + l.atom.str() + "'");
    return Lit(*id, l.positive);
  };
  auto lits = [&](const ConjunctiveFormula& f) {
    std::vector<Lit> out;
    for (const auto& l : f.literals) out.push_back(lit(l));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto action = [&](const Atom& a) {
    auto id = c.find_action(a.str());
    if (!id) throw Error(ErrorKind::validation, a.pos.str() + ": unknown action '" + a.str() + "'");
    return *id;
  };

  c.causal_by_action.resize(c.actions.size());
  c.executability_by_action.resize(c.actions.size());
  for (const auto& law : ground.causal_laws) {
    c.causal_by_action[action(law.action)].push_back(c.causal_laws.size());
    c.causal_laws.push_back({action(law.action), lits(law.effects), law.reward, lits(law.condition)});
  }
  for (const auto& law : ground.executability_laws) {
    c.executability_by_action[action(law.action)].push_back(c.executability_laws.size());
    c.executability_laws.push_back({action(law.action), lits(law.condition)});
  }
  for (const auto& law : ground.static_laws) c.static_laws.push_back({lit(law.head), lits(law.condition)});
  for (const auto& f : ground.initial_states) c.initial_states.push_back(lits(f));
  c.goal = lits(ground.goal);
  return c;
}

}  // namespace bq

#include "bq/translator.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace bq {

const char* to_string(Predicate p) {
  switch (p) {
    case Predicate::action: return "action";
    case Predicate::atom: return "atom";
    case Predicate::literal: return "literal";
    case Predicate::contrary: return "contrary";
    case Predicate::holds: return "holds";
    case Predicate::exec: return "exec";
    case Predicate::occ: return "occ";
    case Predicate::abocc: return "abocc";
    case Predicate::reward: return "reward";
    case Predicate::factor: return "factor";
    case Predicate::goal: return "goal";
    case Predicate::q: return "q";
    case Predicate::initial: return "initial";
  }
  return "?";
}

std::size_t arity(Predicate p) {
  switch (p) {
    case Predicate::goal:
    case Predicate::initial: return 0;
    case Predicate::action:
    case Predicate::atom:
    case Predicate::literal:
    case Predicate::factor: return 1;
    case Predicate::reward:
    case Predicate::q: return 3;
    default: return 2;
  }
}

GroundAtom::GroundAtom(Predicate p, std::vector<std::string> a) : predicate(p), args(std::move(a)) {
  if (args.size() != arity(p))
    throw std::invalid_argument(std::string(to_string(p)) + "/" + std::to_string(arity(p)) + " given " +
                                std::to_string(args.size()) + " arguments");
}

std::string GroundAtom::text() const {
  std::string out = to_string(predicate);
  if (args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
  return out + ")";
}

std::string literal_term(const CompiledTheory& theory, Lit l) {
  const std::string& f = theory.fluents[l.fluent()];
  return l.positive() ? f : "neg(" + f + ")";
}

namespace {

int time_of(const GroundAtom& a) {
  switch (a.predicate) {
    case Predicate::holds:
    case Predicate::exec:
    case Predicate::occ:
    case Predicate::abocc:
    case Predicate::reward: return std::stoi(a.args.back());
    default: return -1;
  }
}

int rank_of(Predicate p) {
  switch (p) {
    case Predicate::holds: return 0;
    case Predicate::exec: return 1;
    case Predicate::abocc: return 2;
    case Predicate::occ: return 3;
    case Predicate::reward: return 4;
    case Predicate::goal: return 5;
    case Predicate::initial: return 6;
    default: return 7;
  }
}

std::string literals_text(const CompiledTheory& theory, const std::vector<Lit>& lits) {
  std::string out;
  for (std::size_t i = 0; i < lits.size(); ++i) out += (i ? ", " : "") + theory.literal_text(lits[i]);
  return out;
}

std::string law_text(const CompiledTheory& theory, const CompiledCausalLaw& law) {
  std::string out = theory.actions[law.action] + " causes " +
                    (law.effects.empty() ? "{}" : literals_text(theory, law.effects)) + " : " +
                    law.reward.to_string();
  if (!law.condition.empty()) out += " if " + literals_text(theory, law.condition);
  return out + ".";
}

std::string law_text(const CompiledTheory& theory, const CompiledExecutabilityLaw& law) {
  return "executable " + theory.actions[law.action] + " if " +
         (law.condition.empty() ? "{}" : literals_text(theory, law.condition)) + ".";
}

std::string law_text(const CompiledTheory& theory, const CompiledStaticLaw& law) {
  return theory.literal_text(law.head) + " if " +
         (law.condition.empty() ? "{}" : literals_text(theory, law.condition)) + ".";
}

struct Pending {
  std::optional<GroundAtom> head;
  std::vector<GroundAtom> positive;
  std::vector<GroundAtom> negative;
  RuleOrigin origin;
  std::string text;
  std::tuple<int, int, int, std::string> key;
};

class Builder {
 public:
  explicit Builder(const CompiledTheory& theory) : theory_(theory) {}

  GroundAtom holds(Lit l, int t) const {
    return {Predicate::holds, {literal_term(theory_, l), std::to_string(t)}};
  }
  std::vector<GroundAtom> holds_all(const std::vector<Lit>& lits, int t) const {
    std::vector<GroundAtom> out;
    for (Lit l : lits) out.push_back(holds(l, t));
    return out;
  }

  void add(std::optional<GroundAtom> head, std::vector<GroundAtom> positive, std::vector<GroundAtom> negative,
           RuleKind kind, std::string source = {}) {
    Pending p{std::move(head), std::move(positive), std::move(negative), {kind, -1, std::move(source)}, {}, {}};
    p.text = p.head ? p.head->text() : "";
    if (!p.positive.empty() || !p.negative.empty()) {
      p.text += p.head ? " :- " : ":- ";
      bool first = true;
      for (const auto& a : p.positive) {
        p.text += (first ? "" : ", ") + a.text();
        first = false;
      }
      for (const auto& a : p.negative) {
        p.text += (first ? "not " : ", not ") + a.text();
        first = false;
      }
    }
    p.text += ".";

    int step = -1;
    if (p.head) {
      step = time_of(*p.head);
    } else {
      for (const auto* body : {&p.positive, &p.negative})
        for (const auto& a : *body) step = std::max(step, time_of(a));
      if (step < 0) step = INT_MAX;
    }
    p.origin.step = step == INT_MAX ? -1 : step;
    const bool fact = p.head && p.positive.empty() && p.negative.empty();
    p.key = {fact ? 0 : 1, step, p.head ? rank_of(p.head->predicate) : 99, p.text};
    pending_.push_back(std::move(p));
  }

  NormalProgram finish() {
    std::stable_sort(pending_.begin(), pending_.end(),
                     [](const Pending& a, const Pending& b) { return a.key < b.key; });
    NormalProgram program;
    std::set<std::string> seen;
    for (auto& p : pending_) {
      if (!seen.insert(p.text).second) continue;
      ProgramRule rule;
      if (p.head) rule.head = program.intern(p.head->text());
      for (const auto& a : p.positive) rule.positive.push_back(program.intern(a.text()));
      for (const auto& a : p.negative) rule.negative.push_back(program.intern(a.text()));
      program.add(std::move(rule), std::move(p.origin));
    }
    return program;
  }

 private:
  const CompiledTheory& theory_;
  std::vector<Pending> pending_;
};

}  // namespace

NormalProgram translate(const CompiledTheory& theory, const TranslateOptions& options) {
  using P = Predicate;
  Builder b(theory);
  const int n = theory.horizon;
  const bool literal_mode = options.verbatim;
  const std::string gamma = format_real(theory.gamma);
  auto ts = [](int t) { return std::to_string(t); };

  for (const auto& a : theory.actions) {
    b.add(GroundAtom(P::action, {a}), {}, {}, RuleKind::action_fact);
    b.add(GroundAtom(P::q, {"0", a, "0"}), {}, {}, RuleKind::q_seed);
  }
  b.add(GroundAtom(P::factor, {gamma}), {}, {}, RuleKind::discount_fact);

  for (FluentId f = 0; f < theory.fluent_count(); ++f) {
    const std::string pos = literal_term(theory, Lit(f, true));
    const std::string neg = literal_term(theory, Lit(f, false));
    const GroundAtom atom(P::atom, {pos});
    b.add(atom, {}, {}, RuleKind::atom_fact);
    b.add(GroundAtom(P::literal, {pos}), {atom}, {}, RuleKind::literal_pos);
    b.add(GroundAtom(P::literal, {neg}), {atom}, {}, RuleKind::literal_neg);
    b.add(GroundAtom(P::contrary, {pos, neg}), {atom}, {}, RuleKind::contrary_pos);
    b.add(GroundAtom(P::contrary, {neg, pos}), {atom}, {}, RuleKind::contrary_neg);
  }

  // Initial states: literals shared by every description are facts; the
  // remaining atoms are completed by an even loop.
  std::set<Lit> shared, all;
  for (std::size_t i = 0; i < theory.initial_states.size(); ++i) {
    std::set<Lit> s(theory.initial_states[i].begin(), theory.initial_states[i].end());
    all.insert(s.begin(), s.end());
    if (i == 0) {
      shared = s;
    } else {
      std::set<Lit> keep;
      std::set_intersection(shared.begin(), shared.end(), s.begin(), s.end(), std::inserter(keep, keep.end()));
      shared = std::move(keep);
    }
  }
  for (Lit l : shared) b.add(b.holds(l, 0), {}, {}, RuleKind::initial_shared);
  std::set<FluentId> contested;
  if (literal_mode) {
    for (Lit l : all)
      if (!shared.count(l)) contested.insert(l.fluent());
  } else {
    for (FluentId f = 0; f < theory.fluent_count(); ++f)
      if (!shared.count(Lit(f, true)) && !shared.count(Lit(f, false))) contested.insert(f);
  }
  for (FluentId f : contested) {
    b.add(b.holds(Lit(f, true), 0), {}, {b.holds(Lit(f, false), 0)}, RuleKind::initial_pos);
    b.add(b.holds(Lit(f, false), 0), {}, {b.holds(Lit(f, true), 0)}, RuleKind::initial_neg);
  }
  if (options.strict_initial) {
    for (const auto& psi : theory.initial_states)
      b.add(GroundAtom(P::initial, {}), b.holds_all(psi, 0), {}, RuleKind::strict_initial);
    b.add(std::nullopt, {}, {GroundAtom(P::initial, {})}, RuleKind::strict_initial);
  }

  for (int t = 0; t < n; ++t) {
    for (const auto& law : theory.executability_laws)
      b.add(GroundAtom(P::exec, {theory.actions[law.action], ts(t)}), b.holds_all(law.condition, t), {},
            RuleKind::executable, law_text(theory, law));

    for (const auto& law : theory.causal_laws) {
      const std::string& a = theory.actions[law.action];
      const std::string source = law_text(theory, law);
      const GroundAtom occ(P::occ, {a, ts(t)});
      const GroundAtom exec(P::exec, {a, ts(t)});
      for (Lit e : law.effects) {
        std::vector<GroundAtom> body{occ, exec};
        for (auto& h : b.holds_all(law.condition, t)) body.push_back(std::move(h));
        b.add(b.holds(e, t + 1), std::move(body), {}, RuleKind::effect, source);
      }
      std::vector<GroundAtom> body{occ, exec};
      if (!literal_mode)
        for (auto& h : b.holds_all(law.condition, t)) body.push_back(std::move(h));
      b.add(GroundAtom(P::reward, {law.reward.to_string(), a, ts(t + 1)}), std::move(body), {}, RuleKind::reward,
            source);
    }

    for (FluentId f = 0; f < theory.fluent_count(); ++f)
      for (bool positive : {true, false}) {
        const Lit l(f, positive);
        b.add(b.holds(l, t + 1),
              {b.holds(l, t), GroundAtom(P::contrary, {literal_term(theory, l), literal_term(theory, l.complement())})},
              {b.holds(l.complement(), t + 1)}, RuleKind::inertia);
      }

    for (const auto& a : theory.actions) {
      b.add(GroundAtom(P::occ, {a, ts(t)}), {GroundAtom(P::action, {a})}, {GroundAtom(P::abocc, {a, ts(t)})},
            RuleKind::occurs);
      for (const auto& other : theory.actions)
        if (other != a)
          b.add(GroundAtom(P::abocc, {a, ts(t)}),
                {GroundAtom(P::action, {a}), GroundAtom(P::action, {other}), GroundAtom(P::occ, {other, ts(t)})}, {},
                RuleKind::abnormal);
      if (options.enforcing())
        b.add(std::nullopt, {GroundAtom(P::occ, {a, ts(t)})}, {GroundAtom(P::exec, {a, ts(t)})},
              RuleKind::enforce_exec);
    }
  }

  for (int t = 0; t <= n; ++t) {
    for (FluentId f = 0; f < theory.fluent_count(); ++f)
      b.add(std::nullopt, {b.holds(Lit(f, true), t), b.holds(Lit(f, false), t)}, {}, RuleKind::consistency);
    if (!literal_mode)
      for (const auto& law : theory.static_laws)
        b.add(b.holds(law.head, t), b.holds_all(law.condition, t), {}, RuleKind::static_law, law_text(theory, law));
    if (!theory.goal.empty() && (literal_mode || t == n))
      b.add(GroundAtom(P::goal, {}), b.holds_all(theory.goal, t), {}, RuleKind::goal);
  }
  if (options.require_goal && !theory.goal.empty())
    b.add(std::nullopt, {}, {GroundAtom(P::goal, {})}, RuleKind::require_goal);

  NormalProgram program = b.finish();
  program.horizon = n;
  program.gamma = theory.gamma;

  for (int t = 0; t < n; ++t)
    for (const auto& law : theory.causal_laws) {
      QLayerRule q{theory.actions[law.action], t, law.reward, {}, {}};
      for (Lit l : law.condition) q.condition.push_back(literal_term(theory, l));
      for (Lit l : law.effects) q.effects.push_back(literal_term(theory, l));
      program.q_layer.push_back(std::move(q));
    }
  std::stable_sort(program.q_layer.begin(), program.q_layer.end(), [&](const QLayerRule& a, const QLayerRule& c) {
    return std::tie(a.time, a.action) < std::tie(c.time, c.action);
  });
  return program;
}

std::size_t TranslationReport::count(RuleKind kind) const {
  auto it = counts.find(to_string(kind));
  return it == counts.end() ? 0 : it->second;
}

TranslationReport translation_report(const NormalProgram& program) {
  TranslationReport report;
  for (int k = 0; k <= static_cast<int>(RuleKind::goal); ++k) report.counts[to_string(static_cast<RuleKind>(k))] = 0;
  for (std::size_t i = 0; i < program.rules.size(); ++i) {
    const auto& origin = program.origins[i];
    const std::string kind = to_string(origin.kind);
    ++report.counts[kind];
    report.entries.push_back({program.rule_text(program.rules[i]), kind, origin.step, origin.source});
  }
  // The Q rules live in the arithmetic layer rather than the ground program.
  report.q_layer_rules = program.q_layer.size();
  report.counts[to_string(RuleKind::q_value)] = program.q_layer.size();
  return report;
}

}  // namespace bq

#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <set>

#include "bq/translator.hpp"
#include "support.hpp"

namespace bq {
namespace {

using test::compile_text;
using test::load_fixture;

std::set<std::string> rule_texts(const NormalProgram& p) {
  std::set<std::string> out;
  for (const auto& r : p.rules) out.insert(p.rule_text(r));
  return out;
}

TEST(Translate, ElevatorHasTheExpectedRules) {
  const auto p = translate(load_fixture("elevator2.bq"));
  const auto rules = rule_texts(p);
  for (const char* r : {
           "action(close).",
           "holds(on(2),0).",
           "holds(on(1),0) :- not holds(neg(on(1)),0).",
           "holds(neg(on(1)),0) :- not holds(on(1),0).",
           ":- holds(opened,1), holds(neg(opened),1).",
           "holds(opened,1) :- holds(opened,0), contrary(opened,neg(opened)), not holds(neg(opened),1).",
           "contrary(opened,neg(opened)) :- atom(opened).",
           "contrary(neg(opened),opened) :- atom(opened).",
           "occ(close,0) :- action(close), not abocc(close,0).",
           "reward(1.0,close,1) :- occ(close,0), exec(close,0), holds(opened,0).",
           ":- occ(up(1),0), not exec(up(1),0).",
           "q(0,close,0).",
           "factor(0.9).",
       })
    EXPECT_TRUE(rules.count(r)) << r;
  EXPECT_EQ(p.horizon, 2);
  ASSERT_TRUE(p.gamma);
  EXPECT_DOUBLE_EQ(*p.gamma, 0.9);
}

TEST(Translate, GroundAtomArityIsChecked) {
  EXPECT_EQ(GroundAtom(Predicate::holds, {"f", "0"}).text(), "holds(f,0)");
  EXPECT_EQ(GroundAtom(Predicate::goal, {}).text(), "goal");
  EXPECT_THROW(GroundAtom(Predicate::holds, {"f"}), std::invalid_argument);
}

TEST(Translate, LiteralTerms) {
  const auto ct = load_fixture("elevator2.bq");
  const FluentId opened = *ct.find_fluent("opened");
  EXPECT_EQ(literal_term(ct, Lit(opened, true)), "opened");
  EXPECT_EQ(literal_term(ct, Lit(opened, false)), "neg(opened)");
}

TEST(Report, ElevatorCoversEveryCategory) {
  const auto report = translation_report(translate(load_fixture("elevator2.bq")));
  for (const char* kind : {"action", "literal", "literal-neg", "contrary", "contrary-neg", "initial",
                           "initial-choice", "initial-choice-neg", "exec", "effect", "reward", "q", "inertia",
                           "consistency", "occ", "abocc", "goal"})
    EXPECT_GT(report.counts.at(kind), 0u) << kind;
  EXPECT_EQ(report.q_layer_rules, report.counts.at("q"));
}

TEST(Report, EmptyGoalAndSingleAction) {
  const auto single = translation_report(translate(load_fixture("single.bq")));
  EXPECT_EQ(single.count(RuleKind::goal), 0u);
  EXPECT_EQ(single.count(RuleKind::abnormal), 0u);
}

TEST(Report, EffectRulesPerCausalLaw) {
  for (const char* name : {"elevator2.bq", "gridworld3.bq", "partial.bq"}) {
    const auto ct = load_fixture(name);
    std::size_t effects = 0;
    for (const auto& law : ct.causal_laws) effects += law.effects.size();
    const auto report = translation_report(translate(ct));
    // Distinct laws may share an effect rule only when their text matches,
    // which the fixtures avoid.
    EXPECT_EQ(report.count(RuleKind::effect), effects * static_cast<std::size_t>(ct.horizon)) << name;
  }
}

TEST(Translate, VerbatimModeDifferences) {
  const auto ct = load_fixture("elevator2.bq");
  TranslateOptions v;
  v.verbatim = true;
  const auto verbatim = translation_report(translate(ct, v));
  const auto normal = translation_report(translate(ct));
  EXPECT_EQ(verbatim.count(RuleKind::static_law), 0u);
  EXPECT_GT(normal.count(RuleKind::static_law), 0u);
  EXPECT_EQ(verbatim.count(RuleKind::enforce_exec), 0u);
  EXPECT_GT(normal.count(RuleKind::enforce_exec), 0u);
  EXPECT_EQ(verbatim.counts.at("goal"), 3u);  // every step 0..n
  EXPECT_EQ(normal.counts.at("goal"), 1u);    // last step only
  // Reward rules lose their condition.
  EXPECT_TRUE(rule_texts(translate(ct, v)).count("reward(1.0,close,1) :- occ(close,0), exec(close,0)."));

  v.enforce_exec = true;
  EXPECT_GT(translation_report(translate(ct, v)).count(RuleKind::enforce_exec), 0u);
}

TEST(Translate, OptionalConstraints) {
  const auto ct = load_fixture("elevator2.bq");
  TranslateOptions o;
  o.require_goal = true;
  o.strict_initial = true;
  const auto rules = rule_texts(translate(ct, o));
  EXPECT_TRUE(rules.count(":- not goal."));
  EXPECT_TRUE(rules.count(":- not initial."));
}

TEST(Translate, HorizonZeroHasNoSteps) {
  auto ct = load_fixture("elevator2.bq");
  ct.horizon = 0;
  const auto report = translation_report(translate(ct));
  EXPECT_EQ(report.count(RuleKind::occurs), 0u);
  EXPECT_EQ(report.count(RuleKind::inertia), 0u);
  EXPECT_EQ(report.q_layer_rules, 0u);
}

// Random theories shared by the property tests.
std::string random_theory(std::mt19937& rng) {
  const int fluents = 2 + static_cast<int>(rng() % 3), actions = 1 + static_cast<int>(rng() % 3);
  auto pick = [&](int f) { return std::string(rng() % 2 ? "" : "-") + "f" + std::to_string(f); };
  std::string out = "fluent ";
  for (int f = 0; f < fluents; ++f) out += (f ? ", f" : "f") + std::to_string(f);
  out += ".\naction ";
  for (int a = 0; a < actions; ++a) out += (a ? ", a" : "a") + std::to_string(a);
  out += ".\ninitially {" + pick(0) + "} | {" + pick(1) + "}.\n";
  if (rng() % 2) out += "static " + pick(0) + " if " + pick(1) + ".\n";
  for (int a = 0; a < actions; ++a) {
    out += "a" + std::to_string(a) + " causes " + pick(static_cast<int>(rng() % fluents)) + " : " +
           std::to_string(rng() % 4) + ".5 if " + pick(static_cast<int>(rng() % fluents)) + ".\n";
    out += "executable a" + std::to_string(a) + " if " + (rng() % 2 ? "{}" : pick(static_cast<int>(rng() % fluents))) + ".\n";
  }
  if (rng() % 2) out += "goal " + pick(static_cast<int>(rng() % fluents)) + ".\n";
  out += "horizon " + std::to_string(rng() % 4) + ".\ndiscount 0.75.\n";
  return out;
}

TEST(TranslateProperty, EmitParseRoundTrip) {
  std::mt19937 rng(17);
  std::vector<CompiledTheory> theories;
  for (const char* name : {"elevator2.bq", "gridworld3.bq", "loop.bq", "partial.bq", "stuck.bq"})
    theories.push_back(load_fixture(name));
  for (int i = 0; i < 100; ++i) theories.push_back(compile_text(random_theory(rng)));
  for (const auto& ct : theories) {
    for (bool verbatim : {false, true}) {
      TranslateOptions o;
      o.verbatim = verbatim;
      o.require_goal = rng() % 2;
      const auto p = translate(ct, o);
      const auto text = emit_program_text(p);
      const auto back = parse_program(text);
      EXPECT_TRUE(structurally_equal(p, back));
      EXPECT_EQ(emit_program_text(back), text);
    }
  }
}

TEST(TranslateProperty, TimeIndicesStayWithinHorizon) {
  std::mt19937 rng(3);
  const std::regex timed(R"(^(holds|occ|exec|abocc)\(.*,(\d+)\)$)");
  for (int i = 0; i < 100; ++i) {
    const auto ct = compile_text(random_theory(rng));
    const auto p = translate(ct);
    for (AtomId a = 0; a < p.atom_count(); ++a) {
      std::smatch m;
      const std::string& name = p.name(a);
      if (!std::regex_match(name, m, timed)) continue;
      const int t = std::stoi(m[2]);
      EXPECT_GE(t, 0);
      EXPECT_LE(t, ct.horizon) << name;
      if (m[1] != "holds") {
        EXPECT_LT(t, ct.horizon) << name;
      }
    }
  }
}

TEST(TranslateProperty, NegationIsReifiedConsistently) {
  std::mt19937 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto ct = compile_text(random_theory(rng));
    const auto p = translate(ct);
    const auto rules = rule_texts(p);
    std::set<std::string> negated;
    const std::regex neg(R"(neg\(([^()]*(\([^()]*\))?)\))");
    for (AtomId a = 0; a < p.atom_count(); ++a)
      for (std::sregex_iterator it(p.name(a).begin(), p.name(a).end(), neg), end; it != end; ++it)
        negated.insert((*it)[1]);
    for (const auto& f : negated) {
      EXPECT_TRUE(rules.count("contrary(" + f + ",neg(" + f + ")) :- atom(" + f + ")."));
      EXPECT_TRUE(rules.count("contrary(neg(" + f + ")," + f + ") :- atom(" + f + ")."));
    }
  }
}

TEST(TranslateProperty, Deterministic) {
  std::mt19937 rng(21);
  for (int i = 0; i < 30; ++i) {
    const std::string text = random_theory(rng);
    EXPECT_EQ(emit_program_text(translate(compile_text(text))), emit_program_text(translate(compile_text(text))));
  }
}

TEST(ProgramText, ParsesDirectivesAndComments) {
  const auto p = parse_program("% comment\n%! horizon 1.\n%! gamma 0.5.\na :- not b.\nb :- not a.\n:- a, b.\nc.\n");
  EXPECT_EQ(p.horizon, 1);
  EXPECT_DOUBLE_EQ(*p.gamma, 0.5);
  EXPECT_EQ(p.rules.size(), 4u);
  EXPECT_EQ(p.rule_text(p.rules[2]), ":- a, b.");
  EXPECT_THROW(parse_program("%! nonsense 1.\n"), Error);
  EXPECT_THROW(parse_program("a :- .\n"), Error);
}

}  // namespace
}  // namespace bq

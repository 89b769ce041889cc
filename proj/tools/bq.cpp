// bq: parse, ground, enumerate, translate, solve, estimate and check B_Q
// action theories.
//
// Exit codes: 0 ok, 2 input error, 3 cap exceeded, 4 correctness alarm.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "bq/checks.hpp"
#include "bq/error.hpp"
#include "bq/grounder.hpp"
#include "bq/json_io.hpp"
#include "bq/parser.hpp"
#include "bq/validate.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr int kExitAlarm = 4;

struct Config {
  std::string input;
  std::string mode = "qlearning";
  bool require_goal = false;
  bool strict_initial = false;
  bool verbatim = false;
  std::optional<bool> enforce_exec;
  std::optional<int> horizon;
  std::optional<double> discount;
  std::string format = "json";
  std::string translate_format = "asp";
  std::string solver = "sat";
  bool program_input = false;
  double scale = bq::kDefaultScale;
};

// Input problems that are not parse or validation errors.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

void env_cap(const char* name, std::size_t& into) {
  const char* v = std::getenv(name);
  if (!v || !*v) return;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0') throw InputError(std::string(name) + " must be a non-negative integer");
  into = static_cast<std::size_t>(n);
}

bq::Limits limits_from_env() {
  bq::Limits l;
  env_cap("BQ_MAX_STATE_ATOMS", l.max_state_atoms);
  env_cap("BQ_MAX_NODES", l.max_episode_nodes);
  env_cap("BQ_NAIVE_MAX_ATOMS", l.naive_max_atoms);
  env_cap("BQ_SAT_MAX_MODELS", l.sat_max_models);
  return l;
}

void fail_on(const bq::ValidationReport& report) {
  for (const auto& v : report.violations)
    if (v.severity == bq::Severity::warning) std::cerr << "warning: " << v.code << ": " << v.detail << "\n";
  if (!report.ok()) throw InputError("invalid theory:\n" + report.str());
}

bq::ActionTheory parsed(const Config& c) {
  bq::ActionTheory t = bq::parse_theory(read_input(c.input));
  if (c.horizon) t.horizon = c.horizon;
  if (c.discount) t.discount = c.discount;
  return t;
}

bq::ActionTheory grounded(const Config& c) {
  bq::ActionTheory t = parsed(c);
  fail_on(bq::validate_theory(t));
  bq::ActionTheory g = bq::ground_theory(t);
  fail_on(bq::validate_theory(g));
  return g;
}

bq::TranslateOptions translate_options(const Config& c) {
  bq::TranslateOptions o;
  o.verbatim = c.verbatim;
  o.enforce_exec = c.enforce_exec;
  o.require_goal = c.require_goal;
  o.strict_initial = c.strict_initial;
  return o;
}

bq::EpisodeOptions episode_options(const Config& c, const bq::Limits& limits) {
  bq::EpisodeOptions o;
  o.require_goal = c.require_goal;
  o.limits = limits;
  return o;
}

bq::QMode mode_of(const Config& c) { return c.mode == "sarsa" ? bq::QMode::sarsa : bq::QMode::qlearning; }

bool json_out(const Config& c) { return c.format == "json"; }

int cmd_parse(const Config& c) {
  const bq::ActionTheory t = parsed(c);
  const auto report = bq::validate_theory(t);
  fail_on(report);
  if (json_out(c)) {
    std::cout << nlohmann::json{{"theory", bq::print_theory(t)}, {"ground", t.is_ground()}}.dump(2) << "\n";
  } else {
    std::cout << bq::print_theory(t);
  }
  return 0;
}

int cmd_ground(const Config& c) {
  const bq::ActionTheory g = grounded(c);
  if (json_out(c)) {
    const bq::CompiledTheory ct = bq::compile_theory(g);
    std::cout << nlohmann::json{{"fluents", ct.fluents}, {"actions", ct.actions}, {"theory", bq::print_theory(g)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << bq::print_theory(g);
  }
  return 0;
}

int cmd_episodes(const Config& c, const bq::Limits& limits) {
  const bq::CompiledTheory ct = bq::compile_theory(grounded(c));
  const auto episodes = bq::enumerate_episodes(ct, episode_options(c, limits));
  for (const auto& e : episodes) {
    bq::OnlineQFold fold(ct.gamma, ct.horizon);
    for (double r : e.reward_values()) fold.consume(r);
    if (json_out(c)) {
      std::cout << bq::episode_json(ct, e, fold.value()).dump() << "\n";
    } else {
      std::cout << bq::episode_text(ct, e) << "  q=" << bq::format_real(fold.value()) << "\n";
    }
  }
  if (!json_out(c)) std::cout << episodes.size() << " episodes\n";
  return 0;
}

int cmd_translate(const Config& c) {
  const bq::CompiledTheory ct = bq::compile_theory(grounded(c));
  const bq::NormalProgram program = bq::translate(ct, translate_options(c));
  if (c.translate_format == "asp") {
    std::cout << bq::emit_program_text(program);
  } else if (c.translate_format == "dimacs") {
    const auto tight = bq::tightness_check(program);
    if (!tight.tight) {
      std::string cycle;
      for (bq::AtomId a : tight.cycle) cycle += " " + program.name(a);
      std::cerr << "error: program is not tight (positive cycle through" << cycle
                << "); its loop formulas are added lazily and cannot be exported statically\n";
      return kExitCap;
    }
    std::cout << bq::emit_dimacs(bq::clark_completion(program));
  } else {
    std::cout << bq::report_json(bq::translation_report(program)).dump(2) << "\n";
  }
  return 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_solve(const Config& c, const bq::Limits& limits) {
  bq::NormalProgram program;
  if (c.program_input || ends_with(c.input, ".lp")) {
    program = bq::parse_program(read_input(c.input));
  } else {
    program = bq::translate(bq::compile_theory(grounded(c)), translate_options(c));
  }
  const auto path = c.solver == "naive" ? bq::SolverPath::naive : bq::SolverPath::sat;
  bq::SolveStats stats;
  const auto sets = bq::enumerate_answer_sets(program, path, limits, &stats);
  const double gamma = program.gamma.value_or(c.discount.value_or(0.9));
  for (const auto& s : sets) {
    std::optional<bq::Trace> trace;
    std::optional<bq::QLayerResult> q;
    try {
      trace = bq::extract_trace(program, s);
      q = bq::evaluate_q_layer(program, s, gamma, c.scale);
    } catch (const bq::Error&) {
      // Not every program encodes a trajectory.
    }
    if (json_out(c)) {
      std::cout << bq::answer_set_json(program, s, trace ? &*trace : nullptr, q ? &*q : nullptr).dump() << "\n";
    } else {
      std::vector<std::string> names;
      for (bq::AtomId a : s) names.push_back(program.name(a));
      std::sort(names.begin(), names.end());
      std::cout << "{";
      for (std::size_t i = 0; i < names.size(); ++i) std::cout << (i ? ", " : "") << names[i];
      std::cout << "}\n";
    }
  }
  std::cerr << sets.size() << " answer sets ("
            << (path == bq::SolverPath::naive ? "naive"
                : stats.tight                ? "sat, tight"
                                             : "sat, " + std::to_string(stats.loop_formula_rounds) + " loop rounds")
            << ")\n";
  return 0;
}

// Direct table plus the answer-set values it must agree with.
int cmd_qtable(const Config& c, const bq::Limits& limits) {
  const bq::CompiledTheory ct = bq::compile_theory(grounded(c));
  const auto episodes = bq::enumerate_episodes(ct, episode_options(c, limits));
  const bq::QMode mode = mode_of(c);
  if (episodes.empty()) {
    std::cerr << "warning: no episodes; the table is empty\n";
    bq::QTable empty{ct.gamma, ct.horizon, mode, {}};
    std::cout << bq::qtable_json(ct, empty).dump(2) << "\n";
    return 0;
  }
  const auto direct = bq::q_direct(episodes, ct.gamma, mode);

  bq::PipelineOptions po;
  po.translate = translate_options(c);
  po.scale = c.scale;
  po.limits = limits;
  const auto pipeline = bq::run_pipeline(ct, po);

  const double fixed_bound = ct.horizon * c.scale;
  double worst = 0.0, worst_fixed = 0.0;
  bool alarm = false;
  nlohmann::json rows = nlohmann::json::array();

  if (mode == bq::QMode::qlearning) {
    std::map<std::pair<bq::WorldState, bq::ActionId>, std::pair<double, double>> best;
    for (const auto& rec : pipeline.answer_sets) {
      if (!rec.episode || !rec.q) {
        alarm = true;
        continue;
      }
      const auto key = std::make_pair(rec.episode->states.front(), rec.episode->actions.front());
      auto [it, fresh] = best.try_emplace(key, rec.q->float_value, rec.q->final_value);
      if (!fresh) {
        it->second.first = std::max(it->second.first, rec.q->float_value);
        it->second.second = std::max(it->second.second, rec.q->final_value);
      }
    }
    std::size_t pairs = 0;
    for (const auto& [key, value] : direct.table.entries) {
      if (key.depth != 0) continue;
      ++pairs;
      auto it = best.find({key.state, key.action});
      nlohmann::json row = {{"state", ct.state_literals(key.state)}, {"action", ct.actions[key.action]},
                            {"direct", value}};
      if (it == best.end()) {
        alarm = true;
        row["pipeline"] = nullptr;
      } else {
        row["pipeline"] = it->second.first;
        row["pipeline_fixed"] = it->second.second;
        worst = std::max(worst, std::abs(it->second.first - value));
        worst_fixed = std::max(worst_fixed, std::abs(it->second.second - value));
      }
      rows.push_back(row);
    }
    if (best.size() != pairs) alarm = true;
  } else {
    std::size_t matched = 0;
    for (const auto& rec : pipeline.answer_sets) {
      if (!rec.episode || !rec.q) {
        alarm = true;
        continue;
      }
      auto it = std::lower_bound(episodes.begin(), episodes.end(), *rec.episode, bq::episode_less);
      if (it == episodes.end() || !(*it == *rec.episode)) {
        alarm = true;
        continue;
      }
      ++matched;
      const auto index = static_cast<std::size_t>(it - episodes.begin());
      const double value = direct.tails[index].front();
      worst = std::max(worst, std::abs(rec.q->float_value - value));
      worst_fixed = std::max(worst_fixed, std::abs(rec.q->final_value - value));
      rows.push_back({{"episode", index},
                      {"state", ct.state_literals(rec.episode->states.front())},
                      {"action", ct.actions[rec.episode->actions.front()]},
                      {"direct", value},
                      {"pipeline", rec.q->float_value},
                      {"pipeline_fixed", rec.q->final_value}});
    }
    if (matched != episodes.size()) alarm = true;
    std::sort(rows.begin(), rows.end(),
              [](const nlohmann::json& a, const nlohmann::json& b) { return a["episode"] < b["episode"]; });
  }
  if (worst > bq::kQTolerance || worst_fixed > fixed_bound) alarm = true;

  nlohmann::json out = bq::qtable_json(ct, direct.table);
  out["pipeline"] = rows;
  out["max_difference"] = worst;
  out["max_fixed_difference"] = worst_fixed;
  if (c.verbatim)
    out["episode_start"] = bq::qtable_json(ct, bq::q_direct(episodes, ct.gamma, mode, bq::Anchoring::episode_start).table);
  if (json_out(c)) {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& [key, value] : direct.table.entries)
      std::cout << ct.state_text(key.state) << " " << ct.actions[key.action] << " @" << key.depth << " = "
                << bq::format_real(value) << "\n";
    std::cout << "max |pipeline - direct| = " << bq::format_real(worst) << "\n";
  }
  if (alarm) {
    std::cerr << "error: answer-set pipeline and direct table disagree\n";
    return kExitAlarm;
  }
  return 0;
}

int cmd_policy(const Config& c, const bq::Limits& limits) {
  const bq::CompiledTheory ct = bq::compile_theory(grounded(c));
  const auto episodes = bq::enumerate_episodes(ct, episode_options(c, limits));
  bq::Policy policy;
  if (episodes.empty()) {
    std::cerr << "warning: no episodes; the policy is empty\n";
  } else {
    policy = bq::extract_policy(bq::q_direct(episodes, ct.gamma, mode_of(c)).table);
  }
  if (json_out(c)) {
    std::cout << nlohmann::json{{"mode", c.mode}, {"policy", bq::policy_json(ct, policy)}}.dump(2) << "\n";
  } else {
    for (const auto& [s, a] : policy.choice) std::cout << ct.state_text(s) << " -> " << ct.actions[a] << "\n";
  }
  return 0;
}

int cmd_check(const Config& c, const bq::Limits& limits) {
  const bq::CompiledTheory ct = bq::compile_theory(grounded(c));
  bq::CheckOptions o;
  o.pipeline.translate = translate_options(c);
  o.pipeline.scale = c.scale;
  o.pipeline.limits = limits;
  const auto report = bq::run_checks(ct, o);
  if (json_out(c)) {
    std::cout << report.json().dump(2) << "\n";
  } else {
    std::cout << report.text();
  }
  return report.passed() ? 0 : kExitAlarm;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"B_Q action theories: episodes, answer sets and Q estimates"};
  app.require_subcommand(1);
  Config c;
  bool no_enforce = false, enforce = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", c.input, "theory file (.bq), or - for stdin")->required();
    if (sub->get_name() == "translate") {
      sub->add_option("--format", c.translate_format, "asp, dimacs or report")
          ->check(CLI::IsMember({"asp", "dimacs", "report"}));
    } else {
      sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}));
    }
    sub->add_option("--horizon", c.horizon, "override the horizon");
    sub->add_option("--discount", c.discount, "override the discount factor");
    sub->add_flag("--require-goal", c.require_goal, "keep only episodes ending in the goal");
    sub->add_flag("--strict-initial", c.strict_initial, "pin step 0 to a listed initial description");
    sub->add_flag("--verbatim", c.verbatim, "translate the rules exactly as listed");
    sub->add_flag("--enforce-exec", enforce, "forbid occurrences of inexecutable actions");
    sub->add_flag("--no-enforce-exec", no_enforce, "allow occurrences of inexecutable actions");
    sub->add_option("--mode", c.mode, "estimator")->check(CLI::IsMember({"qlearning", "sarsa"}));
    sub->add_option("--scale", c.scale, "fixed-point resolution of the Q layer")->check(CLI::PositiveNumber);
  };

  auto* parse = app.add_subcommand("parse", "parse and validate a theory");
  auto* ground = app.add_subcommand("ground", "print the ground theory");
  auto* episodes = app.add_subcommand("episodes", "enumerate episodes");
  auto* translate = app.add_subcommand("translate", "emit the logic program");
  auto* solve = app.add_subcommand("solve", "enumerate answer sets of a theory or a .lp program");
  auto* qtable = app.add_subcommand("qtable", "Q table, cross-checked against the answer sets");
  auto* policy = app.add_subcommand("policy", "greedy policy of the Q table");
  auto* check = app.add_subcommand("check", "run all cross-checks");
  for (auto* sub : {parse, ground, episodes, translate, solve, qtable, policy, check}) common(sub);
  solve->add_option("--solver", c.solver, "naive or sat")->check(CLI::IsMember({"naive", "sat"}));
  solve->add_flag("--program", c.program_input, "read the input as program text even without a .lp suffix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (enforce && no_enforce) {
    std::cerr << "error: --enforce-exec and --no-enforce-exec are exclusive\n";
    return kExitInput;
  }
  if (enforce) c.enforce_exec = true;
  if (no_enforce) c.enforce_exec = false;

  try {
    const bq::Limits limits = limits_from_env();
    if (*parse) return cmd_parse(c);
    if (*ground) return cmd_ground(c);
    if (*episodes) return cmd_episodes(c, limits);
    if (*translate) return cmd_translate(c);
    if (*solve) return cmd_solve(c, limits);
    if (*qtable) return cmd_qtable(c, limits);
    if (*policy) return cmd_policy(c, limits);
    if (*check) return cmd_check(c, limits);
  } catch (const bq::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const bq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}

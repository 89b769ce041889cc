#include <atomic>
#include <exception>

#include "bq/error.hpp"
#include "bq/semantics.hpp"

namespace bq {

namespace {

struct RootTask {
  WorldState start;
  ActionId action = 0;
};

class TaskWalker {
 public:
  TaskWalker(const CompiledTheory& theory, const EpisodeOptions& options, std::atomic<std::size_t>& nodes)
      : theory_(theory), options_(options), nodes_(nodes), n_(static_cast<std::size_t>(theory.horizon)) {}

  void run(const RootTask& task, std::vector<Episode>& out) {
    path_ = {};
    path_.states.push_back(task.start);
    step(task.action, out);
  }

 private:
  void count_node() {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) + 1 > options_.limits.max_episode_nodes)
      throw CapExceeded("episode enumeration exceeds " + std::to_string(options_.limits.max_episode_nodes) +
                        " search nodes");
  }

  void step(ActionId a, std::vector<Episode>& out) {
    count_node();
    Transition tr = transition(theory_, path_.states.back(), a);
    path_.states.push_back(std::move(tr.to));
    path_.actions.push_back(a);
    path_.rewards.push_back(tr.reward);
    descend(out);
    path_.states.pop_back();
    path_.actions.pop_back();
    path_.rewards.pop_back();
  }

  void descend(std::vector<Episode>& out) {
    if (path_.actions.size() == n_) {
      if (!options_.require_goal || path_.states.back().holds_all(theory_.goal)) out.push_back(path_);
      return;
    }
    for (ActionId a : executable_actions(theory_, path_.states.back())) step(a, out);
  }

  const CompiledTheory& theory_;
  const EpisodeOptions& options_;
  std::atomic<std::size_t>& nodes_;
  std::size_t n_;
  Episode path_;
};

}  // namespace

std::vector<Episode> enumerate_episodes(const CompiledTheory& theory, const EpisodeOptions& options) {
  const auto starts = initial_world_states(theory, options.limits);
  std::vector<Episode> out;

  if (theory.horizon == 0) {
    for (const auto& s : starts)
      if (!options.require_goal || s.holds_all(theory.goal)) out.push_back(Episode{{s}, {}, {}});
    return out;
  }

  std::vector<RootTask> tasks;
  for (const auto& s : starts)
    for (ActionId a : executable_actions(theory, s)) tasks.push_back({s, a});

  const auto count = static_cast<std::int64_t>(tasks.size());
  std::vector<std::vector<Episode>> found(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> nodes{0};
  std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      TaskWalker walker(theory, options, nodes);
      walker.run(tasks[i], found[i]);
    } catch (...) {
      errors[i] = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }

  // Lowest task index wins so the reported error does not depend on scheduling.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Tasks are in (start, first action) order and each walks depth-first in
  // action order, so concatenation is already canonical.
  for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(out));
  return out;
}

}  // namespace bq

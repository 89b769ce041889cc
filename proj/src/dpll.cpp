#include <cstdlib>

#include "bq/solver.hpp"

namespace bq {

namespace {

std::size_t lit_index(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit) - 1) + (lit < 0 ? 1 : 0); }

}  // namespace

ModelEnumerator::ModelEnumerator(CnfFormula cnf) : cnf_(std::move(cnf)) {
  occurs_.assign(2 * static_cast<std::size_t>(cnf_.variable_count), {});
  for (std::size_t i = 0; i < cnf_.clauses.size(); ++i) attach(i);
  restart();
}

void ModelEnumerator::attach(std::size_t clause) {
  for (int l : cnf_.clauses[clause]) occurs_[lit_index(l)].push_back(clause);
}

void ModelEnumerator::assign(int lit, bool decision) {
  value_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : 0;
  trail_.push_back({lit, decision, false});
}

void ModelEnumerator::restart() {
  value_.assign(static_cast<std::size_t>(cnf_.variable_count) + 1, -1);
  trail_.clear();
  queue_head_ = 0;
  exhausted_ = false;
  pending_block_ = false;
  for (const auto& c : cnf_.clauses) {
    if (c.empty()) {
      exhausted_ = true;
      return;
    }
    if (c.size() != 1) continue;
    const signed char v = value_[static_cast<std::size_t>(std::abs(c[0]))];
    if (v == -1) {
      assign(c[0], false);
    } else if (v != (c[0] > 0 ? 1 : 0)) {
      exhausted_ = true;
      return;
    }
  }
}

bool ModelEnumerator::propagate() {
  while (queue_head_ < trail_.size()) {
    const int lit = trail_[queue_head_++].lit;
    for (std::size_t ci : occurs_[lit_index(-lit)]) {
      int unassigned = 0, last = 0;
      bool satisfied = false;
      for (int l : cnf_.clauses[ci]) {
        const signed char v = value_[static_cast<std::size_t>(std::abs(l))];
        if (v == -1) {
          ++unassigned;
          last = l;
        } else if (v == (l > 0 ? 1 : 0)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (unassigned == 0) return false;
      if (unassigned == 1) assign(last, false);
    }
  }
  return true;
}

bool ModelEnumerator::backtrack() {
  while (!trail_.empty()) {
    const TrailEntry e = trail_.back();
    trail_.pop_back();
    value_[static_cast<std::size_t>(std::abs(e.lit))] = -1;
    if (e.decision && !e.flipped) {
      queue_head_ = trail_.size();
      assign(-e.lit, true);
      trail_.back().flipped = true;
      return true;
    }
  }
  return false;
}

std::optional<std::vector<int>> ModelEnumerator::next() {
  if (exhausted_) return std::nullopt;
  if (pending_block_) {
    pending_block_ = false;
    if (!backtrack()) {
      exhausted_ = true;
      return std::nullopt;
    }
  }
  for (;;) {
    if (!propagate()) {
      if (!backtrack()) {
        exhausted_ = true;
        return std::nullopt;
      }
      continue;
    }
    int var = 0;
    for (int v = 1; v <= cnf_.variable_count; ++v)
      if (value_[static_cast<std::size_t>(v)] == -1) {
        var = v;
        break;
      }
    if (var == 0) {
      std::vector<int> model;
      Clause block;
      for (int v = 1; v <= cnf_.variable_count; ++v)
        if (value_[static_cast<std::size_t>(v)] == 1) model.push_back(v);
      for (const auto& e : trail_)
        if (e.decision) block.push_back(-e.lit);
      cnf_.clauses.push_back(std::move(block));
      attach(cnf_.clauses.size() - 1);
      pending_block_ = true;
      return model;
    }
    assign(-var, true);
  }
}

void ModelEnumerator::add_clauses(const std::vector<Clause>& clauses) {
  for (const auto& c : clauses) {
    cnf_.clauses.push_back(c);
    attach(cnf_.clauses.size() - 1);
  }
  restart();
}

}  // namespace bq

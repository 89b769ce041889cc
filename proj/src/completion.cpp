#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

#include "bq/solver.hpp"

namespace bq {

namespace {

// Sorted by variable then sign; duplicates removed. Returns false for a
// tautology.
bool normalize(Clause& c) {
  std::sort(c.begin(), c.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] == -c[i - 1]) return false;
  return true;
}

class ClauseSink {
 public:
  explicit ClauseSink(CnfFormula& cnf) : cnf_(cnf) {}
  void add(Clause c) {
    if (normalize(c) && seen_.insert(c).second) cnf_.clauses.push_back(std::move(c));
  }

 private:
  CnfFormula& cnf_;
  std::set<Clause> seen_;
};

}  // namespace

CnfFormula clark_completion(const NormalProgram& program) {
  CnfFormula cnf;
  cnf.atom_count = program.atom_count();
  cnf.variable_count = static_cast<int>(cnf.atom_count);
  for (AtomId a = 0; a < cnf.atom_count; ++a) cnf.names.push_back(program.name(a));
  ClauseSink sink(cnf);

  std::map<Clause, int> body_vars;
  std::vector<std::vector<int>> support(cnf.atom_count);
  std::vector<char> has_fact(cnf.atom_count, 0);

  for (const auto& rule : program.rules) {
    Clause lits;
    for (AtomId p : rule.positive) lits.push_back(CnfFormula::atom_var(p));
    for (AtomId b : rule.negative) lits.push_back(-CnfFormula::atom_var(b));
    normalize(lits);

    if (rule.is_constraint()) {
      Clause c;
      for (int l : lits) c.push_back(-l);
      sink.add(std::move(c));
      cnf.body_literal.push_back(0);
      continue;
    }

    int body = 0;
    if (lits.size() == 1) {
      body = lits.front();
    } else if (lits.size() > 1) {
      auto [it, fresh] = body_vars.try_emplace(lits, cnf.variable_count + 1);
      body = it->second;
      if (fresh) {
        ++cnf.variable_count;
        std::string name = "body(";
        for (std::size_t i = 0; i < lits.size(); ++i)
          name += (i ? "," : "") + std::string(lits[i] < 0 ? "not " : "") + program.name(std::abs(lits[i]) - 1);
        cnf.names.push_back(name + ")");
        Clause back{body};
        for (int l : lits) {
          sink.add({-body, l});
          back.push_back(-l);
        }
        sink.add(std::move(back));
      }
    }
    cnf.body_literal.push_back(body);

    const int head = CnfFormula::atom_var(*rule.head);
    if (body == 0) {
      has_fact[*rule.head] = 1;
      sink.add({head});
    } else {
      sink.add({-body, head});
      support[*rule.head].push_back(body);
    }
  }

  for (AtomId a = 0; a < cnf.atom_count; ++a) {
    if (has_fact[a]) continue;
    Clause c{-CnfFormula::atom_var(a)};
    c.insert(c.end(), support[a].begin(), support[a].end());
    sink.add(std::move(c));
  }
  return cnf;
}

Tightness tightness_check(const NormalProgram& program) {
  const std::size_t n = program.atom_count();
  std::vector<std::vector<AtomId>> edges(n);
  for (const auto& r : program.rules)
    if (r.head) edges[*r.head].insert(edges[*r.head].end(), r.positive.begin(), r.positive.end());
  for (auto& e : edges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }

  // Iterative colouring DFS; the grey stack is the current path.
  std::vector<char> colour(n, 0);
  std::vector<AtomId> path;
  std::vector<std::size_t> next_edge;
  for (AtomId root = 0; root < n; ++root) {
    if (colour[root]) continue;
    path = {root};
    next_edge = {0};
    colour[root] = 1;
    while (!path.empty()) {
      const AtomId v = path.back();
      if (next_edge.back() == edges[v].size()) {
        colour[v] = 2;
        path.pop_back();
        next_edge.pop_back();
        continue;
      }
      const AtomId w = edges[v][next_edge.back()++];
      if (colour[w] == 1) {
        auto start = std::find(path.begin(), path.end(), w);
        return {false, std::vector<AtomId>(start, path.end())};
      }
      if (colour[w] == 0) {
        colour[w] = 1;
        path.push_back(w);
        next_edge.push_back(0);
      }
    }
  }
  return {true, {}};
}

std::vector<Clause> loop_formulas(const NormalProgram& program, const CnfFormula& cnf, const Interpretation& model) {
  const auto founded = least_model(reduct(program, model), program.atom_count());
  Interpretation unfounded;
  std::set_difference(model.begin(), model.end(), founded.begin(), founded.end(), std::back_inserter(unfounded));
  if (unfounded.empty()) return {};

  auto in_model = [&](AtomId a) { return std::binary_search(model.begin(), model.end(), a); };
  auto body_true = [&](const ProgramRule& r) {
    return std::all_of(r.positive.begin(), r.positive.end(), in_model) &&
           std::none_of(r.negative.begin(), r.negative.end(), in_model);
  };

  // Loop formula of a set: each member needs a rule whose positive body
  // leaves the set. Returns nothing when the model already satisfies it.
  auto formula = [&](const std::vector<AtomId>& set) -> std::vector<Clause> {
    auto member = [&](AtomId a) { return std::binary_search(set.begin(), set.end(), a); };
    Clause external;
    for (std::size_t i = 0; i < program.rules.size(); ++i) {
      const auto& r = program.rules[i];
      if (!r.head || !member(*r.head)) continue;
      if (std::any_of(r.positive.begin(), r.positive.end(), member)) continue;
      if (cnf.body_literal[i] == 0 || body_true(r)) return {};
      external.push_back(cnf.body_literal[i]);
    }
    std::vector<Clause> out;
    for (AtomId p : set) {
      Clause c{-CnfFormula::atom_var(p)};
      c.insert(c.end(), external.begin(), external.end());
      normalize(c);
      out.push_back(std::move(c));
    }
    return out;
  };

  // Strongly connected components of the positive graph inside the
  // unfounded set (Tarjan).
  const std::size_t n = program.atom_count();
  std::vector<std::vector<AtomId>> edges(n);
  auto unfounded_member = [&](AtomId a) { return std::binary_search(unfounded.begin(), unfounded.end(), a); };
  for (const auto& r : program.rules)
    if (r.head && unfounded_member(*r.head))
      for (AtomId p : r.positive)
        if (unfounded_member(p)) edges[*r.head].push_back(p);

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<AtomId> stack;
  std::vector<std::vector<AtomId>> components;
  int counter = 0;
  std::function<void(AtomId)> connect = [&](AtomId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (AtomId w : edges[v]) {
      if (index[w] < 0) {
        connect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<AtomId> comp;
      AtomId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  };
  for (AtomId a : unfounded)
    if (index[a] < 0) connect(a);
  std::sort(components.begin(), components.end());

  std::vector<Clause> out;
  for (const auto& comp : components)
    for (auto& c : formula(comp)) out.push_back(std::move(c));
  if (out.empty()) out = formula(unfounded);
  return out;
}

}  // namespace bq

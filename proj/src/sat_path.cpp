#include <algorithm>
#include <sstream>

#include "bq/error.hpp"
#include "bq/solver.hpp"

namespace bq {

std::vector<std::vector<int>> sat_solve(const CnfFormula& cnf, std::size_t max_models) {
  ModelEnumerator enumerator(cnf);
  std::vector<std::vector<int>> out;
  while (auto model = enumerator.next()) {
    if (out.size() == max_models)
      throw CapExceeded("SAT enumeration exceeds " + std::to_string(max_models) + " models");
    out.push_back(std::move(*model));
  }
  return out;
}

std::string emit_dimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.variable_count << " " << cnf.clauses.size() << "\n";
  for (const auto& c : cnf.clauses) {
    for (int l : c) out << l << " ";
    out << "0\n";
  }
  for (int v = 1; v <= cnf.variable_count; ++v) out << "c map " << v << " " << cnf.names[v - 1] << "\n";
  return out.str();
}

std::vector<Interpretation> enumerate_answer_sets(const NormalProgram& program, SolverPath path, const Limits& limits,
                                                  SolveStats* stats) {
  SolveStats local;
  SolveStats& st = stats ? *stats : local;
  st = {};
  st.path = path;
  st.tight = tightness_check(program).tight;

  std::vector<Interpretation> out;
  if (path == SolverPath::naive) {
    NaiveStats ns;
    out = naive_answer_sets(program, limits, &ns);
    st.naive_nodes = ns.nodes;
  } else {
    const CnfFormula cnf = clark_completion(program);
    ModelEnumerator enumerator(cnf);
    while (auto model = enumerator.next()) {
      if (++st.models_seen > limits.sat_max_models)
        throw CapExceeded("SAT enumeration exceeds " + std::to_string(limits.sat_max_models) + " models");
      Interpretation atoms;
      for (int v : *model)
        if (static_cast<std::size_t>(v) <= cnf.atom_count) atoms.push_back(static_cast<AtomId>(v - 1));
      if (is_answer_set(program, atoms)) {
        out.push_back(std::move(atoms));
        continue;
      }
      auto clauses = loop_formulas(program, cnf, atoms);
      if (clauses.empty()) continue;
      ++st.loop_formula_rounds;
      st.loop_clauses += clauses.size();
      enumerator.add_clauses(clauses);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& s : out)
    if (!is_answer_set(program, s)) throw Error(ErrorKind::validation, "solver returned a non-stable model");
  return out;
}

}  // namespace bq

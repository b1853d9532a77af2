#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "rubiksat/cnf.hpp"
#include "rubiksat/solver.hpp"

namespace rubiksat {

// Recursive ALO decomposition: branch over the free literals of a
// move-type exactly-one clause; leaf subproblems go to the backend.
struct DecomposeConfig {
  int width = 6;  // branch only on tagged clauses with at most this many free literals
  int depth = 4;  // levels that branch; children of the deepest level delegate
  BackendConfig backend;
  int workers = 1;
  bool deterministic = true;
  std::uint64_t seed = 0;
  bool lookahead = false;             // failed-literal probing before branching
  double total_timeout_seconds = 0.0;  // 0 = per-leaf timeouts only
  std::ostream* trace = nullptr;       // one CSV line per delegated leaf

  void validate() const;
};

// Among unsatisfied move-type ALO clauses with >= 2 (and <= width) free
// literals, picks the one with the smallest step index. The assignment must
// be a propagation fixpoint.
std::optional<int> find_branch_clause(const Formula& f, const Assignment& a, int width = 6);

SolverResult solve_decomposed(const Formula& f, const DecomposeConfig& config);

}  // namespace rubiksat

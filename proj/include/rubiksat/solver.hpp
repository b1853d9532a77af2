#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "rubiksat/cnf.hpp"

namespace rubiksat {

enum class Outcome : std::uint8_t { sat, unsat, unknown };
enum class UnknownReason : std::uint8_t { timeout, resource };

struct SolverResult {
  Outcome outcome = Outcome::unknown;
  Model model;  // total over the formula's variables when sat
  UnknownReason reason = UnknownReason::timeout;

  static SolverResult sat(Model m) { return {Outcome::sat, std::move(m), {}}; }
  static SolverResult unsat() { return {Outcome::unsat, {}, {}}; }
  static SolverResult unknown(UnknownReason r) { return {Outcome::unknown, {}, r}; }
};

const char* to_string(Outcome o);

struct BuiltinOptions {
  bool learning = true;   // keep first-UIP clauses
  bool restarts = true;   // Luby restarts on conflict counts
};

struct BackendConfig {
  enum class Kind : std::uint8_t { builtin, external };

  Kind kind = Kind::builtin;
  std::string solver_path;
  // Argument template; "{cnf}" is replaced by the DIMACS path. If no
  // placeholder appears the path is appended.
  std::vector<std::string> solver_args = {"{cnf}"};
  double timeout_seconds = 60.0;
  bool deterministic = true;
  BuiltinOptions builtin;
  const std::atomic<bool>* stop = nullptr;  // cooperative cancellation

  void validate() const;
};

// ---- unit propagation ----

struct PropagateResult {
  bool conflict = false;
  int conflict_clause = -1;  // index into formula.clauses() when conflict
};

// Occurrence-list unit propagator over an immutable formula. The caller owns
// the assignment; `trail` records every variable assigned by run() so the
// caller can roll back.
class UnitPropagator {
 public:
  explicit UnitPropagator(const Formula& f);

  // Propagates to fixpoint from the current assignment. Newly assigned
  // variables are appended to trail.
  PropagateResult run(Assignment& a, std::vector<Var>& trail) const;

  // Incremental form: `a` minus `seed` must already be a fixpoint; only
  // consequences of `seed` are explored.
  PropagateResult run_from(Assignment& a, std::vector<Var>& trail, Lit seed) const;

 private:
  PropagateResult drain(Assignment& a, std::vector<Var>& trail, std::vector<Lit>& queue) const;
  PropagateResult scan_clause(const Clause& c, int idx, Assignment& a,
                              std::vector<Var>& trail, std::vector<Lit>& queue) const;

  const Formula& formula_;
  std::vector<std::vector<int>> occ_;  // clause occurrences keyed by literal code
};

// Fixpoint of the unit rule; extends `a` in place.
PropagateResult propagate(const Formula& f, Assignment& a);

// ---- solving ----

SolverResult solve_builtin(const Formula& f, std::span<const Lit> assumptions,
                           const BackendConfig& config);

class ExternalSolverError : public std::runtime_error {
 public:
  enum class Kind { spawn, malformed_output };
  ExternalSolverError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Runs a DIMACS solver as a subprocess and parses SAT-competition output.
// Assumptions are appended to the dump as unit clauses. Sat models are
// verified locally before being returned.
SolverResult solve_external(const Formula& f, std::span<const Lit> assumptions,
                            const BackendConfig& config);

SolverResult solve_backend(const Formula& f, std::span<const Lit> assumptions,
                           const BackendConfig& config);

bool verify_model(const Formula& f, const Model& model);

// ---- failed-literal probing ----

struct ProbeResult {
  bool unsat = false;
  std::vector<Lit> implied;
};

// For each candidate variable, tries both polarities; a conflicting probe
// asserts the opposite literal into `a` (recording on `trail`). Returns
// unsat if both polarities of some variable fail.
ProbeResult failed_literal_probe(const Formula& f, Assignment& a, std::vector<Var>& trail,
                                 std::span<const Var> candidates);

// Same, reusing a prebuilt propagator; `a` must already be a conflict-free
// fixpoint.
ProbeResult failed_literal_probe(const UnitPropagator& up, Assignment& a,
                                 std::vector<Var>& trail, std::span<const Var> candidates);

}  // namespace rubiksat

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rubiksat/cube.hpp"
#include "rubiksat/encoder.hpp"
#include "rubiksat/orchestrator.hpp"

namespace rubiksat {

// How instances get solved: either the backend directly, or the ALO
// decomposition wrapped around it. decompose.backend is the delegate in
// both cases.
struct EngineConfig {
  bool use_decomposition = false;
  DecomposeConfig decompose;
};

SolverResult run_engine(const Formula& f, const EngineConfig& engine, double timeout_seconds);

struct Strategy {
  enum class Kind : std::uint8_t { optimal_shallow, two_phase };

  Kind kind = Kind::two_phase;
  int max_length = 13;  // optimal-shallow: iterative-deepening bound
  int total_budget = 20;
  std::vector<int> phase1_sweep = {9, 10, 11, 12};
  double attempt_timeout_seconds = 60.0;
  EncodeMode two_phase_mode = EncodeMode::at_most;
  // Encoding knobs (bits, AMO method, pruning flags); horizon, mode and
  // phase fields are overwritten per attempt.
  EncodingConfig knobs;

  void validate() const;
};

struct AttemptRecord {
  std::string config_summary;
  Outcome outcome = Outcome::unknown;
  UnknownReason reason = UnknownReason::timeout;
  double seconds = 0.0;
};

struct SolveReport {
  std::string input_facelets;
  std::vector<AttemptRecord> attempts;
  Outcome final_outcome = Outcome::unknown;  // sat: solved and verified
  std::optional<Maneuver> maneuver;
  bool verified = false;
  int phase1_len = 0;  // measured split: first index whose suffix lies in A10
  int phase2_len = 0;
  double total_seconds = 0.0;
};

// Iterative deepening over exact-length encodings; the first Sat length is
// optimal because every shorter length was proven Unsat.
SolveReport solve_optimal_shallow(const CubeState& s, int max_length,
                                  const EngineConfig& engine);

SolveReport solve_two_phase(const CubeState& s, const Strategy& strategy,
                            const EngineConfig& engine);

// Pure re-check through the cube model; never trusts solver output.
// Indices are 0-based along the state walk (0 = the input state).
struct VerifyReport {
  bool solves = false;
  std::optional<int> first_solved_step;
  std::optional<int> first_h_step;
  int phase1_split = 0;  // first index from which all remaining moves are in A10
  bool split_state_in_h = false;
};
VerifyReport verify_solution(const CubeState& s, const Maneuver& mv);

struct BenchOptions {
  Strategy strategy;
  EngineConfig engine;
  bool deterministic_timing = false;  // report 0.000 so the CSV is byte-stable
};

// One facelet string or scramble maneuver per non-empty line. Returns CSV
// with columns id,phase1_len,phase2_len,total_len,result,seconds. Parse
// errors become rows with result=error.
std::string bench(std::istream& corpus, const BenchOptions& options);

}  // namespace rubiksat

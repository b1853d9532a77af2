#include "rubiksat/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <istream>
#include <sstream>

namespace rubiksat {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string format_seconds(double s, bool deterministic) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", deterministic ? 0.0 : s);
  return buf;
}

// First index i such that moves i+1..len all lie in A10. The state at that
// index is provably in H whenever the suffix ends solved.
int a10_suffix_split(const Maneuver& mv) {
  int split = static_cast<int>(mv.size());
  while (split > 0 && in_a10(mv[static_cast<std::size_t>(split) - 1])) --split;
  return split;
}

void fill_split(SolveReport& report) {
  if (!report.maneuver) return;
  const int split = a10_suffix_split(*report.maneuver);
  report.phase1_len = split;
  report.phase2_len = static_cast<int>(report.maneuver->size()) - split;
}

AttemptRecord record_attempt(const EncodingConfig& cfg, const SolverResult& r, double seconds) {
  return {cfg.summary(), r.outcome, r.reason, seconds};
}

}  // namespace

SolverResult run_engine(const Formula& f, const EngineConfig& engine, double timeout_seconds) {
  if (engine.use_decomposition) {
    DecomposeConfig d = engine.decompose;
    d.total_timeout_seconds = timeout_seconds;
    d.backend.timeout_seconds = std::min(d.backend.timeout_seconds, timeout_seconds);
    return solve_decomposed(f, d);
  }
  BackendConfig b = engine.decompose.backend;
  b.timeout_seconds = timeout_seconds;
  return solve_backend(f, {}, b);
}

void Strategy::validate() const {
  if (kind == Kind::optimal_shallow) {
    if (max_length < 0 || max_length > 13)
      throw std::invalid_argument("optimal-shallow max_length must lie in 0..13");
    return;
  }
  if (total_budget < 1) throw std::invalid_argument("two-phase budget must be positive");
  if (phase1_sweep.empty()) throw std::invalid_argument("two-phase sweep must not be empty");
  for (int k : phase1_sweep)
    if (k < 0 || k >= total_budget)
      throw std::invalid_argument("sweep values must lie in 0..budget-1");
  if (attempt_timeout_seconds <= 0)
    throw std::invalid_argument("attempt timeout must be positive");
}

SolveReport solve_optimal_shallow(const CubeState& s, int max_length,
                                  const EngineConfig& engine) {
  if (max_length < 0 || max_length > 13)
    throw std::invalid_argument("optimal-shallow max_length must lie in 0..13");

  SolveReport report;
  report.input_facelets = format_facelets(s);
  const auto start = Clock::now();

  for (int len = 0; len <= max_length; ++len) {
    EncodingConfig cfg;
    cfg.n_states = len + 1;
    cfg.mode = EncodeMode::exact_length;
    cfg.last_move_constraint = true;
    Encoding enc = encode(s, cfg);

    const auto attempt_start = Clock::now();
    SolverResult r = run_engine(enc.formula, engine,
                                engine.decompose.backend.timeout_seconds);
    report.attempts.push_back(record_attempt(cfg, r, elapsed_seconds(attempt_start)));

    if (r.outcome == Outcome::sat) {
      DecodedSolution sol = decode_solution(enc.vars, r.model);
      report.maneuver = sol.maneuver;
      report.verified = true;
      report.final_outcome = Outcome::sat;
      fill_split(report);
      break;
    }
    if (r.outcome == Outcome::unknown) {
      report.final_outcome = Outcome::unknown;
      break;
    }
    report.final_outcome = Outcome::unsat;  // exhausted so far
  }
  report.total_seconds = elapsed_seconds(start);
  return report;
}

SolveReport solve_two_phase(const CubeState& s, const Strategy& strategy,
                            const EngineConfig& engine) {
  strategy.validate();
  SolveReport report;
  report.input_facelets = format_facelets(s);
  const auto start = Clock::now();

  if (is_solved(s)) {
    report.maneuver = Maneuver{};
    report.verified = true;
    report.final_outcome = Outcome::sat;
    report.total_seconds = elapsed_seconds(start);
    return report;
  }

  bool saw_unknown = false;
  for (int k : strategy.phase1_sweep) {
    EncodingConfig cfg = strategy.knobs;
    cfg.n_states = strategy.total_budget + 1;
    cfg.mode = strategy.two_phase_mode;
    cfg.phase1_len = k;
    cfg.last_move_constraint = cfg.mode == EncodeMode::exact_length;
    if (cfg.color_bits == ColorBits::two_for_phase2 && k == 0 && !is_h_state(s))
      cfg.color_bits = ColorBits::three_everywhere;  // 2-bit state 1 cannot hold it
    Encoding enc = encode(s, cfg);

    const auto attempt_start = Clock::now();
    SolverResult r = run_engine(enc.formula, engine, strategy.attempt_timeout_seconds);
    report.attempts.push_back(record_attempt(cfg, r, elapsed_seconds(attempt_start)));

    if (r.outcome == Outcome::sat) {
      DecodedSolution sol = decode_solution(enc.vars, r.model);
      report.maneuver = sol.maneuver;
      report.verified = true;
      report.final_outcome = Outcome::sat;
      fill_split(report);
      break;
    }
    if (r.outcome == Outcome::unknown) saw_unknown = true;
  }
  if (report.final_outcome != Outcome::sat)
    report.final_outcome = saw_unknown ? Outcome::unknown : Outcome::unsat;
  report.total_seconds = elapsed_seconds(start);
  return report;
}

VerifyReport verify_solution(const CubeState& s, const Maneuver& mv) {
  VerifyReport out;
  CubeState cur = s;
  for (std::size_t i = 0; i <= mv.size(); ++i) {
    if (!out.first_solved_step && is_solved(cur)) out.first_solved_step = static_cast<int>(i);
    if (!out.first_h_step && is_h_state(cur)) out.first_h_step = static_cast<int>(i);
    if (i < mv.size()) cur = apply_move(cur, mv[i]);
  }
  out.solves = is_solved(cur);
  out.phase1_split = a10_suffix_split(mv);
  CubeState split_state = s;
  for (int i = 0; i < out.phase1_split; ++i)
    split_state = apply_move(split_state, mv[static_cast<std::size_t>(i)]);
  out.split_state_in_h = is_h_state(split_state);
  return out;
}

std::string bench(std::istream& corpus, const BenchOptions& options) {
  std::ostringstream csv;
  csv << "id,phase1_len,phase2_len,total_len,result,seconds\n";

  std::string line;
  int id = 0;
  while (std::getline(corpus, line)) {
    // trim
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string entry = line.substr(begin, end - begin + 1);
    ++id;

    std::optional<CubeState> state;
    std::string error;
    try {
      bool looks_like_facelets =
          entry.size() == kNumFacelets &&
          entry.find_first_not_of("FLBRUD") == std::string::npos;
      state = looks_like_facelets ? parse_facelets(entry)
                                  : apply_maneuver(CubeState::solved(), parse_maneuver(entry));
    } catch (const ParseError& e) {
      error = e.what();
    }

    if (!state) {
      csv << id << ",0,0,0,error," << format_seconds(0.0, options.deterministic_timing) << '\n';
      continue;
    }

    const auto start = Clock::now();
    SolveReport report =
        options.strategy.kind == Strategy::Kind::optimal_shallow
            ? solve_optimal_shallow(*state, options.strategy.max_length, options.engine)
            : solve_two_phase(*state, options.strategy, options.engine);
    const double seconds = elapsed_seconds(start);

    std::string result;
    switch (report.final_outcome) {
      case Outcome::sat: result = "solved"; break;
      case Outcome::unsat: result = "unsolved"; break;
      case Outcome::unknown: result = "timeout"; break;
    }
    const int total = report.maneuver ? static_cast<int>(report.maneuver->size()) : 0;
    csv << id << ',' << report.phase1_len << ',' << report.phase2_len << ',' << total << ','
        << result << ',' << format_seconds(seconds, options.deterministic_timing) << '\n';
  }
  return csv.str();
}

}  // namespace rubiksat

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rubiksat/planner.hpp"

namespace {

using namespace rubiksat;

// Exit codes: 0 ok, 1 usage, 2 unsat/unsolved, 3 timeout, 4 internal error.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kUnsolved = 2,
  kTimeout = 3,
  kInternal = 4,
};

struct StateOptions {
  std::string facelets;
  std::string scramble_text;

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("--facelets", facelets, "54-character facelet string (FLBRUD)");
    auto* s = cmd->add_option("--scramble", scramble_text,
                              "scramble maneuver applied to the solved cube");
    f->excludes(s);
  }

  CubeState resolve() const {
    if (!facelets.empty()) return parse_facelets(facelets);
    if (!scramble_text.empty())
      return apply_maneuver(CubeState::solved(), parse_maneuver(scramble_text));
    throw CLI::ValidationError("state", "one of --facelets or --scramble is required");
  }
};

struct EncodingOptions {
  int states = 1;
  std::string mode = "exact";
  int phase1 = -1;
  int color_bits = 3;
  std::string amo = "product";
  bool no_prune_opposite = false;
  bool prune_same_face = false;
  bool no_last_move = false;
  CLI::Option* mode_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--states", states, "number of states (moves + 1)");
    mode_opt = cmd->add_option("--mode", mode, "exact|atmost")
                   ->check(CLI::IsMember({"exact", "atmost"}));
    cmd->add_option("--phase1", phase1, "phase-1 move count (enables two-phase constraints)");
    cmd->add_option("--color-bits", color_bits, "3|2 (2 = two-bit colors in phase 2)")
        ->check(CLI::IsMember({2, 3}));
    cmd->add_option("--amo", amo, "pairwise|product")
        ->check(CLI::IsMember({"pairwise", "product"}));
    cmd->add_flag("--no-prune-opposite", no_prune_opposite, "drop opposite-face pruning clauses");
    cmd->add_flag("--prune-same-face", prune_same_face, "also ban same-face move pairs");
    cmd->add_flag("--no-last-move", no_last_move, "drop the last-move frame constraint");
  }

  EncodingConfig resolve() const {
    EncodingConfig cfg;
    cfg.n_states = states;
    cfg.mode = mode == "exact" ? EncodeMode::exact_length : EncodeMode::at_most;
    if (phase1 >= 0) cfg.phase1_len = phase1;
    cfg.color_bits = color_bits == 3 ? ColorBits::three_everywhere : ColorBits::two_for_phase2;
    cfg.amo = amo == "pairwise" ? AmoMethod::pairwise : AmoMethod::product;
    cfg.pruning_opposite = !no_prune_opposite;
    cfg.pruning_same_face = prune_same_face;
    cfg.last_move_constraint = cfg.mode == EncodeMode::exact_length && !no_last_move;
    return cfg;
  }
};

struct EngineOptions {
  std::string backend = "builtin";
  std::string solver_path;
  std::vector<std::string> solver_args;
  double timeout = 60.0;
  int workers = 1;
  std::uint64_t seed = 0;
  bool deterministic = false;
  bool alo = false;
  int alo_depth = 4;
  int alo_width = 6;
  bool lookahead = false;
  bool trace = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "builtin|external")
        ->check(CLI::IsMember({"builtin", "external"}));
    cmd->add_option("--solver-path", solver_path, "external solver binary");
    cmd->add_option("--solver-arg", solver_args,
                    "external solver argument template ({cnf} = CNF path)");
    cmd->add_option("--timeout", timeout, "per-attempt timeout in seconds");
    cmd->add_option("--workers", workers, "parallel workers for the decomposition");
    cmd->add_option("--seed", seed, "seed for non-deterministic branch ordering");
    cmd->add_flag("--deterministic", deterministic, "serial deterministic mode");
    cmd->add_flag("--alo", alo, "solve through the ALO decomposition");
    cmd->add_option("--alo-depth", alo_depth, "decomposition recursion depth");
    cmd->add_option("--alo-width", alo_width, "decomposition branch width");
    cmd->add_flag("--lookahead", lookahead, "failed-literal probing before branching");
    cmd->add_flag("--trace", trace, "write branch-trace lines to stderr");
  }

  EngineConfig resolve() const {
    EngineConfig engine;
    engine.use_decomposition = alo || workers > 1;
    engine.decompose.width = alo_width;
    engine.decompose.depth = alo_depth;
    engine.decompose.workers = deterministic ? 1 : workers;
    engine.decompose.deterministic = deterministic;
    engine.decompose.seed = seed;
    engine.decompose.lookahead = lookahead;
    if (trace) engine.decompose.trace = &std::cerr;
    BackendConfig& b = engine.decompose.backend;
    b.kind = backend == "external" ? BackendConfig::Kind::external : BackendConfig::Kind::builtin;
    b.solver_path = solver_path;
    if (!solver_args.empty()) b.solver_args = solver_args;
    b.timeout_seconds = timeout;
    b.deterministic = deterministic;
    return engine;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<int> parse_sweep(const std::string& text) {
  // "A..B" or a single value
  const auto dots = text.find("..");
  std::vector<int> out;
  if (dots == std::string::npos) {
    out.push_back(std::stoi(text));
    return out;
  }
  int a = std::stoi(text.substr(0, dots));
  int b = std::stoi(text.substr(dots + 2));
  for (int k = a; k <= b; ++k) out.push_back(k);
  return out;
}

int exit_code_for(const SolveReport& report) {
  switch (report.final_outcome) {
    case Outcome::sat: return kOk;
    case Outcome::unsat: return kUnsolved;
    case Outcome::unknown: return kTimeout;
  }
  return kInternal;
}

void print_report(const SolveReport& report) {
  for (const AttemptRecord& a : report.attempts)
    std::cerr << "attempt " << a.config_summary << " -> " << to_string(a.outcome) << " ("
              << a.seconds << "s)\n";
  if (report.maneuver) {
    std::cerr << "phase1=" << report.phase1_len << " phase2=" << report.phase2_len
              << " total=" << report.maneuver->size() << " verified="
              << (report.verified ? "yes" : "no") << "\n";
    std::cout << format_maneuver(*report.maneuver) << "\n";
  } else {
    std::cerr << "no solution: " << to_string(report.final_outcome) << "\n";
  }
}

int run_sat_mode(const std::string& path, double timeout) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "c cannot open " << path << "\n";
    return kUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Formula f = Formula::from_dimacs(buf.str());

  BackendConfig cfg;
  cfg.timeout_seconds = timeout;
  SolverResult r = solve_builtin(f, {}, cfg);
  if (r.outcome == Outcome::unknown) {
    std::cout << "s UNKNOWN\n";
    return kOk;
  }
  if (r.outcome == Outcome::unsat) {
    std::cout << "s UNSATISFIABLE\n";
    return 20;
  }
  std::cout << "s SATISFIABLE\n";
  std::string line = "v";
  for (Var v = 1; v <= f.num_vars(); ++v) {
    line += ' ';
    if (r.model[static_cast<std::size_t>(v)] != LBool::tt) line += '-';
    line += std::to_string(v);
    if (line.size() > 72) {
      std::cout << line << "\n";
      line = "v";
    }
  }
  std::cout << line << " 0\n";
  return 10;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAT-based Rubik's cube solving toolkit"};
  app.require_subcommand(1);

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "compile a state to DIMACS CNF");
  StateOptions encode_state;
  EncodingOptions encode_opts;
  std::string dimacs_path = "-", varmap_path;
  encode_state.attach(encode_cmd);
  encode_opts.attach(encode_cmd);
  encode_cmd->add_option("--emit-dimacs", dimacs_path, "output path (- = stdout)");
  encode_cmd->add_option("--varmap", varmap_path, "variable-map sidecar path");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "search for a solution maneuver");
  StateOptions solve_state;
  EngineOptions solve_engine;
  EncodingOptions solve_knobs;
  int solve_length = -1;
  int solve_budget = 20;
  std::string solve_sweep = "9..12";
  solve_state.attach(solve_cmd);
  solve_engine.attach(solve_cmd);
  solve_knobs.attach(solve_cmd);
  solve_cmd->add_option("--length", solve_length,
                        "optimal-shallow mode: iterative deepening up to this length");
  solve_cmd->add_option("--budget", solve_budget, "two-phase total move budget");
  solve_cmd->add_option("--phase1-sweep", solve_sweep, "two-phase sweep, e.g. 9..12 or 10");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a maneuver against a state");
  StateOptions verify_state;
  std::string verify_maneuver;
  verify_state.attach(verify_cmd);
  verify_cmd->add_option("--maneuver", verify_maneuver, "maneuver to verify")->required();

  // scramble
  auto* scramble_cmd = app.add_subcommand("scramble", "deterministic canonical scramble");
  std::uint64_t scramble_seed = 0;
  int scramble_length = 20;
  scramble_cmd->add_option("--seed", scramble_seed, "PRNG seed");
  scramble_cmd->add_option("--length", scramble_length, "number of moves");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimal depth (shallow)");
  StateOptions oracle_state;
  int oracle_depth = 5;
  oracle_state.attach(oracle_cmd);
  oracle_cmd->add_option("--max-depth", oracle_depth, "search bound (<= 7)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a corpus and emit CSV");
  EngineOptions bench_engine;
  EncodingOptions bench_knobs;
  std::string bench_corpus, bench_csv = "-", bench_sweep = "9..12";
  int bench_budget = 20;
  int bench_length = -1;
  bench_engine.attach(bench_cmd);
  bench_knobs.attach(bench_cmd);
  bench_cmd->add_option("--corpus", bench_corpus, "one facelet string or maneuver per line")
      ->required();
  bench_cmd->add_option("--csv", bench_csv, "output path (- = stdout)");
  bench_cmd->add_option("--budget", bench_budget, "two-phase total move budget");
  bench_cmd->add_option("--phase1-sweep", bench_sweep, "two-phase sweep, e.g. 9..12");
  bench_cmd->add_option("--length", bench_length, "use optimal-shallow up to this length");

  // sat
  auto* sat_cmd = app.add_subcommand("sat", "solve a DIMACS file (SAT-competition output)");
  std::string sat_path;
  double sat_timeout = 3600.0;
  sat_cmd->add_option("cnf", sat_path, "DIMACS CNF path")->required();
  sat_cmd->add_option("--timeout", sat_timeout, "timeout in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*encode_cmd) {
      Encoding enc = encode(encode_state.resolve(), encode_opts.resolve());
      write_text(dimacs_path, enc.formula.to_dimacs());
      if (!varmap_path.empty()) write_text(varmap_path, enc.formula.varmap_sidecar());
      std::cerr << "variables=" << enc.formula.num_vars()
                << " clauses=" << enc.formula.num_clauses() << "\n";
      return kOk;
    }

    if (*solve_cmd) {
      CubeState state = solve_state.resolve();
      EngineConfig engine = solve_engine.resolve();
      SolveReport report;
      if (solve_length >= 0) {
        report = solve_optimal_shallow(state, solve_length, engine);
      } else {
        Strategy strategy;
        strategy.kind = Strategy::Kind::two_phase;
        strategy.total_budget = solve_budget;
        // an explicit --phase1 K narrows the sweep to that single value
        strategy.phase1_sweep =
            solve_knobs.phase1 >= 0 ? std::vector<int>{solve_knobs.phase1}
                                    : parse_sweep(solve_sweep);
        strategy.attempt_timeout_seconds = solve_engine.timeout;
        strategy.knobs = solve_knobs.resolve();
        // two-phase sweeps default to at-most mode unless --mode was given
        strategy.two_phase_mode = solve_knobs.mode_opt->count() > 0
                                      ? strategy.knobs.mode
                                      : EncodeMode::at_most;
        report = solve_two_phase(state, strategy, engine);
      }
      print_report(report);
      return exit_code_for(report);
    }

    if (*verify_cmd) {
      CubeState state = verify_state.resolve();
      VerifyReport r = verify_solution(state, parse_maneuver(verify_maneuver));
      std::cout << "solves: " << (r.solves ? "yes" : "no") << "\n";
      if (r.first_solved_step) std::cout << "first solved step: " << *r.first_solved_step << "\n";
      if (r.first_h_step) std::cout << "first h-state step: " << *r.first_h_step << "\n";
      std::cout << "a10 suffix split: " << r.phase1_split
                << " (boundary in H: " << (r.split_state_in_h ? "yes" : "no") << ")\n";
      return r.solves ? kOk : kUnsolved;
    }

    if (*scramble_cmd) {
      Scramble s = scramble(scramble_seed, scramble_length);
      std::cout << format_maneuver(s.maneuver) << "\n" << format_facelets(s.state) << "\n";
      return kOk;
    }

    if (*oracle_cmd) {
      auto r = optimal_depth_oracle(oracle_state.resolve(), oracle_depth);
      if (!r) {
        std::cout << "no solution within depth " << oracle_depth << "\n";
        return kUnsolved;
      }
      std::cout << "depth " << r->depth << "\n" << format_maneuver(r->witness) << "\n";
      return kOk;
    }

    if (*bench_cmd) {
      std::ifstream corpus(bench_corpus);
      if (!corpus) throw std::runtime_error("cannot open corpus " + bench_corpus);
      BenchOptions options;
      options.engine = bench_engine.resolve();
      options.deterministic_timing = bench_engine.deterministic;
      if (bench_length >= 0) {
        options.strategy.kind = Strategy::Kind::optimal_shallow;
        options.strategy.max_length = bench_length;
      } else {
        options.strategy.kind = Strategy::Kind::two_phase;
        options.strategy.total_budget = bench_budget;
        options.strategy.phase1_sweep = parse_sweep(bench_sweep);
        options.strategy.attempt_timeout_seconds = bench_engine.timeout;
        options.strategy.knobs = bench_knobs.resolve();
        options.strategy.two_phase_mode = bench_knobs.mode_opt->count() > 0
                                              ? options.strategy.knobs.mode
                                              : EncodeMode::at_most;
      }
      write_text(bench_csv, bench(corpus, options));
      return kOk;
    }

    if (*sat_cmd) return run_sat_mode(sat_path, sat_timeout);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ExternalSolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ExternalSolverError::Kind::spawn ? kUsage : kInternal;
  } catch (const DecodeError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rubiksat/planner.hpp"

using namespace rubiksat;

namespace {

namespace fs = std::filesystem;

EngineConfig builtin_engine(double timeout = 60.0) {
  EngineConfig engine;
  engine.decompose.backend.timeout_seconds = timeout;
  engine.decompose.deterministic = true;
  return engine;
}

Strategy small_two_phase(int budget, std::vector<int> sweep) {
  Strategy s;
  s.kind = Strategy::Kind::two_phase;
  s.total_budget = budget;
  s.phase1_sweep = std::move(sweep);
  s.attempt_timeout_seconds = 60.0;
  return s;
}

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out_path = fs::temp_directory_path() / ("rubiksat-cli-" + std::to_string(::getpid()) +
                                                   "-" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(RUBIKSAT_CLI_PATH) + " " + args + " > " + out_path.string() + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::error_code ec;
  fs::remove(out_path, ec);
  return {WEXITSTATUS(status), buf.str()};
}

}  // namespace

TEST_CASE("optimal shallow solves match the oracle on small scrambles") {
  SolveReport solved = solve_optimal_shallow(CubeState::solved(), 2, builtin_engine());
  CHECK(solved.final_outcome == Outcome::sat);
  REQUIRE(solved.maneuver.has_value());
  CHECK(solved.maneuver->empty());

  SolveReport one = solve_optimal_shallow(
      apply_move(CubeState::solved(), {Face::up, Variant::half}), 2, builtin_engine());
  CHECK(one.final_outcome == Outcome::sat);
  REQUIRE(one.maneuver.has_value());
  CHECK(one.maneuver->size() == 1);

  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    const Scramble sc = scramble(seed, 3);
    auto oracle = optimal_depth_oracle(sc.state, 4);
    REQUIRE(oracle.has_value());
    SolveReport r = solve_optimal_shallow(sc.state, 4, builtin_engine());
    REQUIRE(r.final_outcome == Outcome::sat);
    CHECK(static_cast<int>(r.maneuver->size()) == oracle->depth);
    CHECK(is_solved(apply_maneuver(sc.state, *r.maneuver)));
    CHECK(r.verified);
  }

  CHECK_THROWS_AS(solve_optimal_shallow(CubeState::solved(), 14, builtin_engine()),
                  std::invalid_argument);
}

TEST_CASE("two-phase on a solved input returns immediately") {
  SolveReport r = solve_two_phase(CubeState::solved(), small_two_phase(8, {2}), builtin_engine());
  CHECK(r.final_outcome == Outcome::sat);
  REQUIRE(r.maneuver.has_value());
  CHECK(r.maneuver->empty());
  CHECK(r.attempts.empty());
  CHECK(r.phase1_len == 0);
  CHECK(r.phase2_len == 0);
}

TEST_CASE("two-phase with k=0 keeps every move inside A10") {
  // an H-state input: a few A10 moves from solved
  const CubeState h_state = apply_maneuver(CubeState::solved(), parse_maneuver("U2 D' L2"));
  REQUIRE(is_h_state(h_state));

  SolveReport r = solve_two_phase(h_state, small_two_phase(6, {0}), builtin_engine());
  REQUIRE(r.final_outcome == Outcome::sat);
  for (Move m : *r.maneuver) CHECK(in_a10(m));
  CHECK(r.phase1_len == 0);
  CHECK(is_solved(apply_maneuver(h_state, *r.maneuver)));
}

TEST_CASE("two-phase structural guarantees on shallow scrambles") {
  int solved_count = 0;
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    const Scramble sc = scramble(seed, 4);
    SolveReport r = solve_two_phase(sc.state, small_two_phase(8, {2, 3, 4}), builtin_engine());
    if (r.final_outcome != Outcome::sat) continue;
    ++solved_count;
    REQUIRE(r.maneuver.has_value());
    CHECK(r.verified);
    VerifyReport v = verify_solution(sc.state, *r.maneuver);
    CHECK(v.solves);
    CHECK(v.phase1_split == r.phase1_len);
    CHECK(v.split_state_in_h);
    for (std::size_t i = static_cast<std::size_t>(r.phase1_len); i < r.maneuver->size(); ++i)
      CHECK(in_a10((*r.maneuver)[i]));
    CHECK(static_cast<int>(r.maneuver->size()) <= 8);
  }
  CHECK(solved_count >= 1);
}

TEST_CASE("verify_solution") {
  const Maneuver superflip_fix =
      parse_maneuver("B F' L' U2 F2 L D' U' F' R' L F2 U2 R2 B2 U R2 D' B2 U' R2");
  VerifyReport sf = verify_solution(superflip_state(), superflip_fix);
  CHECK(sf.solves);

  VerifyReport wrong = verify_solution(CubeState::solved(), parse_maneuver("U"));
  CHECK_FALSE(wrong.solves);
  REQUIRE(wrong.first_solved_step.has_value());
  CHECK(*wrong.first_solved_step == 0);

  const Scramble sc = scramble(77, 9);
  VerifyReport inv = verify_solution(sc.state, inverse(sc.maneuver));
  CHECK(inv.solves);
}

TEST_CASE("bench produces one row per corpus entry and stays reproducible") {
  const Scramble sc = scramble(5, 2);
  std::string corpus_text = format_facelets(CubeState::solved()) + "\n" +
                            format_maneuver(sc.maneuver) + "\n" + "not a cube\n";

  BenchOptions options;
  options.strategy = small_two_phase(6, {1, 2});
  options.engine = builtin_engine();
  options.deterministic_timing = true;

  std::istringstream corpus(corpus_text);
  const std::string csv = bench(corpus, options);

  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "id,phase1_len,phase2_len,total_len,result,seconds");
  CHECK(rows[1] == "1,0,0,0,solved,0.000");
  CHECK(rows[2].rfind("2,", 0) == 0);
  CHECK(rows[3] == "3,0,0,0,error,0.000");

  std::istringstream corpus2(corpus_text);
  CHECK(bench(corpus2, options) == csv);
}

TEST_CASE("strategy validation") {
  Strategy bad = small_two_phase(6, {7});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  Strategy empty_sweep = small_two_phase(6, {});
  CHECK_THROWS_AS(empty_sweep.validate(), std::invalid_argument);
  Strategy shallow;
  shallow.kind = Strategy::Kind::optimal_shallow;
  shallow.max_length = 14;
  CHECK_THROWS_AS(shallow.validate(), std::invalid_argument);
}

TEST_CASE("cli: solve a single quarter turn") {
  CliResult r = run_cli("solve --scramble U --length 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "U'\n");
}

TEST_CASE("cli: verify failure exits nonzero") {
  CliResult wrong = run_cli("verify --scramble U --maneuver U");
  CHECK(wrong.exit_code == 2);
  CliResult right = run_cli("verify --scramble U --maneuver \"U'\"");
  CHECK(right.exit_code == 0);
}

TEST_CASE("cli: scramble is reproducible") {
  CliResult a = run_cli("scramble --seed 3 --length 5");
  CliResult b = run_cli("scramble --seed 3 --length 5");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cli: oracle reports depth") {
  CliResult r = run_cli("oracle --scramble \"U2 F\" --max-depth 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("depth 2", 0) == 0);
}

TEST_CASE("cli: encode emits DIMACS") {
  CliResult r = run_cli("encode --scramble U --states 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("p cnf ") != std::string::npos);
}

TEST_CASE("cli: encode at the published horizon") {
  const std::string solved = format_facelets(CubeState::solved());
  CliResult r = run_cli("encode --facelets " + solved +
                        " --states 21 --phase1 12 --mode atmost --emit-dimacs /dev/null");
  CHECK(r.exit_code == 0);
}

TEST_CASE("cli: solve honors a single --phase1 value") {
  CliResult r = run_cli("solve --scramble \"U2 D\" --budget 4 --phase1 0");
  CHECK(r.exit_code == 0);
  // a pure phase-2 instance: every printed move stays in A10
  for (Move m : parse_maneuver(r.out)) CHECK(in_a10(m));
}

TEST_CASE("cli: usage errors exit with code 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("solve").exit_code == 1);           // missing state
  CHECK(run_cli("solve --facelets xyz").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
}

TEST_CASE("cli: unsolvable within budget exits with code 2") {
  // depth-2 state, forced exact length 1
  const Scramble sc = scramble(1, 2);
  auto oracle = optimal_depth_oracle(sc.state, 3);
  REQUIRE(oracle.has_value());
  REQUIRE(oracle->depth == 2);
  CliResult r = run_cli("solve --scramble \"" + format_maneuver(sc.maneuver) + "\" --length 1");
  CHECK(r.exit_code == 2);
}

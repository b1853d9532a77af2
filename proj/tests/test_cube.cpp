#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "rubiksat/cube.hpp"
#include "rubiksat/geometry.hpp"
#include "rubiksat/move_tables.hpp"

using namespace rubiksat;

namespace {

CubeState random_state(std::uint64_t seed) { return scramble(seed, 25).state; }

const Maneuver kSuperflipManeuver =
    parse_maneuver("B F' L' U2 F2 L D' U' F' R' L F2 U2 R2 B2 U R2 D' B2 U' R2");

}  // namespace

TEST_CASE("frozen move tables match the geometric derivation") {
  auto derived = geometry::derive_move_tables();
  for (int i = 0; i < kNumMoves; ++i) CHECK(move_tables()[i] == derived[i]);
}

TEST_CASE("U mapping matches the published facelet rows") {
  const CubeState s = random_state(7);
  const CubeState t = apply_move(s, {Face::up, Variant::cw});

  // up-face rotation rows
  const std::pair<int, int> up_rows[] = {{0, 6}, {1, 3}, {2, 0}, {3, 7},
                                         {5, 1}, {6, 8}, {7, 5}, {8, 2}};
  for (auto [dst, src] : up_rows) CHECK(t.at(Face::up, dst) == s.at(Face::up, src));
  CHECK(t.at(Face::up, 4) == s.at(Face::up, 4));

  // side top rows cycle front -> left -> back -> right -> front
  const Face cycle[] = {Face::front, Face::left, Face::back, Face::right, Face::front};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) CHECK(t.at(cycle[i + 1], j) == s.at(cycle[i], j));

  // everything else is frame
  for (int i = 0; i < 4; ++i)
    for (int j = 3; j < 9; ++j) CHECK(t.at(cycle[i], j) == s.at(cycle[i], j));
  for (int j = 0; j < 9; ++j) CHECK(t.at(Face::down, j) == s.at(Face::down, j));
}

TEST_CASE("every move displaces exactly 20 facelets") {
  for (int i = 0; i < kNumMoves; ++i) {
    int moved = 0;
    for (int j = 0; j < kNumFacelets; ++j)
      if (move_tables()[i][j] != j) ++moved;
    CHECK(moved == 20);
  }
}

TEST_CASE("the fixed set of an up turn is the down face plus the side rows 3..8") {
  const MoveTable& t = move_table({Face::up, Variant::cw});
  for (int idx = 0; idx < kNumFacelets; ++idx) {
    const Face f = face_from_index(idx / 9);
    const int pos = idx % 9;
    const bool expect_fixed =
        f == Face::down || (f != Face::up && pos >= 3) || (f == Face::up && pos == kCenterPos);
    CHECK((t[idx] == idx) == expect_fixed);
  }
}

TEST_CASE("group laws over random states") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const CubeState s = random_state(seed);
    for (int f = 0; f < kNumFaces; ++f) {
      const Face face = face_from_index(f);
      const Move cw{face, Variant::cw};
      const Move half{face, Variant::half};

      CubeState four = s;
      for (int i = 0; i < 4; ++i) four = apply_move(four, cw);
      CHECK(four == s);

      CHECK(apply_move(apply_move(s, half), half) == s);
      CHECK(apply_move(apply_move(s, cw), inverse(cw)) == s);
      CHECK(apply_move(apply_move(s, cw), cw) == apply_move(s, half));
    }
  }
}

TEST_CASE("moves conserve colors and fix centers") {
  const CubeState s = random_state(11);
  for (int i = 0; i < kNumMoves; ++i) {
    const CubeState t = apply_move(s, move_from_index(i));
    std::multiset<Color> before(s.facelets.begin(), s.facelets.end());
    std::multiset<Color> after(t.facelets.begin(), t.facelets.end());
    CHECK(before == after);
    for (int f = 0; f < kNumFaces; ++f)
      CHECK(t.at(face_from_index(f), kCenterPos) == f);
  }
}

TEST_CASE("apply_maneuver basics") {
  const CubeState solved = CubeState::solved();
  CHECK(apply_maneuver(solved, {}) == solved);
  CHECK(apply_maneuver(solved, parse_maneuver("U U'")) == solved);
  CHECK(apply_maneuver(solved, parse_maneuver("U2 U2")) == solved);
  CHECK(is_solved(apply_maneuver(solved, parse_maneuver("U U'"))));
}

TEST_CASE("published 21-move maneuver solves the superflip") {
  REQUIRE(kSuperflipManeuver.size() == 21);
  CHECK(is_solved(apply_maneuver(superflip_state(), kSuperflipManeuver)));
}

TEST_CASE("maneuver inverse") {
  CHECK(format_maneuver(inverse(parse_maneuver("U"))) == "U'");
  CHECK(format_maneuver(inverse(parse_maneuver("F2"))) == "F2");
  CHECK(format_maneuver(inverse(parse_maneuver("R U2 D'"))) == "D U2 R'");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Maneuver mv = scramble(seed, 12).maneuver;
    const CubeState s = random_state(seed + 100);
    CHECK(apply_maneuver(apply_maneuver(s, mv), inverse(mv)) == s);
  }
}

TEST_CASE("is_solved") {
  CHECK(is_solved(CubeState::solved()));
  CHECK_FALSE(is_solved(apply_move(CubeState::solved(), {Face::up, Variant::cw})));
}

TEST_CASE("is_h_state on the named examples") {
  const CubeState solved = CubeState::solved();
  CHECK(is_h_state(solved));
  CHECK(is_h_state(apply_move(solved, {Face::up, Variant::cw})));

  const CubeState after_f = apply_move(solved, {Face::front, Variant::cw});
  CHECK_FALSE(is_h_state(after_f));
  // the F turn pushes an up-colored facelet into the right face's mid column
  CHECK(after_f.at(Face::right, 3) == face_index(Face::up));

  CHECK_FALSE(is_h_state(superflip_state()));
}

TEST_CASE("h-state closure and up/down confinement under A10 moves") {
  std::vector<Move> a10;
  for (int i = 0; i < kNumMoves; ++i) {
    Move m = move_from_index(i);
    if (in_a10(m)) a10.push_back(m);
  }
  REQUIRE(a10.size() == 10);

  std::mt19937_64 rng(42);
  CubeState s = CubeState::solved();
  for (int step = 0; step < 400; ++step) {
    s = apply_move(s, a10[rng() % a10.size()]);
    REQUIRE(is_h_state(s));
    for (Face f : {Face::up, Face::down})
      for (int j = 0; j < kFaceletsPerFace; ++j) {
        const Color c = s.at(f, j);
        REQUIRE((c == face_index(Face::up) || c == face_index(Face::down)));
      }
  }
}

TEST_CASE("maneuver parsing") {
  Maneuver one = parse_maneuver("U");
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Move{Face::up, Variant::cw});

  Maneuver contiguous = parse_maneuver("F2U2B'");
  REQUIRE(contiguous.size() == 3);
  CHECK(contiguous[0] == Move{Face::front, Variant::half});
  CHECK(contiguous[1] == Move{Face::up, Variant::half});
  CHECK(contiguous[2] == Move{Face::back, Variant::ccw});

  // U+2032 prime accepted on input, apostrophe on output
  CHECK(format_maneuver(parse_maneuver("U′ F")) == "U' F");

  CHECK_THROWS_AS(parse_maneuver("X2"), ParseError);
  try {
    parse_maneuver("U D X2");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::bad_token);
    CHECK(e.position() == 2);
  }
}

TEST_CASE("maneuver round trip") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Maneuver mv = scramble(seed, 15).maneuver;
    const std::string text = format_maneuver(mv);
    CHECK(format_maneuver(parse_maneuver(text)) == text);
  }
}

TEST_CASE("facelet string round trip and the U image") {
  const CubeState solved = CubeState::solved();
  const std::string solved_text =
      "FFFFFFFFFLLLLLLLLLBBBBBBBBBRRRRRRRRRUUUUUUUUUDDDDDDDDD";
  CHECK(format_facelets(solved) == solved_text);
  CHECK(parse_facelets(solved_text) == solved);

  const CubeState after_u = apply_move(solved, {Face::up, Variant::cw});
  const std::string after_u_text = format_facelets(after_u);
  int differing = 0;
  for (int i = 0; i < kNumFacelets; ++i)
    if (after_u_text[i] != solved_text[i]) ++differing;
  // on the solved cube only the 12 side-row facelets change color
  CHECK(differing == 12);
  CHECK(after_u_text.substr(0, 3) == "RRR");   // front top row came from the right
  CHECK(after_u_text.substr(9, 3) == "FFF");   // left top row came from the front

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const CubeState s = random_state(seed);
    CHECK(parse_facelets(format_facelets(s)) == s);
  }
}

TEST_CASE("facelet parse errors are distinct") {
  const std::string solved_text = format_facelets(CubeState::solved());

  try {
    parse_facelets(solved_text.substr(0, 53));
    FAIL("expected length error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::bad_length);
  }

  std::string bad_char = solved_text;
  bad_char[7] = 'X';
  try {
    parse_facelets(bad_char);
    FAIL("expected character error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::bad_character);
    CHECK(e.position() == 7);
  }

  std::string bad_count = solved_text;
  bad_count[0] = 'L';  // F appears 8 times, L ten times
  try {
    parse_facelets(bad_count);
    FAIL("expected color-count error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::bad_color_count);
  }

  std::string bad_center = solved_text;
  std::swap(bad_center[0 * 9 + 4], bad_center[1 * 9 + 4]);  // swap F and L centers
  try {
    parse_facelets(bad_center);
    FAIL("expected center error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::bad_center);
  }
}

TEST_CASE("validate_cubies") {
  CHECK(validate_cubies(CubeState::solved()));
  for (std::uint64_t seed = 1; seed <= 25; ++seed) CHECK(validate_cubies(random_state(seed)));

  // swapping two differently-colored stickers across cubies breaks the
  // cubie structure
  CubeState broken = apply_move(CubeState::solved(), {Face::up, Variant::cw});
  REQUIRE(broken.at(Face::front, 0) != broken.at(Face::front, 3));
  std::swap(broken.facelets[0 * 9 + 0], broken.facelets[0 * 9 + 3]);
  CHECK_FALSE(validate_cubies(broken));

  // and so does swapping a corner sticker with an up sticker on solved
  CubeState swapped = CubeState::solved();
  std::swap(swapped.facelets[face_index(Face::up) * 9 + 0], swapped.facelets[0 * 9 + 0]);
  CHECK_FALSE(validate_cubies(swapped));
}

TEST_CASE("scramble is deterministic and canonical") {
  const Scramble empty = scramble(5, 0);
  CHECK(empty.maneuver.empty());
  CHECK(empty.state == CubeState::solved());

  const Scramble a = scramble(123, 10);
  const Scramble b = scramble(123, 10);
  CHECK(a.maneuver == b.maneuver);
  CHECK(a.state == b.state);
  CHECK(a.state == apply_maneuver(CubeState::solved(), a.maneuver));

  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Maneuver mv = scramble(seed, 10).maneuver;
    REQUIRE(mv.size() == 10);
    for (std::size_t i = 1; i < mv.size(); ++i) {
      const Face prev = mv[i - 1].face, cur = mv[i].face;
      CHECK(prev != cur);
      CHECK_FALSE((prev == Face::down && cur == Face::up));
      CHECK_FALSE((prev == Face::right && cur == Face::left));
      CHECK_FALSE((prev == Face::back && cur == Face::front));
    }
  }
}

TEST_CASE("superflip construction") {
  const CubeState sf = superflip_state();
  const CubeState home = CubeState::solved();
  CHECK_FALSE(is_solved(sf));
  CHECK(validate_cubies(sf));
  for (const auto& slot : geometry::corner_slots())
    for (int idx : slot) CHECK(sf.facelets[idx] == home.facelets[idx]);
  for (const auto& [a, b] : geometry::edge_slots()) {
    CHECK(sf.facelets[a] == home.facelets[b]);
    CHECK(sf.facelets[b] == home.facelets[a]);
  }
}

TEST_CASE("optimal depth oracle") {
  const CubeState solved = CubeState::solved();
  auto r0 = optimal_depth_oracle(solved, 3);
  REQUIRE(r0.has_value());
  CHECK(r0->depth == 0);
  CHECK(r0->witness.empty());

  auto r1 = optimal_depth_oracle(apply_move(solved, {Face::up, Variant::half}), 3);
  REQUIRE(r1.has_value());
  CHECK(r1->depth == 1);
  CHECK(format_maneuver(r1->witness) == "U2");

  const CubeState sexy = apply_maneuver(solved, parse_maneuver("R U R' U'"));
  auto rs = optimal_depth_oracle(sexy, 4);
  REQUIRE(rs.has_value());
  CHECK(rs->depth == 4);
  CHECK(is_solved(apply_maneuver(sexy, rs->witness)));
  CHECK_FALSE(optimal_depth_oracle(sexy, rs->depth - 1).has_value());

  CHECK_THROWS_AS(optimal_depth_oracle(solved, 8), std::invalid_argument);
}

TEST_CASE("oracle consistency with canonical scrambles") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const int len = 1 + static_cast<int>(seed % 4);
    const Scramble sc = scramble(seed, len);
    auto r = optimal_depth_oracle(sc.state, 5);
    REQUIRE(r.has_value());
    CHECK(r->depth <= len);
    CHECK(static_cast<int>(r->witness.size()) == r->depth);
    CHECK(is_solved(apply_maneuver(sc.state, r->witness)));
  }
}

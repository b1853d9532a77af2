#include "rubiksat/cube.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "rubiksat/geometry.hpp"
#include "rubiksat/move_tables.hpp"

namespace rubiksat {

namespace {
constexpr char kFaceLetters[kNumFaces + 1] = "FLBRUD";
}

Face face_from_index(int i) {
  if (i < 0 || i >= kNumFaces) throw std::out_of_range("face index out of range");
  return static_cast<Face>(i);
}

Face opposite(Face f) {
  switch (f) {
    case Face::front: return Face::back;
    case Face::back: return Face::front;
    case Face::left: return Face::right;
    case Face::right: return Face::left;
    case Face::up: return Face::down;
    case Face::down: return Face::up;
  }
  throw std::logic_error("bad face");
}

char face_letter(Face f) { return kFaceLetters[face_index(f)]; }

Move move_from_index(int i) {
  if (i < 0 || i >= kNumMoves) throw std::out_of_range("move index out of range");
  return {face_from_index(i / 3), static_cast<Variant>(i % 3)};
}

Move inverse(Move m) {
  switch (m.variant) {
    case Variant::cw: return {m.face, Variant::ccw};
    case Variant::ccw: return {m.face, Variant::cw};
    case Variant::half: return m;
  }
  throw std::logic_error("bad variant");
}

bool in_a10(Move m) {
  if (m.face == Face::up || m.face == Face::down) return true;
  return m.variant == Variant::half;
}

CubeState CubeState::solved() {
  CubeState s;
  for (int f = 0; f < kNumFaces; ++f)
    for (int j = 0; j < kFaceletsPerFace; ++j) s.facelets[f * 9 + j] = static_cast<Color>(f);
  return s;
}

CubeState apply_move(const CubeState& s, Move m) {
  const MoveTable& src = move_table(m);
  CubeState out;
  for (int i = 0; i < kNumFacelets; ++i) out.facelets[i] = s.facelets[src[i]];
  return out;
}

CubeState apply_maneuver(const CubeState& s, const Maneuver& mv) {
  CubeState out = s;
  for (Move m : mv) out = apply_move(out, m);
  return out;
}

Maneuver inverse(const Maneuver& mv) {
  Maneuver out;
  out.reserve(mv.size());
  for (auto it = mv.rbegin(); it != mv.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

bool is_solved(const CubeState& s) {
  for (int f = 0; f < kNumFaces; ++f)
    for (int j = 0; j < kFaceletsPerFace; ++j)
      if (s.facelets[f * 9 + j] != f) return false;
  return true;
}

bool is_h_state(const CubeState& s) {
  for (Face f : {Face::up, Face::down}) {
    for (int j = 0; j < kFaceletsPerFace; ++j) {
      Color c = s.at(f, j);
      if (c != face_index(Face::up) && c != face_index(Face::down)) return false;
    }
  }
  for (Face f : {Face::front, Face::left, Face::back, Face::right}) {
    for (int j : {3, 5}) {
      Color c = s.at(f, j);
      if (c != face_index(f) && c != face_index(opposite(f))) return false;
    }
  }
  return true;
}

bool validate_cubies(const CubeState& s) {
  for (int f = 0; f < kNumFaces; ++f)
    if (s.facelets[f * 9 + kCenterPos] != f) return false;

  const CubeState home = CubeState::solved();
  auto color_set = [](const CubeState& st, auto slot) {
    std::set<Color> cs;
    for (int idx : slot) cs.insert(st.facelets[idx]);
    return cs;
  };

  std::multiset<std::set<Color>> have, want;
  for (const auto& slot : geometry::corner_slots()) {
    have.insert(color_set(s, slot));
    want.insert(color_set(home, slot));
  }
  if (have != want) return false;

  have.clear();
  want.clear();
  for (const auto& slot : geometry::edge_slots()) {
    have.insert(color_set(s, slot));
    want.insert(color_set(home, slot));
  }
  return have == want;
}

Maneuver parse_maneuver(std::string_view text) {
  Maneuver out;
  std::size_t i = 0;
  int token = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    Face face;
    switch (c) {
      case 'U': face = Face::up; break;
      case 'D': face = Face::down; break;
      case 'L': face = Face::left; break;
      case 'R': face = Face::right; break;
      case 'F': face = Face::front; break;
      case 'B': face = Face::back; break;
      default:
        throw ParseError(ParseError::Kind::bad_token, token,
                         "unknown move token at token " + std::to_string(token));
    }
    ++i;
    Variant v = Variant::cw;
    if (i < text.size()) {
      if (text[i] == '\'') {
        v = Variant::ccw;
        ++i;
      } else if (text.size() - i >= 3 && text.substr(i, 3) == "\xE2\x80\xB2") {
        v = Variant::ccw;  // U+2032 prime
        i += 3;
      } else if (text[i] == '2') {
        v = Variant::half;
        ++i;
      }
    }
    out.push_back({face, v});
    ++token;
  }
  return out;
}

std::string format_move(Move m) {
  std::string s(1, face_letter(m.face));
  if (m.variant == Variant::ccw) s += '\'';
  if (m.variant == Variant::half) s += '2';
  return s;
}

std::string format_maneuver(const Maneuver& mv) {
  std::string out;
  for (std::size_t i = 0; i < mv.size(); ++i) {
    if (i) out += ' ';
    out += format_move(mv[i]);
  }
  return out;
}

CubeState parse_facelets(std::string_view text) {
  if (text.size() != kNumFacelets)
    throw ParseError(ParseError::Kind::bad_length, static_cast<int>(text.size()),
                     "facelet string must have 54 characters, got " +
                         std::to_string(text.size()));
  CubeState s;
  std::array<int, kNumFaces> counts{};
  for (int i = 0; i < kNumFacelets; ++i) {
    const char* p = std::char_traits<char>::find(kFaceLetters, kNumFaces, text[i]);
    if (p == nullptr)
      throw ParseError(ParseError::Kind::bad_character, i,
                       std::string("illegal facelet character '") + text[i] +
                           "' at index " + std::to_string(i));
    s.facelets[i] = static_cast<Color>(p - kFaceLetters);
    ++counts[s.facelets[i]];
  }
  for (int c = 0; c < kNumFaces; ++c) {
    if (counts[c] != 9)
      throw ParseError(ParseError::Kind::bad_color_count, c,
                       std::string("color '") + kFaceLetters[c] + "' appears " +
                           std::to_string(counts[c]) + " times, expected 9");
  }
  for (int f = 0; f < kNumFaces; ++f) {
    if (s.facelets[f * 9 + kCenterPos] != f)
      throw ParseError(ParseError::Kind::bad_center, f * 9 + kCenterPos,
                       std::string("center of face ") + kFaceLetters[f] +
                           " must carry its own color");
  }
  return s;
}

std::string format_facelets(const CubeState& s) {
  std::string out(kNumFacelets, '?');
  for (int i = 0; i < kNumFacelets; ++i) out[i] = kFaceLetters[s.facelets[i]];
  return out;
}

namespace {

// Opposite-face pairs are only allowed in this order when adjacent: the
// first listed face must come first. Mirrors the solution-side pruning,
// where the inverse ordering is the permitted one.
bool scramble_pair_banned(Face prev, Face next) {
  if (prev == next) return true;
  return (prev == Face::down && next == Face::up) ||
         (prev == Face::right && next == Face::left) ||
         (prev == Face::back && next == Face::front);
}

}  // namespace

Scramble scramble(std::uint64_t seed, int length) {
  if (length < 0) throw std::invalid_argument("scramble length must be >= 0");
  std::mt19937_64 rng(seed);
  Scramble out;
  out.state = CubeState::solved();
  std::optional<Face> prev;
  for (int i = 0; i < length; ++i) {
    std::vector<Face> candidates;
    for (int f = 0; f < kNumFaces; ++f) {
      Face face = face_from_index(f);
      if (prev && scramble_pair_banned(*prev, face)) continue;
      candidates.push_back(face);
    }
    Face face = candidates[rng() % candidates.size()];
    auto variant = static_cast<Variant>(rng() % 3);
    out.maneuver.push_back({face, variant});
    out.state = apply_move(out.state, {face, variant});
    prev = face;
  }
  return out;
}

CubeState superflip_state() {
  const CubeState home = CubeState::solved();
  CubeState s = home;
  for (const auto& [a, b] : geometry::edge_slots()) {
    s.facelets[a] = home.facelets[b];
    s.facelets[b] = home.facelets[a];
  }
  return s;
}

namespace {

// Solution-side canonical pruning: after a move on `prev`, the same face is
// banned and so is the second face of each ordered pair (U,D), (L,R), (F,B).
bool search_pair_banned(Face prev, Face next) {
  if (prev == next) return true;
  return (prev == Face::up && next == Face::down) ||
         (prev == Face::left && next == Face::right) ||
         (prev == Face::front && next == Face::back);
}

bool oracle_dfs(const CubeState& s, int remaining, std::optional<Face> prev, Maneuver& path) {
  if (remaining == 0) return is_solved(s);
  for (int f = 0; f < kNumFaces; ++f) {
    Face face = face_from_index(f);
    if (prev && search_pair_banned(*prev, face)) continue;
    for (int v = 0; v < 3; ++v) {
      Move m{face, static_cast<Variant>(v)};
      path.push_back(m);
      if (oracle_dfs(apply_move(s, m), remaining - 1, face, path)) return true;
      path.pop_back();
    }
  }
  return false;
}

}  // namespace

std::optional<OracleResult> optimal_depth_oracle(const CubeState& s, int max_depth) {
  if (max_depth < 0 || max_depth > kOracleMaxDepth)
    throw std::invalid_argument("oracle max_depth must be in 0..7");
  for (int depth = 0; depth <= max_depth; ++depth) {
    Maneuver path;
    if (oracle_dfs(s, depth, std::nullopt, path)) {
      if (!is_solved(apply_maneuver(s, path)))
        throw std::logic_error("oracle witness failed re-verification");
      return OracleResult{depth, std::move(path)};
    }
  }
  return std::nullopt;
}

}  // namespace rubiksat

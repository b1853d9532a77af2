#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rubiksat {

// Face order is fixed: it is also the facelet-string order and the color order.
enum class Face : std::uint8_t { front, left, back, right, up, down };

inline constexpr int kNumFaces = 6;
inline constexpr int kFaceletsPerFace = 9;
inline constexpr int kNumFacelets = 54;
inline constexpr int kNumMoves = 18;
inline constexpr int kCenterPos = 4;

constexpr int face_index(Face f) { return static_cast<int>(f); }
Face face_from_index(int i);
Face opposite(Face f);
char face_letter(Face f);

// A color is identified with the face whose center carries it when solved.
using Color = std::uint8_t;

enum class Variant : std::uint8_t { cw, ccw, half };

struct Move {
  Face face = Face::front;
  Variant variant = Variant::cw;

  friend bool operator==(const Move&, const Move&) = default;
};

constexpr int move_index(Move m) {
  return face_index(m.face) * 3 + static_cast<int>(m.variant);
}
Move move_from_index(int i);
Move inverse(Move m);
bool in_a10(Move m);

using Maneuver = std::vector<Move>;

struct CubeState {
  std::array<Color, kNumFacelets> facelets{};

  static CubeState solved();

  Color at(Face f, int pos) const { return facelets[face_index(f) * 9 + pos]; }
  Color& at(Face f, int pos) { return facelets[face_index(f) * 9 + pos]; }

  friend bool operator==(const CubeState&, const CubeState&) = default;
};

CubeState apply_move(const CubeState& s, Move m);
CubeState apply_maneuver(const CubeState& s, const Maneuver& mv);
Maneuver inverse(const Maneuver& mv);

bool is_solved(const CubeState& s);

// Facelet-level test for membership in the phase-2 subgroup: up/down faces
// show only up/down colors, and mid-layer side facelets show their axis
// colors. Assumes a cubie-valid state.
bool is_h_state(const CubeState& s);

// True iff the 54 facelets group into the corner/edge/center cubies of a
// real cube, each physical color set appearing exactly once.
bool validate_cubies(const CubeState& s);

// Maneuver and facelet-string I/O errors carry a structured kind plus the
// offending position (token index for maneuvers, character index for
// facelet strings), both 0-based.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    bad_token,        // maneuver: unknown move token
    bad_length,       // facelets: text length != 54
    bad_character,    // facelets: character outside FLBRUD
    bad_color_count,  // facelets: some color does not appear exactly 9 times
    bad_center,       // facelets: center letter does not match its face
  };

  ParseError(Kind kind, int position, const std::string& message)
      : std::runtime_error(message), kind_(kind), position_(position) {}

  Kind kind() const { return kind_; }
  int position() const { return position_; }

 private:
  Kind kind_;
  int position_;
};

// Singmaster notation. Input accepts ASCII apostrophe and U+2032 prime,
// whitespace-separated or contiguous; output uses the apostrophe.
Maneuver parse_maneuver(std::string_view text);
std::string format_maneuver(const Maneuver& mv);
std::string format_move(Move m);

// 54-character string, faces F,L,B,R,U,D, positions 0..8 row-major.
CubeState parse_facelets(std::string_view text);
std::string format_facelets(const CubeState& s);

// Deterministic canonical scramble: no same-face adjacency, opposite faces
// only in the order U before D, L before R, F before B.
struct Scramble {
  Maneuver maneuver;
  CubeState state;
};
Scramble scramble(std::uint64_t seed, int length);

CubeState superflip_state();

// Brute-force iterative-deepening search over the face-turn metric, with
// canonical-sequence pruning. Ground truth for shallow optimality tests.
struct OracleResult {
  int depth = 0;
  Maneuver witness;
};
inline constexpr int kOracleMaxDepth = 7;
std::optional<OracleResult> optimal_depth_oracle(const CubeState& s, int max_depth);

}  // namespace rubiksat

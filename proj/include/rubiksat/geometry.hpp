#pragma once

#include <array>
#include <cstdint>

#include "rubiksat/cube.hpp"

namespace rubiksat::geometry {

// 3-D sticker model of the facelet layout. This is the single source the
// frozen move tables are derived from; move_tables_test regenerates the
// tables from here and compares.
//
// Coordinates: x right, y up, z toward the viewer. Side faces are numbered
// as seen from outside with the up face up; the up face has row 0 adjacent
// to the back face; the down face has row 0 adjacent to the front face.

struct Vec3 {
  int x = 0, y = 0, z = 0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

Vec3 face_normal(Face f);

// Cubie position and sticker normal of facelet (face, pos).
struct Sticker {
  Vec3 cubie;
  Vec3 normal;
};
Sticker sticker_geometry(Face f, int pos);

// Source-index permutation of a clockwise quarter turn, derived by rotating
// the layer's stickers: out[i] = in[perm[i]].
using Permutation = std::array<std::uint8_t, kNumFacelets>;
Permutation derive_quarter_turn(Face f);

// All 18 source maps in move_index order (face-major, cw/ccw/half).
std::array<Permutation, kNumMoves> derive_move_tables();

// The 12 edge cubie slots as facelet index pairs, in a fixed order.
using EdgeSlot = std::array<int, 2>;
std::array<EdgeSlot, 12> edge_slots();

// The 8 corner cubie slots as facelet index triples.
using CornerSlot = std::array<int, 3>;
std::array<CornerSlot, 8> corner_slots();

}  // namespace rubiksat::geometry

#include "rubiksat/geometry.hpp"

#include <cassert>
#include <numeric>

namespace rubiksat::geometry {

namespace {

constexpr Vec3 kNormals[kNumFaces] = {
    {0, 0, 1}, {-1, 0, 0}, {0, 0, -1}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
// "right" and "down" of each face's 3x3 grid, in cube coordinates.
constexpr Vec3 kRights[kNumFaces] = {
    {1, 0, 0}, {0, 0, 1}, {-1, 0, 0}, {0, 0, -1}, {1, 0, 0}, {1, 0, 0}};
constexpr Vec3 kDowns[kNumFaces] = {
    {0, -1, 0}, {0, -1, 0}, {0, -1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

Vec3 add(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 scale(Vec3 a, int s) { return {a.x * s, a.y * s, a.z * s}; }
int dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Quarter turn clockwise as viewed from outside along n: -90 degrees about n.
Vec3 rotate_cw(Vec3 n, Vec3 v) { return add(scale(n, dot(n, v)), scale(cross(n, v), -1)); }

int locate(Vec3 cubie, Vec3 normal) {
  for (int f = 0; f < kNumFaces; ++f) {
    if (kNormals[f] == normal) {
      Vec3 off = add(cubie, scale(kNormals[f], -1));
      int col = dot(off, kRights[f]) + 1;
      int row = dot(off, kDowns[f]) + 1;
      assert(col >= 0 && col <= 2 && row >= 0 && row <= 2);
      return f * 9 + row * 3 + col;
    }
  }
  assert(false && "normal is not axis-aligned");
  return -1;
}

Permutation inverse(const Permutation& p) {
  Permutation out{};
  for (int i = 0; i < kNumFacelets; ++i) out[p[i]] = static_cast<std::uint8_t>(i);
  return out;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  // apply a then b: out[i] = in[a[b[i]]]
  Permutation out{};
  for (int i = 0; i < kNumFacelets; ++i) out[i] = a[b[i]];
  return out;
}

}  // namespace

Vec3 face_normal(Face f) { return kNormals[face_index(f)]; }

Sticker sticker_geometry(Face f, int pos) {
  const int fi = face_index(f);
  const int row = pos / 3, col = pos % 3;
  Vec3 cubie = add(add(kNormals[fi], scale(kRights[fi], col - 1)), scale(kDowns[fi], row - 1));
  return {cubie, kNormals[fi]};
}

Permutation derive_quarter_turn(Face f) {
  Permutation src{};
  std::iota(src.begin(), src.end(), 0);
  const Vec3 n = face_normal(f);
  for (int ff = 0; ff < kNumFaces; ++ff) {
    for (int j = 0; j < kFaceletsPerFace; ++j) {
      Sticker st = sticker_geometry(face_from_index(ff), j);
      if (dot(st.cubie, n) == 1) {
        int dst = locate(rotate_cw(n, st.cubie), rotate_cw(n, st.normal));
        src[dst] = static_cast<std::uint8_t>(ff * 9 + j);
      }
    }
  }
  return src;
}

std::array<Permutation, kNumMoves> derive_move_tables() {
  std::array<Permutation, kNumMoves> out{};
  for (int f = 0; f < kNumFaces; ++f) {
    Permutation cw = derive_quarter_turn(face_from_index(f));
    out[f * 3 + 0] = cw;
    out[f * 3 + 1] = inverse(cw);
    out[f * 3 + 2] = compose(cw, cw);
  }
  return out;
}

std::array<EdgeSlot, 12> edge_slots() {
  std::array<EdgeSlot, 12> slots{};
  int count = 0;
  // Pair up edge stickers by shared cubie position.
  for (int f = 0; f < kNumFaces; ++f) {
    for (int j : {1, 3, 5, 7}) {
      Sticker a = sticker_geometry(face_from_index(f), j);
      for (int f2 = f + 1; f2 < kNumFaces; ++f2) {
        for (int j2 : {1, 3, 5, 7}) {
          Sticker b = sticker_geometry(face_from_index(f2), j2);
          if (a.cubie == b.cubie) {
            assert(count < 12);
            slots[count++] = {f * 9 + j, f2 * 9 + j2};
          }
        }
      }
    }
  }
  assert(count == 12);
  return slots;
}

std::array<CornerSlot, 8> corner_slots() {
  std::array<CornerSlot, 8> slots{};
  int count = 0;
  for (int x : {-1, 1}) {
    for (int y : {-1, 1}) {
      for (int z : {-1, 1}) {
        const Vec3 cubie{x, y, z};
        CornerSlot slot{};
        int k = 0;
        for (int f = 0; f < kNumFaces; ++f) {
          for (int j : {0, 2, 6, 8}) {
            if (sticker_geometry(face_from_index(f), j).cubie == cubie) {
              assert(k < 3);
              slot[k++] = f * 9 + j;
            }
          }
        }
        assert(k == 3);
        slots[count++] = slot;
      }
    }
  }
  return slots;
}

}  // namespace rubiksat::geometry

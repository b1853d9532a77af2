#include "rubiksat/move_tables.hpp"

namespace rubiksat {

namespace {

// move_index order: F F' F2 L L' L2 B B' B2 R R' R2 U U' U2 D D' D2.
constexpr std::array<MoveTable, kNumMoves> kTables = {{
    { 6,  3,  0,  7,  4,  1,  8,  5,  2,  9, 10, 45, 12, 13, 46, 15, 16, 47,
     18, 19, 20, 21, 22, 23, 24, 25, 26, 42, 28, 29, 43, 31, 32, 44, 34, 35,
     36, 37, 38, 39, 40, 41, 17, 14, 11, 33, 30, 27, 48, 49, 50, 51, 52, 53},
    { 2,  5,  8,  1,  4,  7,  0,  3,  6,  9, 10, 44, 12, 13, 43, 15, 16, 42,
     18, 19, 20, 21, 22, 23, 24, 25, 26, 47, 28, 29, 46, 31, 32, 45, 34, 35,
     36, 37, 38, 39, 40, 41, 27, 30, 33, 11, 14, 17, 48, 49, 50, 51, 52, 53},
    { 8,  7,  6,  5,  4,  3,  2,  1,  0,  9, 10, 33, 12, 13, 30, 15, 16, 27,
     18, 19, 20, 21, 22, 23, 24, 25, 26, 17, 28, 29, 14, 31, 32, 11, 34, 35,
     36, 37, 38, 39, 40, 41, 47, 46, 45, 44, 43, 42, 48, 49, 50, 51, 52, 53},
    {36,  1,  2, 39,  4,  5, 42,  7,  8, 15, 12,  9, 16, 13, 10, 17, 14, 11,
     18, 19, 51, 21, 22, 48, 24, 25, 45, 27, 28, 29, 30, 31, 32, 33, 34, 35,
     26, 37, 38, 23, 40, 41, 20, 43, 44,  0, 46, 47,  3, 49, 50,  6, 52, 53},
    {45,  1,  2, 48,  4,  5, 51,  7,  8, 11, 14, 17, 10, 13, 16,  9, 12, 15,
     18, 19, 42, 21, 22, 39, 24, 25, 36, 27, 28, 29, 30, 31, 32, 33, 34, 35,
      0, 37, 38,  3, 40, 41,  6, 43, 44, 26, 46, 47, 23, 49, 50, 20, 52, 53},
    {26,  1,  2, 23,  4,  5, 20,  7,  8, 17, 16, 15, 14, 13, 12, 11, 10,  9,
     18, 19,  6, 21, 22,  3, 24, 25,  0, 27, 28, 29, 30, 31, 32, 33, 34, 35,
     45, 37, 38, 48, 40, 41, 51, 43, 44, 36, 46, 47, 39, 49, 50, 42, 52, 53},
    { 0,  1,  2,  3,  4,  5,  6,  7,  8, 38, 10, 11, 37, 13, 14, 36, 16, 17,
     24, 21, 18, 25, 22, 19, 26, 23, 20, 27, 28, 53, 30, 31, 52, 33, 34, 51,
     29, 32, 35, 39, 40, 41, 42, 43, 44, 45, 46, 47, 48, 49, 50,  9, 12, 15},
    { 0,  1,  2,  3,  4,  5,  6,  7,  8, 51, 10, 11, 52, 13, 14, 53, 16, 17,
     20, 23, 26, 19, 22, 25, 18, 21, 24, 27, 28, 36, 30, 31, 37, 33, 34, 38,
     15, 12,  9, 39, 40, 41, 42, 43, 44, 45, 46, 47, 48, 49, 50, 35, 32, 29},
    { 0,  1,  2,  3,  4,  5,  6,  7,  8, 35, 10, 11, 32, 13, 14, 29, 16, 17,
     26, 25, 24, 23, 22, 21, 20, 19, 18, 27, 28, 15, 30, 31, 12, 33, 34,  9,
     53, 52, 51, 39, 40, 41, 42, 43, 44, 45, 46, 47, 48, 49, 50, 38, 37, 36},
    { 0,  1, 47,  3,  4, 50,  6,  7, 53,  9, 10, 11, 12, 13, 14, 15, 16, 17,
     44, 19, 20, 41, 22, 23, 38, 25, 26, 33, 30, 27, 34, 31, 28, 35, 32, 29,
     36, 37,  2, 39, 40,  5, 42, 43,  8, 45, 46, 24, 48, 49, 21, 51, 52, 18},
    { 0,  1, 38,  3,  4, 41,  6,  7, 44,  9, 10, 11, 12, 13, 14, 15, 16, 17,
     53, 19, 20, 50, 22, 23, 47, 25, 26, 29, 32, 35, 28, 31, 34, 27, 30, 33,
     36, 37, 24, 39, 40, 21, 42, 43, 18, 45, 46,  2, 48, 49,  5, 51, 52,  8},
    { 0,  1, 24,  3,  4, 21,  6,  7, 18,  9, 10, 11, 12, 13, 14, 15, 16, 17,
      8, 19, 20,  5, 22, 23,  2, 25, 26, 35, 34, 33, 32, 31, 30, 29, 28, 27,
     36, 37, 47, 39, 40, 50, 42, 43, 53, 45, 46, 38, 48, 49, 41, 51, 52, 44},
    {27, 28, 29,  3,  4,  5,  6,  7,  8,  0,  1,  2, 12, 13, 14, 15, 16, 17,
      9, 10, 11, 21, 22, 23, 24, 25, 26, 18, 19, 20, 30, 31, 32, 33, 34, 35,
     42, 39, 36, 43, 40, 37, 44, 41, 38, 45, 46, 47, 48, 49, 50, 51, 52, 53},
    { 9, 10, 11,  3,  4,  5,  6,  7,  8, 18, 19, 20, 12, 13, 14, 15, 16, 17,
     27, 28, 29, 21, 22, 23, 24, 25, 26,  0,  1,  2, 30, 31, 32, 33, 34, 35,
     38, 41, 44, 37, 40, 43, 36, 39, 42, 45, 46, 47, 48, 49, 50, 51, 52, 53},
    {18, 19, 20,  3,  4,  5,  6,  7,  8, 27, 28, 29, 12, 13, 14, 15, 16, 17,
      0,  1,  2, 21, 22, 23, 24, 25, 26,  9, 10, 11, 30, 31, 32, 33, 34, 35,
     44, 43, 42, 41, 40, 39, 38, 37, 36, 45, 46, 47, 48, 49, 50, 51, 52, 53},
    { 0,  1,  2,  3,  4,  5, 15, 16, 17,  9, 10, 11, 12, 13, 14, 24, 25, 26,
     18, 19, 20, 21, 22, 23, 33, 34, 35, 27, 28, 29, 30, 31, 32,  6,  7,  8,
     36, 37, 38, 39, 40, 41, 42, 43, 44, 51, 48, 45, 52, 49, 46, 53, 50, 47},
    { 0,  1,  2,  3,  4,  5, 33, 34, 35,  9, 10, 11, 12, 13, 14,  6,  7,  8,
     18, 19, 20, 21, 22, 23, 15, 16, 17, 27, 28, 29, 30, 31, 32, 24, 25, 26,
     36, 37, 38, 39, 40, 41, 42, 43, 44, 47, 50, 53, 46, 49, 52, 45, 48, 51},
    { 0,  1,  2,  3,  4,  5, 24, 25, 26,  9, 10, 11, 12, 13, 14, 33, 34, 35,
     18, 19, 20, 21, 22, 23,  6,  7,  8, 27, 28, 29, 30, 31, 32, 15, 16, 17,
     36, 37, 38, 39, 40, 41, 42, 43, 44, 53, 52, 51, 50, 49, 48, 47, 46, 45},
}};

}  // namespace

const std::array<MoveTable, kNumMoves>& move_tables() { return kTables; }

const MoveTable& move_table(Move m) { return kTables[move_index(m)]; }

}  // namespace rubiksat

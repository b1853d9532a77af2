#pragma once

#include <array>
#include <cstdint>

#include "rubiksat/cube.hpp"

namespace rubiksat {

// Frozen source-index permutations for the 18 moves, indexed by
// move_index(): new_state[i] = old_state[table[i]]. Derived once from
// geometry::derive_move_tables(); a test keeps the two in sync.
using MoveTable = std::array<std::uint8_t, kNumFacelets>;
const std::array<MoveTable, kNumMoves>& move_tables();

const MoveTable& move_table(Move m);

}  // namespace rubiksat

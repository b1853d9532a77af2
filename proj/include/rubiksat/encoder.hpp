#pragma once

#include <optional>
#include <string>

#include "rubiksat/cnf.hpp"
#include "rubiksat/cube.hpp"

namespace rubiksat {

enum class EncodeMode : std::uint8_t { exact_length, at_most };

enum class ColorBits : std::uint8_t { three_everywhere, two_for_phase2 };

// All the knobs of the bounded-horizon encoding. States are numbered
// 1..n_states; the move at step t transforms state t into state t+1.
// phase1_len is the number of unrestricted moves: the state after them is
// constrained to the phase-2 subgroup and all later moves are drawn from
// A10.
struct EncodingConfig {
  int n_states = 1;
  EncodeMode mode = EncodeMode::exact_length;
  std::optional<int> phase1_len;
  ColorBits color_bits = ColorBits::three_everywhere;
  bool pruning_opposite = true;
  bool pruning_same_face = false;
  bool last_move_constraint = true;  // exact-length mode only
  AmoMethod amo = AmoMethod::product;

  int num_steps() const { return n_states - 1; }
  void validate() const;
  std::string summary() const;  // key=value text, one line
};

// Color bit codes. 3-bit: the binary value of the color index, MSB first.
// 2-bit: front,left,back,right map to 00,01,10,11; up and down re-use 00
// and 01 (position classes keep the reuse unambiguous inside phase 2).
int color_code(Color c, int bits);
bool color_code_bit(Color c, int bits, int bit);  // bit is 1-based, 1 = MSB

// Bidirectional map between CNF variables and their semantic roles. Center
// facelets are compile-time constants and have no variables.
class VarMap {
 public:
  static constexpr std::array<Face, kNumFaces> kTypeOrder = {
      Face::up, Face::down, Face::left, Face::right, Face::front, Face::back};

  const EncodingConfig& config() const { return config_; }
  const CubeState& initial_state() const { return initial_; }

  int bits_at(int t) const;
  Var color_var(int t, Face f, int pos, int bit) const;  // 0 for centers
  Var solved_var(int t) const;                           // at-most mode only
  Var type_var(int step, Face f) const;
  Var move_var(int step, Move m) const;

 private:
  friend class Encoder;

  EncodingConfig config_;
  CubeState initial_;
  std::vector<int> state_color_base_;  // index t-1
  int s_base_ = 0;
  int step_base_ = 0;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(int step, const std::string& message)
      : std::runtime_error(message), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Emits the encoding blocks onto an owned formula. The constructor
// allocates every structured variable; block emitters may be called
// individually (tests compose partial encodings) or via encode_all(),
// which uses the fixed block order so identical configs give
// byte-identical DIMACS.
class Encoder {
 public:
  Encoder(const CubeState& initial, const EncodingConfig& config);

  void encode_initial_state();
  void encode_move_selection(int step);
  void encode_move_semantics(int step);
  void encode_pruning(int step);
  void encode_solved_target();
  void encode_phase_constraints();
  void encode_last_move_constraint();
  void encode_all();

  // One unit (or guarded binary) clause per bit of state t's facelet.
  void encode_facelet_equals_constant(Face f, int pos, int t, Color color,
                                      std::optional<Lit> guard = std::nullopt);
  // CNF of "facelet equals a or b" by literal distribution, no auxiliaries.
  void encode_facelet_in_two_colors(Face f, int pos, int t, Color a, Color b,
                                    std::optional<Lit> guard = std::nullopt);

  Formula& formula() { return formula_; }
  const VarMap& varmap() const { return vars_; }

  Formula take_formula() { return std::move(formula_); }
  VarMap take_varmap() { return std::move(vars_); }

 private:
  void equate_facelets(int src_idx, int dst_idx, int src_state, int dst_state, Lit guard);

  Formula formula_;
  VarMap vars_;
};

struct Encoding {
  Formula formula;
  VarMap vars;
};

Encoding encode(const CubeState& initial, const EncodingConfig& config);

struct DecodedSolution {
  Maneuver maneuver;  // truncated at the solved state
  int solve_step;     // 1-based index of the solved state
};

// Reads the per-step move variables out of a satisfying model, truncates at
// the solved state and re-verifies through the cube model. Any
// inconsistency signals an encoder bug and throws DecodeError.
DecodedSolution decode_solution(const VarMap& vars, const Model& model);

// Reconstructs state t from a satisfying model.
CubeState decode_state(const VarMap& vars, const Model& model, int t);

}  // namespace rubiksat

#include "rubiksat/encoder.hpp"

#include <algorithm>
#include <cctype>

#include "rubiksat/move_tables.hpp"

namespace rubiksat {

namespace {

bool is_center(int facelet_idx) { return facelet_idx % 9 == kCenterPos; }

bool is_ud_face(Face f) { return f == Face::up || f == Face::down; }

// The set of facelet positions displaced by turns of a face (identical for
// all three variants of that face).
std::array<bool, kNumFacelets> moved_set(Face f) {
  std::array<bool, kNumFacelets> moved{};
  const MoveTable& t = move_table({f, Variant::cw});
  for (int i = 0; i < kNumFacelets; ++i) moved[i] = t[i] != i;
  return moved;
}

std::string color_var_label(Face f, int pos, int t, int bit) {
  std::string s = "c(";
  s += face_letter(f);
  s += ',';
  s += std::to_string(pos);
  s += ",t";
  s += std::to_string(t);
  s += ",b";
  s += std::to_string(bit);
  s += ')';
  return s;
}

}  // namespace

void EncodingConfig::validate() const {
  if (n_states < 1) throw std::invalid_argument("n_states must be >= 1");
  if (phase1_len) {
    if (*phase1_len < 0 || *phase1_len >= n_states - 1)
      throw std::invalid_argument("phase1_len must lie in 0..n_states-2");
  }
  if (color_bits == ColorBits::two_for_phase2 && !phase1_len)
    throw std::invalid_argument("two_for_phase2 requires phase1_len");
  if (last_move_constraint && mode == EncodeMode::at_most)
    throw std::invalid_argument("last_move_constraint requires exact-length mode");
}

std::string EncodingConfig::summary() const {
  std::string s = "states=" + std::to_string(n_states);
  s += " mode=";
  s += mode == EncodeMode::exact_length ? "exact" : "atmost";
  s += " phase1=";
  s += phase1_len ? std::to_string(*phase1_len) : "none";
  s += " bits=";
  s += color_bits == ColorBits::three_everywhere ? "3" : "2";
  s += " amo=";
  s += amo == AmoMethod::pairwise ? "pairwise" : "product";
  s += " prune_opposite=" + std::to_string(pruning_opposite);
  s += " prune_same_face=" + std::to_string(pruning_same_face);
  s += " last_move=" + std::to_string(last_move_constraint);
  return s;
}

int color_code(Color c, int bits) {
  if (bits == 3) return c;
  return c < 4 ? c : c - 4;
}

bool color_code_bit(Color c, int bits, int bit) {
  return (color_code(c, bits) >> (bits - bit)) & 1;
}

int VarMap::bits_at(int t) const {
  if (config_.color_bits == ColorBits::two_for_phase2 && t > *config_.phase1_len) return 2;
  return 3;
}

Var VarMap::color_var(int t, Face f, int pos, int bit) const {
  if (pos == kCenterPos) return 0;
  const int slot = face_index(f) * 8 + (pos < kCenterPos ? pos : pos - 1);
  return state_color_base_[static_cast<std::size_t>(t) - 1] + slot * bits_at(t) + (bit - 1);
}

Var VarMap::solved_var(int t) const { return s_base_ + (t - 1); }

Var VarMap::type_var(int step, Face f) const {
  const auto it = std::find(kTypeOrder.begin(), kTypeOrder.end(), f);
  const int ti = static_cast<int>(it - kTypeOrder.begin());
  return step_base_ + (step - 1) * 24 + ti;
}

Var VarMap::move_var(int step, Move m) const {
  const auto it = std::find(kTypeOrder.begin(), kTypeOrder.end(), m.face);
  const int ti = static_cast<int>(it - kTypeOrder.begin());
  return step_base_ + (step - 1) * 24 + 6 + ti * 3 + static_cast<int>(m.variant);
}

Encoder::Encoder(const CubeState& initial, const EncodingConfig& config) {
  config.validate();
  vars_.config_ = config;
  vars_.initial_ = initial;

  const int n = config.n_states;
  vars_.state_color_base_.resize(static_cast<std::size_t>(n));
  for (int t = 1; t <= n; ++t) {
    vars_.state_color_base_[static_cast<std::size_t>(t) - 1] = formula_.num_vars() + 1;
    const int bits = vars_.bits_at(t);
    for (int f = 0; f < kNumFaces; ++f) {
      for (int pos = 0; pos < kFaceletsPerFace; ++pos) {
        if (pos == kCenterPos) continue;
        for (int b = 1; b <= bits; ++b)
          formula_.new_var(color_var_label(face_from_index(f), pos, t, b));
      }
    }
  }
  if (config.mode == EncodeMode::at_most) {
    vars_.s_base_ = formula_.num_vars() + 1;
    for (int t = 1; t <= n; ++t) formula_.new_var("s(" + std::to_string(t) + ")");
  }
  vars_.step_base_ = formula_.num_vars() + 1;
  for (int step = 1; step <= config.num_steps(); ++step) {
    for (Face f : VarMap::kTypeOrder) {
      std::string label(1, static_cast<char>(std::tolower(face_letter(f))));
      formula_.new_var(label + "(" + std::to_string(step) + ")");
    }
    for (Face f : VarMap::kTypeOrder) {
      for (int v = 0; v < 3; ++v) {
        Move m{f, static_cast<Variant>(v)};
        formula_.new_var(format_move(m) + "(" + std::to_string(step) + ")");
      }
    }
  }
}

void Encoder::encode_facelet_equals_constant(Face f, int pos, int t, Color color,
                                             std::optional<Lit> guard) {
  const int bits = vars_.bits_at(t);
  for (int b = 1; b <= bits; ++b) {
    Lit bit_lit(vars_.color_var(t, f, pos, b), color_code_bit(color, bits, b));
    if (guard)
      formula_.add_clause({~*guard, bit_lit});
    else
      formula_.add_clause({bit_lit});
  }
}

void Encoder::encode_facelet_in_two_colors(Face f, int pos, int t, Color a, Color b,
                                           std::optional<Lit> guard) {
  const int bits = vars_.bits_at(t);
  std::vector<int> differing;
  for (int k = 1; k <= bits; ++k) {
    const bool bit_a = color_code_bit(a, bits, k);
    const bool bit_b = color_code_bit(b, bits, k);
    if (bit_a == bit_b) {
      Lit shared(vars_.color_var(t, f, pos, k), bit_a);
      if (guard)
        formula_.add_clause({~*guard, shared});
      else
        formula_.add_clause({shared});
    } else {
      differing.push_back(k);
    }
  }
  // distribute over the differing bits; a single differing bit is a tautology
  if (differing.size() < 2) return;
  for (int i : differing) {
    for (int j : differing) {
      if (i == j) continue;
      Lit lit_a(vars_.color_var(t, f, pos, i), color_code_bit(a, bits, i));
      Lit lit_b(vars_.color_var(t, f, pos, j), color_code_bit(b, bits, j));
      std::vector<Lit> clause;
      if (guard) clause.push_back(~*guard);
      clause.push_back(lit_a);
      clause.push_back(lit_b);
      formula_.add_clause(std::move(clause));
    }
  }
}

void Encoder::encode_initial_state() {
  const int bits = vars_.bits_at(1);
  for (int f = 0; f < kNumFaces; ++f) {
    Face face = face_from_index(f);
    for (int pos = 0; pos < kFaceletsPerFace; ++pos) {
      if (pos == kCenterPos) continue;
      Color c = vars_.initial_.at(face, pos);
      if (bits == 2) {
        const bool ud_color = c >= 4;
        if (ud_color != is_ud_face(face))
          throw std::invalid_argument(
              "initial state is not encodable with 2-bit colors (not in the "
              "phase-2 subgroup)");
      }
      encode_facelet_equals_constant(face, pos, 1, c);
    }
  }
}

void Encoder::encode_move_selection(int step) {
  std::vector<Lit> types;
  for (Face f : VarMap::kTypeOrder) types.push_back(pos(vars_.type_var(step, f)));
  encode_exactly_one(formula_, types, AmoMethod::pairwise, "", ClauseKind::move_type_alo, step);

  for (Face f : VarMap::kTypeOrder) {
    std::vector<Lit> variants;
    for (int v = 0; v < 3; ++v)
      variants.push_back(pos(vars_.move_var(step, {f, static_cast<Variant>(v)})));
    encode_conditional_exactly_one(formula_, pos(vars_.type_var(step, f)), variants);
  }
  for (Face f : VarMap::kTypeOrder) {
    for (int v = 0; v < 3; ++v) {
      Var mv = vars_.move_var(step, {f, static_cast<Variant>(v)});
      formula_.add_clause({neg(mv), pos(vars_.type_var(step, f))});
    }
  }
}

void Encoder::equate_facelets(int src_idx, int dst_idx, int src_state, int dst_state,
                              Lit guard) {
  const Face src_face = face_from_index(src_idx / 9);
  const Face dst_face = face_from_index(dst_idx / 9);
  const int src_pos = src_idx % 9, dst_pos = dst_idx % 9;
  const int src_bits = vars_.bits_at(src_state);
  const int dst_bits = vars_.bits_at(dst_state);

  if (src_bits == dst_bits) {
    for (int b = 1; b <= src_bits; ++b) {
      Var a = vars_.color_var(src_state, src_face, src_pos, b);
      Var d = vars_.color_var(dst_state, dst_face, dst_pos, b);
      formula_.add_clause({~guard, pos(a), neg(d)});
      formula_.add_clause({~guard, neg(a), pos(d)});
    }
    return;
  }
  if (src_bits != 3 || dst_bits != 2)
    throw std::logic_error("facelet widths can only narrow across the phase boundary");

  // Boundary channeling: each 3-bit source color implies its 2-bit
  // projection; the phase-2 state constraints rule out ambiguous readings.
  for (Color c = 0; c < kNumFaces; ++c) {
    std::vector<Lit> base{~guard};
    for (int b = 1; b <= 3; ++b) {
      Lit src_bit(vars_.color_var(src_state, src_face, src_pos, b), color_code_bit(c, 3, b));
      base.push_back(~src_bit);
    }
    for (int b = 1; b <= 2; ++b) {
      Lit dst_bit(vars_.color_var(dst_state, dst_face, dst_pos, b), color_code_bit(c, 2, b));
      std::vector<Lit> clause = base;
      clause.push_back(dst_bit);
      formula_.add_clause(std::move(clause));
    }
  }
}

void Encoder::encode_move_semantics(int step) {
  // frame part, shared per move type
  for (Face tau : VarMap::kTypeOrder) {
    const auto moved = moved_set(tau);
    Lit guard = pos(vars_.type_var(step, tau));
    for (int i = 0; i < kNumFacelets; ++i) {
      if (is_center(i) || moved[i]) continue;
      equate_facelets(i, i, step, step + 1, guard);
    }
  }
  // changed part, one block per concrete move
  for (Face tau : VarMap::kTypeOrder) {
    for (int v = 0; v < 3; ++v) {
      Move m{tau, static_cast<Variant>(v)};
      const MoveTable& table = move_table(m);
      Lit guard = pos(vars_.move_var(step, m));
      for (int dst = 0; dst < kNumFacelets; ++dst) {
        if (table[dst] == dst) continue;
        equate_facelets(table[dst], dst, step, step + 1, guard);
      }
    }
  }
}

void Encoder::encode_pruning(int step) {
  if (step < 1 || step > vars_.config_.num_steps() - 1)
    throw std::invalid_argument("pruning step needs a successor step");
  if (vars_.config_.pruning_opposite) {
    static constexpr std::pair<Face, Face> kOrdered[] = {
        {Face::up, Face::down}, {Face::left, Face::right}, {Face::front, Face::back}};
    for (auto [first, second] : kOrdered)
      formula_.add_clause(
          {neg(vars_.type_var(step, first)), neg(vars_.type_var(step + 1, second))});
  }
  if (vars_.config_.pruning_same_face) {
    for (Face f : VarMap::kTypeOrder)
      formula_.add_clause({neg(vars_.type_var(step, f)), neg(vars_.type_var(step + 1, f))});
  }
}

void Encoder::encode_solved_target() {
  const int n = vars_.config_.n_states;
  if (vars_.config_.mode == EncodeMode::exact_length) {
    for (int f = 0; f < kNumFaces; ++f) {
      for (int pos = 0; pos < kFaceletsPerFace; ++pos) {
        if (pos == kCenterPos) continue;
        encode_facelet_equals_constant(face_from_index(f), pos, n, static_cast<Color>(f));
      }
    }
    return;
  }
  for (int t = 1; t <= n; ++t) {
    Lit guard = pos(vars_.solved_var(t));
    for (int f = 0; f < kNumFaces; ++f) {
      for (int pos = 0; pos < kFaceletsPerFace; ++pos) {
        if (pos == kCenterPos) continue;
        encode_facelet_equals_constant(face_from_index(f), pos, t, static_cast<Color>(f), guard);
      }
    }
  }
  std::vector<Lit> s_lits;
  for (int t = 1; t <= n; ++t) s_lits.push_back(pos(vars_.solved_var(t)));
  encode_exactly_one(formula_, s_lits, vars_.config_.amo, "eo_s");
}

void Encoder::encode_phase_constraints() {
  if (!vars_.config_.phase1_len) throw std::logic_error("phase constraints need phase1_len");
  const int k = *vars_.config_.phase1_len;
  const int h_state = k + 1;  // the state reached after the k phase-1 moves

  for (int f = 0; f < 4; ++f) {
    Face face = face_from_index(f);
    for (int pos : {3, 5})
      encode_facelet_in_two_colors(face, pos, h_state, static_cast<Color>(f),
                                   static_cast<Color>(face_index(opposite(face))));
  }
  for (Face face : {Face::up, Face::down}) {
    for (int pos = 0; pos < kFaceletsPerFace; ++pos) {
      if (pos == kCenterPos) continue;
      encode_facelet_in_two_colors(face, pos, h_state,
                                   static_cast<Color>(face_index(Face::up)),
                                   static_cast<Color>(face_index(Face::down)));
    }
  }

  // quarter turns of the side faces are banned after the boundary
  for (int step = k + 1; step <= vars_.config_.num_steps(); ++step) {
    for (Face face : {Face::left, Face::right, Face::front, Face::back}) {
      for (Variant v : {Variant::cw, Variant::ccw})
        formula_.add_clause({neg(vars_.move_var(step, {face, v}))});
    }
  }
}

void Encoder::encode_last_move_constraint() {
  const EncodingConfig& cfg = vars_.config_;
  if (cfg.mode != EncodeMode::exact_length)
    throw std::logic_error("last-move constraint requires exact-length mode");
  if (cfg.num_steps() < 1) return;

  // before the final move, the final move's frame facelets are already solved
  const int t = cfg.num_steps();  // state t is the input of the last move
  for (Face tau : VarMap::kTypeOrder) {
    const auto moved = moved_set(tau);
    Lit guard = pos(vars_.type_var(t, tau));
    for (int i = 0; i < kNumFacelets; ++i) {
      if (is_center(i) || moved[i]) continue;
      encode_facelet_equals_constant(face_from_index(i / 9), i % 9, t,
                                     static_cast<Color>(i / 9), guard);
    }
  }

  // same idea at the phase boundary: the frame of the last phase-1 move is
  // already inside the phase-2 color discipline
  if (!cfg.phase1_len || *cfg.phase1_len < 1) return;
  const int k = *cfg.phase1_len;
  for (Face tau : VarMap::kTypeOrder) {
    const auto moved = moved_set(tau);
    Lit guard = pos(vars_.type_var(k, tau));
    for (int i = 0; i < kNumFacelets; ++i) {
      if (is_center(i) || moved[i]) continue;
      Face face = face_from_index(i / 9);
      const int pos = i % 9;
      if (is_ud_face(face)) {
        encode_facelet_in_two_colors(face, pos, k, static_cast<Color>(face_index(Face::up)),
                                     static_cast<Color>(face_index(Face::down)), guard);
      } else if (pos == 3 || pos == 5) {
        encode_facelet_in_two_colors(face, pos, k, static_cast<Color>(face_index(face)),
                                     static_cast<Color>(face_index(opposite(face))), guard);
      }
    }
  }
}

void Encoder::encode_all() {
  const EncodingConfig& cfg = vars_.config_;
  encode_initial_state();
  for (int step = 1; step <= cfg.num_steps(); ++step) {
    encode_move_selection(step);
    encode_move_semantics(step);
    if (step <= cfg.num_steps() - 1) encode_pruning(step);
  }
  encode_solved_target();
  if (cfg.phase1_len) encode_phase_constraints();
  if (cfg.mode == EncodeMode::exact_length && cfg.last_move_constraint && cfg.num_steps() >= 1)
    encode_last_move_constraint();
}

Encoding encode(const CubeState& initial, const EncodingConfig& config) {
  Encoder enc(initial, config);
  enc.encode_all();
  return {enc.take_formula(), enc.take_varmap()};
}

DecodedSolution decode_solution(const VarMap& vars, const Model& model) {
  const EncodingConfig& cfg = vars.config();
  std::vector<Move> step_moves;
  for (int step = 1; step <= cfg.num_steps(); ++step) {
    int count = 0;
    Move chosen;
    for (Face f : VarMap::kTypeOrder) {
      for (int v = 0; v < 3; ++v) {
        Move m{f, static_cast<Variant>(v)};
        if (model_value(model, pos(vars.move_var(step, m)))) {
          ++count;
          chosen = m;
        }
      }
    }
    if (count != 1)
      throw DecodeError(step, "step " + std::to_string(step) + " has " +
                                  std::to_string(count) + " move variables set");
    step_moves.push_back(chosen);
  }

  int solve_step = cfg.n_states;
  if (cfg.mode == EncodeMode::at_most) {
    int flagged = 0, count = 0;
    for (int t = 1; t <= cfg.n_states; ++t) {
      if (model_value(model, pos(vars.solved_var(t)))) {
        flagged = t;
        ++count;
      }
    }
    if (count != 1)
      throw DecodeError(0, "model sets " + std::to_string(count) + " solved flags");
    // The flag may legally point past an identity subsequence; truncate at
    // the first solved state along the walk instead.
    CubeState cur = vars.initial_state();
    solve_step = flagged;
    for (int t = 1; t <= flagged; ++t) {
      if (t > 1) cur = apply_move(cur, step_moves[static_cast<std::size_t>(t) - 2]);
      if (is_solved(cur)) {
        solve_step = t;
        break;
      }
    }
  }

  Maneuver mv(step_moves.begin(), step_moves.begin() + (solve_step - 1));
  if (!is_solved(apply_maneuver(vars.initial_state(), mv)))
    throw DecodeError(solve_step, "decoded maneuver fails verification at state " +
                                      std::to_string(solve_step));
  return {std::move(mv), solve_step};
}

CubeState decode_state(const VarMap& vars, const Model& model, int t) {
  const int bits = vars.bits_at(t);
  CubeState out;
  for (int f = 0; f < kNumFaces; ++f) {
    Face face = face_from_index(f);
    for (int p = 0; p < kFaceletsPerFace; ++p) {
      if (p == kCenterPos) {
        out.at(face, p) = static_cast<Color>(f);
        continue;
      }
      int value = 0;
      for (int b = 1; b <= bits; ++b) {
        value <<= 1;
        if (model_value(model, pos(vars.color_var(t, face, p, b)))) value |= 1;
      }
      if (bits == 3) {
        if (value > 5)
          throw DecodeError(t, "state " + std::to_string(t) + " facelet holds color code " +
                                   std::to_string(value));
        out.at(face, p) = static_cast<Color>(value);
      } else {
        if (is_ud_face(face)) {
          if (value > 1)
            throw DecodeError(t, "state " + std::to_string(t) +
                                     " up/down facelet holds side color code");
          out.at(face, p) = static_cast<Color>(4 + value);
        } else {
          out.at(face, p) = static_cast<Color>(value);
        }
      }
    }
  }
  return out;
}

}  // namespace rubiksat

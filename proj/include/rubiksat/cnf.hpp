#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rubiksat {

using Var = int;  // >= 1

class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool positive) : code_(positive ? v : -v) {}

  static constexpr Lit from_dimacs(int code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return code_ < 0 ? -code_ : code_; }
  constexpr bool positive() const { return code_ > 0; }
  constexpr Lit operator~() const { return from_dimacs(-code_); }
  constexpr int to_dimacs() const { return code_; }
  constexpr bool valid() const { return code_ != 0; }

  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  int code_ = 0;
};

inline constexpr Lit pos(Var v) { return Lit(v, true); }
inline constexpr Lit neg(Var v) { return Lit(v, false); }

// Only the move-type at-least-one clauses carry a tag; the decomposition
// solver branches on them.
enum class ClauseKind : std::uint8_t { plain, move_type_alo };

struct Clause {
  std::vector<Lit> lits;
  ClauseKind kind = ClauseKind::plain;
  int step = 0;  // meaningful when kind == move_type_alo
};

enum class LBool : std::uint8_t { undef, tt, ff };

inline LBool lbool_of(bool b) { return b ? LBool::tt : LBool::ff; }
inline LBool lbool_negate(LBool v) {
  if (v == LBool::undef) return v;
  return v == LBool::tt ? LBool::ff : LBool::tt;
}

// Partial assignment over variables 1..n.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : val_(static_cast<std::size_t>(num_vars) + 1, LBool::undef) {}

  int num_vars() const { return static_cast<int>(val_.size()) - 1; }
  LBool value(Var v) const { return val_[static_cast<std::size_t>(v)]; }
  LBool value(Lit l) const {
    LBool v = value(l.var());
    return l.positive() ? v : lbool_negate(v);
  }
  bool assigned(Var v) const { return value(v) != LBool::undef; }

  void assign(Lit l) { val_[static_cast<std::size_t>(l.var())] = lbool_of(l.positive()); }
  void unassign(Var v) { val_[static_cast<std::size_t>(v)] = LBool::undef; }

 private:
  std::vector<LBool> val_{LBool::undef};
};

using Model = std::vector<LBool>;  // 1-based, index 0 unused

inline bool model_value(const Model& m, Lit l) {
  LBool v = m[static_cast<std::size_t>(l.var())];
  return l.positive() ? v == LBool::tt : v == LBool::ff;
}

class DimacsError : public std::runtime_error {
 public:
  DimacsError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// CNF container with deterministic variable allocation and a name table.
// Clause construction rejects duplicate and complementary literals so that
// encoder bugs surface at emission time.
class Formula {
 public:
  Var new_var(std::string label = {});

  int num_vars() const { return static_cast<int>(labels_.size()); }
  const std::string& label(Var v) const;

  void add_clause(std::vector<Lit> lits, ClauseKind kind = ClauseKind::plain, int step = 0);
  std::span<const Clause> clauses() const { return clauses_; }
  std::size_t num_clauses() const { return clauses_.size(); }

  std::string to_dimacs() const;
  // Variable-map sidecar: one "<id> <label>" line per variable.
  std::string varmap_sidecar() const;
  static Formula from_dimacs(std::string_view text);

 private:
  std::vector<Clause> clauses_;
  std::vector<std::string> labels_;
};

// Cardinality encoders. `lits` are existing literals; auxiliaries are
// allocated on the formula with `aux_prefix` in their labels.
void encode_alo(Formula& f, std::span<const Lit> lits, ClauseKind kind = ClauseKind::plain,
                int step = 0);
void encode_amo_pairwise(Formula& f, std::span<const Lit> lits);
void encode_amo_product(Formula& f, std::span<const Lit> lits,
                        std::string_view aux_prefix = "amo");

enum class AmoMethod : std::uint8_t { pairwise, product };

void encode_exactly_one(Formula& f, std::span<const Lit> lits, AmoMethod method,
                        std::string_view aux_prefix = "eo",
                        ClauseKind alo_kind = ClauseKind::plain, int alo_step = 0);

// (~guard v ALO(lits)) plus an unconditional pairwise AMO over lits.
void encode_conditional_exactly_one(Formula& f, Lit guard, std::span<const Lit> lits);

}  // namespace rubiksat

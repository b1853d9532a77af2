#include "rubiksat/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rubiksat {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::sat: return "sat";
    case Outcome::unsat: return "unsat";
    case Outcome::unknown: return "unknown";
  }
  return "?";
}

void BackendConfig::validate() const {
  if (timeout_seconds <= 0) throw std::invalid_argument("backend timeout must be positive");
  if (kind == Kind::external && solver_path.empty())
    throw std::invalid_argument("external backend requires a solver path");
}

namespace {

inline std::size_t lit_slot(Lit l) {
  return (static_cast<std::size_t>(l.var()) << 1) | (l.positive() ? 0u : 1u);
}

}  // namespace

// ---------------------------------------------------------------------------
// Unit propagation over occurrence lists
// ---------------------------------------------------------------------------

UnitPropagator::UnitPropagator(const Formula& f) : formula_(f) {
  occ_.resize((static_cast<std::size_t>(f.num_vars()) + 1) << 1);
  auto cls = f.clauses();
  for (std::size_t i = 0; i < cls.size(); ++i)
    for (Lit l : cls[i].lits) occ_[lit_slot(l)].push_back(static_cast<int>(i));
}

PropagateResult UnitPropagator::scan_clause(const Clause& c, int idx, Assignment& a,
                                            std::vector<Var>& trail,
                                            std::vector<Lit>& queue) const {
  Lit unit;
  int free_count = 0;
  for (Lit l : c.lits) {
    LBool v = a.value(l);
    if (v == LBool::tt) return {};  // satisfied
    if (v == LBool::undef) {
      if (++free_count > 1) return {};
      unit = l;
    }
  }
  if (free_count == 0) return {true, idx};
  a.assign(unit);
  trail.push_back(unit.var());
  queue.push_back(unit);
  return {};
}

PropagateResult UnitPropagator::drain(Assignment& a, std::vector<Var>& trail,
                                      std::vector<Lit>& queue) const {
  auto cls = formula_.clauses();
  while (!queue.empty()) {
    Lit p = queue.back();
    queue.pop_back();
    for (int ci : occ_[lit_slot(~p)]) {
      PropagateResult r = scan_clause(cls[static_cast<std::size_t>(ci)], ci, a, trail, queue);
      if (r.conflict) return r;
    }
  }
  return {};
}

PropagateResult UnitPropagator::run(Assignment& a, std::vector<Var>& trail) const {
  std::vector<Lit> queue;
  auto cls = formula_.clauses();
  for (std::size_t i = 0; i < cls.size(); ++i) {
    PropagateResult r = scan_clause(cls[i], static_cast<int>(i), a, trail, queue);
    if (r.conflict) return r;
  }
  return drain(a, trail, queue);
}

PropagateResult UnitPropagator::run_from(Assignment& a, std::vector<Var>& trail,
                                         Lit seed) const {
  std::vector<Lit> queue{seed};
  return drain(a, trail, queue);
}

PropagateResult propagate(const Formula& f, Assignment& a) {
  std::vector<Var> trail;
  return UnitPropagator(f).run(a, trail);
}

ProbeResult failed_literal_probe(const Formula& f, Assignment& a, std::vector<Var>& trail,
                                 std::span<const Var> candidates) {
  UnitPropagator up(f);
  if (up.run(a, trail).conflict) return {true, {}};
  return failed_literal_probe(up, a, trail, candidates);
}

ProbeResult failed_literal_probe(const UnitPropagator& up, Assignment& a,
                                 std::vector<Var>& trail, std::span<const Var> candidates) {
  ProbeResult out;
  for (Var v : candidates) {
    for (bool positive : {true, false}) {
      if (a.assigned(v)) break;
      Lit probe(v, positive);
      std::vector<Var> tentative;
      a.assign(probe);
      tentative.push_back(v);
      bool conflict = up.run_from(a, tentative, probe).conflict;
      for (Var w : tentative) a.unassign(w);
      if (conflict) {
        a.assign(~probe);
        trail.push_back(v);
        if (up.run_from(a, trail, ~probe).conflict) {
          out.unsat = true;
          return out;
        }
        out.implied.push_back(~probe);
      }
    }
  }
  return out;
}

bool verify_model(const Formula& f, const Model& model) {
  if (model.size() != static_cast<std::size_t>(f.num_vars()) + 1) return false;
  for (Var v = 1; v <= f.num_vars(); ++v)
    if (model[static_cast<std::size_t>(v)] == LBool::undef) return false;
  for (const Clause& c : f.clauses()) {
    bool satisfied = false;
    for (Lit l : c.lits) {
      if (model_value(model, l)) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Built-in CDCL solver
// ---------------------------------------------------------------------------

namespace {

double luby(double y, int x) {
  int size, seq;
  for (size = 1, seq = 0; size < x + 1; ++seq, size = 2 * size + 1) {
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

class CdclSolver {
 public:
  CdclSolver(const Formula& f, const BackendConfig& cfg)
      : formula_(f), cfg_(cfg), nvars_(f.num_vars()) {
    value_.assign(static_cast<std::size_t>(nvars_) + 1, LBool::undef);
    reason_.assign(static_cast<std::size_t>(nvars_) + 1, -1);
    level_.assign(static_cast<std::size_t>(nvars_) + 1, 0);
    activity_.assign(static_cast<std::size_t>(nvars_) + 1, 0.0);
    polarity_.assign(static_cast<std::size_t>(nvars_) + 1, 0);
    seen_.assign(static_cast<std::size_t>(nvars_) + 1, 0);
    heap_pos_.assign(static_cast<std::size_t>(nvars_) + 1, -1);
    watches_.resize((static_cast<std::size_t>(nvars_) + 1) << 1);
    for (Var v = 1; v <= nvars_; ++v) heap_insert(v);

    // watch order is mutated during search, so originals are copied once
    auto cls = f.clauses();
    mutable_original_.reserve(cls.size());
    for (const Clause& c : cls) mutable_original_.push_back(c.lits);
    num_original_ = static_cast<int>(mutable_original_.size());
    for (int i = 0; i < num_original_; ++i) {
      const std::vector<Lit>& lits = mutable_original_[static_cast<std::size_t>(i)];
      if (lits.size() == 1) {
        if (value(lits[0]) == LBool::ff) {
          ok_ = false;
          return;
        }
        if (value(lits[0]) == LBool::undef) enqueue(lits[0], -1);
      } else {
        attach(i);
      }
    }
  }

  SolverResult solve(std::span<const Lit> assumptions);

 private:
  struct Watcher {
    int clause;
    Lit blocker;
  };

  LBool value(Lit l) const {
    LBool v = value_[static_cast<std::size_t>(l.var())];
    return l.positive() ? v : lbool_negate(v);
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  // Clause indices cover originals first, then learned clauses.
  void attach(int ci) {
    const std::vector<Lit>& lits = ci < num_original_
                                       ? mutable_original_[static_cast<std::size_t>(ci)]
                                       : learned_[static_cast<std::size_t>(ci - num_original_)];
    watches_[lit_slot(lits[0])].push_back({ci, lits[1]});
    watches_[lit_slot(lits[1])].push_back({ci, lits[0]});
  }

  std::vector<Lit>& learned_lits(int ci) { return learned_[static_cast<std::size_t>(ci - num_original_)]; }

  void enqueue(Lit p, int reason) {
    value_[static_cast<std::size_t>(p.var())] = lbool_of(p.positive());
    reason_[static_cast<std::size_t>(p.var())] = reason;
    level_[static_cast<std::size_t>(p.var())] = decision_level();
    trail_.push_back(p);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      ops_ += 1;
      Lit false_lit = ~p;
      auto& ws = watches_[lit_slot(false_lit)];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        Watcher w = ws[i];
        if (value(w.blocker) == LBool::tt) {
          ws[keep++] = w;
          continue;
        }
        std::vector<Lit>& lits = w.clause < num_original_
                                     ? mutable_original_[static_cast<std::size_t>(w.clause)]
                                     : learned_lits(w.clause);
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        Lit first = lits[0];
        if (value(first) == LBool::tt) {
          ws[keep++] = {w.clause, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != LBool::ff) {
            std::swap(lits[1], lits[k]);
            watches_[lit_slot(lits[1])].push_back({w.clause, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = {w.clause, first};
        if (value(first) == LBool::ff) {
          // copy back the remaining watchers and report the conflict
          for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          qhead_ = trail_.size();
          return w.clause;
        }
        enqueue(first, w.clause);
      }
      ws.resize(keep);
    }
    return -1;
  }

  void bump(Var v) {
    activity_[static_cast<std::size_t>(v)] += activity_inc_;
    if (activity_[static_cast<std::size_t>(v)] > 1e100) {
      for (Var u = 1; u <= nvars_; ++u) activity_[static_cast<std::size_t>(u)] *= 1e-100;
      activity_inc_ *= 1e-100;
    }
    if (heap_pos_[static_cast<std::size_t>(v)] >= 0) heap_up(heap_pos_[static_cast<std::size_t>(v)]);
  }

  void analyze(int confl, std::vector<Lit>& learnt, int& bt_level) {
    learnt.clear();
    learnt.push_back(Lit());  // slot for the asserting literal
    int counter = 0;
    Lit p;
    std::size_t idx = trail_.size();

    int ci = confl;
    bool first = true;
    do {
      const std::vector<Lit>& lits =
          ci < num_original_ ? mutable_original_[static_cast<std::size_t>(ci)] : learned_lits(ci);
      for (std::size_t k = first ? 0 : 1; k < lits.size(); ++k) {
        Lit q = lits[k];
        Var qv = q.var();
        if (!seen_[static_cast<std::size_t>(qv)] && level_[static_cast<std::size_t>(qv)] > 0) {
          seen_[static_cast<std::size_t>(qv)] = 1;
          bump(qv);
          if (level_[static_cast<std::size_t>(qv)] >= decision_level())
            ++counter;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[static_cast<std::size_t>(trail_[idx - 1].var())]) --idx;
      p = trail_[idx - 1];
      --idx;
      ci = reason_[static_cast<std::size_t>(p.var())];
      seen_[static_cast<std::size_t>(p.var())] = 0;
      --counter;
      first = false;
    } while (counter > 0);
    learnt[0] = ~p;

    bt_level = 0;
    std::size_t max_pos = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      int lv = level_[static_cast<std::size_t>(learnt[k].var())];
      if (lv > bt_level) {
        bt_level = lv;
        max_pos = k;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_pos]);
    for (std::size_t k = 1; k < learnt.size(); ++k) seen_[static_cast<std::size_t>(learnt[k].var())] = 0;
  }

  void backtrack(int target) {
    while (decision_level() > target) {
      std::size_t lim = trail_lim_.back();
      trail_lim_.pop_back();
      while (trail_.size() > lim) {
        Lit p = trail_.back();
        trail_.pop_back();
        Var v = p.var();
        polarity_[static_cast<std::size_t>(v)] = p.positive() ? 1 : 0;
        value_[static_cast<std::size_t>(v)] = LBool::undef;
        reason_[static_cast<std::size_t>(v)] = -1;
        if (heap_pos_[static_cast<std::size_t>(v)] < 0) heap_insert(v);
      }
    }
    qhead_ = trail_.size();
  }

  void drop_learned_at_restart() {
    // learning=off keeps derived clauses only within one restart span
    for (auto& ws : watches_) {
      std::erase_if(ws, [this](const Watcher& w) { return w.clause >= num_original_; });
    }
    learned_.clear();
    for (Lit p : trail_) {
      if (reason_[static_cast<std::size_t>(p.var())] >= num_original_)
        reason_[static_cast<std::size_t>(p.var())] = -1;
    }
  }

  // --- activity-ordered heap (max activity, ties to the smaller id) ---
  bool heap_less(Var a, Var b) const {
    double aa = activity_[static_cast<std::size_t>(a)], ab = activity_[static_cast<std::size_t>(b)];
    return aa > ab || (aa == ab && a < b);
  }
  void heap_insert(Var v) {
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(static_cast<int>(heap_.size()) - 1);
  }
  void heap_up(int i) {
    Var v = heap_[static_cast<std::size_t>(i)];
    while (i > 0) {
      int parent = (i - 1) >> 1;
      if (!heap_less(v, heap_[static_cast<std::size_t>(parent)])) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(parent)];
      heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = parent;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_pos_[static_cast<std::size_t>(v)] = i;
  }
  void heap_down(int i) {
    Var v = heap_[static_cast<std::size_t>(i)];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n &&
          heap_less(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)]))
        ++child;
      if (!heap_less(heap_[static_cast<std::size_t>(child)], v)) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(child)];
      heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = child;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_pos_[static_cast<std::size_t>(v)] = i;
  }
  Var heap_pop() {
    Var top = heap_[0];
    heap_pos_[static_cast<std::size_t>(top)] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_pos_[static_cast<std::size_t>(heap_[0])] = 0;
      heap_down(0);
    }
    return top;
  }

  Var pick_branch() {
    while (!heap_.empty()) {
      Var v = heap_pop();
      if (value_[static_cast<std::size_t>(v)] == LBool::undef) return v;
    }
    return 0;
  }

  const Formula& formula_;
  const BackendConfig& cfg_;
  int nvars_;
  bool ok_ = true;

  // Originals need mutable literal order for the watch scheme; copied once.
  std::vector<std::vector<Lit>> mutable_original_;
  std::vector<std::vector<Lit>> learned_;
  int num_original_ = 0;

  std::vector<std::vector<Watcher>> watches_;
  std::vector<LBool> value_;
  std::vector<int> reason_;
  std::vector<int> level_;
  std::vector<double> activity_;
  std::vector<char> polarity_;
  std::vector<char> seen_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<Var> heap_;
  std::vector<int> heap_pos_;
  double activity_inc_ = 1.0;

  std::uint64_t ops_ = 0;
  std::uint64_t conflicts_ = 0;
};

SolverResult CdclSolver::solve(std::span<const Lit> assumptions) {
  if (!ok_) return SolverResult::unsat();

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(cfg_.timeout_seconds);
  std::uint64_t next_check = 4096;
  int restart_count = 0;
  std::uint64_t conflicts_since_restart = 0;
  std::uint64_t restart_limit =
      static_cast<std::uint64_t>(luby(2.0, restart_count) * 64.0);

  for (;;) {
    int confl = propagate();
    if (confl >= 0) {
      ++conflicts_;
      ++conflicts_since_restart;
      if (decision_level() == 0) return SolverResult::unsat();

      std::vector<Lit> learnt;
      int bt_level = 0;
      analyze(confl, learnt, bt_level);
      backtrack(bt_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int ci = num_original_ + static_cast<int>(learned_.size());
        learned_.push_back(learnt);
        attach(ci);
        enqueue(learnt[0], ci);
      }
      activity_inc_ /= 0.95;
    } else {
      if (ops_ + conflicts_ * 16 > next_check) {
        next_check = ops_ + conflicts_ * 16 + 16384;
        if (cfg_.stop && cfg_.stop->load(std::memory_order_relaxed))
          return SolverResult::unknown(UnknownReason::resource);
        if (std::chrono::steady_clock::now() > deadline)
          return SolverResult::unknown(UnknownReason::timeout);
      }

      if (cfg_.builtin.restarts && conflicts_since_restart >= restart_limit) {
        backtrack(0);
        if (!cfg_.builtin.learning) drop_learned_at_restart();
        conflicts_since_restart = 0;
        ++restart_count;
        restart_limit = static_cast<std::uint64_t>(luby(2.0, restart_count) * 64.0);
        continue;
      }

      Lit next;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        Lit p = assumptions[static_cast<std::size_t>(decision_level())];
        if (value(p) == LBool::tt) {
          trail_lim_.push_back(trail_.size());  // dummy level
        } else if (value(p) == LBool::ff) {
          return SolverResult::unsat();
        } else {
          next = p;
          break;
        }
      }
      if (!next.valid()) {
        Var v = pick_branch();
        if (v == 0) {
          Model model(value_.begin(), value_.end());
          if (!verify_model(formula_, model))
            throw std::logic_error("internal error: builtin solver produced an invalid model");
          return SolverResult::sat(std::move(model));
        }
        next = Lit(v, polarity_[static_cast<std::size_t>(v)] != 0);
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, -1);
    }
  }
}

}  // namespace

SolverResult solve_builtin(const Formula& f, std::span<const Lit> assumptions,
                           const BackendConfig& config) {
  config.validate();
  for (Lit a : assumptions)
    if (!a.valid() || a.var() > f.num_vars())
      throw std::invalid_argument("assumption refers to an unallocated variable");
  CdclSolver solver(f, config);
  return solver.solve(assumptions);
}

SolverResult solve_backend(const Formula& f, std::span<const Lit> assumptions,
                           const BackendConfig& config) {
  if (config.kind == BackendConfig::Kind::external)
    return solve_external(f, assumptions, config);
  return solve_builtin(f, assumptions, config);
}

}  // namespace rubiksat

#include "rubiksat/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <thread>

namespace rubiksat {

namespace {

using Clock = std::chrono::steady_clock;

struct ClauseStatus {
  bool satisfied = false;
  int free_count = 0;
};

ClauseStatus clause_status(const Clause& c, const Assignment& a) {
  ClauseStatus st;
  for (Lit l : c.lits) {
    LBool v = a.value(l);
    if (v == LBool::tt) {
      st.satisfied = true;
      return st;
    }
    if (v == LBool::undef) ++st.free_count;
  }
  return st;
}

std::optional<int> pick_branch_clause(const Formula& f, std::span<const int> tagged,
                                      const Assignment& a, int width) {
  for (int ci : tagged) {
    ClauseStatus st = clause_status(f.clauses()[static_cast<std::size_t>(ci)], a);
    if (st.satisfied) continue;
    if (st.free_count >= 2 && st.free_count <= width) return ci;
  }
  return std::nullopt;
}

struct Shared {
  const Formula& formula;
  const DecomposeConfig& cfg;
  UnitPropagator propagator;
  std::vector<int> tagged;       // move-type clause indices, step-ascending
  std::vector<Var> probe_vars;   // move-type variables, for the lookahead
  std::optional<Clock::time_point> deadline;

  std::atomic<bool> stop{false};
  std::mutex result_mu;
  std::optional<Model> sat_model;
  std::mutex trace_mu;

  explicit Shared(const Formula& f, const DecomposeConfig& c) : formula(f), cfg(c), propagator(f) {
    auto cls = f.clauses();
    for (std::size_t i = 0; i < cls.size(); ++i)
      if (cls[i].kind == ClauseKind::move_type_alo) tagged.push_back(static_cast<int>(i));
    std::stable_sort(tagged.begin(), tagged.end(), [&](int x, int y) {
      return cls[static_cast<std::size_t>(x)].step < cls[static_cast<std::size_t>(y)].step;
    });
    std::vector<char> seen(static_cast<std::size_t>(f.num_vars()) + 1, 0);
    for (int ci : tagged) {
      for (Lit l : cls[static_cast<std::size_t>(ci)].lits) {
        if (!seen[static_cast<std::size_t>(l.var())]) {
          seen[static_cast<std::size_t>(l.var())] = 1;
          probe_vars.push_back(l.var());
        }
      }
    }
  }

  bool stopped() const { return stop.load(std::memory_order_relaxed); }
  bool past_deadline() const { return deadline && Clock::now() > *deadline; }

  void offer_sat(Model model) {
    std::lock_guard lock(result_mu);
    if (!sat_model) {
      sat_model = std::move(model);
      stop.store(true, std::memory_order_relaxed);
    }
  }

  void trace_leaf(const std::vector<Lit>& path, const SolverResult& r, double seconds) {
    if (!cfg.trace) return;
    std::lock_guard lock(trace_mu);
    std::ostream& out = *cfg.trace;
    out << "branch,\"";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) out << ' ';
      const std::string& label = formula.label(path[i].var());
      if (!path[i].positive()) out << '~';
      out << (label.empty() ? std::to_string(path[i].var()) : label);
    }
    out << "\"," << to_string(r.outcome) << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", cfg.deterministic ? 0.0 : seconds);
    out << buf << '\n';
  }
};

std::string path_text(const Shared& sh, const std::vector<Lit>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ' ';
    const std::string& label = sh.formula.label(path[i].var());
    if (!path[i].positive()) out += '~';
    out += label.empty() ? std::to_string(path[i].var()) : label;
  }
  return out;
}

// Leaves run under the whole current assignment (decisions plus everything
// propagation and probing derived), passed as assumptions.
SolverResult delegate_leaf(Shared& sh, const std::vector<Lit>& path, const Assignment& a,
                           const std::vector<Var>& trail) {
  BackendConfig leaf_cfg = sh.cfg.backend;
  leaf_cfg.stop = &sh.stop;
  if (sh.deadline) {
    double remaining =
        std::chrono::duration<double>(*sh.deadline - Clock::now()).count();
    if (remaining <= 0) return SolverResult::unknown(UnknownReason::timeout);
    leaf_cfg.timeout_seconds = std::min(leaf_cfg.timeout_seconds, remaining);
  }
  std::vector<Lit> assumptions;
  assumptions.reserve(trail.size());
  for (Var v : trail) assumptions.emplace_back(v, a.value(v) == LBool::tt);

  const auto start = Clock::now();
  SolverResult r;
  try {
    r = solve_backend(sh.formula, assumptions, leaf_cfg);
  } catch (const ExternalSolverError& e) {
    throw ExternalSolverError(e.kind(), std::string(e.what()) + " (branch path: " +
                                            path_text(sh, path) + ")");
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(e.what()) + " (branch path: " +
                             path_text(sh, path) + ")");
  }
  sh.trace_leaf(path, r, std::chrono::duration<double>(Clock::now() - start).count());
  return r;
}

// Branch literal order: clause order in deterministic mode, otherwise
// rotated by the seed and level.
std::vector<Lit> branch_literals(const Shared& sh, const Clause& c, const Assignment& a,
                                 int level) {
  std::vector<Lit> free;
  for (Lit l : c.lits)
    if (a.value(l) == LBool::undef) free.push_back(l);
  if (!sh.cfg.deterministic && free.size() > 1) {
    std::size_t shift = static_cast<std::size_t>((sh.cfg.seed + static_cast<std::uint64_t>(level)) %
                                                 free.size());
    std::rotate(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(shift), free.end());
  }
  return free;
}

SolverResult recurse(Shared& sh, Assignment& a, std::vector<Var>& trail, std::vector<Lit>& path,
                     int level) {
  if (sh.stopped()) return SolverResult::unknown(UnknownReason::resource);
  if (sh.past_deadline()) return SolverResult::unknown(UnknownReason::timeout);

  if (sh.cfg.lookahead) {
    ProbeResult pr = failed_literal_probe(sh.propagator, a, trail, sh.probe_vars);
    if (pr.unsat) return SolverResult::unsat();
  }

  std::optional<int> branch = pick_branch_clause(sh.formula, sh.tagged, a, sh.cfg.width);
  if (!branch) return delegate_leaf(sh, path, a, trail);

  const Clause& clause = sh.formula.clauses()[static_cast<std::size_t>(*branch)];
  bool any_unknown = false;
  for (Lit x : branch_literals(sh, clause, a, level)) {
    if (sh.stopped()) return SolverResult::unknown(UnknownReason::resource);
    if (sh.past_deadline()) return SolverResult::unknown(UnknownReason::timeout);
    if (a.value(x) != LBool::undef) continue;  // earlier siblings may have implied it

    const std::size_t mark = trail.size();
    a.assign(x);
    trail.push_back(x.var());
    bool conflict = sh.propagator.run_from(a, trail, x).conflict;
    if (!conflict) {
      path.push_back(x);
      SolverResult r = level < sh.cfg.depth ? recurse(sh, a, trail, path, level + 1)
                                            : delegate_leaf(sh, path, a, trail);
      path.pop_back();
      if (r.outcome == Outcome::sat) {
        while (trail.size() > mark) {
          a.unassign(trail.back());
          trail.pop_back();
        }
        return r;
      }
      if (r.outcome == Outcome::unknown) any_unknown = true;
    }
    while (trail.size() > mark) {
      a.unassign(trail.back());
      trail.pop_back();
    }
  }
  if (any_unknown) return SolverResult::unknown(UnknownReason::timeout);
  return SolverResult::unsat();
}

}  // namespace

void DecomposeConfig::validate() const {
  if (width < 2) throw std::invalid_argument("branch width must be >= 2");
  if (depth < 1) throw std::invalid_argument("recursion depth must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  backend.validate();
}

std::optional<int> find_branch_clause(const Formula& f, const Assignment& a, int width) {
  std::vector<int> tagged;
  auto cls = f.clauses();
  for (std::size_t i = 0; i < cls.size(); ++i)
    if (cls[i].kind == ClauseKind::move_type_alo) tagged.push_back(static_cast<int>(i));
  std::stable_sort(tagged.begin(), tagged.end(), [&](int x, int y) {
    return cls[static_cast<std::size_t>(x)].step < cls[static_cast<std::size_t>(y)].step;
  });
  return pick_branch_clause(f, tagged, a, width);
}

SolverResult solve_decomposed(const Formula& f, const DecomposeConfig& config) {
  config.validate();
  Shared sh(f, config);
  if (config.total_timeout_seconds > 0)
    sh.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(config.total_timeout_seconds));
  if (config.backend.stop) {
    // chain the caller's stop flag
    if (config.backend.stop->load(std::memory_order_relaxed)) sh.stop.store(true);
  }

  Assignment a(f.num_vars());
  std::vector<Var> trail;
  if (sh.propagator.run(a, trail).conflict) return SolverResult::unsat();

  const bool parallel = config.workers > 1 && !config.deterministic;
  if (!parallel) {
    std::vector<Lit> path;
    return recurse(sh, a, trail, path, 1);
  }

  // Parallel mode: the first branching level becomes a task list; each task
  // runs the serial recursion. First verified Sat wins and cancels siblings.
  std::optional<int> branch = pick_branch_clause(f, sh.tagged, a, config.width);
  if (!branch) return delegate_leaf(sh, {}, a, trail);

  const Clause& clause = f.clauses()[static_cast<std::size_t>(*branch)];
  std::vector<Lit> tasks = branch_literals(sh, clause, a, 1);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> saw_unknown{false};
  std::mutex error_mu;
  std::exception_ptr first_error;

  auto worker = [&]() {
    try {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size() || sh.stopped()) return;
        Assignment wa = a;  // branch owns an independent assignment
        std::vector<Var> wtrail;
        wa.assign(tasks[i]);
        wtrail.push_back(tasks[i].var());
        if (sh.propagator.run_from(wa, wtrail, tasks[i]).conflict) continue;  // unsat branch
        std::vector<Lit> path{tasks[i]};
        SolverResult r = recurse(sh, wa, wtrail, path, 2);
        if (r.outcome == Outcome::sat)
          sh.offer_sat(std::move(r.model));
        else if (r.outcome == Outcome::unknown && !sh.stopped())
          saw_unknown.store(true);
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!first_error) first_error = std::current_exception();
      sh.stop.store(true, std::memory_order_relaxed);
    }
  };

  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(config.workers, static_cast<int>(tasks.size()));
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (first_error) std::rethrow_exception(first_error);
  if (sh.sat_model) return SolverResult::sat(std::move(*sh.sat_model));
  if (saw_unknown.load()) return SolverResult::unknown(UnknownReason::timeout);
  return SolverResult::unsat();
}

}  // namespace rubiksat

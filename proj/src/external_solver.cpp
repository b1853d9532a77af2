#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rubiksat/solver.hpp"

namespace rubiksat {

namespace {

namespace fs = std::filesystem;

std::string dimacs_with_assumptions(const Formula& f, std::span<const Lit> assumptions) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() + assumptions.size() << '\n';
  for (const Clause& c : f.clauses()) {
    for (Lit l : c.lits) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
  for (Lit a : assumptions) out << a.to_dimacs() << " 0\n";
  return out.str();
}

class TempCnfFile {
 public:
  explicit TempCnfFile(const std::string& contents) {
    static std::atomic<unsigned> counter{0};
    path_ = fs::temp_directory_path() /
            ("rubiksat-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)) + ".cnf");
    std::ofstream out(path_);
    out << contents;
    if (!out) throw std::runtime_error("cannot write CNF to " + path_.string());
  }
  ~TempCnfFile() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  const std::string path() const { return path_.string(); }

 private:
  fs::path path_;
};

struct RunOutput {
  std::string stdout_text;
  int exit_code = -1;
  bool timed_out = false;
  bool cancelled = false;
};

RunOutput run_subprocess(const std::vector<std::string>& argv, const BackendConfig& cfg) {
  int out_pipe[2];
  int err_pipe[2];  // exec-failure reporting, close-on-exec
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw ExternalSolverError(ExternalSolverError::Kind::spawn, "pipe() failed");
  fcntl(err_pipe[1], F_SETFD, FD_CLOEXEC);

  pid_t pid = fork();
  if (pid < 0) throw ExternalSolverError(ExternalSolverError::Kind::spawn, "fork() failed");
  if (pid == 0) {
    setpgid(0, 0);  // own process group, so a timeout kill reaches grandchildren
    dup2(out_pipe[1], STDOUT_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    std::vector<char*> cargv;
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    int err = errno;
    ssize_t ignored = write(err_pipe[1], &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }
  close(out_pipe[1]);
  close(err_pipe[1]);

  // exec failure arrives on the error pipe before any output
  int exec_errno = 0;
  {
    pollfd pfd{err_pipe[0], POLLIN, 0};
    // wait for the pipe to close (exec success) or deliver an errno
    poll(&pfd, 1, -1);
    ssize_t n = read(err_pipe[0], &exec_errno, sizeof(exec_errno));
    close(err_pipe[0]);
    if (n == static_cast<ssize_t>(sizeof(exec_errno))) {
      close(out_pipe[0]);
      waitpid(pid, nullptr, 0);
      throw ExternalSolverError(
          ExternalSolverError::Kind::spawn,
          "cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
    }
  }

  RunOutput out;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(cfg.timeout_seconds);
  char buf[1 << 14];
  bool killed = false;
  for (;;) {
    if (!killed) {
      bool stop = cfg.stop && cfg.stop->load(std::memory_order_relaxed);
      bool late = std::chrono::steady_clock::now() > deadline;
      if (stop || late) {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
        killed = true;
        out.timed_out = late;
        out.cancelled = stop && !late;
      }
    }
    pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = poll(&pfd, 1, 50);
    if (pr > 0) {
      ssize_t n = read(out_pipe[0], buf, sizeof(buf));
      if (n <= 0) break;  // EOF
      out.stdout_text.append(buf, static_cast<std::size_t>(n));
    }
  }
  close(out_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

}  // namespace

SolverResult solve_external(const Formula& f, std::span<const Lit> assumptions,
                            const BackendConfig& config) {
  config.validate();
  if (config.kind != BackendConfig::Kind::external)
    throw std::invalid_argument("solve_external requires an external backend config");

  TempCnfFile cnf(dimacs_with_assumptions(f, assumptions));

  std::vector<std::string> argv{config.solver_path};
  bool placeholder_used = false;
  for (const std::string& arg : config.solver_args) {
    std::string expanded = arg;
    std::size_t pos = expanded.find("{cnf}");
    if (pos != std::string::npos) {
      expanded.replace(pos, 5, cnf.path());
      placeholder_used = true;
    }
    argv.push_back(std::move(expanded));
  }
  if (!placeholder_used) argv.push_back(cnf.path());

  RunOutput run = run_subprocess(argv, config);
  if (run.timed_out) return SolverResult::unknown(UnknownReason::timeout);
  if (run.cancelled) return SolverResult::unknown(UnknownReason::resource);

  // SAT-competition output: one "s" status line, "v" value lines 0-terminated.
  std::optional<bool> sat_status;
  std::vector<int> values;
  std::istringstream lines(run.stdout_text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos)
        sat_status = false;
      else if (line.find("SATISFIABLE") != std::string::npos)
        sat_status = true;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      int code;
      while (vs >> code) values.push_back(code);
    }
  }

  if (!sat_status) {
    if (run.exit_code == 0)
      throw ExternalSolverError(ExternalSolverError::Kind::malformed_output,
                                "solver produced no status line");
    return SolverResult::unknown(UnknownReason::resource);
  }
  if (!*sat_status) return SolverResult::unsat();

  Model model(static_cast<std::size_t>(f.num_vars()) + 1, LBool::ff);
  model[0] = LBool::undef;
  for (int code : values) {
    if (code == 0) continue;
    Var v = code < 0 ? -code : code;
    if (v <= f.num_vars()) model[static_cast<std::size_t>(v)] = lbool_of(code > 0);
  }
  bool ok = verify_model(f, model);
  for (Lit a : assumptions) ok = ok && model_value(model, a);
  if (!ok)
    throw ExternalSolverError(ExternalSolverError::Kind::malformed_output,
                              "solver claimed SAT but the model does not verify");
  return SolverResult::sat(std::move(model));
}

}  // namespace rubiksat

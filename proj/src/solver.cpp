#include "circsat/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "cdcl.hpp"

extern char **environ;

namespace circsat {

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Sat:
    return "SAT";
  case Verdict::Unsat:
    return "UNSAT";
  case Verdict::Unknown:
    return "UNKNOWN";
  }
  return "?";
}

std::string to_string(UnknownReason r) {
  switch (r) {
  case UnknownReason::None:
    return "none";
  case UnknownReason::Timeout:
    return "timeout";
  case UnknownReason::SolverError:
    return "solver-error";
  case UnknownReason::Interrupted:
    return "interrupted";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SolverVerdict unknown(UnknownReason reason, std::string detail) {
  SolverVerdict v;
  v.status = Verdict::Unknown;
  v.reason = reason;
  v.detail = std::move(detail);
  return v;
}

/// Temporary file removed on destruction unless kept.
class TempCnf {
public:
  TempCnf(const CnfFormula &f, bool keep) : keep_(keep) {
    const char *dir = std::getenv("TMPDIR");
    std::string pattern = std::string(dir && *dir ? dir : "/tmp") + "/circsat-XXXXXX.cnf";
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    const int fd = mkstemps(buf.data(), 4);
    if (fd < 0)
      throw std::runtime_error("cannot create temporary CNF file");
    ::close(fd);
    path_ = buf.data();
    std::ofstream out(path_, std::ios::binary);
    write_dimacs(out, f);
    if (!out)
      throw std::runtime_error("cannot write " + path_);
    if (keep_)
      std::cerr << "cnf: " << path_ << '\n';
  }
  ~TempCnf() {
    if (!keep_)
      ::unlink(path_.c_str());
  }
  TempCnf(const TempCnf &) = delete;
  TempCnf &operator=(const TempCnf &) = delete;
  const std::string &path() const { return path_; }

private:
  std::string path_;
  bool keep_;
};

} // namespace

SolverConfig SolverConfig::from_environment() {
  SolverConfig config;
  if (const char *cmd = std::getenv("CIRCUIT_SAT_SOLVER"); cmd && *cmd)
    config.external_command = split_command(cmd);
  return config;
}

std::vector<std::string> split_command(const std::string &command) {
  std::vector<std::string> out;
  std::string cur;
  bool have = false;
  char quote = 0;
  for (char c : command) {
    if (quote) {
      if (c == quote)
        quote = 0;
      else
        cur.push_back(c);
    } else if (c == '\'' || c == '"') {
      quote = c;
      have = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (have)
        out.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur.push_back(c);
      have = true;
    }
  }
  if (quote)
    throw std::invalid_argument("unterminated quote in solver command");
  if (have)
    out.push_back(cur);
  return out;
}

SolverVerdict parse_solver_output(const std::string &output, int variable_count) {
  std::istringstream in(output);
  std::string line;
  std::optional<Verdict> status;
  std::vector<bool> model(variable_count, false);
  bool terminated = false;
  bool saw_values = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.rfind("s ", 0) == 0) {
      const std::string s = line.substr(2);
      if (s.find("UNSATISFIABLE") != std::string::npos)
        status = Verdict::Unsat;
      else if (s.find("SATISFIABLE") != std::string::npos)
        status = Verdict::Sat;
      else
        status = Verdict::Unknown;
    } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
      saw_values = true;
      std::istringstream vs(line.substr(1));
      std::string tok;
      while (vs >> tok) {
        char *end = nullptr;
        const long lit = std::strtol(tok.c_str(), &end, 10);
        if (*end != '\0')
          return unknown(UnknownReason::SolverError, "malformed model token '" + tok + "'");
        if (lit == 0) {
          terminated = true;
          continue;
        }
        if (std::labs(lit) > variable_count)
          return unknown(UnknownReason::SolverError,
                         "model literal " + tok + " beyond variable count");
        model[std::labs(lit) - 1] = lit > 0;
      }
    }
  }
  if (!status)
    return unknown(UnknownReason::SolverError, "no status line");
  if (*status == Verdict::Unknown)
    return unknown(UnknownReason::SolverError, "solver reported UNKNOWN");
  SolverVerdict v;
  v.status = *status;
  if (*status == Verdict::Sat) {
    if (!saw_values || !terminated)
      return unknown(UnknownReason::SolverError, "model missing or not 0-terminated");
    v.model = std::move(model);
  }
  return v;
}

SolverVerdict run_external(const CnfFormula &f, const SolverConfig &config) {
  if (config.external_command.empty())
    throw std::invalid_argument("no external solver configured");
  if (!(config.time_limit > 0))
    throw std::invalid_argument("solver time limit must be positive");
  const auto start = Clock::now();
  TempCnf file(f, config.keep_files);

  std::vector<std::string> args = config.external_command;
  bool substituted = false;
  for (auto &a : args)
    if (a == "{}") {
      a = file.path();
      substituted = true;
    }
  if (!substituted)
    args.push_back(file.path());
  std::vector<char *> argv;
  for (auto &a : args)
    argv.push_back(a.data());
  argv.push_back(nullptr);

  int pipefd[2];
  if (::pipe2(pipefd, O_CLOEXEC) != 0)
    return unknown(UnknownReason::SolverError, "pipe failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipefd[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipefd[0]);
  posix_spawn_file_actions_addclose(&actions, pipefd[1]);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(pipefd[1]);
  if (rc != 0) {
    ::close(pipefd[0]);
    return unknown(UnknownReason::SolverError,
                   "cannot start '" + args[0] + "': " + std::strerror(rc));
  }

  std::string output;
  bool timed_out = false;
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(config.time_limit));
  char buf[65536];
  while (true) {
    const auto now = Clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{pipefd[0], POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining + 1, 1000)));
    if (pr < 0 && errno == EINTR)
      continue;
    if (pr <= 0)
      continue;
    const ssize_t got = ::read(pipefd[0], buf, sizeof buf);
    if (got < 0 && errno == EINTR)
      continue;
    if (got <= 0)
      break;
    output.append(buf, static_cast<std::size_t>(got));
  }
  ::close(pipefd[0]);
  if (timed_out)
    ::kill(-pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  if (timed_out) {
    auto v = unknown(UnknownReason::Timeout, "time limit reached");
    v.seconds = seconds_since(start);
    return v;
  }
  SolverVerdict v = parse_solver_output(output, f.variable_count);
  if (v.unknown() && WIFEXITED(status) && WEXITSTATUS(status) != 0 &&
      WEXITSTATUS(status) != 10 && WEXITSTATUS(status) != 20)
    v.detail += " (exit status " + std::to_string(WEXITSTATUS(status)) + ")";
  if (v.unknown() && WIFSIGNALED(status))
    v.detail += " (killed by signal " + std::to_string(WTERMSIG(status)) + ")";
  v.seconds = seconds_since(start);
  return v;
}

SolverVerdict solve_embedded(const CnfFormula &f, const EmbeddedLimits &limits) {
  const auto start = Clock::now();
  detail::Cdcl solver(f.variable_count);
  for (const auto &clause : f.clauses) {
    for (int lit : clause)
      if (lit == 0 || std::abs(lit) > f.variable_count)
        throw std::invalid_argument("literal " + std::to_string(lit) + " out of range");
    if (!solver.add_clause(clause))
      break;
  }
  detail::Cdcl::Limits l;
  if (limits.time_limit > 0)
    l.deadline = start + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(limits.time_limit));
  l.max_conflicts = limits.max_conflicts;
  l.stop = limits.stop;
  SolverVerdict v;
  switch (solver.solve(l)) {
  case detail::Cdcl::Result::Sat:
    v.status = Verdict::Sat;
    v.model.resize(f.variable_count);
    for (int var = 1; var <= f.variable_count; ++var)
      v.model[var - 1] = solver.model_value(var);
    break;
  case detail::Cdcl::Result::Unsat:
    v.status = Verdict::Unsat;
    break;
  case detail::Cdcl::Result::Unknown:
    v.status = Verdict::Unknown;
    if (limits.stop && limits.stop->load()) {
      v.reason = UnknownReason::Interrupted;
      v.detail = "interrupted";
    } else if (limits.max_conflicts && solver.stats().conflicts >= limits.max_conflicts) {
      v.reason = UnknownReason::Timeout;
      v.detail = "conflict budget exhausted";
    } else {
      v.reason = UnknownReason::Timeout;
      v.detail = "time limit reached";
    }
    break;
  }
  v.seconds = seconds_since(start);
  return v;
}

SolverVerdict solve(const CnfFormula &f, const SolverConfig &config) {
  if (!(config.time_limit > 0))
    throw std::invalid_argument("solver time limit must be positive");
  SolverVerdict v;
  if (!config.external_command.empty()) {
    v = run_external(f, config);
  } else if (f.variable_count > config.embedded_threshold && !config.force_embedded) {
    v = unknown(UnknownReason::SolverError,
                "formula has " + std::to_string(f.variable_count) +
                    " variables, above the embedded solver threshold of " +
                    std::to_string(config.embedded_threshold));
  } else {
    EmbeddedLimits limits;
    limits.time_limit = config.time_limit;
    limits.stop = config.stop;
    v = solve_embedded(f, limits);
  }
  if (v.sat() && !satisfies(f, v.model)) {
    const double secs = v.seconds;
    v = unknown(UnknownReason::SolverError, "model does not satisfy the formula");
    v.seconds = secs;
  }
  return v;
}

} // namespace circsat

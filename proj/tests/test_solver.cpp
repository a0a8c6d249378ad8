#include <gtest/gtest.h>

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "circsat/cnf.hpp"
#include "circsat/solver.hpp"

using namespace circsat;

namespace {

const std::string kDimacsSolve = std::string(CIRCSAT_BIN_DIR) + "/dimacs_solve";

CnfFormula random_3cnf(std::mt19937 &rng, int vars, int clauses) {
  CnfFormula f;
  f.variable_count = vars;
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    for (int k = 0; k < 3; ++k) {
      const int v = 1 + static_cast<int>(rng() % vars);
      clause.push_back(rng() % 2 ? v : -v);
    }
    f.add_clause(clause);
  }
  return f;
}

bool brute_force_sat(const CnfFormula &f) {
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << f.variable_count); ++m) {
    std::vector<bool> model(f.variable_count);
    for (int v = 0; v < f.variable_count; ++v)
      model[v] = (m >> v) & 1;
    if (satisfies(f, model))
      return true;
  }
  return false;
}

// A shell script standing in for an external solver.
std::string script(const std::string &name, const std::string &body) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("circsat_test_" + name + "_" + std::to_string(::getpid()) + ".sh");
  std::ofstream(path) << "#!/bin/sh\n" << body << '\n';
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return path.string();
}

SolverConfig external(const std::string &command, double limit = 30) {
  SolverConfig c;
  c.external_command = split_command(command);
  c.time_limit = limit;
  return c;
}

CnfFormula contradiction() {
  CnfFormula f;
  f.variable_count = 1;
  f.add_clause({1});
  f.add_clause({-1});
  return f;
}

} // namespace

TEST(Dimacs, Emit) {
  CnfFormula a;
  a.variable_count = 1;
  a.add_clause({1});
  EXPECT_EQ(emit_dimacs(a), "p cnf 1 1\n1 0\n");
  CnfFormula b;
  b.variable_count = 2;
  b.add_clause({1, -2});
  b.add_clause({2});
  EXPECT_EQ(emit_dimacs(b), "p cnf 2 2\n1 -2 0\n2 0\n");
  CnfFormula c;
  c.variable_count = 7;
  EXPECT_EQ(emit_dimacs(c), "p cnf 7 0\n");
}

TEST(Dimacs, ParseRoundTrip) {
  std::mt19937 rng(3);
  const CnfFormula f = random_3cnf(rng, 10, 30);
  EXPECT_EQ(parse_dimacs(emit_dimacs(f)), f);
  const CnfFormula g = parse_dimacs("c hello\np cnf 3 2\n1 -3\n 0 2\n3 0\n");
  EXPECT_EQ(g.clauses, (std::vector<std::vector<int>>{{1, -3}, {2, 3}}));
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n3 0\n"), std::invalid_argument);
  EXPECT_THROW(parse_dimacs("1 2 0\n"), std::invalid_argument);
  EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 0\n"), std::invalid_argument);
}

TEST(SplitCommand, Quotes) {
  EXPECT_EQ(split_command("kissat -q {}"), (std::vector<std::string>{"kissat", "-q", "{}"}));
  EXPECT_EQ(split_command(" a 'b c' \"d e\" "), (std::vector<std::string>{"a", "b c", "d e"}));
}

TEST(Embedded, Basics) {
  EXPECT_TRUE(solve_embedded(contradiction()).unsat());
  CnfFormula empty;
  empty.variable_count = 3;
  const SolverVerdict v = solve_embedded(empty);
  ASSERT_TRUE(v.sat());
  EXPECT_EQ(v.model.size(), 3u);
  CnfFormula with_empty_clause;
  with_empty_clause.variable_count = 1;
  with_empty_clause.add_clause(std::vector<int>{});
  EXPECT_TRUE(solve_embedded(with_empty_clause).unsat());
}

TEST(Embedded, AgreesWithBruteForce) {
  std::mt19937 rng(17);
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int vars = 3 + static_cast<int>(rng() % 10);
    const int clauses = static_cast<int>(vars * (3.0 + (rng() % 300) / 100.0));
    const CnfFormula f = random_3cnf(rng, vars, clauses);
    const SolverVerdict v = solve_embedded(f);
    const bool expected = brute_force_sat(f);
    ASSERT_EQ(v.sat(), expected) << emit_dimacs(f);
    ASSERT_EQ(v.unsat(), !expected);
    if (v.sat())
      ASSERT_TRUE(satisfies(f, v.model));
    (expected ? sat : unsat)++;
  }
  EXPECT_GT(sat, 20);
  EXPECT_GT(unsat, 20);
}

TEST(Embedded, PigeonholeIsUnsat) {
  // 7 pigeons, 6 holes
  const int p = 7, h = 6;
  CnfFormula f;
  f.variable_count = p * h;
  auto var = [&](int i, int j) { return i * h + j + 1; };
  for (int i = 0; i < p; ++i) {
    std::vector<int> c;
    for (int j = 0; j < h; ++j)
      c.push_back(var(i, j));
    f.add_clause(c);
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b)
        f.add_clause({-var(a, j), -var(b, j)});
  EXPECT_TRUE(solve_embedded(f).unsat());
}

TEST(Embedded, Limits) {
  std::atomic<bool> stop{true};
  std::mt19937 rng(5);
  const CnfFormula f = random_3cnf(rng, 200, 852);
  EmbeddedLimits limits;
  limits.stop = &stop;
  const SolverVerdict v = solve_embedded(f, limits);
  if (v.unknown())
    EXPECT_EQ(v.reason, UnknownReason::Interrupted);
}

TEST(External, SatAndUnsat) {
  const SolverConfig config = external(kDimacsSolve);
  EXPECT_TRUE(run_external(contradiction(), config).unsat());
  CnfFormula f;
  f.variable_count = 2;
  f.add_clause({1, 2});
  const SolverVerdict v = run_external(f, config);
  ASSERT_TRUE(v.sat());
  EXPECT_TRUE(satisfies(f, v.model));
  const SolverVerdict w = run_external(f, external(kDimacsSolve + " {} 10"));
  EXPECT_TRUE(w.sat());
}

TEST(External, AgreesWithEmbedded) {
  std::mt19937 rng(23);
  const SolverConfig config = external(kDimacsSolve);
  for (int trial = 0; trial < 30; ++trial) {
    const CnfFormula f = random_3cnf(rng, 20, trial < 10 ? 40 : 20 * 4 + (trial % 3) * 10);
    const SolverVerdict a = run_external(f, config);
    const SolverVerdict b = solve_embedded(f);
    ASSERT_EQ(a.status, b.status);
    if (trial < 10)
      EXPECT_TRUE(a.sat());  // ratio 2.0
  }
}

TEST(External, Timeout) {
  const std::string slow = script("slow", "sleep 30\necho 's SATISFIABLE'");
  const auto start = std::chrono::steady_clock::now();
  const SolverVerdict v = run_external(contradiction(), external(slow, 0.3));
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(v.unknown());
  EXPECT_EQ(v.reason, UnknownReason::Timeout);
  EXPECT_LT(elapsed, 10);
  std::filesystem::remove(slow);
}

TEST(External, SolverErrors) {
  const std::string crash = script("crash", "echo oops\nexit 3");
  SolverVerdict v = run_external(contradiction(), external(crash));
  EXPECT_TRUE(v.unknown());
  EXPECT_EQ(v.reason, UnknownReason::SolverError);

  const std::string bad_model = script("badmodel", "echo 's SATISFIABLE'\necho 'v 1 x 0'");
  v = run_external(contradiction(), external(bad_model));
  EXPECT_EQ(v.reason, UnknownReason::SolverError);

  const std::string unterminated = script("unterminated", "echo 's SATISFIABLE'\necho 'v 1'");
  v = run_external(contradiction(), external(unterminated));
  EXPECT_EQ(v.reason, UnknownReason::SolverError);

  // A model that does not satisfy the formula is caught by solve().
  const std::string liar = script("liar", "echo 's SATISFIABLE'\necho 'v 1 0'");
  v = solve(contradiction(), external(liar));
  EXPECT_TRUE(v.unknown());
  EXPECT_EQ(v.reason, UnknownReason::SolverError);

  v = run_external(contradiction(), external("/nonexistent/solver"));
  EXPECT_EQ(v.reason, UnknownReason::SolverError);
  for (const auto &s : {crash, bad_model, unterminated, liar})
    std::filesystem::remove(s);
}

TEST(ParseSolverOutput, Conventions) {
  SolverVerdict v = parse_solver_output("c comment\ns SATISFIABLE\nv -1 2\nv 3 0\n", 3);
  ASSERT_TRUE(v.sat());
  EXPECT_EQ(v.model, (std::vector<bool>{false, true, true}));
  EXPECT_TRUE(parse_solver_output("s UNSATISFIABLE\n", 3).unsat());
  EXPECT_EQ(parse_solver_output("nothing\n", 3).reason, UnknownReason::SolverError);
  EXPECT_EQ(parse_solver_output("s SATISFIABLE\nv 4 0\n", 3).reason, UnknownReason::SolverError);
}

TEST(Solve, Dispatch) {
  SolverConfig embedded;
  EXPECT_TRUE(solve(contradiction(), embedded).unsat());
  SolverConfig tiny;
  tiny.embedded_threshold = 0;
  const SolverVerdict refused = solve(contradiction(), tiny);
  EXPECT_TRUE(refused.unknown());
  EXPECT_EQ(refused.reason, UnknownReason::SolverError);
  tiny.force_embedded = true;
  EXPECT_TRUE(solve(contradiction(), tiny).unsat());
  EXPECT_TRUE(solve(contradiction(), external(kDimacsSolve)).unsat());
  SolverConfig zero;
  zero.time_limit = 0;
  EXPECT_THROW(solve(contradiction(), zero), std::invalid_argument);
}

TEST(Solve, KeepFiles) {
  SolverConfig config = external(kDimacsSolve);
  config.keep_files = true;
  testing::internal::CaptureStderr();
  EXPECT_TRUE(run_external(contradiction(), config).unsat());
  const std::string err = testing::internal::GetCapturedStderr();
  const auto pos = err.find('/');
  ASSERT_NE(pos, std::string::npos) << err;
  std::string path = err.substr(pos);
  while (!path.empty() && std::isspace(static_cast<unsigned char>(path.back())))
    path.pop_back();
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), emit_dimacs(contradiction()));
  std::filesystem::remove(path);
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "pfasync/encoding.hpp"
#include "pfasync/external.hpp"
#include "pfasync/families.hpp"
#include "pfasync/solver.hpp"
#include "test_util.hpp"

using namespace pfasync;
using sat::Verdict;

namespace {

Pfa p4() { return make_family({Family::p, 4}); }

CnfFormula p4_formula(int len) { return encode(p4(), len, EncodeOptions{}).formula; }

CnfFormula random_3sat(std::mt19937_64& rng, int vars, int clauses) {
  CnfFormula F;
  F.num_vars = vars;
  std::uniform_int_distribution<int> var(1, vars), sign(0, 1);
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    for (int k = 0; k < 3; ++k) c.push_back(sign(rng) ? var(rng) : -var(rng));
    F.add(c);
  }
  return F;
}

// Pigeons p in [0,holes], holes h: variable p*holes + h + 1.
CnfFormula pigeonhole(int holes) {
  CnfFormula F;
  const int pigeons = holes + 1;
  F.num_vars = pigeons * holes;
  auto v = [&](int p, int h) { return p * holes + h + 1; };
  for (int p = 0; p < pigeons; ++p) {
    Clause c;
    for (int h = 0; h < holes; ++h) c.push_back(v(p, h));
    F.add(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) F.add({-v(p, h), -v(q, h)});
  return F;
}

sat::ExternalSolver fake(const char* mode) {
  ::setenv("FAKE_SOLVER_MODE", mode, 1);
  return sat::ExternalSolver{FAKE_SOLVER_PATH, {}, false, {}};
}

}  // namespace

TEST(Builtin, EncodingExamples) {
  EXPECT_EQ(sat::solve_builtin(p4_formula(1)).verdict, Verdict::unsat);
  const auto r = sat::solve_builtin(p4_formula(7));
  ASSERT_EQ(r.verdict, Verdict::sat);
  EXPECT_TRUE(satisfies(r.model, p4_formula(7)));
}

TEST(Builtin, TrivialFormulas) {
  CnfFormula empty_clause;
  empty_clause.num_vars = 2;
  empty_clause.add(Clause{});
  EXPECT_EQ(sat::solve_builtin(empty_clause).verdict, Verdict::unsat);
  EXPECT_EQ(sat::solve_builtin(CnfFormula{}).verdict, Verdict::sat);
  CnfFormula contradiction;
  contradiction.num_vars = 1;
  contradiction.add({1});
  contradiction.add({-1});
  EXPECT_EQ(sat::solve_builtin(contradiction).verdict, Verdict::unsat);
  CnfFormula taut;
  taut.num_vars = 2;
  taut.add({1, -1});
  taut.add({2, 2});
  const auto r = sat::solve_builtin(taut);
  ASSERT_EQ(r.verdict, Verdict::sat);
  EXPECT_TRUE(r.model[2]);
}

TEST(Builtin, RejectsInvalidFormula) {
  CnfFormula F;
  F.num_vars = 1;
  F.add({2});
  EXPECT_THROW(sat::solve_builtin(F), InputError);
}

TEST(Builtin, AgreesWithEnumerationOnRandom3Sat) {
  std::mt19937_64 rng(2024);
  int sat_count = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int vars = 3 + trial % 12;
    const auto F = random_3sat(rng, vars, static_cast<int>(vars * 4.3));
    const auto r = sat::solve_builtin(F, {}, trial);
    ASSERT_NE(r.verdict, Verdict::budget_exceeded);
    EXPECT_EQ(r.verdict == Verdict::sat, testutil::brute_sat(F)) << "trial " << trial;
    if (r.verdict == Verdict::sat) {
      ++sat_count;
      EXPECT_TRUE(satisfies(r.model, F));
    }
  }
  EXPECT_GT(sat_count, 40);
  EXPECT_LT(sat_count, 360);
}

TEST(Builtin, PigeonholeIsUnsat) {
  for (int holes = 1; holes <= 6; ++holes) EXPECT_EQ(sat::solve_builtin(pigeonhole(holes)).verdict, Verdict::unsat);
}

TEST(Builtin, LargerSatisfiableInstances) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto F = random_3sat(rng, 200, 700);
    const auto r = sat::solve_builtin(F);
    ASSERT_EQ(r.verdict, Verdict::sat);
    EXPECT_TRUE(satisfies(r.model, F));
  }
}

TEST(Builtin, ConflictBudgetIsHonoured) {
  const auto r = sat::solve_builtin(pigeonhole(9), sat::Budget{50, 0});
  EXPECT_EQ(r.verdict, Verdict::budget_exceeded);
  EXPECT_LE(r.stats.conflicts, 51);
}

TEST(Builtin, DeterministicUnderFixedSeed) {
  std::mt19937_64 rng(4);
  const auto F = random_3sat(rng, 120, 480);
  const auto a = sat::solve_builtin(F, {}, 77);
  const auto b = sat::solve_builtin(F, {}, 77);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.stats.decisions, b.stats.decisions);
  EXPECT_EQ(a.stats.conflicts, b.stats.conflicts);
}

TEST(Builtin, IncrementalClauseAddition) {
  sat::Solver s(3);
  const Clause c1{1, 2}, c2{-1}, c3{-2, 3};
  EXPECT_TRUE(s.add_clause(c1));
  EXPECT_TRUE(s.add_clause(c2));
  EXPECT_TRUE(s.add_clause(c3));
  EXPECT_EQ(s.solve(), Verdict::sat);
  const auto m = s.model();
  EXPECT_FALSE(m[1]);
  EXPECT_TRUE(m[2]);
  EXPECT_TRUE(m[3]);
  const Clause c4{-3};
  EXPECT_FALSE(s.add_clause(c4));
  EXPECT_EQ(s.solve(), Verdict::unsat);
}

TEST(VerifyModel, DetectsViolations) {
  CnfFormula F;
  F.num_vars = 2;
  F.add({1, 2});
  EXPECT_NO_THROW(sat::verify_model(F, Model{false, true, false}));
  EXPECT_THROW(sat::verify_model(F, Model{false, false, false}), IntegrityError);
}

TEST(ExternalParse, VerdictAndModelLines) {
  auto r = sat::detail::parse_result("SAT\n1 -2 3 0\n");
  EXPECT_TRUE(r.have_verdict && r.sat && r.terminated);
  EXPECT_EQ(r.literals, (std::vector<long long>{1, -2, 3}));
  r = sat::detail::parse_result("c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n");
  EXPECT_TRUE(r.sat && r.terminated);
  EXPECT_EQ(r.literals.size(), 3u);
  r = sat::detail::parse_result("s UNSATISFIABLE\n");
  EXPECT_TRUE(r.have_verdict && !r.sat);
  r = sat::detail::parse_result("UNSAT\n");
  EXPECT_TRUE(r.have_verdict && !r.sat);
  EXPECT_FALSE(sat::detail::parse_result("INDET\n").have_verdict);
  EXPECT_THROW(sat::detail::parse_result("SAT\n1 x 0\n"), ProcessError);
}

TEST(External, SameVerdictsAsBuiltin) {
  for (const char* mode : {"minisat", "competition"}) {
    const auto solver = fake(mode);
    EXPECT_EQ(sat::solve_external(p4_formula(1), solver).verdict, Verdict::unsat);
    const auto r = sat::solve_external(p4_formula(7), solver);
    ASSERT_EQ(r.verdict, Verdict::sat);
    EXPECT_TRUE(satisfies(r.model, p4_formula(7)));
    CnfFormula empty_clause;
    empty_clause.num_vars = 1;
    empty_clause.add(Clause{});
    EXPECT_EQ(sat::solve_external(empty_clause, solver).verdict, Verdict::unsat);
    EXPECT_EQ(sat::solve_external(CnfFormula{}, solver).verdict, Verdict::sat);
  }
}

TEST(External, CorruptModelIsIntegrityError) {
  const auto solver = fake("corrupt");
  EXPECT_THROW(sat::solve_external(p4_formula(7), solver), IntegrityError);
}

TEST(External, MalformedOutputIsProcessError) {
  EXPECT_THROW(sat::solve_external(p4_formula(7), fake("garbage")), ProcessError);
  EXPECT_THROW(sat::solve_external(p4_formula(7), fake("unterminated")), ProcessError);
}

TEST(External, TimeoutGivesBudgetExceeded) {
  const auto r = sat::solve_external(p4_formula(7), fake("hang"), sat::Budget{-1, 0.3});
  EXPECT_EQ(r.verdict, Verdict::budget_exceeded);
}

TEST(External, MissingExecutableIsConfigError) {
  EXPECT_THROW(sat::solve_external(p4_formula(1), sat::ExternalSolver{"/nonexistent/solver", {}, false, {}}),
               ConfigError);
  EXPECT_THROW(sat::solve_external(p4_formula(1), sat::ExternalSolver{"no-such-solver-on-path", {}, false, {}}),
               ConfigError);
  EXPECT_THROW(sat::solve_external(p4_formula(1), sat::ExternalSolver{}), ConfigError);
}

TEST(External, BackendsAgreeOnRandomEncodings) {
  const auto external = sat::external_backend(fake("minisat"));
  const auto builtin = sat::builtin_backend();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 7;
    const Pfa A = testutil::random_pfa(rng, n, 2, 0.85);
    EncodeOptions o;
    o.mode = trial % 2 ? SyncMode::exact : SyncMode::careful;
    o.binary_opt = trial % 3 != 0;
    const auto F = encode(A, 1 + trial % 10, o).formula;
    EXPECT_EQ(external(F, {}).verdict, builtin(F, {}).verdict) << "trial " << trial;
  }
}

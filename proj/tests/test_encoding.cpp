#include <gtest/gtest.h>

#include <random>
#include <set>

#include "pfasync/dimacs.hpp"
#include "pfasync/encoding.hpp"
#include "pfasync/families.hpp"
#include "pfasync/oracles.hpp"
#include "pfasync/solver.hpp"
#include "test_util.hpp"

using namespace pfasync;

namespace {

Pfa p4() { return make_family({Family::p, 4}); }

bool satisfiable(const CnfFormula& F) {
  const auto r = sat::solve_builtin(F);
  EXPECT_NE(r.verdict, sat::Verdict::budget_exceeded);
  return r.verdict == sat::Verdict::sat;
}

EncodeOptions opts(SyncMode mode, bool binary = false, bool ladder = false, bool merge = false, bool ladder_letters = false) {
  EncodeOptions o;
  o.mode = mode;
  o.binary_opt = binary;
  o.ladder = ladder;
  o.merge_parallel = merge;
  o.ladder_letters = ladder_letters;
  return o;
}

long long eq5(long long n, long long m, long long len) { return len * (m * (m - 1) / 2 + m * n + 1) + n * (n + 1) / 2; }

}  // namespace

TEST(EncodeCsw, PlainCountsSmallExample) {
  const auto e = encode(p4(), 1, opts(SyncMode::careful));
  EXPECT_EQ(e.formula.num_vars, 10);
  EXPECT_EQ(e.formula.num_clauses(), 20u);
}

TEST(EncodeCsw, BinaryLadderClauseCount) {
  const auto e = encode(p4(), 1, opts(SyncMode::careful, true, true));
  EXPECT_EQ(e.formula.num_clauses(), 24u);
  EXPECT_EQ(e.formula.num_vars, 1 * (4 + 1) + 2 * 4 - 1);
}

TEST(EncodeCsw, CountFormulasOverGrid) {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 10; ++n) {
    for (int m = 2; m <= 4; ++m) {
      const Pfa A = testutil::random_pfa(rng, n, m, 0.7);
      for (int len = 1; len <= 8; ++len) {
        const auto plain = encode(A, len, opts(SyncMode::careful));
        EXPECT_EQ(plain.formula.num_vars, (m + n) * len + n);
        EXPECT_EQ(static_cast<long long>(plain.formula.num_clauses()), eq5(n, m, len));
        if (m != 2) continue;
        const auto bl = encode(A, len, opts(SyncMode::careful, true, true));
        EXPECT_EQ(static_cast<long long>(bl.formula.num_clauses()), 2LL * len * n + 5LL * n - 4);
        EXPECT_EQ(bl.formula.num_vars, len * (n + 1) + 2 * n - 1);
      }
    }
  }
}

TEST(EncodeCsw, TransitionGroupHasOneClausePerStateLetterStep) {
  // Plain encoding: I (n) + per step (L: m(m-1)/2 + 1, T: m n) + S.
  const Pfa A = p4();
  const int n = 4, m = 2, len = 3;
  const auto e = encode(A, len, opts(SyncMode::careful));
  const auto total = static_cast<long long>(e.formula.num_clauses());
  const long long letter_group = len * (m * (m - 1) / 2 + 1);
  const long long sync_group = n * (n - 1) / 2;
  EXPECT_EQ(total - n - letter_group - sync_group, static_cast<long long>(len) * m * n);
}

TEST(EncodeCsw, VariableNumberingIsInjective) {
  for (bool binary : {false, true}) {
    const auto e = encode(p4(), 5, opts(SyncMode::careful, binary, true));
    const auto& vm = e.varmap;
    std::set<int> seen;
    for (int t = 0; t <= vm.len; ++t)
      for (int j = 0; j < vm.n; ++j) EXPECT_TRUE(seen.insert(vm.y(j, t)).second);
    for (int t = 1; t <= vm.len; ++t)
      for (int i = 0; i < vm.letter_slots(); ++i) EXPECT_TRUE(seen.insert(vm.x(i, t)).second);
    for (int j = 1; j < vm.n; ++j) EXPECT_TRUE(seen.insert(vm.sync_ladder(j)).second);
    EXPECT_EQ(static_cast<int>(seen.size()), vm.num_vars);
    EXPECT_EQ(*seen.begin(), 1);
    EXPECT_EQ(*seen.rbegin(), vm.num_vars);
  }
}

TEST(EncodeCsw, Errors) {
  EXPECT_THROW(encode(p4(), 0, opts(SyncMode::careful)), InputError);
  EXPECT_THROW(encode(Pfa(3, 3), 1, opts(SyncMode::careful, true)), OptionError);
  EXPECT_THROW(encode(Pfa(3, 1), 1, opts(SyncMode::exact, true)), OptionError);
}

TEST(Ladder, SizesMatchFourKMinusFour) {
  const std::vector<int> four{1, 2, 3, 4};
  const auto c4 = ladder_amo(four, 5);
  EXPECT_EQ(c4.size(), 12u);
  std::set<int> fresh;
  for (const auto& c : c4)
    for (Lit l : c)
      if (std::abs(l) >= 5) fresh.insert(std::abs(l));
  EXPECT_EQ(fresh, (std::set<int>{5, 6, 7}));
  const std::vector<int> two{1, 2};
  EXPECT_EQ(ladder_amo(two, 3).size(), 4u);
  const std::vector<int> one{1};
  EXPECT_THROW(ladder_amo(one, 2), InputError);
}

// Truth-table check: for every assignment of the k base variables, the ladder
// clauses extend to a model iff exactly one base variable is true. (The fixed
// ends f_0 = 1 and f_k = 0 rule out the all-false assignment; at the final
// step of the encoding some state is always active, so this is harmless.)
TEST(Ladder, ExtendsExactlyTheOneHotAssignments) {
  for (int k = 2; k <= 5; ++k) {
    std::vector<int> vars(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) vars[i] = i + 1;
    const auto clauses = ladder_amo(vars, k + 1);
    for (int bits = 0; bits < (1 << k); ++bits) {
      CnfFormula F;
      F.num_vars = 2 * k - 1;
      for (const auto& c : clauses) F.add(c);
      for (int i = 0; i < k; ++i) F.add({(bits >> i) & 1 ? i + 1 : -(i + 1)});
      EXPECT_EQ(testutil::brute_sat(F), __builtin_popcount(bits) == 1) << "k=" << k << " bits=" << bits;
    }
  }
}

TEST(EncodeEsw, SingleDefinedTransition) {
  Pfa A(5, 2);
  A.set(2, 1, 4);
  EXPECT_TRUE(satisfiable(encode(A, 1, opts(SyncMode::exact)).formula));
  EXPECT_FALSE(satisfiable(encode(A, 1, opts(SyncMode::careful)).formula));
}

TEST(EncodeEsw, CompleteAutomataAgreeWithCareful) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Pfa C = testutil::random_complete(rng, 3 + trial % 4, 2);
    for (int len = 1; len <= 6; ++len)
      EXPECT_EQ(satisfiable(encode(C, len, opts(SyncMode::exact)).formula),
                satisfiable(encode(C, len, opts(SyncMode::careful)).formula));
  }
}

TEST(EncodeEsw, DeadStateSeparatesTheModes) {
  // Cerny(4) plus a state with no outgoing transitions.
  const Pfa C = make_family({Family::cerny, 4});
  Pfa A(5, 2);
  for (State q = 0; q < 4; ++q)
    for (Letter a = 0; a < 2; ++a) A.set(q, a, C.next(q, a));
  const int len = 9;
  EXPECT_TRUE(satisfiable(encode(A, len, opts(SyncMode::exact)).formula));
  for (int l = 1; l <= 12; ++l) EXPECT_FALSE(satisfiable(encode(A, l, opts(SyncMode::careful)).formula));
}

TEST(EncodeCsw, ModelsDecodeToCarefulWords) {
  const Pfa A = p4();
  const auto e = encode(A, 7, opts(SyncMode::careful, true));
  const auto r = sat::solve_builtin(e.formula);
  ASSERT_EQ(r.verdict, sat::Verdict::sat);
  EXPECT_TRUE(is_csw(A, decode_word(r.model, e.varmap)));
}

// Every synchronizing word of length l is realised by some model: pin the
// letter variables to the word and check satisfiability; words that do not
// synchronize must be rejected.
TEST(EncodeCsw, LetterAssignmentsCorrespondToWords) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const Pfa A = testutil::random_pfa(rng, 3 + trial % 3, 2, 0.85);
    for (SyncMode mode : {SyncMode::careful, SyncMode::exact}) {
      for (bool binary : {false, true}) {
        const int len = 1 + trial % 4;
        const auto e = encode(A, len, opts(mode, binary));
        for (const auto& w : testutil::all_words(2, len)) {
          CnfFormula F = e.formula;
          for (int t = 1; t <= len; ++t) F.add({e.varmap.letter_lit(w[t - 1], t)});
          const bool expected = mode == SyncMode::careful ? testutil::brute_csw(A, w) : testutil::brute_esw(A, w);
          EXPECT_EQ(satisfiable(F), expected) << format_word(w);
        }
      }
    }
  }
}

TEST(EncodeCsw, OptionsDoNotChangeSatisfiability) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 7;
    const Pfa A = testutil::random_pfa(rng, n, 2, trial % 2 ? 0.9 : 1.0);
    const int len = 1 + trial % 6;
    for (SyncMode mode : {SyncMode::careful, SyncMode::exact}) {
      const bool base = satisfiable(encode(A, len, opts(mode)).formula);
      for (int mask = 1; mask < 16; ++mask) {
        const bool binary = mask & 1, ladder = mask & 2, merge = mask & 4, ladder_letters = mask & 8;
        if (binary && ladder_letters) continue;
        const auto e = encode(A, len, opts(mode, binary, ladder, merge, ladder_letters));
        EXPECT_EQ(satisfiable(e.formula), base) << "trial " << trial << " mask " << mask;
      }
    }
  }
}

TEST(EncodeEsw, AgreesWithSubsetSearchAndEnumeration) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const Pfa A = testutil::random_pfa(rng, n, 2, 0.5 + 0.05 * (trial % 8));
    const auto profile = length_profile(A, SyncMode::exact, 12);
    for (int len = 1; len <= 12; ++len) {
      const bool sat = satisfiable(encode(A, len, opts(SyncMode::exact, true)).formula);
      EXPECT_EQ(sat, static_cast<bool>(profile[len])) << "trial " << trial << " len " << len;
      if (len <= 8) {
        EXPECT_EQ(sat, testutil::exists_of_length(A, len, false));
      }
    }
  }
}

TEST(EncodeCsw, MergeParallelShrinksFormula) {
  Pfa A(3, 2, {1, 1, 2, 0, 2, 2});
  auto plain = encode(A, 2, opts(SyncMode::careful));
  auto merged = encode(A, 2, opts(SyncMode::careful, false, false, true));
  EXPECT_LT(merged.formula.num_clauses(), plain.formula.num_clauses());
  EXPECT_EQ(satisfiable(merged.formula), satisfiable(plain.formula));
}

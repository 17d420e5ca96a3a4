#include <gtest/gtest.h>

#include <random>

#include "pfasync/automaton_io.hpp"
#include "pfasync/families.hpp"
#include "pfasync/oracles.hpp"
#include "pfasync/pfa.hpp"
#include "test_util.hpp"

using namespace pfasync;

namespace {

Pfa p4() { return make_family({Family::p, 4}); }

StateSet set_of(int n, std::initializer_list<State> xs) { return StateSet::of(n, xs); }

}  // namespace

TEST(StateSet, BasicOperations) {
  StateSet s(70);
  EXPECT_TRUE(s.empty());
  s.insert(0);
  s.insert(69);
  s.insert(64);
  EXPECT_EQ(s.size(), 3);
  EXPECT_TRUE(s.contains(69));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.members(), (std::vector<State>{0, 64, 69}));
  s.erase(64);
  EXPECT_EQ(s.size(), 2);
  EXPECT_TRUE(s.subset_of(StateSet::full(70)));
  EXPECT_FALSE(StateSet::full(70).subset_of(s));
  EXPECT_THROW(s.insert(70), InputError);
}

TEST(Pfa, TableValidation) {
  EXPECT_THROW(Pfa(0, 2), InputError);
  EXPECT_THROW(Pfa(2, 0), InputError);
  EXPECT_THROW(Pfa(2, 1, {0, 2}), InputError);
  EXPECT_THROW(Pfa(2, 1, {0}), InputError);
  Pfa A(2, 2, {1, kUndefined, 0, 0});
  EXPECT_EQ(A.density(), 3);
  EXPECT_FALSE(A.complete());
  EXPECT_TRUE(A.total(0));
  EXPECT_FALSE(A.total(1));
  EXPECT_TRUE(A.has_total_letter());
  A.set(0, 1, 1);
  EXPECT_TRUE(A.complete());
  EXPECT_THROW(A.set(0, 2, 0), InputError);
  EXPECT_THROW(A.set(0, 0, 5), InputError);
}

TEST(ApplyCareful, P4Witness) {
  const Pfa A = p4();
  const auto img = apply_careful(A, StateSet::full(4), parse_word("aababaa"));
  ASSERT_TRUE(img.has_value());
  EXPECT_EQ(*img, set_of(4, {1}));  // state 2 in 1-based naming
}

TEST(ApplyCareful, EmptyWordIsIdentity) {
  const Pfa A = p4();
  const auto S = set_of(4, {0, 2});
  EXPECT_EQ(apply_careful(A, S, Word{}), S);
  EXPECT_EQ(apply_exact(A, S, Word{}), S);
}

TEST(ApplyCareful, UndefinedLetterGivesMarker) {
  EXPECT_FALSE(apply_careful(p4(), StateSet::full(4), parse_word("b")).has_value());
}

TEST(ApplyCareful, LetterOutOfRangeIsInputError) {
  EXPECT_THROW(apply_careful(p4(), StateSet::full(4), Word{2}), InputError);
  EXPECT_THROW(apply_exact(p4(), StateSet::full(4), Word{-1}), InputError);
}

TEST(ApplyExact, Examples) {
  const Pfa A = p4();
  EXPECT_TRUE(apply_exact(A, set_of(4, {3}), parse_word("b")).empty());
  EXPECT_EQ(apply_exact(A, StateSet::full(4), parse_word("b")), set_of(4, {1, 2, 3}));
}

TEST(IsCsw, Examples) {
  EXPECT_TRUE(is_csw(p4(), parse_word("aababaa")));
  EXPECT_FALSE(is_csw(p4(), parse_word("b")));
  EXPECT_TRUE(is_csw(make_family({Family::h_double_prime, 5}), parse_word("abaaaabaaaaba")));
}

TEST(IsEsw, Examples) {
  EXPECT_TRUE(is_esw(p4(), parse_word("aababaa")));
  EXPECT_FALSE(is_esw(p4(), Word{}));
  Pfa single(5, 2);
  single.set(3, 1, 0);
  EXPECT_TRUE(is_esw(single, parse_word("b")));
  EXPECT_FALSE(is_csw(single, parse_word("b")));
}

TEST(ACyclic, Examples) {
  EXPECT_EQ(a_cyclic_states(p4(), 0), set_of(4, {1, 2}));
  Pfa id(5, 1, {0, 1, 2, 3, 4});
  EXPECT_EQ(a_cyclic_states(id, 0), StateSet::full(5));
  Pfa cycle(5, 1, {1, 2, 3, 4, 0});
  EXPECT_EQ(a_cyclic_states(cycle, 0), StateSet::full(5));
  EXPECT_THROW(a_cyclic_states(p4(), 1), PreconditionError);
}

TEST(CyclicFilter, Examples) {
  EXPECT_FALSE(cyclic_filter(p4()));

  Pfa moved = p4();
  moved.set(3, 1, 0);
  moved.clear(2, 1);
  EXPECT_TRUE(cyclic_filter(moved));
  EXPECT_FALSE(power_bfs_csw(moved).found);

  Pfa constant(4, 2, {0, 1, 0, 2, 0, 3, 0, kUndefined});
  EXPECT_FALSE(cyclic_filter(constant));

  EXPECT_THROW(cyclic_filter(Pfa(3, 3)), UnsupportedError);
}

TEST(Words, FormatAndParse) {
  EXPECT_EQ(format_word(parse_word("aababaa")), "aababaa");
  EXPECT_EQ(parse_word(""), Word{});
  EXPECT_THROW(parse_word("a?b"), ParseError);
  EXPECT_EQ(power(parse_word("ab"), 3), parse_word("ababab"));
  EXPECT_EQ(concat({parse_word("a"), parse_word("bb")}), parse_word("abb"));
}

// Properties over random automata, checked against a std::set reference.
class PfaProperties : public ::testing::TestWithParam<int> {};

TEST_P(PfaProperties, SemanticsAgreeWithReference) {
  std::mt19937_64 rng(GetParam());
  const int n = 1 + GetParam() % 7;
  const int m = 1 + GetParam() % 3;
  const Pfa A = testutil::random_pfa(rng, n, m, 0.8);
  const Pfa C = testutil::random_complete(rng, n, m);
  std::uniform_int_distribution<int> letter(0, m - 1), len(0, 6);
  for (int trial = 0; trial < 40; ++trial) {
    Word w(static_cast<std::size_t>(len(rng)));
    for (auto& a : w) a = letter(rng);

    const auto careful = apply_careful(A, StateSet::full(n), w);
    const auto ref = testutil::careful_image(A, w);
    ASSERT_EQ(careful.has_value(), ref.has_value());
    if (careful) {
      EXPECT_EQ(careful->members(), std::vector<State>(ref->begin(), ref->end()));
      EXPECT_EQ(*careful, apply_exact(A, StateSet::full(n), w));
    }
    const auto exact = apply_exact(A, StateSet::full(n), w);
    const auto exact_ref = testutil::exact_image(A, w);
    EXPECT_EQ(exact.members(), std::vector<State>(exact_ref.begin(), exact_ref.end()));
    EXPECT_EQ(is_csw(A, w), testutil::brute_csw(A, w));
    EXPECT_EQ(is_esw(A, w), testutil::brute_esw(A, w));

    // Splitting the word does not change the exact image.
    for (std::size_t k = 0; k <= w.size(); ++k) {
      const Word u(w.begin(), w.begin() + static_cast<long>(k)), v(w.begin() + static_cast<long>(k), w.end());
      EXPECT_EQ(apply_exact(A, apply_exact(A, StateSet::full(n), u), v), exact);
    }

    // Exact application is monotone and never grows a set.
    StateSet S(n);
    for (State q = 0; q < n; q += 2) S.insert(q);
    const auto small = apply_exact(A, S, w);
    EXPECT_LE(small.size(), S.size());
    EXPECT_TRUE(small.subset_of(exact));

    // Complete automata: the two semantics coincide.
    const auto cc = apply_careful(C, S, w);
    ASSERT_TRUE(cc.has_value());
    EXPECT_EQ(*cc, apply_exact(C, S, w));
    EXPECT_EQ(is_csw(C, w), is_esw(C, w));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PfaProperties, ::testing::Range(1, 31));

TEST(AutomatonIo, TextRoundTrip) {
  const Pfa A = p4();
  const std::string text = write_automaton_text(A);
  EXPECT_EQ(text, "4 2\n1 1\n1 2\n2 3\n0 -\n");
  EXPECT_EQ(parse_automaton_text(text), A);
  EXPECT_EQ(parse_automaton(text), A);
}

TEST(AutomatonIo, JsonRoundTrip) {
  const Pfa A = p4();
  const auto j = automaton_to_json(A);
  EXPECT_EQ(j["n"], 4);
  EXPECT_TRUE(j["delta"][3][1].is_null());
  EXPECT_EQ(automaton_from_json(j), A);
  EXPECT_EQ(parse_automaton(j.dump()), A);
}

TEST(AutomatonIo, MalformedInputs) {
  EXPECT_THROW(parse_automaton_text(""), ParseError);
  EXPECT_THROW(parse_automaton_text("2 2\n0 1\n"), ParseError);
  EXPECT_THROW(parse_automaton_text("2 2\n0 1\n0 x\n"), ParseError);
  EXPECT_THROW(parse_automaton_text("2 1\n0\n5\n"), ParseError);
  EXPECT_THROW(parse_automaton(R"({"n":2,"m":1,"delta":[[0]]})"), ParseError);
  EXPECT_THROW(load_automaton("/nonexistent/file.aut"), InputError);
}

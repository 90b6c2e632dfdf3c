#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"

using namespace autseq;

namespace {

Word random_word(std::mt19937& rng, unsigned k, std::size_t max_len)
{
  Word w(rng() % (max_len + 1));
  for (auto& d : w)
    d = rng() % k;
  return w;
}

// All cycle lengths up to `bound` through simple exhaustive walking.
std::set<std::size_t> cycle_lengths(const Dfao& a, const std::vector<State>& comp, std::size_t bound)
{
  std::set<std::size_t> out;
  for (auto q : comp) {
    std::set<State> cur{q};
    for (std::size_t len = 1; len <= bound; ++len) {
      std::set<State> nxt;
      for (auto p : cur)
        for (Digit d = 0; d < a.k; ++d)
          nxt.insert(a.next(p, d));
      cur = nxt;
      if (cur.count(q))
        out.insert(len);
    }
  }
  return out;
}

} // namespace

TEST(DigitCodec, KnownExpansions)
{
  EXPECT_EQ(digits_of(37, 2), (Word{1, 0, 0, 1, 0, 1}));
  EXPECT_EQ(digits_of(22, 2), (Word{1, 0, 1, 1, 0}));
  EXPECT_EQ(fixed_digits(37, 2, 4), (Word{0, 1, 0, 1}));
  EXPECT_TRUE(fixed_digits(5, 2, 0).empty());
  EXPECT_EQ(fixed_digits(3, 3, 3), (Word{0, 1, 0}));
  EXPECT_EQ(value_of({1, 0, 1, 1, 0}, 2), 22u);
  EXPECT_EQ(value_of({}, 5), 0u);
  EXPECT_EQ(value_of({0, 1, 0, 1}, 2), 5u);
}

TEST(DigitCodec, RoundTripAllSmall)
{
  for (std::uint64_t k : {2, 3, 4, 5, 10})
    for (std::uint64_t n = 0; n < 1'000'000; n += (k == 2 ? 1 : 7))
      ASSERT_EQ(value_of(digits_of(n, k), k), n);
}

TEST(DigitCodec, FixedWidthCongruence)
{
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    std::uint64_t k = 2 + rng() % 9, t = rng() % 12, n = rng() % 100000000;
    ASSERT_EQ(value_of(fixed_digits(n, k, t), k), n % checked_pow(k, t));
  }
}

TEST(Automaton, RunExamples)
{
  auto five = bundled("five_state");
  EXPECT_EQ(five.state_names[run(five, five.initial, {0, 1, 1, 0})], "q2");
  auto tm = bundled("thue_morse");
  EXPECT_EQ(run(tm, tm.initial, {1, 1}), tm.initial);
  for (State q = 0; q < five.size(); ++q)
    EXPECT_EQ(run(five, q, {}), q);
}

TEST(Automaton, RunIsAFold)
{
  std::mt19937 rng(5);
  for (auto name : {"five_state", "six_state", "intro_base3", "rudin_shapiro"}) {
    auto a = bundled(name);
    for (int i = 0; i < 500; ++i) {
      auto u = random_word(rng, a.k, 12), v = random_word(rng, a.k, 12);
      State q = rng() % a.size();
      Word uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      ASSERT_EQ(run(a, q, uv), run(a, run(a, q, u), v));
    }
  }
}

TEST(Automaton, IntroSequencePrefix)
{
  auto a = bundled("intro_base3");
  const std::string expected = "abbbcbbcbbcbcbcbcbbcbcbcbcbbcbcbcbcbcbcbcbcbcbcbcbcb";
  std::string got;
  for (std::uint64_t n = 0; n < expected.size(); ++n)
    got += sequence_term(a, n);
  EXPECT_EQ(got, expected);
}

TEST(Automaton, IntroSequenceCharacterization)
{
  // a_n = b iff (n even and leading ternary digit 2) or (n odd and leading digit 1)
  auto a = bundled("intro_base3");
  for (std::uint64_t n = 1; n < 20000; ++n) {
    auto lead = digits_of(n, 3).front();
    bool b = (n % 2 == 0 && lead == 2) || (n % 2 == 1 && lead == 1);
    ASSERT_EQ(sequence_term(a, n), b ? "b" : "c") << n;
  }
}

TEST(Automaton, LeadingZerosAreHarmless)
{
  std::mt19937 rng(9);
  for (auto name : {"thue_morse", "rudin_shapiro", "six_state", "intro_base3"}) {
    auto a = bundled(name);
    ASSERT_EQ(a.next(a.initial, 0), a.initial);
    for (int i = 0; i < 300; ++i) {
      auto w = random_word(rng, a.k, 10);
      Word z(rng() % 4, 0);
      z.insert(z.end(), w.begin(), w.end());
      ASSERT_EQ(run(a, a.initial, w), run(a, a.initial, z));
    }
  }
}

TEST(Automaton, StateSequenceMatchesRun)
{
  auto a = bundled("six_state");
  auto s = state_sequence(a, 5000);
  for (std::uint64_t n = 0; n < s.size(); ++n)
    ASSERT_EQ(s[n], state_at(a, n));
}

TEST(Scc, IntroAutomaton)
{
  auto a = bundled("intro_base3");
  auto r = scc_decompose(a);
  ASSERT_EQ(r.components.size(), 2u);
  EXPECT_EQ(r.components[0], (std::vector<State>{0}));
  EXPECT_EQ(r.components[1], (std::vector<State>{1, 2}));
  EXPECT_FALSE(r.final_flags[0]);
  EXPECT_TRUE(r.final_flags[1]);
  EXPECT_EQ(r.periods[1], 1u);
  EXPECT_EQ(r.final_components(), (std::vector<std::size_t>{1}));
}

TEST(Scc, StronglyConnectedExamples)
{
  for (auto name : {"rudin_shapiro", "thue_morse", "five_state", "six_state", "perm3"}) {
    auto a = bundled(name);
    auto r = scc_decompose(a);
    ASSERT_EQ(r.components.size(), 1u) << name;
    EXPECT_TRUE(r.final_flags[0]);
    EXPECT_EQ(r.periods[0], 1u) << name;
  }
  auto one = make_dfao(2, {"s"}, {{"s", "s"}}, {"x"}, "s");
  EXPECT_EQ(scc_decompose(one).periods[0], 1u);
}

TEST(Scc, PeriodDividesEveryCycle)
{
  // a 3-cycle with a chord making cycle lengths 3 and 6 only: period 3
  auto a = make_dfao(2, {"x", "y", "z"}, {{"y", "y"}, {"z", "z"}, {"x", "x"}}, {"0", "0", "0"}, "x");
  auto r = scc_decompose(a);
  EXPECT_EQ(r.periods[0], 3u);
  for (auto len : cycle_lengths(a, r.components[0], 12))
    EXPECT_EQ(len % 3, 0u);
  // mixed lengths 2 and 3
  auto b = make_dfao(2, {"x", "y", "z"}, {{"y", "y"}, {"x", "z"}, {"x", "x"}}, {"0", "0", "0"}, "x");
  auto rb = scc_decompose(b);
  EXPECT_EQ(rb.periods[0], 1u);
  auto lens = cycle_lengths(b, rb.components[0], 6);
  EXPECT_TRUE(lens.count(2) && lens.count(3));
}

TEST(Sync, ThueMorseHasNone)
{
  EXPECT_FALSE(find_sync_word(bundled("thue_morse")).has_value());
  EXPECT_FALSE(find_sync_word(bundled("rudin_shapiro")).has_value());
}

TEST(Sync, ReturnedWordSynchronizes)
{
  // the intro automaton funnels into {b, c}, where every digit permutes
  EXPECT_FALSE(find_sync_word(bundled("intro_base3")).has_value());
  EXPECT_FALSE(find_sync_word(bundled("five_state")).has_value());
  auto a = make_dfao(3, {"x", "y", "z"}, {{"y", "x", "z"}, {"z", "y", "y"}, {"x", "y", "x"}},
                     {"0", "1", "1"}, "x");
  auto w = find_sync_word(a);
  ASSERT_TRUE(w.has_value());
  std::set<State> ends;
  for (State q = 0; q < a.size(); ++q)
    ends.insert(run(a, q, *w));
  EXPECT_EQ(ends.size(), 1u);
}

TEST(Sync, ShortestByBruteForce)
{
  // Cerny automaton C_4 has a shortest synchronizing word of length (4-1)^2 = 9
  auto c4 = make_dfao(2, {"0", "1", "2", "3"}, {{"1", "1"}, {"2", "1"}, {"3", "2"}, {"0", "3"}},
                      {"a", "a", "a", "a"}, "0");
  auto w = find_sync_word(c4);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->size(), 9u);
}

TEST(Power, ThueMorseSquare)
{
  auto tm = bundled("thue_morse");
  auto sq = power_automaton(tm, 2);
  EXPECT_EQ(sq.k, 4u);
  for (State q = 0; q < 2; ++q) {
    EXPECT_EQ(sq.next(q, 0), q);
    EXPECT_EQ(sq.next(q, 3), q);
    EXPECT_EQ(sq.next(q, 1), 1 - q);
    EXPECT_EQ(sq.next(q, 2), 1 - q);
  }
  auto same = power_automaton(tm, 1);
  EXPECT_EQ(same.delta, tm.delta);
}

TEST(Power, SameSequenceWhenZeroFixesInitial)
{
  auto a = bundled("six_state");
  for (unsigned p : {2u, 3u}) {
    auto b = power_automaton(a, p);
    for (std::uint64_t n = 0; n < 3000; ++n)
      ASSERT_EQ(sequence_term(a, n), sequence_term(b, n));
  }
}

TEST(Restrict, FinalComponentOfIntro)
{
  auto a = bundled("intro_base3");
  auto f = final_component(a, 0);
  EXPECT_EQ(f.state_names, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(f.state_names[f.initial], "b");
  EXPECT_TRUE(strongly_connected(f.table()));
  EXPECT_THROW(final_component(a, 1), std::invalid_argument);
}

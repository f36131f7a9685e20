#include <gtest/gtest.h>

#include "support.hpp"

namespace rp = relaxplan;
namespace ts = testing_support;

namespace {

const rp::APSymbol P1{"P1"}, P2{"P2"}, Q1{"Q1"}, S1{"S1"}, S2{"S2"};

// Word-word translation system of the worked example: z0 passes through,
// z0 -Q1/P1-> z3 -Q1/eps-> z0 and z0 -S1/P2-> z1 -S1/P2-> z2 -S2/eps-> z0.
rp::EditSystem word_word(double d1, double d2) {
  rp::EditSystem e;
  e.ap = {"P1", "P2", "Q1", "S1", "S2"};
  auto z0 = e.add_state("z0", true);
  auto z1 = e.add_state("z1");
  auto z2 = e.add_state("z2");
  auto z3 = e.add_state("z3");
  for (const auto& s : {P1, P2, rp::APSymbol{}}) e.add_transition(z0, s, s, 0, z0);
  e.add_transition(z0, S1, P2, 0, z1);
  e.add_transition(z1, S1, P2, 0, z2);
  e.add_transition(z2, S2, rp::EditSymbol::eps(), d2, z0);
  e.add_transition(z0, Q1, P1, 0, z3);
  e.add_transition(z3, Q1, rp::EditSymbol::eps(), d1, z0);
  return e;
}

// Minimum over explicitly enumerated accepting paths; no memoization, so it
// visits every path and shares nothing with the dynamic program.
std::optional<double> enumerate_paths(const rp::EditSystem& e, const rp::Word& x, const rp::Word& y, std::size_t z,
                                      std::size_t i, std::size_t j) {
  std::optional<double> best;
  if (i == x.size() && j == y.size() && e.accepting(z)) best = e.final_weight(z);
  for (const auto& t : e.transitions) {
    if (t.from != z) continue;
    std::size_t ni = i, nj = j;
    if (!t.exec.is_eps()) {
      if (i == x.size() || x[i] != t.exec.symbol()) continue;
      ++ni;
    }
    if (!t.spec.is_eps()) {
      if (j == y.size() || y[j] != t.spec.symbol()) continue;
      ++nj;
    }
    if (auto rest = enumerate_paths(e, x, y, t.to, ni, nj)) {
      const double c = t.weight + *rest;
      if (!best || c < *best) best = c;
    }
  }
  return best;
}

}  // namespace

TEST(EditSystemValidate, WellFormedHasNoViolations) { EXPECT_TRUE(rp::validate(word_word(3, 5)).empty()); }

TEST(EditSystemValidate, EpsEpsPairIsAViolation) {
  auto e = word_word(3, 5);
  e.add_transition(0, rp::EditSymbol::eps(), rp::EditSymbol::eps(), 1, 0);
  auto v = rp::validate(e);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("eps/eps"), std::string::npos);
}

TEST(EditSystemValidate, NegativeAndNonFiniteWeightsAreViolations) {
  auto e = word_word(3, 5);
  e.transitions[0].weight = -1;
  e.set_accepting(0, true, std::numeric_limits<double>::infinity());
  EXPECT_EQ(rp::validate(e).size(), 2u);
}

TEST(EditSystemValidate, ZeroWeightInsertionCycleIsAViolation) {
  rp::EditSystem e;
  e.ap = {"a"};
  auto z0 = e.add_state("z0", true);
  auto z1 = e.add_state("z1");
  e.add_transition(z0, rp::EditSymbol::eps(), rp::APSymbol{"a"}, 0, z1);
  e.add_transition(z1, rp::EditSymbol::eps(), rp::APSymbol{}, 0, z0);
  auto v = rp::validate(e);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].message.find("z0"), std::string::npos);
}

TEST(EditSystem, DeterminismCheck) {
  auto e = word_word(3, 5);
  EXPECT_TRUE(rp::is_deterministic(e));
  e.add_transition(0, S1, P2, 1, 0);
  EXPECT_FALSE(rp::is_deterministic(e));
}

TEST(Transduce, PassThroughIdentityIsFree) {
  auto e = word_word(3, 5);
  rp::Word w{P1, P2, rp::APSymbol{}};
  EXPECT_EQ(rp::wfse_transduce(e, w, w), 0.0);
}

TEST(Transduce, WordWordExampleCostsBothPenalties) {
  auto e = word_word(3, 5);
  EXPECT_EQ(rp::wfse_transduce(e, {Q1, Q1, S1, S1, S2}, {P1, P2, P2}), 8.0);
  EXPECT_EQ(rp::wfse_transduce(e, {Q1, Q1, P2, P2}, {P1, P2, P2}), 3.0);
  EXPECT_EQ(rp::wfse_transduce(e, {P1, S1, S1, S2}, {P1, P2, P2}), 5.0);
  EXPECT_FALSE(rp::wfse_transduce(e, {Q1, P2, P2}, {P1, P2, P2}));
}

TEST(Transduce, NoEpsilonMeansDifferentLengthsAreUnrelated) {
  rp::EditSystem e;
  e.ap = {"a"};
  auto z = e.add_state("z", true);
  for (const auto& s : rp::power_set(e.ap)) {
    for (const auto& t : rp::power_set(e.ap)) e.add_transition(z, s, t, s == t ? 0 : 1, z);
  }
  EXPECT_FALSE(rp::wfse_transduce(e, {rp::APSymbol{}}, {}));
  EXPECT_FALSE(rp::wfse_transduce(e, {rp::APSymbol{}}, {rp::APSymbol{}, rp::APSymbol{"a"}}));
}

TEST(Transduce, FinalWeightIsAdded) {
  rp::EditSystem e;
  e.ap = {"a"};
  auto z = e.add_state("z", true, 2.5);
  e.add_transition(z, rp::APSymbol{"a"}, rp::APSymbol{"a"}, 1, z);
  EXPECT_EQ(rp::wfse_transduce(e, {}, {}), 2.5);
  EXPECT_EQ(rp::wfse_transduce(e, {rp::APSymbol{"a"}}, {rp::APSymbol{"a"}}), 3.5);
}

TEST(TransduceProperty, DynamicProgramEqualsPathEnumeration) {
  ts::Rng rng(101);
  int related = 0;
  for (int round = 0; round < 60; ++round) {
    const auto ap = ts::make_ap(1);
    const auto e = ts::random_wfse(rng, static_cast<std::size_t>(ts::uniform(rng, 1, 4)), ap, 8);
    auto check = [&](const rp::Word& x, const rp::Word& y) {
      auto dp = rp::wfse_transduce(e, x, y);
      auto brute = enumerate_paths(e, x, y, e.initial, 0, 0);
      ASSERT_EQ(dp.has_value(), brute.has_value()) << rp::word_str(x) << " / " << rp::word_str(y);
      if (dp) {
        ++related;
        ASSERT_NEAR(*dp, *brute, 1e-12);
      }
    };
    const auto small = ts::all_words_upto(ap, 3);
    for (const auto& x : small) {
      for (const auto& y : small) check(x, y);
    }
    for (int k = 0; k < 20; ++k) {
      check(ts::random_word(rng, ap, static_cast<std::size_t>(ts::uniform(rng, 0, 5))),
            ts::random_word(rng, ap, static_cast<std::size_t>(ts::uniform(rng, 0, 5))));
    }
  }
  EXPECT_GT(related, 0);
}

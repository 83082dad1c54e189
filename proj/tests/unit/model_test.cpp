#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "osa/model.hpp"
#include "osa/random.hpp"

namespace osa {
namespace {

const ChannelModel kModel(0.3, 0.5);

TEST(ChannelModel, RejectsOutOfRangeProbabilities) {
  EXPECT_THROW(ChannelModel(-0.1, 0.5), DomainError);
  EXPECT_THROW(ChannelModel(0.3, 1.5), DomainError);
  EXPECT_NO_THROW(ChannelModel(0.0, 1.0));
}

TEST(ChannelModel, CorrelationFlagFollowsProbabilities) {
  EXPECT_TRUE(ChannelModel(0.3, 0.5).positively_correlated());
  EXPECT_TRUE(ChannelModel(0.4, 0.4).positively_correlated());
  EXPECT_FALSE(ChannelModel(0.5, 0.3).positively_correlated());
}

TEST(Tau, BoundariesAndMidpoint) {
  EXPECT_DOUBLE_EQ(tau(1.0, kModel), 0.5);
  EXPECT_DOUBLE_EQ(tau(0.0, kModel), 0.3);
  EXPECT_NEAR(tau(0.5, kModel), 0.40, 1e-15);
}

TEST(Tau, DomainError) {
  EXPECT_THROW(tau(1.01, kModel), DomainError);
  EXPECT_THROW(tau(-0.01, kModel), DomainError);
}

TEST(Tau, MonotoneAndBoundedOnRandomPairs) {
  RandomStream rng(11, 0);
  for (int i = 0; i < 5000; ++i) {
    const ChannelModel m(rng.uniform(), rng.uniform());
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double lo = std::min(m.p01(), m.p11());
    const double hi = std::max(m.p01(), m.p11());
    for (double w : {a, b}) {
      EXPECT_GE(tau(w, m), lo - 1e-15);
      EXPECT_LE(tau(w, m), hi + 1e-15);
    }
    const double small = std::min(a, b);
    const double large = std::max(a, b);
    if (m.positively_correlated()) {
      EXPECT_LE(tau(small, m), tau(large, m) + 1e-15);
    } else {
      EXPECT_GE(tau(small, m), tau(large, m) - 1e-15);
    }
  }
}

TEST(StationaryBelief, FixedPoint) {
  EXPECT_DOUBLE_EQ(stationary_belief(ChannelModel(0.2, 0.8)), 0.5);
  EXPECT_DOUBLE_EQ(stationary_belief(kModel), 0.375);
  RandomStream rng(5, 1);
  for (int i = 0; i < 1000; ++i) {
    const ChannelModel m(rng.uniform(), rng.uniform());
    const double pi = stationary_belief(m);
    EXPECT_LE(std::abs(tau(pi, m) - pi), 1e-15);
  }
}

TEST(StationaryBelief, SingularChain) {
  EXPECT_THROW(stationary_belief(ChannelModel(0.0, 1.0)), SingularChainError);
}

TEST(StationaryBelief, FootnoteVariantIsNotAFixedPointInGeneral) {
  EXPECT_DOUBLE_EQ(footnote_belief(kModel), 0.3 / 0.8);
  const ChannelModel m(0.2, 0.6);
  EXPECT_GT(std::abs(tau(footnote_belief(m), m) - footnote_belief(m)), 1e-3);
}

TEST(UpdateBelief, AppliesEachCase) {
  const BeliefVector b{0.9, 0.5, 0.1};
  const Observation obs{{0, ChannelState::idle}, {1, ChannelState::busy}};
  const BeliefVector next = update_belief(b, SensingAction{0, 1}, obs, kModel);
  EXPECT_DOUBLE_EQ(next[0], 0.5);
  EXPECT_DOUBLE_EQ(next[1], 0.3);
  EXPECT_NEAR(next[2], 0.32, 1e-15);
}

TEST(UpdateBelief, AllIdleAndSingleBusy) {
  const Observation idle{{0, ChannelState::idle}, {1, ChannelState::idle}};
  EXPECT_EQ(update_belief(BeliefVector{1.0, 1.0}, SensingAction{0, 1}, idle, kModel),
            (BeliefVector{0.5, 0.5}));
  const ChannelModel other(0.17, 0.9);
  const Observation busy{{0, ChannelState::busy}};
  EXPECT_EQ(update_belief(BeliefVector{0.7}, SensingAction{0}, busy, other), (BeliefVector{0.17}));
}

TEST(UpdateBelief, ObservationMustMatchAction) {
  const BeliefVector b{0.9, 0.5, 0.1};
  EXPECT_THROW(update_belief(b, SensingAction{0, 1}, Observation{{0, ChannelState::idle}}, kModel),
               ContractError);
  EXPECT_THROW(update_belief(b, SensingAction{0, 1},
                             Observation{{0, ChannelState::idle}, {2, ChannelState::idle}}, kModel),
               ContractError);
}

TEST(UpdateBelief, PropertyUnsensedEntriesPropagate) {
  RandomStream rng(3, 0);
  for (int i = 0; i < 500; ++i) {
    const int n = rng.uniform_int(1, 7);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = rng.uniform();
    const ChannelModel m(rng.uniform(), rng.uniform());
    const int c = rng.uniform_int(0, n - 1);
    const SensingAction a{c};
    const BeliefVector next = update_belief(BeliefVector(w), a, OutcomeMask{1}, m);
    for (int j = 0; j < n; ++j) {
      const double v = next[static_cast<std::size_t>(j)];
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      if (j != c) EXPECT_EQ(v, tau(w[static_cast<std::size_t>(j)], m));
    }
    EXPECT_EQ(next[static_cast<std::size_t>(c)], m.p11());
  }
}

TEST(ImmediateReward, AtLeastOneAndCountIdle) {
  const BeliefVector b{0.99, 0.5, 0.4};
  EXPECT_NEAR(immediate_reward(b, SensingAction{0, 1}, UtilityKind::at_least_one), 0.995, 1e-15);
  EXPECT_DOUBLE_EQ(immediate_reward(BeliefVector{0.3, 1.0, 0.2}, SensingAction{1, 2},
                                    UtilityKind::at_least_one),
                   1.0);
  EXPECT_NEAR(immediate_reward(BeliefVector{0.99, 0.5}, SensingAction{0, 1}, UtilityKind::count_idle),
              1.49, 1e-15);
}

TEST(ImmediateReward, MonotoneAndPermutationInvariant) {
  RandomStream rng(8, 0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> w(5);
    for (auto& x : w) x = rng.uniform();
    const SensingAction a{0, 2, 4};
    const double base = immediate_reward(BeliefVector(w), a, UtilityKind::at_least_one);
    auto bumped = w;
    bumped[2] = std::min(1.0, bumped[2] + rng.uniform() * 0.2);
    EXPECT_GE(immediate_reward(BeliefVector(bumped), a, UtilityKind::at_least_one), base - 1e-15);

    // Permute the sensed entries among themselves.
    auto perm = w;
    std::swap(perm[0], perm[4]);
    std::swap(perm[2], perm[4]);
    EXPECT_NEAR(immediate_reward(BeliefVector(perm), a, UtilityKind::at_least_one), base, 1e-15);
  }
}

TEST(SensingAction, Validation) {
  EXPECT_THROW(SensingAction({1, 1}), ContractError);
  EXPECT_THROW(SensingAction({-1}), ContractError);
  EXPECT_THROW(SensingAction(std::vector<int>{}), ContractError);
  EXPECT_THROW(SensingAction({0, 3}).validate_for(3), ContractError);
  EXPECT_EQ(SensingAction({3, 1}), SensingAction({1, 3}));
}

TEST(BeliefVector, Validation) {
  EXPECT_THROW(BeliefVector(std::vector<double>{}), ContractError);
  EXPECT_THROW(BeliefVector({0.5, 1.2}), DomainError);
}

}  // namespace
}  // namespace osa

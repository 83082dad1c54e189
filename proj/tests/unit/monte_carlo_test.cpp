#include <gtest/gtest.h>

#include <cmath>

#include "osa/monte_carlo.hpp"

namespace osa {
namespace {

ExperimentConfig ce(double p01, double p11) {
  return {6, 3, 2, UtilityKind::at_least_one, ChannelModel(p01, p11),
          BeliefVector{0.99, 0.5, 0.4, 0.39, 0.25, 0.25}};
}

Trajectory filled(int horizon, int channels, bool idle) {
  Trajectory t(horizon, channels);
  for (int s = 0; s < horizon; ++s)
    for (int c = 0; c < channels; ++c) t.set(s, c, idle);
  return t;
}

TEST(SampleTrajectory, AbsorbingChainsKeepTheirState) {
  const ExperimentConfig cfg{4, 2, 5, UtilityKind::at_least_one, ChannelModel(0.0, 1.0),
                             BeliefVector{1.0, 0.0, 1.0, 0.0}};
  RandomStream rng(1, 0);
  const auto t = sample_trajectory(cfg, rng);
  for (int s = 0; s < 5; ++s) {
    EXPECT_TRUE(t.idle(s, 0));
    EXPECT_FALSE(t.idle(s, 1));
    EXPECT_TRUE(t.idle(s, 2));
    EXPECT_FALSE(t.idle(s, 3));
  }
}

TEST(SampleTrajectory, FlippingChainsAlternate) {
  const ExperimentConfig cfg{2, 1, 6, UtilityKind::at_least_one, ChannelModel(1.0, 0.0),
                             BeliefVector{0.0, 1.0}};
  RandomStream rng(2, 0);
  const auto t = sample_trajectory(cfg, rng);
  for (int s = 0; s < 6; ++s) {
    EXPECT_EQ(t.idle(s, 0), s % 2 == 1);
    EXPECT_EQ(t.idle(s, 1), s % 2 == 0);
  }
}

TEST(SampleTrajectory, CertainIdleStart) {
  const ExperimentConfig cfg{3, 1, 2, UtilityKind::at_least_one, ChannelModel(0.3, 0.5),
                             BeliefVector{1.0, 1.0, 1.0}};
  RandomStream rng(3, 0);
  const auto t = sample_trajectory(cfg, rng);
  for (int c = 0; c < 3; ++c) EXPECT_TRUE(t.idle(0, c));
}

TEST(SampleTrajectory, MarginalsMatchPropagatedBelief) {
  const ExperimentConfig cfg{3, 1, 4, UtilityKind::at_least_one, ChannelModel(0.2, 0.7),
                             BeliefVector{0.9, 0.5, 0.1}};
  constexpr int kEpisodes = 100000;
  std::vector<int> idle(12, 0);
  std::vector<double> cov_sum(4, 0.0);
  for (int e = 0; e < kEpisodes; ++e) {
    RandomStream rng(99, static_cast<std::uint64_t>(e));
    const auto t = sample_trajectory(cfg, rng);
    for (int s = 0; s < 4; ++s) {
      for (int c = 0; c < 3; ++c) idle[static_cast<std::size_t>(s * 3 + c)] += t.idle(s, c);
      cov_sum[static_cast<std::size_t>(s)] += t.idle(s, 0) * t.idle(s, 1);
    }
  }
  std::vector<double> w{0.9, 0.5, 0.1};
  for (int s = 0; s < 4; ++s) {
    for (int c = 0; c < 3; ++c) {
      const double p = w[static_cast<std::size_t>(c)];
      const double freq = idle[static_cast<std::size_t>(s * 3 + c)] / double(kEpisodes);
      EXPECT_LE(std::abs(freq - p), 5 * std::sqrt(p * (1 - p) / kEpisodes)) << "slot " << s << " channel " << c;
    }
    const double f0 = idle[static_cast<std::size_t>(s * 3)] / double(kEpisodes);
    const double f1 = idle[static_cast<std::size_t>(s * 3 + 1)] / double(kEpisodes);
    const double cov = cov_sum[static_cast<std::size_t>(s)] / kEpisodes - f0 * f1;
    EXPECT_LE(std::abs(cov), 5 / std::sqrt(double(kEpisodes)));
    for (auto& x : w) x = tau(x, cfg.model);
  }
}

TEST(RunEpisode, AllIdleAndAllBusy) {
  const auto cfg = ce(0.3, 0.5);
  EXPECT_EQ(run_episode(cfg, PolicySpec::myopic(), filled(2, 6, true)), 2.0);
  EXPECT_EQ(run_episode(cfg, PolicySpec::myopic(), filled(2, 6, false)), 0.0);
  auto count = cfg;
  count.utility = UtilityKind::count_idle;
  EXPECT_EQ(run_episode(count, PolicySpec::myopic(), filled(2, 6, true)), 6.0);
}

TEST(RunEpisode, SensingEverythingCountsSlotsWithAnIdleChannel) {
  ExperimentConfig cfg{3, 3, 4, UtilityKind::at_least_one, ChannelModel(0.3, 0.5),
                       BeliefVector{0.2, 0.4, 0.6}};
  Trajectory t(4, 3);
  t.set(0, 1, true);
  t.set(2, 0, true);
  t.set(2, 2, true);
  EXPECT_EQ(run_episode(cfg, PolicySpec::myopic(), t), 2.0);
}

TEST(RunEpisode, FollowsObservedStates) {
  // Channel 0 is sensed first; busy makes its belief p01 = 0.1, below channel 1.
  const ExperimentConfig cfg{2, 1, 2, UtilityKind::at_least_one, ChannelModel(0.1, 0.9),
                             BeliefVector{0.6, 0.5}};
  Trajectory t(2, 2);
  t.set(1, 1, true);
  EXPECT_EQ(run_episode(cfg, PolicySpec::myopic(), t), 1.0);
  Trajectory u(2, 2);
  u.set(1, 0, true);
  EXPECT_EQ(run_episode(cfg, PolicySpec::myopic(), u), 0.0);
}

TEST(RunEpisode, DimensionMismatch) {
  EXPECT_THROW(run_episode(ce(0.3, 0.5), PolicySpec::myopic(), Trajectory(3, 6)), ContractError);
}

TEST(Estimate, DeterministicChainsHaveNoSpread) {
  const ExperimentConfig cfg{3, 1, 3, UtilityKind::at_least_one, ChannelModel(0.0, 1.0),
                             BeliefVector{0.0, 1.0, 0.0}};
  const auto e = estimate(cfg, PolicySpec::myopic(), 100, 5);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.mean, evaluate_policy(cfg, PolicySpec::myopic()).total_expected_reward);
  EXPECT_EQ(e.mean, 3.0);
}

TEST(Estimate, SameSeedSameResultForAnyJobCount) {
  const auto cfg = ce(0.3, 0.5);
  const auto a = estimate(cfg, PolicySpec::myopic(), 5000, 42);
  const auto b = estimate(cfg, PolicySpec::myopic(), 5000, 42, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.episodes, 5000U);
  EXPECT_EQ(a.seed, 42U);
  EXPECT_NE(estimate(cfg, PolicySpec::myopic(), 5000, 43).mean, a.mean);
}

TEST(Estimate, NeedsTwoEpisodes) {
  EXPECT_THROW(estimate(ce(0.3, 0.5), PolicySpec::myopic(), 1, 0), ContractError);
}

TEST(Estimate, ConsistentWithExactValue) {
  for (const auto& cfg : {ce(0.3, 0.5), ce(0.5, 0.3)}) {
    const auto e = estimate(cfg, PolicySpec::myopic(), 100000, 42);
    const double exact = evaluate_policy(cfg, PolicySpec::myopic()).total_expected_reward;
    EXPECT_LE(std::abs(e.mean - exact), 4 * e.std_error);
  }
}

TEST(Estimate, OptimalPolicyAndRandomConfigs) {
  RandomStream rng(12, 0);
  for (int i = 0; i < 5; ++i) {
    const int n = rng.uniform_int(2, 5);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = rng.uniform();
    const ExperimentConfig cfg{n, rng.uniform_int(1, n), rng.uniform_int(1, 3), UtilityKind::at_least_one,
                               ChannelModel(rng.uniform(), rng.uniform()), BeliefVector(w)};
    for (const auto& policy : {PolicySpec::myopic(), PolicySpec::optimal()}) {
      const auto e = estimate(cfg, policy, 20000, static_cast<std::uint64_t>(i));
      const double exact = evaluate_policy(cfg, policy).total_expected_reward;
      EXPECT_LE(std::abs(e.mean - exact), 4 * e.std_error + 1e-12);
    }
  }
}

}  // namespace
}  // namespace osa

#include "mphp/baselines.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mphp/experiment.hpp"
#include "test_support.hpp"

namespace mphp {
namespace {

TEST(SchemeNames, RoundTrip) {
  for (const SchemeId s : kAllSchemes) EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  EXPECT_FALSE(parse_scheme("mphp").has_value());
}

TEST(SchemeTraits, Classification) {
  EXPECT_TRUE(uses_statistical_rf(SchemeId::kMphp));
  EXPECT_TRUE(uses_statistical_rf(SchemeId::kFrpsStatistical));
  EXPECT_FALSE(uses_statistical_rf(SchemeId::kAdaptiveInstant));
  EXPECT_EQ(scheme_connectivity(SchemeId::kFrpsStatistical), Connectivity::kFullyConnected);
  EXPECT_EQ(scheme_connectivity(SchemeId::kMphp), Connectivity::kPartiallyConnected);
  EXPECT_EQ(scheme_timescale(SchemeId::kFullDigitalZf), CsiTimescale::kRealTime);
}

TEST(FixedSubarray, ContiguousMap) {
  EXPECT_EQ(fixed_subarray_map(4, 2), (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(fixed_subarray_map(7, 3), (std::vector<int>{0, 0, 1, 1, 2, 2, 2}));
  EXPECT_THROW(fixed_subarray_map(2, 3), Error);
}

TEST(FixedSubarray, PhasesFollowTheChainUser) {
  std::mt19937_64 rng(1);
  const ComplexMatrix h = testing::random_matrix(8, 2, rng);
  const RfPrecoder rf = fixed_subarray_rf(h, 3);
  EXPECT_FALSE(rf.violation().has_value());
  for (Index m = 0; m < 8; ++m) {
    const int l = rf.antenna_to_chain()[static_cast<std::size_t>(m)];
    EXPECT_EQ(rf.phase_index()[static_cast<std::size_t>(m)], quantize_phase(h(m, l), 3));
  }
}

// Exhaustive search over antenna -> chain maps with no empty chain,
// maximizing sum of |h_{m, chain(m)}|.
double best_total_gain(const ComplexMatrix& h) {
  const Index M = h.rows();
  const int L = static_cast<int>(h.cols());
  std::vector<int> assign(static_cast<std::size_t>(M), 0);
  double best = -1.0;
  while (true) {
    std::vector<int> load(static_cast<std::size_t>(L), 0);
    double total = 0.0;
    for (Index m = 0; m < M; ++m) {
      ++load[static_cast<std::size_t>(assign[static_cast<std::size_t>(m)])];
      total += std::abs(h(m, assign[static_cast<std::size_t>(m)]));
    }
    if (std::find(load.begin(), load.end(), 0) == load.end()) best = std::max(best, total);
    Index i = 0;
    while (i < M && ++assign[static_cast<std::size_t>(i)] == L) assign[static_cast<std::size_t>(i++)] = 0;
    if (i == M) break;
  }
  return best;
}

TEST(AdaptiveInstant, DominantAntennasFollowTheirUser) {
  ComplexMatrix h(4, 2);
  h << 3.0, 0.1, 0.2, 1.0, 2.5, 0.3, 0.1, 0.9;
  const RfPrecoder rf = adaptive_instant_rf(h, 2);
  EXPECT_EQ(rf.antenna_to_chain(), (std::vector<int>{0, 1, 0, 1}));
}

TEST(AdaptiveInstant, MatchesBruteForceForTwoChains) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 40; ++t) {
    ComplexMatrix h = testing::random_matrix(5, 2, rng);
    if (t % 2 == 0) h.col(1) *= 0.05;  // forces the empty-chain repair
    const RfPrecoder rf = adaptive_instant_rf(h, 2);
    ASSERT_FALSE(rf.violation().has_value());
    double total = 0.0;
    for (Index m = 0; m < 5; ++m) total += std::abs(h(m, rf.antenna_to_chain()[static_cast<std::size_t>(m)]));
    EXPECT_NEAR(total, best_total_gain(h), 1e-12);
  }
}

TEST(AdaptiveInstant, StructureOnRandomChannels) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const int K = 2 + t % 6;
    ComplexMatrix h = testing::random_matrix(K + t % 9, K, rng);
    h.col(0) *= 10.0;
    EXPECT_FALSE(adaptive_instant_rf(h, 4).violation().has_value());
  }
}

TEST(FrpsStatistical, PhaseOnlyFullyConnected) {
  const auto users = clustered_users(4, 2, ScenarioParams{}, 5);
  const CorrelationSet corr = correlations_from_params(users, ArrayGeometry{16, 0.5}, 64);
  const Grouping g = group_users(corr, 2, 2);
  const ComplexMatrix rf = frps_statistical_rf(g, 3);
  ASSERT_EQ(rf.rows(), 16);
  ASSERT_EQ(rf.cols(), 4);
  for (Index m = 0; m < 16; ++m)
    for (Index l = 0; l < 4; ++l) EXPECT_NEAR(std::abs(rf(m, l)), 0.25, 1e-15);
}

struct Fixture {
  SystemConfig config;
  Scenario scenario;
  DesignOptions options;

  explicit Fixture(int M = 16, int K = 4, int G = 2) {
    config.antennas = M;
    config.users = K;
    config.chains = K;
    config.groups = G;
    config.scenario.quadrature_points = 64;
    scenario = prepare_scenario(config, 11);
    options = design_options(config);
  }

  ComplexMatrix draw(std::uint64_t slot) const {
    return draw_channel(scenario.users, scenario.geometry, 99, slot).H;
  }
};

TEST(FullDigitalZf, NullsInterUserInterference) {
  const Fixture fx;
  const LongTermDesign d = design_long_term(SchemeId::kFullDigitalZf, fx.scenario.grouping, fx.options);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix h = fx.draw(s);
    const SlotPrecoding slot = build_slot_precoding(d, h, fx.options);
    ASSERT_EQ(slot.groups.size(), 1u);
    const ComplexMatrix& q = slot.groups[0].beams;
    for (Index k = 0; k < 4; ++k)
      for (Index i = 0; i < 4; ++i)
        if (i != k) EXPECT_LE(std::abs(h.col(k).dot(q.col(i))), 1e-8 * std::abs(h.col(k).dot(q.col(k))));
    EXPECT_NEAR(transmitted_power(slot), fx.options.total_power, 1e-9);
  }
}

TEST(Baselines, StructuredSchemesSatisfyInvariants) {
  const Fixture fx;
  const LongTermDesign mphp = design_long_term(SchemeId::kMphp, fx.scenario.grouping, fx.options);
  ASSERT_TRUE(mphp.structured.has_value());
  EXPECT_FALSE(mphp.structured->violation().has_value());
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix h = fx.draw(s);
    EXPECT_FALSE(fixed_subarray_rf(h, 4).violation().has_value());
    EXPECT_FALSE(adaptive_instant_rf(h, 4).violation().has_value());
  }
}

TEST(Baselines, StatisticalDesignIgnoresSlotChannel) {
  const Fixture fx;
  const LongTermDesign d = design_long_term(SchemeId::kMphp, fx.scenario.grouping, fx.options);
  const ComplexMatrix rf_before = d.rf;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SlotPrecoding slot = build_slot_precoding(d, fx.draw(s), fx.options);
    EXPECT_EQ(slot.groups.size(), static_cast<std::size_t>(fx.scenario.grouping.group_count()));
  }
  EXPECT_EQ(d.rf, rf_before);
  const LongTermDesign again = design_long_term(SchemeId::kMphp, fx.scenario.grouping, fx.options);
  EXPECT_EQ(again.rf, d.rf);
}

TEST(Baselines, MphpPowerAndNullingPerGroup) {
  const Fixture fx(32, 6, 3);
  const LongTermDesign d = design_long_term(SchemeId::kMphp, fx.scenario.grouping, fx.options);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const ComplexMatrix h = fx.draw(s);
    const SlotPrecoding slot = build_slot_precoding(d, h, fx.options);
    double expected = 0.0;
    for (const PrecodedGroup& g : slot.groups) {
      if (!g.outage) expected += fx.options.total_power * static_cast<double>(g.users.size()) / 6.0;
    }
    EXPECT_NEAR(transmitted_power(slot), expected, 1e-9 * fx.options.total_power);
    EXPECT_LE(intra_group_leakage(h, slot), 1e-8);
  }
}

TEST(Baselines, FullDigitalBeatsMphpOnAverage) {
  Fixture fx(32, 6, 3);
  fx.config.slots = 500;
  const RunMetrics full = monte_carlo_rates(SchemeId::kFullDigitalZf, fx.config, fx.scenario, 500, 1, 1);
  const RunMetrics mphp = monte_carlo_rates(SchemeId::kMphp, fx.config, fx.scenario, 500, 2, 1);
  EXPECT_GE(full.sum_rate, mphp.sum_rate);
}

}  // namespace
}  // namespace mphp

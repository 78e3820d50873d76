#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mphp/baselines.hpp"
#include "mphp/channel.hpp"
#include "mphp/grouping.hpp"
#include "mphp/metrics.hpp"

namespace mphp {

struct SweepSpec {
  std::string parameter;  // empty: single point
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

/// Sweepable parameter names: M, K, G, B, P, snr_db, T.
bool is_sweep_parameter(std::string_view name);

/// Every scenario scalar of a run.
struct SystemConfig {
  int antennas = 64;      // M
  int users = 8;          // K
  int chains = 8;         // L, always equal to K
  int groups = 3;         // G
  int bits = 4;           // B
  double total_power = 1.0;  // P, watts; unit noise so SNR = P
  int slots = 1000;
  std::uint64_t seed = 1;
  int period_slots = 10;  // T, feedback accounting only
  int subspace_rank = 0;  // 0: ceil(M / 8)
  int grouping_iterations = 50;
  double element_spacing = 0.5;
  ScenarioParams scenario;
  PowerModel power;
  RelaxedOptions relaxed;
  std::vector<SchemeId> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  SweepSpec sweep;

  /// Throws kInvalidInput naming the offending field.
  void validate() const;
  Index effective_subspace_rank() const;

  bool operator==(const SystemConfig&) const = default;
};

/// Parses the `key = value` format; `#` starts a comment, nested keys are
/// dotted (scenario.angular_spread). Unlisted keys keep their defaults.
SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config; every key is written.
std::string serialize_config(const SystemConfig& config);

/// Copy of `config` with one sweep parameter set.
SystemConfig with_parameter(SystemConfig config, std::string_view parameter, double value);

/// Users, their correlations and the grouping for one sweep point.
struct Scenario {
  ArrayGeometry geometry;
  std::vector<UserChannelParams> users;
  CorrelationSet correlations;
  Grouping grouping;
};

Scenario prepare_scenario(const SystemConfig& config, std::uint64_t scenario_seed);

DesignOptions design_options(const SystemConfig& config);

/// Precodes one channel draw and reports SINRs and diagnostics.
SlotOutcome evaluate_slot(const LongTermDesign& design, const ComplexMatrix& channel,
                          const DesignOptions& options);

/// Mixed-timescale Monte Carlo: the long-term design stays fixed while the
/// channel for each slot comes from `channel_for_slot`.
RunMetrics simulate(const LongTermDesign& design, const DesignOptions& options, int slot_count,
                    const std::function<ComplexMatrix(int)>& channel_for_slot, int threads = 1);

/// Rates, EE and feedback counts for one scheme at one sweep point. Slot
/// channels are drawn with `channel_seed`.
RunMetrics monte_carlo_rates(SchemeId scheme, const SystemConfig& config, const Scenario& scenario,
                             int slot_count, std::uint64_t channel_seed, int threads = 1);

struct ResultRow {
  std::string sweep_parameter;
  double sweep_value = 0.0;
  SchemeId scheme = SchemeId::kMphp;
  double avg_rate_per_user = 0.0;
  double sum_rate = 0.0;
  double worst_user_rate = 0.0;
  double jain_index = 0.0;
  double energy_efficiency = 0.0;
  std::int64_t feedback_short_term = 0;
  std::int64_t feedback_long_term = 0;
  std::int64_t feedback_total = 0;
  double avg_rate_std_error = 0.0;
  double sum_rate_std_error = 0.0;
  double outage_fraction = 0.0;
  double intra_group_leakage = 0.0;
  int slots = 0;
};

/// Rows ordered by sweep value index, then scheme enumeration order.
/// Threads default to default_thread_count().
std::vector<ResultRow> run_experiment(const SystemConfig& config, int threads = 0);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::string csv_header();

/// gnuplot script plotting `metric` against the sweep value per scheme.
std::string gnuplot_script(const std::filesystem::path& csv_path, std::string_view metric);

// Presets: rate vs M, EE vs SNR, throughput and fairness at the default point.
SystemConfig antenna_sweep_preset();
SystemConfig snr_sweep_preset();
SystemConfig fairness_preset();

}  // namespace mphp

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mphp/numerics.hpp"

namespace mphp {

/// One group's transmit beams for a slot: column i of `beams` is
/// q_i = F_g w_i for user users[i], sent with power power[i].
struct PrecodedGroup {
  std::vector<int> users;
  ComplexMatrix beams;
  std::vector<double> power;
  bool outage = false;  // group silent this slot, its users get zero rate
};

struct SlotPrecoding {
  std::vector<PrecodedGroup> groups;
};

/// Builds beams F_g W_g and the power normalization for a group.
PrecodedGroup precode_group(std::vector<int> users, const ComplexMatrix& group_rf,
                            const ComplexMatrix& baseband, double total_power, int user_count);

/// A group in outage: no beams, zero power.
PrecodedGroup silent_group(std::vector<int> users, Index antenna_count);

/// Downlink SINR with unit noise. Interference from the user's own group is
/// excluded (zero-forcing removes it); see intra_group_leakage.
std::vector<double> sinr_per_user(const ComplexMatrix& channel, const SlotPrecoding& slot);

/// SLNR_k = p_k |h_k^H q_k|^2 / (sum_{i outside g} p_k |h_i^H q_k|^2 + 1).
std::vector<double> slnr_per_user(const ComplexMatrix& channel, const SlotPrecoding& slot);

/// max over groups and i != k of |h_k^H q_i| / |h_k^H q_k|, outage groups
/// skipped. A diagnostic; never folded into SINR.
double intra_group_leakage(const ComplexMatrix& channel, const SlotPrecoding& slot);

/// sum_k p_k ||q_k||^2.
double transmitted_power(const SlotPrecoding& slot);

struct SlotMetrics {
  std::vector<double> sinr;
  std::vector<double> rate;  // log2(1 + sinr)
};

SlotMetrics slot_metrics(std::vector<double> sinr);

/// (sum R)^2 / (K sum R^2). Throws kUndefinedFairness if every rate is zero.
double jain_fairness(std::span<const double> rates);

enum class Connectivity { kFullyConnected, kPartiallyConnected };

/// Circuit power constants used by energy_efficiency.
struct PowerModel {
  double baseband_w = 0.2;
  double rf_chain_w = 0.3;
  double phase_shifter_w = 0.04;

  bool operator==(const PowerModel&) const = default;
};

/// SR / (P + P_BB + L P_RF + N_APS P_APS), N_APS = M L fully connected, M otherwise.
double energy_efficiency(double sum_rate, double total_power, int chain_count, Index antenna_count,
                         const PowerModel& power, Connectivity connectivity);

enum class CsiTimescale { kRealTime, kMixed };

struct FeedbackCounts {
  std::int64_t short_term = 0;  // per-slot CSI over T slots
  std::int64_t long_term = 0;   // Z: correlation eigenpairs per period
  std::int64_t total = 0;
  bool long_term_within_bound = true;  // Z <= K M^2
};

/// Smallest r whose top-r eigenvalues hold `fraction` of the trace.
int energy_rank(const HermitianMatrix& r, double fraction = 0.95);

/// Z = sum_g r_g (2M + 1): r_g real eigenvalues plus r_g complex M-vectors.
std::int64_t correlation_feedback(std::span<const HermitianMatrix> group_correlations,
                                  double fraction = 0.95);

/// Real-time CSI: M K T. Mixed timescale: T sum_g S_g^2 + Z.
FeedbackCounts feedback_overhead(CsiTimescale timescale, Index antenna_count, int user_count,
                                 int period_slots, std::span<const int> group_sizes,
                                 std::int64_t long_term);

/// Result of evaluating one slot.
struct SlotOutcome {
  std::vector<double> sinr;
  int outage_users = 0;
  double intra_group_leakage = 0.0;
};

struct RunMetrics {
  std::vector<double> per_user_rate;
  std::vector<double> per_user_std_error;
  double avg_rate_per_user = 0.0;
  double avg_rate_std_error = 0.0;
  double sum_rate = 0.0;
  double sum_rate_std_error = 0.0;
  double worst_user_rate = 0.0;
  double jain_index = 0.0;
  double energy_efficiency = 0.0;
  FeedbackCounts feedback;
  int slots = 0;
  double outage_fraction = 0.0;
  double max_intra_group_leakage = 0.0;
};

/// Mean and standard error of per-user rates and sum rate, accumulated slot
/// by slot in a fixed order.
class RateAccumulator {
 public:
  explicit RateAccumulator(int user_count);

  void add(const SlotOutcome& outcome);
  RunMetrics finish() const;

 private:
  int users_;
  int slots_ = 0;
  std::int64_t outage_user_slots_ = 0;
  double max_leakage_ = 0.0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  double total_sum_ = 0.0;
  double total_sum_sq_ = 0.0;
};

/// Evaluates `evaluate(slot)` for slot = 0..n-1 on up to `threads` workers,
/// then reduces in slot order, so the result does not depend on scheduling.
RunMetrics monte_carlo(int slot_count, int user_count,
                       const std::function<SlotOutcome(int)>& evaluate, int threads = 1);

/// Worker count from MPHP_THREADS, else hardware concurrency.
int default_thread_count();

}  // namespace mphp

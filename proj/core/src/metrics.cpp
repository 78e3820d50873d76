#include "mphp/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "mphp/baseband.hpp"

namespace mphp {
namespace {

double gain(const ComplexMatrix& channel, int user, const PrecodedGroup& group, std::size_t i) {
  return std::norm(channel.col(user).dot(group.beams.col(static_cast<Index>(i))));
}

}  // namespace

PrecodedGroup precode_group(std::vector<int> users, const ComplexMatrix& group_rf,
                            const ComplexMatrix& baseband, double total_power, int user_count) {
  PrecodedGroup out;
  out.power = power_allocation(group_rf, baseband, total_power, user_count);
  out.beams = group_rf * baseband;
  if (static_cast<Index>(users.size()) != out.beams.cols()) {
    throw Error(ErrorKind::kInvalidInput, "precode_group: one beam per user required");
  }
  out.users = std::move(users);
  return out;
}

PrecodedGroup silent_group(std::vector<int> users, Index antenna_count) {
  PrecodedGroup out;
  out.beams = ComplexMatrix::Zero(antenna_count, static_cast<Index>(users.size()));
  out.power.assign(users.size(), 0.0);
  out.users = std::move(users);
  out.outage = true;
  return out;
}

std::vector<double> sinr_per_user(const ComplexMatrix& channel, const SlotPrecoding& slot) {
  std::vector<double> sinr(static_cast<std::size_t>(channel.cols()), 0.0);
  for (std::size_t g = 0; g < slot.groups.size(); ++g) {
    const PrecodedGroup& own = slot.groups[g];
    if (own.outage) continue;
    for (std::size_t i = 0; i < own.users.size(); ++i) {
      const int k = own.users[i];
      const double signal = own.power[i] * gain(channel, k, own, i);
      double interference = 0.0;
      for (std::size_t o = 0; o < slot.groups.size(); ++o) {
        if (o == g || slot.groups[o].outage) continue;
        const PrecodedGroup& other = slot.groups[o];
        for (std::size_t j = 0; j < other.users.size(); ++j) {
          interference += other.power[j] * gain(channel, k, other, j);
        }
      }
      sinr[static_cast<std::size_t>(k)] = signal / (interference + 1.0);
    }
  }
  return sinr;
}

std::vector<double> slnr_per_user(const ComplexMatrix& channel, const SlotPrecoding& slot) {
  std::vector<double> slnr(static_cast<std::size_t>(channel.cols()), 0.0);
  std::vector<int> group_of(static_cast<std::size_t>(channel.cols()), -1);
  for (std::size_t g = 0; g < slot.groups.size(); ++g) {
    for (const int k : slot.groups[g].users) group_of[static_cast<std::size_t>(k)] = static_cast<int>(g);
  }
  for (std::size_t g = 0; g < slot.groups.size(); ++g) {
    const PrecodedGroup& own = slot.groups[g];
    if (own.outage) continue;
    for (std::size_t i = 0; i < own.users.size(); ++i) {
      const int k = own.users[i];
      const double p = own.power[i];
      double leakage = 0.0;
      for (Index victim = 0; victim < channel.cols(); ++victim) {
        if (group_of[static_cast<std::size_t>(victim)] == static_cast<int>(g)) continue;
        leakage += p * gain(channel, static_cast<int>(victim), own, i);
      }
      slnr[static_cast<std::size_t>(k)] = p * gain(channel, k, own, i) / (leakage + 1.0);
    }
  }
  return slnr;
}

double intra_group_leakage(const ComplexMatrix& channel, const SlotPrecoding& slot) {
  double worst = 0.0;
  for (const PrecodedGroup& group : slot.groups) {
    if (group.outage) continue;
    for (std::size_t a = 0; a < group.users.size(); ++a) {
      const double own = std::sqrt(gain(channel, group.users[a], group, a));
      for (std::size_t b = 0; b < group.users.size(); ++b) {
        if (a == b) continue;
        const double cross = std::sqrt(gain(channel, group.users[a], group, b));
        worst = std::max(worst, own > 0.0 ? cross / own : (cross > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
      }
    }
  }
  return worst;
}

double transmitted_power(const SlotPrecoding& slot) {
  double total = 0.0;
  for (const PrecodedGroup& group : slot.groups) {
    for (std::size_t i = 0; i < group.users.size(); ++i) {
      total += group.power[i] * group.beams.col(static_cast<Index>(i)).squaredNorm();
    }
  }
  return total;
}

SlotMetrics slot_metrics(std::vector<double> sinr) {
  SlotMetrics out;
  out.rate.reserve(sinr.size());
  for (const double s : sinr) out.rate.push_back(std::log2(1.0 + s));
  out.sinr = std::move(sinr);
  return out;
}

double jain_fairness(std::span<const double> rates) {
  if (rates.empty()) throw Error(ErrorKind::kInvalidInput, "jain_fairness: no users");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double r : rates) {
    if (r < 0.0) throw Error(ErrorKind::kInvalidInput, "jain_fairness: negative rate");
    sum += r;
    sum_sq += r * r;
  }
  if (sum_sq == 0.0) {
    throw Error(ErrorKind::kUndefinedFairness, "jain_fairness: all rates are zero");
  }
  return sum * sum / (static_cast<double>(rates.size()) * sum_sq);
}

double energy_efficiency(double sum_rate, double total_power, int chain_count, Index antenna_count,
                         const PowerModel& power, Connectivity connectivity) {
  if (sum_rate < 0.0 || total_power < 0.0 || chain_count < 0 || antenna_count < 0 ||
      power.baseband_w < 0.0 || power.rf_chain_w < 0.0 || power.phase_shifter_w < 0.0) {
    throw Error(ErrorKind::kInvalidInput, "energy_efficiency: inputs must be non-negative");
  }
  const double shifters = connectivity == Connectivity::kFullyConnected
                              ? static_cast<double>(antenna_count) * chain_count
                              : static_cast<double>(antenna_count);
  const double consumed = total_power + power.baseband_w + chain_count * power.rf_chain_w +
                          shifters * power.phase_shifter_w;
  if (!(consumed > 0.0)) throw Error(ErrorKind::kInvalidInput, "energy_efficiency: zero consumed power");
  return sum_rate / consumed;
}

int energy_rank(const HermitianMatrix& r, double fraction) {
  const RealVector values = hermitian_eig(r).values.cwiseMax(0.0);
  const double total = values.sum();
  if (!(total > 0.0)) return 0;
  double acc = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    acc += values(i);
    if (acc >= fraction * total) return static_cast<int>(i + 1);
  }
  return static_cast<int>(values.size());
}

std::int64_t correlation_feedback(std::span<const HermitianMatrix> group_correlations,
                                  double fraction) {
  std::int64_t z = 0;
  for (const auto& r : group_correlations) {
    z += static_cast<std::int64_t>(energy_rank(r, fraction)) * (2 * r.dim() + 1);
  }
  return z;
}

FeedbackCounts feedback_overhead(CsiTimescale timescale, Index antenna_count, int user_count,
                                 int period_slots, std::span<const int> group_sizes,
                                 std::int64_t long_term) {
  if (period_slots < 1) throw Error(ErrorKind::kInvalidInput, "feedback_overhead: T must be >= 1");
  FeedbackCounts out;
  if (timescale == CsiTimescale::kRealTime) {
    out.short_term = static_cast<std::int64_t>(antenna_count) * user_count * period_slots;
  } else {
    std::int64_t squares = 0;
    for (const int s : group_sizes) squares += static_cast<std::int64_t>(s) * s;
    out.short_term = period_slots * squares;
    out.long_term = long_term;
    out.long_term_within_bound =
        long_term <= static_cast<std::int64_t>(user_count) * antenna_count * antenna_count;
  }
  out.total = out.short_term + out.long_term;
  return out;
}

RateAccumulator::RateAccumulator(int user_count)
    : users_(user_count),
      sum_(static_cast<std::size_t>(user_count), 0.0),
      sum_sq_(static_cast<std::size_t>(user_count), 0.0) {}

void RateAccumulator::add(const SlotOutcome& outcome) {
  if (static_cast<int>(outcome.sinr.size()) != users_) {
    throw Error(ErrorKind::kInvalidInput, "RateAccumulator: SINR count does not match user count");
  }
  double slot_sum = 0.0;
  for (int k = 0; k < users_; ++k) {
    const double r = std::log2(1.0 + outcome.sinr[static_cast<std::size_t>(k)]);
    sum_[static_cast<std::size_t>(k)] += r;
    sum_sq_[static_cast<std::size_t>(k)] += r * r;
    slot_sum += r;
  }
  total_sum_ += slot_sum;
  total_sum_sq_ += slot_sum * slot_sum;
  outage_user_slots_ += outcome.outage_users;
  max_leakage_ = std::max(max_leakage_, outcome.intra_group_leakage);
  ++slots_;
}

namespace {

// Standard error of the mean from running sums.
double std_error(double sum, double sum_sq, int n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
  return std::sqrt(var / n);
}

}  // namespace

RunMetrics RateAccumulator::finish() const {
  if (slots_ == 0) throw Error(ErrorKind::kInvalidInput, "RateAccumulator: no slots accumulated");
  RunMetrics out;
  out.slots = slots_;
  for (int k = 0; k < users_; ++k) {
    out.per_user_rate.push_back(sum_[static_cast<std::size_t>(k)] / slots_);
    out.per_user_std_error.push_back(
        std_error(sum_[static_cast<std::size_t>(k)], sum_sq_[static_cast<std::size_t>(k)], slots_));
  }
  out.sum_rate = total_sum_ / slots_;
  out.sum_rate_std_error = std_error(total_sum_, total_sum_sq_, slots_);
  out.avg_rate_per_user = out.sum_rate / users_;
  out.avg_rate_std_error = out.sum_rate_std_error / users_;
  out.worst_user_rate = *std::min_element(out.per_user_rate.begin(), out.per_user_rate.end());
  out.jain_index = out.sum_rate > 0.0 ? jain_fairness(out.per_user_rate) : 0.0;
  out.outage_fraction = static_cast<double>(outage_user_slots_) / (static_cast<double>(slots_) * users_);
  out.max_intra_group_leakage = max_leakage_;
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("MPHP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunMetrics monte_carlo(int slot_count, int user_count,
                       const std::function<SlotOutcome(int)>& evaluate, int threads) {
  if (slot_count < 1) throw Error(ErrorKind::kInvalidInput, "monte_carlo: need at least one slot");
  std::vector<SlotOutcome> outcomes(static_cast<std::size_t>(slot_count));
  const int workers = std::clamp(threads, 1, slot_count);

  if (workers == 1) {
    for (int s = 0; s < slot_count; ++s) outcomes[static_cast<std::size_t>(s)] = evaluate(s);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (int s = next++; s < slot_count; s = next++) {
            try {
              outcomes[static_cast<std::size_t>(s)] = evaluate(s);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              next = slot_count;
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  RateAccumulator acc(user_count);
  for (const SlotOutcome& o : outcomes) acc.add(o);
  return acc.finish();
}

}  // namespace mphp

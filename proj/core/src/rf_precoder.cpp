#include "mphp/rf_precoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mphp {
namespace {

double quadratic_trace(const ComplexMatrix& f, const HermitianMatrix& r) {
  return (f.adjoint() * r.matrix() * f).trace().real();
}

void check_bits(int bits) {
  if (bits < 1 || bits > 16) {
    throw Error(ErrorKind::kInvalidInput, "phase shifter resolution must be 1..16 bits");
  }
}

}  // namespace

HermitianMatrix leakage_correlation(const Grouping& grouping, int g) {
  if (g < 0 || g >= grouping.group_count()) {
    throw Error(ErrorKind::kInvalidInput, "leakage_correlation: group index out of range");
  }
  HermitianMatrix acc = HermitianMatrix::zero(grouping.antenna_count());
  const double s_g = grouping.size(g);
  for (int other = 0; other < grouping.group_count(); ++other) {
    if (other == g) continue;
    acc += (s_g * grouping.size(other)) * grouping.group_correlations[static_cast<std::size_t>(other)];
  }
  return acc;
}

RelaxedStep relaxed_step(const HermitianMatrix& group_corr, const HermitianMatrix& leakage_corr,
                         double alpha, Index group_size, int objective_exponent) {
  if (!(alpha >= 0.0)) throw Error(ErrorKind::kInvalidInput, "relaxed_step: alpha must be >= 0");
  if (group_size < 1 || group_size > group_corr.dim()) {
    throw Error(ErrorKind::kInvalidInput, "relaxed_step: group size out of range");
  }
  if (objective_exponent != 1 && objective_exponent != 2) {
    throw Error(ErrorKind::kInvalidInput, "relaxed_step: objective exponent must be 1 or 2");
  }
  const EigenDecomposition eig =
      hermitian_eig(HermitianMatrix(group_corr.matrix() - alpha * leakage_corr.matrix()));
  const double weak_scale = 1.0 / std::sqrt(static_cast<double>(group_corr.dim()));

  RelaxedStep out;
  out.f_star = eig.vectors.leftCols(group_size);
  for (Index i = 0; i < group_size; ++i) {
    const double d = eig.values(i);
    const double scale = d >= 0.0 ? 1.0 : weak_scale;
    out.f_star.col(i) *= scale;
    out.value += d * (objective_exponent == 2 ? scale * scale : scale);
  }
  return out;
}

RelaxedGroupSolution solve_alpha_star(const HermitianMatrix& group_corr,
                                      const HermitianMatrix& leakage_corr, Index group_size,
                                      int user_count, double total_power,
                                      const RelaxedOptions& options) {
  if (!(total_power > 0.0)) throw Error(ErrorKind::kInvalidInput, "solve_alpha_star: P must be > 0");
  if (!(options.tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "solve_alpha_star: tolerance must be > 0");
  }
  const double slope = static_cast<double>(user_count) * static_cast<double>(group_size) / total_power;
  auto step = [&](double alpha) {
    return relaxed_step(group_corr, leakage_corr, alpha, group_size, options.objective_exponent);
  };
  auto residual = [&](const RelaxedStep& s, double alpha) { return s.value - slope * alpha; };

  const RelaxedStep at_zero = step(0.0);
  if (!(at_zero.value > 0.0)) {
    throw Error(ErrorKind::kDegenerateGroup, "solve_alpha_star: f(0) <= 0, group has no signal subspace");
  }

  RelaxedGroupSolution out;
  double lo = 0.0;
  double r_lo = residual(at_zero, 0.0);
  double hi = 1.0;
  RelaxedStep at_hi = step(hi);
  double r_hi = residual(at_hi, hi);
  for (int doubling = 0; r_hi > 0.0; ++doubling) {
    if (doubling > 1000) {
      throw Error(ErrorKind::kDegenerateGroup, "solve_alpha_star: could not bracket the root");
    }
    lo = hi;
    r_lo = r_hi;
    hi *= 2.0;
    at_hi = step(hi);
    r_hi = residual(at_hi, hi);
  }
  out.bracket_low = lo;
  out.bracket_high = hi;
  out.residual_low = r_lo;
  out.residual_high = r_hi;

  auto converged = [&](double r, double alpha) {
    return std::abs(r) <= options.tolerance * slope * alpha;
  };

  if (converged(r_hi, hi)) {
    out.alpha_star = hi;
    out.f_star = std::move(at_hi.f_star);
    out.value = at_hi.value;
    return out;
  }

  double mid = 0.5 * (lo + hi);
  RelaxedStep at_mid = step(mid);
  for (int it = 0; it < options.max_iterations; ++it) {
    mid = 0.5 * (lo + hi);
    at_mid = step(mid);
    const double r_mid = residual(at_mid, mid);
    out.iterations = it + 1;
    if (converged(r_mid, mid)) break;
    if (r_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.alpha_star = mid;
  out.f_star = std::move(at_mid.f_star);
  out.value = at_mid.value;
  return out;
}

RelaxedSolution solve_relaxed(const Grouping& grouping, double total_power,
                              const RelaxedOptions& options) {
  RelaxedSolution out;
  out.groups.reserve(static_cast<std::size_t>(grouping.group_count()));
  for (int g = 0; g < grouping.group_count(); ++g) {
    out.groups.push_back(solve_alpha_star(grouping.group_correlations[static_cast<std::size_t>(g)],
                                          leakage_correlation(grouping, g), grouping.size(g),
                                          grouping.user_count(), total_power, options));
  }
  return out;
}

int quantize_phase(Complex z, int bits) {
  check_bits(bits);
  const double mag = std::abs(z);
  if (mag == 0.0) return 0;
  const Complex u = z / mag;
  const int levels = 1 << bits;
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  // Grid points carry rounding error of a few ulp, so distances within
  // kTie count as equal and keep the lower index.
  constexpr double kTie = 1e-12;
  for (int n = 0; n < levels; ++n) {
    const double d = std::abs(u - std::polar(1.0, 2.0 * std::numbers::pi * n / levels));
    if (d < best_dist - kTie) {
      best_dist = d;
      best = n;
    }
  }
  return best;
}

Complex quantized_entry(int phase, int bits, Index antenna_count) {
  const int levels = 1 << bits;
  return std::polar(1.0 / std::sqrt(static_cast<double>(antenna_count)),
                    2.0 * std::numbers::pi * phase / levels);
}

RfPrecoder RfPrecoder::from_assignment(Index chain_count, std::vector<int> antenna_to_chain,
                                       std::vector<int> phase_index, int bits) {
  check_bits(bits);
  const Index M = static_cast<Index>(antenna_to_chain.size());
  if (M < 1 || phase_index.size() != antenna_to_chain.size() || chain_count < 1) {
    throw Error(ErrorKind::kInvalidInput, "RfPrecoder: inconsistent assignment sizes");
  }
  RfPrecoder out;
  out.f_ = ComplexMatrix::Zero(M, chain_count);
  for (Index m = 0; m < M; ++m) {
    const int l = antenna_to_chain[static_cast<std::size_t>(m)];
    const int n = phase_index[static_cast<std::size_t>(m)];
    if (l < 0 || l >= chain_count || n < 0 || n >= (1 << bits)) {
      throw Error(ErrorKind::kInvalidInput, "RfPrecoder: chain or phase index out of range");
    }
    out.f_(m, l) = quantized_entry(n, bits, M);
  }
  out.antenna_to_chain_ = std::move(antenna_to_chain);
  out.phase_index_ = std::move(phase_index);
  out.bits_ = bits;
  return out;
}

std::vector<int> RfPrecoder::chain_loads() const {
  std::vector<int> loads(static_cast<std::size_t>(chain_count()), 0);
  for (const int l : antenna_to_chain_) ++loads[static_cast<std::size_t>(l)];
  return loads;
}

ComplexMatrix RfPrecoder::group_block(const Grouping& grouping, int g) const {
  const auto& chains = grouping.rf_chains[static_cast<std::size_t>(g)];
  ComplexMatrix block(f_.rows(), static_cast<Index>(chains.size()));
  for (std::size_t i = 0; i < chains.size(); ++i) block.col(static_cast<Index>(i)) = f_.col(chains[i]);
  return block;
}

std::optional<std::string> RfPrecoder::violation() const {
  const Index M = f_.rows();
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(M));
  std::vector<int> column_hits(static_cast<std::size_t>(f_.cols()), 0);
  for (Index m = 0; m < M; ++m) {
    int nonzeros = 0;
    Index where = -1;
    for (Index l = 0; l < f_.cols(); ++l) {
      if (f_(m, l) != Complex(0.0, 0.0)) {
        ++nonzeros;
        where = l;
      }
    }
    const std::string row = "row " + std::to_string(m);
    if (nonzeros != 1) return row + " has " + std::to_string(nonzeros) + " nonzero entries";
    if (where != antenna_to_chain_[static_cast<std::size_t>(m)]) return row + " disagrees with its chain map";
    const int n = phase_index_[static_cast<std::size_t>(m)];
    if (n < 0 || n >= (1 << bits_)) return row + " has a phase index off the grid";
    if (f_(m, where) != quantized_entry(n, bits_, M)) return row + " is not the quantized grid value";
    if (std::abs(std::abs(f_(m, where)) - magnitude) > 4.0 * std::numeric_limits<double>::epsilon() * magnitude) {
      return row + " magnitude differs from 1/sqrt(M)";
    }
    ++column_hits[static_cast<std::size_t>(where)];
  }
  for (std::size_t l = 0; l < column_hits.size(); ++l) {
    if (column_hits[l] == 0) return "column " + std::to_string(l) + " has no antenna";
  }
  return std::nullopt;
}

RfPrecoder grfp_assign(const RelaxedSolution& relaxed, const Grouping& grouping, int bits,
                       Index antenna_count) {
  check_bits(bits);
  const int G = grouping.group_count();
  const int K = grouping.user_count();
  const Index M = antenna_count;
  if (static_cast<int>(relaxed.groups.size()) != G) {
    throw Error(ErrorKind::kInvalidInput, "grfp_assign: relaxed solution does not cover every group");
  }
  if (K > M) throw Error(ErrorKind::kInvalidInput, "grfp_assign: requires K <= M");

  for (int g = 0; g < G; ++g) {
    const ComplexMatrix& fs = relaxed.groups[static_cast<std::size_t>(g)].f_star;
    if (fs.rows() != M || fs.cols() != grouping.size(g)) {
      throw Error(ErrorKind::kInvalidInput, "grfp_assign: relaxed block has wrong shape");
    }
    for (Index i = 0; i < fs.cols(); ++i) {
      if (fs.col(i).isZero(0.0)) {
        throw Error(ErrorKind::kZeroColumn, "grfp_assign: relaxed column " + std::to_string(i) +
                                                " of group " + std::to_string(g) + " is identically zero");
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(G));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return relaxed.groups[static_cast<std::size_t>(a)].alpha_star <
           relaxed.groups[static_cast<std::size_t>(b)].alpha_star;
  });

  std::vector<int> chain(static_cast<std::size_t>(M), -1);
  std::vector<int> phase(static_cast<std::size_t>(M), 0);
  Index assigned = 0;
  while (assigned < M) {
    for (const int g : order) {
      const ComplexMatrix& fs = relaxed.groups[static_cast<std::size_t>(g)].f_star;
      for (Index i = 0; i < fs.cols() && assigned < M; ++i) {
        Index best = -1;
        double best_mag = -1.0;
        for (Index m = 0; m < M; ++m) {
          if (chain[static_cast<std::size_t>(m)] >= 0) continue;
          const double mag = std::abs(fs(m, i));
          if (mag > best_mag) {
            best_mag = mag;
            best = m;
          }
        }
        chain[static_cast<std::size_t>(best)] = grouping.rf_chains[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)];
        phase[static_cast<std::size_t>(best)] = quantize_phase(fs(best, i), bits);
        ++assigned;
      }
      if (assigned == M) break;
    }
  }
  return RfPrecoder::from_assignment(K, std::move(chain), std::move(phase), bits);
}

double sslnr(const ComplexMatrix& group_block, const Grouping& grouping, int g, double total_power) {
  if (g < 0 || g >= grouping.group_count()) {
    throw Error(ErrorKind::kInvalidInput, "sslnr: group index out of range");
  }
  if (group_block.rows() != grouping.antenna_count()) {
    throw Error(ErrorKind::kInvalidInput, "sslnr: block must have M rows");
  }
  const double s_g = grouping.size(g);
  const double signal = quadratic_trace(group_block, grouping.group_correlations[static_cast<std::size_t>(g)]);
  double leakage = 0.0;
  for (int other = 0; other < grouping.group_count(); ++other) {
    if (other == g) continue;
    leakage += s_g * grouping.size(other) *
               quadratic_trace(group_block, grouping.group_correlations[static_cast<std::size_t>(other)]);
  }
  return signal / (leakage + grouping.user_count() * s_g / total_power);
}

MphpRfDesign design_mphp_rf(const Grouping& grouping, int bits, double total_power,
                            const RelaxedOptions& options) {
  MphpRfDesign out{solve_relaxed(grouping, total_power, options), {}};
  out.rf = grfp_assign(out.relaxed, grouping, bits, grouping.antenna_count());
  return out;
}

}  // namespace mphp

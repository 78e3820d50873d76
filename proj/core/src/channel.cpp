#include "mphp/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mphp/seed.hpp"

namespace mphp {
namespace {

constexpr double kTruncation = 2.0;  // in standard deviations

// Truncated N(mean, spread^2) on [mean - 2 spread, mean + 2 spread].
double sample_aod(const UserChannelParams& params, std::mt19937_64& rng) {
  if (params.angular_spread == 0.0) return params.mean_aod;
  std::normal_distribution<double> normal(0.0, 1.0);
  double z = 0.0;
  do {
    z = normal(rng);
  } while (std::abs(z) > kTruncation);
  return params.mean_aod + params.angular_spread * z;
}

}  // namespace

void ArrayGeometry::validate() const {
  if (antenna_count < 1) {
    throw Error(ErrorKind::kInvalidInput, "antenna_count must be >= 1");
  }
  if (!(element_spacing > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "element_spacing must be > 0");
  }
}

void UserChannelParams::validate() const {
  if (!(std::abs(mean_aod) < std::numbers::pi / 2)) {
    throw Error(ErrorKind::kInvalidInput, "mean_aod must lie in (-pi/2, pi/2)");
  }
  if (!(angular_spread >= 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "angular_spread must be >= 0");
  }
  if (path_count < 1) throw Error(ErrorKind::kInvalidInput, "path_count must be >= 1");
  if (!(mean_power > 0.0)) throw Error(ErrorKind::kInvalidInput, "mean_power must be > 0");
}

ComplexVector steering_vector(double theta, const ArrayGeometry& geometry) {
  const double phase_step = 2.0 * std::numbers::pi * geometry.element_spacing * std::sin(theta);
  ComplexVector a(geometry.antenna_count);
  for (Index m = 0; m < geometry.antenna_count; ++m) {
    a(m) = std::polar(1.0, phase_step * static_cast<double>(m));
  }
  return a;
}

HermitianMatrix correlation_from_params(const UserChannelParams& params,
                                        const ArrayGeometry& geometry,
                                        int quadrature_points) {
  params.validate();
  geometry.validate();
  if (quadrature_points < 32) {
    throw Error(ErrorKind::kInvalidInput, "quadrature_points must be >= 32");
  }
  const Index M = geometry.antenna_count;
  const double target_trace = static_cast<double>(M) * params.mean_power;

  if (params.angular_spread == 0.0) {
    const ComplexVector a = steering_vector(params.mean_aod, geometry);
    return HermitianMatrix(params.mean_power * a * a.adjoint());
  }

  const double sigma = params.angular_spread;
  const double lo = params.mean_aod - kTruncation * sigma;
  const double step = 2.0 * kTruncation * sigma / quadrature_points;

  ComplexMatrix acc = ComplexMatrix::Zero(M, M);
  double weight_sum = 0.0;
  for (int i = 0; i < quadrature_points; ++i) {
    const double theta = lo + (i + 0.5) * step;
    const double z = (theta - params.mean_aod) / sigma;
    const double w = std::exp(-0.5 * z * z);
    const ComplexVector a = steering_vector(theta, geometry);
    acc.noalias() += w * (a * a.adjoint());
    weight_sum += w;
  }
  acc *= params.mean_power / weight_sum;

  HermitianMatrix r = project_psd(HermitianMatrix(acc));
  r *= target_trace / r.trace();
  return r;
}

CorrelationSet correlations_from_params(std::span<const UserChannelParams> users,
                                        const ArrayGeometry& geometry,
                                        int quadrature_points) {
  CorrelationSet out;
  out.per_user.reserve(users.size());
  for (const auto& u : users) {
    out.per_user.push_back(correlation_from_params(u, geometry, quadrature_points));
  }
  return out;
}

ChannelRealization draw_channel(std::span<const UserChannelParams> users,
                                const ArrayGeometry& geometry, std::uint64_t seed,
                                std::uint64_t slot) {
  geometry.validate();
  if (users.empty()) throw Error(ErrorKind::kInvalidInput, "draw_channel: need at least one user");

  const Index M = geometry.antenna_count;
  ChannelRealization out{ComplexMatrix::Zero(M, static_cast<Index>(users.size()))};
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

  for (std::size_t k = 0; k < users.size(); ++k) {
    const UserChannelParams& u = users[k];
    std::mt19937_64 rng(derive_seed({seed, static_cast<std::uint64_t>(k), slot}));
    std::normal_distribution<double> normal(0.0, 1.0);

    ComplexVector h = ComplexVector::Zero(M);
    for (int p = 0; p < u.path_count; ++p) {
      const double theta = sample_aod(u, rng);
      const double re = normal(rng);
      const double im = normal(rng);
      const Complex beta(re * inv_sqrt2, im * inv_sqrt2);
      h += beta * steering_vector(theta, geometry);
    }
    out.H.col(static_cast<Index>(k)) = std::sqrt(u.mean_power / u.path_count) * h;
  }
  return out;
}

std::vector<UserChannelParams> clustered_users(int user_count, int cluster_count,
                                               const ScenarioParams& scenario,
                                               std::uint64_t seed) {
  if (user_count < 1 || cluster_count < 1) {
    throw Error(ErrorKind::kInvalidInput, "clustered_users: need at least one user and cluster");
  }
  const double span = 2.0 * std::numbers::pi / 3.0;
  std::mt19937_64 rng(derive_seed({seed, 0x5ce7a210ULL}));
  std::uniform_real_distribution<double> jitter(-scenario.aod_jitter, scenario.aod_jitter);

  std::vector<UserChannelParams> users(static_cast<std::size_t>(user_count));
  for (int k = 0; k < user_count; ++k) {
    const int c = k % cluster_count;
    const double center = -std::numbers::pi / 3.0 + span * (c + 0.5) / cluster_count;
    auto& u = users[static_cast<std::size_t>(k)];
    u.mean_aod = center + (scenario.aod_jitter > 0.0 ? jitter(rng) : 0.0);
    u.angular_spread = scenario.angular_spread;
    u.path_count = scenario.path_count;
    u.mean_power = scenario.mean_power;
    u.validate();
  }
  return users;
}

}  // namespace mphp

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mphp/numerics.hpp"

namespace mphp {

/// Uniform linear array at the base station.
struct ArrayGeometry {
  Index antenna_count = 64;
  double element_spacing = 0.5;  // wavelengths

  void validate() const;
};

/// Per-user geometric multipath parameters. The angle of departure of each
/// path follows a Gaussian centered at mean_aod with std angular_spread,
/// truncated at two standard deviations.
struct UserChannelParams {
  double mean_aod = 0.0;        // radians
  double angular_spread = 0.0;  // radians
  int path_count = 1;
  double mean_power = 1.0;

  void validate() const;
};

/// Downlink channel for one slot; column k is h_k.
struct ChannelRealization {
  ComplexMatrix H;

  Index antenna_count() const { return H.rows(); }
  Index user_count() const { return H.cols(); }
};

struct CorrelationSet {
  std::vector<HermitianMatrix> per_user;
};

inline constexpr int kDefaultQuadraturePoints = 256;

/// a(theta)_m = exp(j 2 pi spacing m sin(theta)), m = 0..M-1.
ComplexVector steering_vector(double theta, const ArrayGeometry& geometry);

/// R = E[h h^H] by midpoint quadrature of the truncated-Gaussian angle
/// density. The result is PSD-projected and its trace renormalized to
/// M * mean_power.
HermitianMatrix correlation_from_params(const UserChannelParams& params,
                                        const ArrayGeometry& geometry,
                                        int quadrature_points = kDefaultQuadraturePoints);

CorrelationSet correlations_from_params(std::span<const UserChannelParams> users,
                                        const ArrayGeometry& geometry,
                                        int quadrature_points = kDefaultQuadraturePoints);

/// h_k = sqrt(mean_power / paths) * sum_p beta_p a(theta_p), beta_p ~ CN(0,1).
/// Deterministic in (seed, user index, slot).
ChannelRealization draw_channel(std::span<const UserChannelParams> users,
                                const ArrayGeometry& geometry, std::uint64_t seed,
                                std::uint64_t slot);

/// Clustered user layout used by the experiments.
struct ScenarioParams {
  double angular_spread = 0.02;  // radians, about 1.1 degrees
  int path_count = 20;
  double aod_jitter = 0.02;
  double mean_power = 1.0;
  int quadrature_points = kDefaultQuadraturePoints;

  bool operator==(const ScenarioParams&) const = default;
};

/// G cluster centers evenly spaced over (-pi/3, pi/3); user k joins cluster
/// k mod G with a uniform AoD jitter in [-aod_jitter, aod_jitter].
std::vector<UserChannelParams> clustered_users(int user_count, int cluster_count,
                                               const ScenarioParams& scenario,
                                               std::uint64_t seed);

}  // namespace mphp

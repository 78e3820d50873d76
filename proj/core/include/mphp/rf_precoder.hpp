#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mphp/grouping.hpp"
#include "mphp/numerics.hpp"

namespace mphp {

/// Controls the per-group relaxed solve.
struct RelaxedOptions {
  double tolerance = 1e-9;
  int max_iterations = 200;
  /// Power applied to the column scaling in the relaxed objective:
  /// f(alpha) = sum_i d_i * Lambda_i^exponent. With F* = U * Lambda the
  /// trace objective is exactly the squared form.
  int objective_exponent = 2;

  bool operator==(const RelaxedOptions&) const = default;
};

struct RelaxedStep {
  ComplexMatrix f_star;  // M x S_g
  double value = 0.0;    // f(alpha)
};

struct RelaxedGroupSolution {
  double alpha_star = 0.0;
  ComplexMatrix f_star;
  double value = 0.0;  // f(alpha_star)
  int iterations = 0;
  // Bracket used for the bisection and the residual f(a) - c a at each end.
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  double residual_low = 0.0;
  double residual_high = 0.0;
};

struct RelaxedSolution {
  std::vector<RelaxedGroupSolution> groups;
};

/// R_bar_g = sum_{g' != g} S_g S_g' R_g'.
HermitianMatrix leakage_correlation(const Grouping& grouping, int g);

/// Maximizes Tr(R_g F F^H) - alpha Tr(R_bar_g F F^H) over F with S_g columns.
RelaxedStep relaxed_step(const HermitianMatrix& group_corr, const HermitianMatrix& leakage_corr,
                         double alpha, Index group_size, int objective_exponent = 2);

/// Bisection on f(alpha) = (K S_g / P) alpha. Throws kDegenerateGroup when
/// f(0) <= 0.
RelaxedGroupSolution solve_alpha_star(const HermitianMatrix& group_corr,
                                      const HermitianMatrix& leakage_corr, Index group_size,
                                      int user_count, double total_power,
                                      const RelaxedOptions& options = {});

RelaxedSolution solve_relaxed(const Grouping& grouping, double total_power,
                              const RelaxedOptions& options = {});

/// Adaptive partially-connected analog precoder: every antenna drives
/// exactly one RF chain through one B-bit phase shifter.
class RfPrecoder {
 public:
  /// Entries are (1/sqrt(M)) exp(j 2 pi phase[m] / 2^B) at (m, chain[m]).
  static RfPrecoder from_assignment(Index chain_count, std::vector<int> antenna_to_chain,
                                    std::vector<int> phase_index, int bits);

  const ComplexMatrix& matrix() const { return f_; }
  const std::vector<int>& antenna_to_chain() const { return antenna_to_chain_; }
  const std::vector<int>& phase_index() const { return phase_index_; }
  int bits() const { return bits_; }
  Index antenna_count() const { return f_.rows(); }
  Index chain_count() const { return f_.cols(); }

  /// Antennas connected to each chain (N_l).
  std::vector<int> chain_loads() const;

  /// Columns of F belonging to group g (M x S_g).
  ComplexMatrix group_block(const Grouping& grouping, int g) const;

  /// Checks the structural constraints on the stored matrix itself: one
  /// nonzero per row, each nonzero exactly the quantized unit-modulus value
  /// for its phase index, no empty column. Returns a description of the
  /// first violation, or nullopt.
  std::optional<std::string> violation() const;

 private:
  ComplexMatrix f_;
  std::vector<int> antenna_to_chain_;
  std::vector<int> phase_index_;
  int bits_ = 1;
};

/// Nearest point of the 2^B phase grid to z / |z|; ties to the lowest index.
/// Returns 0 for z == 0.
int quantize_phase(Complex z, int bits);

/// (1/sqrt(M)) exp(j 2 pi n / 2^B).
Complex quantized_entry(int phase, int bits, Index antenna_count);

/// Greedy projection of the relaxed solution onto the quantized
/// partially-connected set. Groups are visited in ascending alpha* order,
/// repeating the sweep until every antenna is assigned.
RfPrecoder grfp_assign(const RelaxedSolution& relaxed, const Grouping& grouping, int bits,
                       Index antenna_count);

/// Statistical SLNR of group g for the M x S_g block F_g.
double sslnr(const ComplexMatrix& group_block, const Grouping& grouping, int g,
             double total_power);

/// Relaxed solve followed by GRFP; uses correlations only.
struct MphpRfDesign {
  RelaxedSolution relaxed;
  RfPrecoder rf;
};

MphpRfDesign design_mphp_rf(const Grouping& grouping, int bits, double total_power,
                            const RelaxedOptions& options = {});

}  // namespace mphp

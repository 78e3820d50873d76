#pragma once

#include <complex>

#include <Eigen/Dense>

#include "mphp/error.hpp"

namespace mphp {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numeric policy shared by every module.
inline constexpr double kReconstructionTolerance = 1e-10;
inline constexpr double kSolveTolerance = 1e-8;
inline constexpr double kConditionLimit = 1e12;

/// Square complex matrix that is Hermitian as stored. The constructor
/// symmetrizes its argument, so A == A^H holds bit-for-bit afterwards.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& a);

  static HermitianMatrix zero(Index dim);

  Index dim() const { return a_.rows(); }
  const ComplexMatrix& matrix() const { return a_; }
  double trace() const { return a_.trace().real(); }

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double scale);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.dim() == b.dim() && a.a_ == b.a_;
  }

 private:
  ComplexMatrix a_;
};

/// Eigenpairs sorted by descending eigenvalue; column i of `vectors`
/// pairs with `values[i]`.
struct EigenDecomposition {
  RealVector values;
  ComplexMatrix vectors;
};

EigenDecomposition hermitian_eig(const HermitianMatrix& a);

/// 2-norm condition number from singular values; +inf when singular.
double condition_number(const ComplexMatrix& a);

/// Returns B with A*B = I. Throws kNearSingular when the condition number
/// exceeds kConditionLimit.
ComplexMatrix solve_right_inverse(const ComplexMatrix& a);

/// The r eigenvectors of A with the largest eigenvalues, as columns.
ComplexMatrix dominant_subspace(const HermitianMatrix& a, Index r);

/// Clamps negative eigenvalues to zero.
HermitianMatrix project_psd(const HermitianMatrix& a);

}  // namespace mphp

#include "mphp/numerics.hpp"

#include <limits>
#include <string>

namespace mphp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kNearSingular: return "near-singular matrix";
    case ErrorKind::kDegenerateGroup: return "degenerate group";
    case ErrorKind::kZeroColumn: return "zero column";
    case ErrorKind::kDegenerateBeam: return "degenerate beam";
    case ErrorKind::kUndefinedFairness: return "undefined fairness";
    case ErrorKind::kIo: return "i/o failure";
  }
  return "unknown";
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidInput,
                "Hermitian matrix must be square, got " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()));
  }
  // x + conj(y) and y + conj(x) round identically, so the result is
  // exactly Hermitian.
  a_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  a_ += other.a_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  a_ -= other.a_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double scale) {
  a_ *= scale;
  return *this;
}

EigenDecomposition hermitian_eig(const HermitianMatrix& a) {
  if (a.dim() == 0) {
    throw Error(ErrorKind::kInvalidInput, "hermitian_eig: dimension must be at least 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidInput, "hermitian_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double condition_number(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const RealVector& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double smallest = s(s.size() - 1);
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

ComplexMatrix solve_right_inverse(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidInput, "solve_right_inverse: matrix must be square and non-empty");
  }
  const double cond = condition_number(a);
  if (!(cond <= kConditionLimit)) {
    throw Error(ErrorKind::kNearSingular,
                "solve_right_inverse: condition number " + std::to_string(cond) + " exceeds limit");
  }
  return a.fullPivLu().solve(ComplexMatrix::Identity(a.rows(), a.cols()));
}

ComplexMatrix dominant_subspace(const HermitianMatrix& a, Index r) {
  if (r < 1 || r > a.dim()) {
    throw Error(ErrorKind::kInvalidInput, "dominant_subspace: rank out of range");
  }
  return hermitian_eig(a).vectors.leftCols(r);
}

HermitianMatrix project_psd(const HermitianMatrix& a) {
  const EigenDecomposition eig = hermitian_eig(a);
  const RealVector clamped = eig.values.cwiseMax(0.0);
  return HermitianMatrix(eig.vectors * clamped.asDiagonal() * eig.vectors.adjoint());
}

}  // namespace mphp

#pragma once

#include <cstdint>
#include <random>

#include "mphp/numerics.hpp"

namespace mphp::testing {

inline ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = Complex(n(rng), n(rng));
  return a;
}

inline HermitianMatrix random_hermitian(Index dim, std::mt19937_64& rng) {
  return HermitianMatrix(random_matrix(dim, dim, rng));
}

/// Wishart-style PSD matrix of the given rank.
inline HermitianMatrix random_psd(Index dim, Index rank, std::mt19937_64& rng) {
  const ComplexMatrix x = random_matrix(dim, rank, rng);
  return HermitianMatrix(x * x.adjoint() / static_cast<double>(rank));
}

inline double relative_frobenius(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace mphp::testing

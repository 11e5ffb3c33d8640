#ifndef CAVQFI_TESTS_SUPPORT_HPP
#define CAVQFI_TESTS_SUPPORT_HPP

#include <random>

#include "cavqfi/matrix.hpp"

namespace cavqfi::testing {

inline ComplexMatrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix g = random_complex(rng, n, n);
  return (g + g.adjoint()) / 2.0;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(rng, n, n));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// Random state of the requested rank.
inline ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  const ComplexMatrix g = random_complex(rng, n, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

}  // namespace cavqfi::testing

#endif

#ifndef CAVQFI_MATRIX_HPP
#define CAVQFI_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "cavqfi/core.hpp"

namespace cavqfi {

/// Spectral decomposition H = V diag(eigenvalues) V^dag, eigenvalues ascending.
template <typename Scalar>
struct EigenSystem {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  VectorX<Real> eigenvalues;
  MatrixX<Scalar> eigenvectors;
};

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

namespace detail {

// Rotates rows/columns p and q of `a` by the 2x2 unitary
//   U = [[c, s], [-s conj(w), c conj(w)]]
// which annihilates a(p, q) when a(p, q) = |a(p, q)| w.
template <typename Scalar>
void jacobi_rotate(MatrixX<Scalar>& a, MatrixX<Scalar>& v, Eigen::Index p, Eigen::Index q) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Eigen::numext::conj;
  const Scalar apq = a(p, q);
  const Real mag = std::abs(apq);
  if (mag == Real(0)) return;
  const Scalar w = apq / mag;
  const Real app = Eigen::numext::real(a(p, p));
  const Real aqq = Eigen::numext::real(a(q, q));
  const Real theta = (aqq - app) / (Real(2) * mag);
  const Real t = (theta >= Real(0) ? Real(1) : Real(-1)) /
                 (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
  const Real c = Real(1) / std::sqrt(t * t + Real(1));
  const Real s = t * c;
  const Scalar wc = conj(w);
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar aip = a(i, p);
    const Scalar aiq = a(i, q);
    a(i, p) = c * aip - s * wc * aiq;
    a(i, q) = s * aip + c * wc * aiq;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar apj = a(p, j);
    const Scalar aqj = a(q, j);
    a(p, j) = c * apj - s * w * aqj;
    a(q, j) = s * apj + c * w * aqj;
  }
  a(p, q) = Scalar(0);
  a(q, p) = Scalar(0);
  a(p, p) = Scalar(app - t * mag);
  a(q, q) = Scalar(aqq + t * mag);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar vip = v(i, p);
    const Scalar viq = v(i, q);
    v(i, p) = c * vip - s * wc * viq;
    v(i, q) = s * vip + c * wc * viq;
  }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian (or real symmetric) matrices up to
/// 64x64. Eigenvalues come back ascending; each eigenvector is rotated so its
/// largest component is real and positive, and vectors inside a degenerate
/// cluster are re-orthonormalized, so identical input gives identical output.
template <typename Derived>
EigenSystem<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "hermitian_eig needs a square matrix");
  }
  const Eigen::Index n = h.rows();
  if (n > kTol.max_dense_dim) {
    throw Error(ErrorCode::DimensionTooLarge,
                "hermitian_eig supports dim <= " + std::to_string(kTol.max_dense_dim));
  }
  const Real scale = std::max(Real(1), max_abs(h));
  const Real defect = hermiticity_defect(h);
  if (!(defect <= Real(kTol.hermiticity) * scale)) {
    throw Error(ErrorCode::NonHermitianInput,
                "hermiticity defect " + std::to_string(double(defect)));
  }

  MatrixX<Scalar> a = (h + h.adjoint()) / Real(2);
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Real frob = a.norm();
  const Real stop = std::numeric_limits<Real>::epsilon() * Real(1e-3) * frob;
  for (int sweep = 0; sweep < 64; ++sweep) {
    Real off = 0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += Eigen::numext::abs2(a(p, q));
    }
    if (std::sqrt(off) <= stop) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return Eigen::numext::real(a(x, x)) < Eigen::numext::real(a(y, y));
  });

  EigenSystem<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.eigenvalues(j) = Eigen::numext::real(a(src, src));
    out.eigenvectors.col(j) = v.col(src);
  }

  // Modified Gram-Schmidt inside each cluster of (near-)degenerate eigenvalues.
  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && out.eigenvalues(end) - out.eigenvalues(end - 1) < Real(kTol.degenerate_gap)) ++end;
    for (Eigen::Index j = start; j < end; ++j) {
      auto col = out.eigenvectors.col(j);
      for (Eigen::Index i = start; i < j; ++i) {
        col -= out.eigenvectors.col(i) * out.eigenvectors.col(i).dot(col);
      }
      col.normalize();
    }
    start = end;
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = out.eigenvectors.col(j);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    const Scalar pivot = col(arg);
    col *= Eigen::numext::conj(pivot) / std::abs(pivot);
    col(arg) = Scalar(Eigen::numext::real(col(arg)));
  }
  return out;
}

/// Kronecker product: entry (i*db + k, j*db + l) = a(i,j) * b(k,l).
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  MatrixX<typename DerivedA::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

enum class Subsystem { First, Second };

/// Partial trace of an operator on C^dA (x) C^dB, keeping `keep`.
template <typename Derived>
MatrixX<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m, Subsystem keep,
                                               Eigen::Index dim_a, Eigen::Index dim_b) {
  using Scalar = typename Derived::Scalar;
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b || m.cols() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "partial_trace: dims do not match operator");
  }
  if (keep == Subsystem::First) {
    MatrixX<Scalar> out = MatrixX<Scalar>::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(dim_b, dim_b);
  for (Eigen::Index k = 0; k < dim_b; ++k)
    for (Eigen::Index l = 0; l < dim_b; ++l)
      for (Eigen::Index i = 0; i < dim_a; ++i) out(k, l) += m(i * dim_b + k, i * dim_b + l);
  return out;
}

/// Hermitian, unit-trace, positive semidefinite matrix with basis labels.
/// Construction validates the invariants and throws InvalidDensityMatrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, std::vector<std::string> labels = {});

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<std::string>& labels() const { return labels_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  ComplexMatrix matrix_;
  std::vector<std::string> labels_;
  double min_eigenvalue_ = 0.0;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep, Eigen::Index dim_a,
                            Eigen::Index dim_b);

}  // namespace cavqfi

#endif  // CAVQFI_MATRIX_HPP

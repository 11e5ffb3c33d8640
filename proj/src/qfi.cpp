#include "cavqfi/qfi.hpp"

#include <sstream>

namespace cavqfi {

namespace {

void check_derivative(const DensityMatrix& rho, const ComplexMatrix& drho) {
  if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "derivative dimension differs from state");
  }
  const double herm = hermiticity_defect(drho);
  const double trace = std::abs(drho.trace());
  if (herm > kTol.derivative_hermiticity || trace > kTol.derivative_trace) {
    std::ostringstream msg;
    msg << "derivative hermiticity defect " << herm << ", trace " << trace;
    throw Error(ErrorCode::InvalidDerivative, msg.str());
  }
}

// drho in the eigenbasis of rho, with the support check applied.
struct SpectralView {
  RealVector p;
  ComplexMatrix basis;
  ComplexMatrix d;  // <m|drho|n>
};

SpectralView spectral_view(const DensityMatrix& rho, const ComplexMatrix& drho) {
  const auto eig = hermitian_eig(rho.matrix());
  SpectralView view{eig.eigenvalues, eig.eigenvectors,
                    eig.eigenvectors.adjoint() * drho * eig.eigenvectors};
  const Eigen::Index n = view.p.size();
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (view.p(m) + view.p(k) <= kTol.support_cut && std::abs(view.d(m, k)) > kTol.support_leak) {
        std::ostringstream msg;
        msg << "drho couples eigen-directions " << m << "," << k << " outside the support (|<m|drho|n>| = "
            << std::abs(view.d(m, k)) << ")";
        throw Error(ErrorCode::UnsupportedDerivativeComponent, msg.str());
      }
    }
  }
  return view;
}

template <typename Fn>
auto central(const Fn& fn, double x, double step) {
  using Value = decltype(fn(x));
  return Value((fn(x + step) - fn(x - step)) / (2.0 * step));
}

}  // namespace

ParameterizedFamily finite_difference_family(std::function<DensityMatrix(double)> evaluate, double step) {
  ParameterizedFamily family;
  family.evaluate = evaluate;
  family.derivative = [evaluate, step](double x) -> ComplexMatrix {
    return (evaluate(x + step).matrix() - evaluate(x - step).matrix()) / (2.0 * step);
  };
  return family;
}

Povm::Povm(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorCode::InvalidPovm, "no elements");
  const Eigen::Index n = elements_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& e : elements_) {
    if (e.rows() != n || e.cols() != n) throw Error(ErrorCode::InvalidPovm, "element dimensions differ");
    if (hermiticity_defect(e) > kTol.hermiticity * std::max(1.0, max_abs(e))) {
      throw Error(ErrorCode::InvalidPovm, "element is not Hermitian");
    }
    if (hermitian_eig(e).eigenvalues(0) < kTol.povm_psd) {
      throw Error(ErrorCode::InvalidPovm, "element is not positive semidefinite");
    }
    sum += e;
  }
  const double defect = max_abs(sum - ComplexMatrix::Identity(n, n));
  if (defect > kTol.povm_completeness) {
    std::ostringstream msg;
    msg << "completeness defect " << defect;
    throw Error(ErrorCode::InvalidPovm, msg.str());
  }
}

Povm projective_povm(const ComplexMatrix& basis) {
  std::vector<ComplexMatrix> elements;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    elements.push_back(basis.col(j) * basis.col(j).adjoint());
  }
  return Povm(std::move(elements));
}

double classical_fisher(const ParameterizedFamily& family, double lambda, const Povm& povm) {
  const DensityMatrix rho = family.evaluate(lambda);
  const ComplexMatrix drho = family.derivative(lambda);
  if (povm.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "POVM and state dimensions differ");
  double fisher = 0.0;
  for (std::size_t i = 0; i < povm.elements().size(); ++i) {
    const auto& e = povm.elements()[i];
    const double p = (e * rho.matrix()).trace().real();
    const double dp = (e * drho).trace().real();
    if (p < kTol.outcome_probability) {
      if (std::abs(dp) >= kTol.outcome_leak) {
        std::ostringstream msg;
        msg << "outcome " << i << " has p = " << p << " but dp = " << dp;
        throw Error(ErrorCode::SingularOutcome, msg.str());
      }
      continue;
    }
    fisher += dp * dp / p;
  }
  return fisher;
}

ComplexMatrix sld_solve(const DensityMatrix& rho, const ComplexMatrix& drho) {
  check_derivative(rho, drho);
  const SpectralView view = spectral_view(rho, drho);
  const Eigen::Index n = view.p.size();
  ComplexMatrix l_eig = ComplexMatrix::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double denom = view.p(m) + view.p(k);
      if (denom > kTol.support_cut) l_eig(m, k) = 2.0 * view.d(m, k) / denom;
    }
  }
  ComplexMatrix l = view.basis * l_eig * view.basis.adjoint();
  return (l + l.adjoint()) / 2.0;
}

double qfi_spectral(const ParameterizedFamily& family, double lambda) {
  const DensityMatrix rho = family.evaluate(lambda);
  const ComplexMatrix drho = family.derivative(lambda);
  check_derivative(rho, drho);
  const SpectralView view = spectral_view(rho, drho);
  double qfi = 0.0;
  for (Eigen::Index m = 0; m < view.p.size(); ++m) {
    for (Eigen::Index k = 0; k < view.p.size(); ++k) {
      const double denom = view.p(m) + view.p(k);
      if (denom > kTol.support_cut) qfi += 2.0 * std::norm(view.d(m, k)) / denom;
    }
  }
  return qfi;
}

double qfi_sld_trace(const ParameterizedFamily& family, double lambda) {
  const DensityMatrix rho = family.evaluate(lambda);
  const ComplexMatrix drho = family.derivative(lambda);
  return (drho * sld_solve(rho, drho)).trace().real();
}

QfiBreakdown qfi_support(std::span<const SpectralBranch> branches, double lambda) {
  const std::size_t m = branches.size();
  if (m == 0) throw Error(ErrorCode::NonNormalizedSpectrum, "empty spectrum");
  const double h = kTol.fd_step;
  std::vector<double> p(m), dp(m);
  std::vector<ComplexVector> psi(m), dpsi(m);
  double total_weight = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& b = branches[i];
    p[i] = b.p(lambda);
    dp[i] = b.dp ? b.dp(lambda) : central(b.p, lambda, h);
    psi[i] = b.psi(lambda);
    dpsi[i] = b.dpsi ? b.dpsi(lambda) : central(b.psi, lambda, h);
    if (p[i] < -kTol.spectrum_sum) {
      throw Error(ErrorCode::NonNormalizedSpectrum, "negative eigenvalue " + std::to_string(p[i]));
    }
    total_weight += p[i];
  }
  if (std::abs(total_weight - 1.0) > kTol.spectrum_sum) {
    throw Error(ErrorCode::NonNormalizedSpectrum, "eigenvalues sum to " + std::to_string(total_weight));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (psi[i].size() != psi[0].size()) throw Error(ErrorCode::DimensionMismatch, "eigenvector sizes differ");
    for (std::size_t j = i; j < m; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(psi[i].dot(psi[j]) - expected) > kTol.orthonormality) {
        throw Error(ErrorCode::NonOrthonormalBasis,
                    "eigenvectors " + std::to_string(i) + "," + std::to_string(j) + " are not orthonormal");
      }
    }
  }

  QfiBreakdown out;
  for (std::size_t i = 0; i < m; ++i) {
    if (p[i] > kTol.support_cut) {
      ++out.support_rank;
      out.classical_part += dp[i] * dp[i] / p[i];
    }
    const Complex overlap = psi[i].dot(dpsi[i]);
    const double pure = dpsi[i].squaredNorm() - std::norm(overlap);
    out.pure_part += 4.0 * p[i] * pure;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || p[i] + p[j] <= kTol.support_cut) continue;
      out.mixture_part += 8.0 * p[i] * p[j] * std::norm(psi[i].dot(dpsi[j])) / (p[i] + p[j]);
    }
  }
  out.total = out.classical_part + out.pure_part - out.mixture_part;
  return out;
}

double qfi_pure(const std::function<ComplexVector(double)>& psi, double lambda,
                const std::function<ComplexVector(double)>& dpsi) {
  const double h = kTol.fd_step;
  const ComplexVector v = psi(lambda);
  ComplexVector dv;
  if (dpsi) {
    dv = dpsi(lambda);
    if (std::abs(v.norm() - 1.0) > kTol.unit_norm) {
      throw Error(ErrorCode::NonUnitVector, "|psi| = " + std::to_string(v.norm()));
    }
  } else {
    const ComplexVector up = psi(lambda + h);
    const ComplexVector down = psi(lambda - h);
    for (const ComplexVector* w : {&v, &up, &down}) {
      if (std::abs(w->norm() - 1.0) > kTol.unit_norm) {
        throw Error(ErrorCode::NonUnitVector, "|psi| = " + std::to_string(w->norm()) + " on the stencil");
      }
    }
    dv = (up - down) / (2.0 * h);
  }
  const double value = dv.squaredNorm() - std::norm(v.dot(dv));
  return value < 0.0 ? 0.0 : value;
}

}  // namespace cavqfi

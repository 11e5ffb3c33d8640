#ifndef CAVQFI_QFI_HPP
#define CAVQFI_QFI_HPP

#include <functional>
#include <span>
#include <vector>

#include "cavqfi/matrix.hpp"

namespace cavqfi {

/// One-parameter family of states rho(lambda) together with d rho / d lambda.
struct ParameterizedFamily {
  std::function<DensityMatrix(double)> evaluate;
  std::function<ComplexMatrix(double)> derivative;
};

/// Wraps `evaluate` with a central-difference derivative of fixed step.
ParameterizedFamily finite_difference_family(std::function<DensityMatrix(double)> evaluate,
                                             double step = kTol.fd_step);

/// Positive operator valued measure; elements are checked for positivity and
/// completeness on construction.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> elements);

  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  Eigen::Index dim() const { return elements_.front().rows(); }

 private:
  std::vector<ComplexMatrix> elements_;
};

/// Rank-one projectors onto the columns of an orthonormal basis.
Povm projective_povm(const ComplexMatrix& basis);

/// Sum over outcomes of (dp)^2 / p with p = Tr(E rho). Outcomes with p and dp
/// both negligible are dropped; p == 0 with a finite dp is SingularOutcome.
double classical_fisher(const ParameterizedFamily& family, double lambda, const Povm& povm);

/// Symmetric logarithmic derivative L solving drho = (rho L + L rho) / 2 on
/// the support of rho.
ComplexMatrix sld_solve(const DensityMatrix& rho, const ComplexMatrix& drho);

/// QFI from the spectral sum 2 |<m|drho|n>|^2 / (p_m + p_n).
double qfi_spectral(const ParameterizedFamily& family, double lambda);

/// QFI as Tr(drho L).
double qfi_sld_trace(const ParameterizedFamily& family, double lambda);

/// Split of the QFI over the support of rho:
///   total = classical_part + pure_part - mixture_part.
struct QfiBreakdown {
  double total = 0.0;
  double classical_part = 0.0;
  double pure_part = 0.0;
  double mixture_part = 0.0;
  int support_rank = 0;
};

/// Eigenvalue p_i(lambda) with eigenvector psi_i(lambda). Derivatives are
/// optional; missing ones are taken by central differences.
struct SpectralBranch {
  std::function<double(double)> p;
  std::function<ComplexVector(double)> psi;
  std::function<double(double)> dp = {};
  std::function<ComplexVector(double)> dpsi = {};
};

QfiBreakdown qfi_support(std::span<const SpectralBranch> branches, double lambda);

/// <dpsi|dpsi> - |<psi|dpsi>|^2 for a unit-vector family.
double qfi_pure(const std::function<ComplexVector(double)>& psi, double lambda,
                const std::function<ComplexVector(double)>& dpsi = {});

}  // namespace cavqfi

#endif  // CAVQFI_QFI_HPP

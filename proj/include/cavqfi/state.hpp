#ifndef CAVQFI_STATE_HPP
#define CAVQFI_STATE_HPP

#include <functional>
#include <vector>

#include "cavqfi/cavity.hpp"
#include "cavqfi/matrix.hpp"
#include "cavqfi/qfi.hpp"

namespace cavqfi {

/// cos(theta) |0>_A |0>_R + sign sin(theta) |1_m>_A |1_k>_R, with mu and nu the
/// charge signs of Alice's mode m and Rob's mode k.
struct PureStateParams {
  double theta = kPi / 4;
  int sign = 1;
  int mu = 1;
  int nu = 1;
};

/// r |psi><psi| + (1 - r) I / 4 with |psi> as in PureStateParams.
struct WernerParams {
  double r = 1.0 / 3.0;
  double theta = kPi / 4;
  int sign = 1;
  int mu = 1;
  int nu = 1;

  double r_c() const { return (1.0 - r) / 4.0; }
  PureStateParams pure() const { return {theta, sign, mu, nu}; }
};

/// Reduced two-cavity state on {A0 R0, A0 R1, A1 R0, A1 R1} after Rob's trip,
/// to order h^2. With a = f^{-nu} h^2 and b = f^{nu} h^2 the diagonal is
///   (c^2 (1 - a), c^2 a, s^2 b, s^2 (1 - b))
/// and the (A0R0, A1R1) coherence is sign s c sqrt((1 - a)(1 - b)) times the
/// coherence phase, which equals G_k + A2_kk h^2 up to O(h^4) and keeps the
/// matrix exactly rank three.
DensityMatrix rho_pure_reduced(const PureStateParams& params, const BogoliubovData& bog, double h);

/// r rho_pure + r^c diag(1 + g^nu h^2, 1 + g^{-nu} h^2, 1 + g^nu h^2, 1 + g^{-nu} h^2).
DensityMatrix rho_werner_reduced(const WernerParams& params, const BogoliubovData& bog, double h);

/// Spectral data of the reduced state with analytic theta-derivatives.
/// Eigenvalue order: pure {p1, A0R1, A1R0, 0},
/// Werner {p1, p2, A0R1, A1R0}. `mixing` is alpha (pure) or beta (Werner).
struct PerturbedEigenSystem {
  std::vector<double> eigenvalues;
  std::vector<double> derivatives;
  std::vector<ComplexVector> eigenvectors;
  std::vector<ComplexVector> eigenvector_derivatives;
  Complex mixing{0.0, 0.0};
  double normalization = 1.0;
  std::function<PerturbedEigenSystem(double)> at_theta;

  /// Theta-dependent branches for qfi_support, rebuilt at each theta.
  std::vector<SpectralBranch> branches() const;
};

PerturbedEigenSystem pure_eigensystem(const PureStateParams& params, const BogoliubovData& bog, double h);
PerturbedEigenSystem werner_eigensystem(const WernerParams& params, const BogoliubovData& bog, double h);

/// Closed form: classical part 4 (s^2 f^{-nu} + c^2 f^nu) h^2, quantum part
/// 4 (1 - (s^2 f^{-nu} + c^2 f^nu) h^2), total 4.
QfiBreakdown pure_qfi_total(const PureStateParams& params, const BogoliubovData& bog, double h);

/// 4 - 4 (s^2 f^nu + c^2 f^{-nu}) h^2 / (s^2 c^2).
double pure_qfi_rob(const PureStateParams& params, const BogoliubovData& bog, double h);

/// Alice's mode stays inertial: always 4.
double pure_qfi_alice();

/// Individual-part minus mixture closed form for 0 < r < 1; r = 1 delegates to
/// the pure result and r = 0 gives 0.
QfiBreakdown werner_qfi_total(const WernerParams& params, const BogoliubovData& bog, double h);

/// 4 r^2 sin^2 2theta / (1 - r^2 cos^2 2theta).
double werner_qfi_alice(const WernerParams& params);

/// F^A [1 - 2 f h^2 - r cos 2theta / (1 - r^2 cos^2 2theta)
///      * {4 r (c^2 f^{-nu} - s^2 f^nu) + 2 (1 - r)(f^{-nu} - f^nu)} h^2].
double werner_qfi_rob(const WernerParams& params, const BogoliubovData& bog, double h);

/// Theta-families of the reduced states with analytic derivatives, for the
/// numeric spectral path.
ParameterizedFamily pure_family(const PureStateParams& params, const BogoliubovData& bog, double h);
ParameterizedFamily werner_family(const WernerParams& params, const BogoliubovData& bog, double h);

/// Reduced family of one party: Subsystem::First is Alice, Second is Rob.
ParameterizedFamily reduced_family(const ParameterizedFamily& two_party, Subsystem keep);

}  // namespace cavqfi

#endif  // CAVQFI_STATE_HPP

#ifndef CAVQFI_CORE_HPP
#define CAVQFI_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cavqfi {

/// A dense matrix of dynamic size, templated on scalar type.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A column vector of dynamic size, templated on scalar type.
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = MatrixX<Complex>;
using ComplexVector = VectorX<Complex>;
using RealVector = VectorX<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Numerical thresholds shared by every module.
struct Tolerances {
  double hermiticity = 1e-12;      // |H - H^dag|_max for density matrices
  double trace = 1e-10;            // |Tr rho - 1|
  double min_eigenvalue = -1e-10;  // smallest admissible eigenvalue of rho
  double degenerate_gap = 1e-9;    // eigenvalue clusters re-orthonormalized
  double support_cut = 1e-10;      // p_m + p_n must exceed this in SLD sums
  double support_leak = 1e-8;      // |<m|drho|n>| allowed outside the support
  double derivative_trace = 1e-8;  // |Tr drho|
  double derivative_hermiticity = 1e-10;
  double povm_completeness = 1e-10;
  double povm_psd = -1e-10;
  double outcome_probability = 1e-14;  // p below this counts as zero
  double outcome_leak = 1e-12;         // |dp| above this at p == 0 is singular
  double spectrum_sum = 1e-9;
  double orthonormality = 1e-9;
  double unit_norm = 1e-9;
  double fd_step = 1e-6;               // central difference stencil
  int max_dense_dim = 64;
};

inline constexpr Tolerances kTol{};

enum class ErrorCode {
  NonHermitianInput,
  DimensionTooLarge,
  DimensionMismatch,
  InvalidDensityMatrix,
  InvalidDerivative,
  SingularOutcome,
  InvalidPovm,
  UnsupportedDerivativeComponent,
  NonNormalizedSpectrum,
  NonOrthonormalBasis,
  NonUnitVector,
  InvalidGeometry,
  WindowTooSmall,
  TruncationInsufficient,
  QuadratureNonConvergent,
  UnitarityDefectExceeded,
  PerturbationOutOfRange,
  SpecValidation,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cavqfi

#endif  // CAVQFI_CORE_HPP

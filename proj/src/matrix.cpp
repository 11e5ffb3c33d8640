#include "cavqfi/matrix.hpp"

#include <sstream>

namespace cavqfi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::InvalidDerivative: return "InvalidDerivative";
    case ErrorCode::SingularOutcome: return "SingularOutcome";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::UnsupportedDerivativeComponent: return "UnsupportedDerivativeComponent";
    case ErrorCode::NonNormalizedSpectrum: return "NonNormalizedSpectrum";
    case ErrorCode::NonOrthonormalBasis: return "NonOrthonormalBasis";
    case ErrorCode::NonUnitVector: return "NonUnitVector";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorCode::UnitarityDefectExceeded: return "UnitarityDefectExceeded";
    case ErrorCode::PerturbationOutOfRange: return "PerturbationOutOfRange";
    case ErrorCode::SpecValidation: return "SpecValidation";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

namespace {

std::vector<std::string> default_labels(Eigen::Index dim) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) out.push_back(std::to_string(i));
  return out;
}

std::vector<std::string> split_factor(const std::vector<std::string>& labels, Subsystem keep,
                                      Eigen::Index dim_a, Eigen::Index dim_b) {
  static constexpr std::string_view kSep = " ⊗ ";
  const Eigen::Index stride = keep == Subsystem::First ? dim_b : 1;
  const Eigen::Index count = keep == Subsystem::First ? dim_a : dim_b;
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < count; ++i) {
    const std::string& full = labels[static_cast<std::size_t>(i * stride)];
    const auto pos = full.find(kSep);
    if (pos == std::string::npos) return default_labels(count);
    out.push_back(keep == Subsystem::First ? full.substr(0, pos) : full.substr(pos + kSep.size()));
  }
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m, std::vector<std::string> labels)
    : matrix_(std::move(m)), labels_(std::move(labels)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix must be square and non-empty");
  }
  if (!matrix_.allFinite()) throw Error(ErrorCode::InvalidDensityMatrix, "non-finite entry");
  if (labels_.empty()) labels_ = default_labels(dim());
  if (static_cast<Eigen::Index>(labels_.size()) != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match dimension");
  }
  const double defect = hermiticity_defect(matrix_);
  if (defect > kTol.hermiticity) {
    std::ostringstream msg;
    msg << "hermiticity defect " << defect;
    throw Error(ErrorCode::InvalidDensityMatrix, msg.str());
  }
  matrix_ = (matrix_ + matrix_.adjoint()).eval() / 2.0;
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > kTol.trace) {
    std::ostringstream msg;
    msg << "trace " << trace;
    throw Error(ErrorCode::InvalidDensityMatrix, msg.str());
  }
  min_eigenvalue_ = hermitian_eig(matrix_).eigenvalues(0);
  if (min_eigenvalue_ < kTol.min_eigenvalue) {
    std::ostringstream msg;
    msg << "negative eigenvalue " << min_eigenvalue_;
    throw Error(ErrorCode::InvalidDensityMatrix, msg.str());
  }
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(a.dim() * b.dim()));
  for (const auto& la : a.labels())
    for (const auto& lb : b.labels()) labels.push_back(la + " ⊗ " + lb);
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(labels));
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep, Eigen::Index dim_a,
                            Eigen::Index dim_b) {
  ComplexMatrix reduced = partial_trace(rho.matrix(), keep, dim_a, dim_b);
  return DensityMatrix(std::move(reduced), split_factor(rho.labels(), keep, dim_a, dim_b));
}

}  // namespace cavqfi

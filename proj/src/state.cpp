#include "cavqfi/state.hpp"

#include <sstream>

namespace cavqfi {

namespace {

void check_signs(int sign, int mu, int nu, const BogoliubovData& bog) {
  if ((sign != 1 && sign != -1) || (mu != 1 && mu != -1) || (nu != 1 && nu != -1)) {
    throw Error(ErrorCode::SpecValidation, "sign, mu and nu must be +1 or -1");
  }
  if (nu != bog.nu) throw Error(ErrorCode::SpecValidation, "nu does not match the charge of Rob's mode k");
}

void check_validity(double theta, double h) {
  if (!(h > 0.0 && h <= 0.1)) {
    throw Error(ErrorCode::PerturbationOutOfRange, "need 0 < h <= 0.1, got " + std::to_string(h));
  }
  const double s = std::sin(theta), c = std::cos(theta);
  if (h * h > 0.1 * std::min(s * s, c * c)) {
    std::ostringstream msg;
    msg << "h^2 = " << h * h << " exceeds 0.1 min(sin^2, cos^2) at theta = " << theta;
    throw Error(ErrorCode::PerturbationOutOfRange, msg.str());
  }
}

void check_r(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorCode::SpecValidation, "need 0 <= r <= 1");
}

// Entries of the reduced state and their theta-derivatives. The state is
//   diag(A, m1, m2, B) + X (phase |0><3| + h.c.).
struct Layout {
  double A, B, X, m1, m2;
  double dA, dB, dX, dm1, dm2;
  Complex phase;
};

Layout pure_layout(double theta, int sign, const BogoliubovData& bog, double h) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double a = bog.f_minus_nu() * h * h;
  const double b = bog.f_nu() * h * h;
  if (a > 1.0 || b > 1.0) throw Error(ErrorCode::PerturbationOutOfRange, "f h^2 exceeds 1");
  const double k = std::sqrt((1.0 - a) * (1.0 - b));
  Layout l;
  l.A = c * c * (1.0 - a);
  l.B = s * s * (1.0 - b);
  l.X = s * c * k;
  l.m1 = c * c * a;
  l.m2 = s * s * b;
  l.dA = -2.0 * s * c * (1.0 - a);
  l.dB = 2.0 * s * c * (1.0 - b);
  l.dX = std::cos(2.0 * theta) * k;
  l.dm1 = -2.0 * s * c * a;
  l.dm2 = 2.0 * s * c * b;
  l.phase = double(sign) * bog.coherence_phase(h);
  return l;
}

Layout werner_layout(double theta, const WernerParams& p, const BogoliubovData& bog, double h) {
  Layout l = pure_layout(theta, p.sign, bog, h);
  const double r = p.r, rc = p.r_c();
  const double up = rc * (1.0 + bog.g_nu() * h * h);
  const double down = rc * (1.0 + bog.g_minus_nu() * h * h);
  l.A = r * l.A + up;
  l.B = r * l.B + down;
  l.X *= r;
  l.m1 = r * l.m1 + down;
  l.m2 = r * l.m2 + up;
  l.dA *= r;
  l.dB *= r;
  l.dX *= r;
  l.dm1 *= r;
  l.dm2 *= r;
  return l;
}

ComplexMatrix assemble(const Layout& l, bool derivative) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = derivative ? l.dA : l.A;
  m(1, 1) = derivative ? l.dm1 : l.m1;
  m(2, 2) = derivative ? l.dm2 : l.m2;
  m(3, 3) = derivative ? l.dB : l.B;
  m(0, 3) = (derivative ? l.dX : l.X) * l.phase;
  m(3, 0) = std::conj(m(0, 3));
  return m;
}

const std::vector<std::string>& basis_labels() {
  static const std::vector<std::string> labels = {"A:0 ⊗ R:0", "A:0 ⊗ R:1k", "A:1m ⊗ R:0", "A:1m ⊗ R:1k"};
  return labels;
}

// Exact eigen-decomposition of the layout. The (0, 3) block is a 2x2 rotation
// by psi with tan(2 psi) = 2X / (A - B).
struct BlockSpectrum {
  double upper, lower, d_upper, d_lower;
  ComplexVector v_upper, v_lower, dv_upper, dv_lower;
};

BlockSpectrum block_spectrum(const Layout& l) {
  const double d = l.A - l.B, dd = l.dA - l.dB;
  const double radius = std::sqrt(d * d / 4.0 + l.X * l.X);
  const double mean = (l.A + l.B) / 2.0;
  BlockSpectrum out;
  out.upper = mean + radius;
  out.lower = (l.A * l.B - l.X * l.X) / out.upper;
  out.d_upper = (l.dA + l.dB) / 2.0 + (d * dd / 4.0 + l.X * l.dX) / radius;
  out.d_lower = l.dA + l.dB - out.d_upper;
  const double psi = 0.5 * std::atan2(2.0 * l.X, d);
  const double dpsi = (d * l.dX - l.X * dd) / (d * d + 4.0 * l.X * l.X);
  const double cp = std::cos(psi), sp = std::sin(psi);
  auto vec = [&l](double first, double last) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = first * l.phase;
    v(3) = last;
    return v;
  };
  out.v_upper = vec(cp, sp);
  out.v_lower = vec(-sp, cp);
  out.dv_upper = vec(-sp * dpsi, cp * dpsi);
  out.dv_lower = vec(-cp * dpsi, -sp * dpsi);
  return out;
}

ComplexVector unit(int i) { return ComplexVector::Unit(4, i); }

}  // namespace

DensityMatrix rho_pure_reduced(const PureStateParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  check_validity(params.theta, h);
  return DensityMatrix(assemble(pure_layout(params.theta, params.sign, bog, h), false), basis_labels());
}

DensityMatrix rho_werner_reduced(const WernerParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  check_r(params.r);
  check_validity(params.theta, h);
  return DensityMatrix(assemble(werner_layout(params.theta, params, bog, h), false), basis_labels());
}

std::vector<SpectralBranch> PerturbedEigenSystem::branches() const {
  std::vector<SpectralBranch> out;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    SpectralBranch b;
    b.p = [at = at_theta, i](double t) { return at(t).eigenvalues[i]; };
    b.dp = [at = at_theta, i](double t) { return at(t).derivatives[i]; };
    b.psi = [at = at_theta, i](double t) { return at(t).eigenvectors[i]; };
    b.dpsi = [at = at_theta, i](double t) { return at(t).eigenvector_derivatives[i]; };
    out.push_back(std::move(b));
  }
  return out;
}

PerturbedEigenSystem pure_eigensystem(const PureStateParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  check_validity(params.theta, h);
  const Layout l = pure_layout(params.theta, params.sign, bog, h);
  const BlockSpectrum block = block_spectrum(l);
  PerturbedEigenSystem out;
  out.eigenvalues = {block.upper, l.m1, l.m2, block.lower};
  out.derivatives = {block.d_upper, l.dm1, l.dm2, block.d_lower};
  out.eigenvectors = {block.v_upper, unit(1), unit(2), block.v_lower};
  const ComplexVector zero = ComplexVector::Zero(4);
  out.eigenvector_derivatives = {block.dv_upper, zero, zero, block.dv_lower};
  const double sc = std::sin(params.theta) * std::cos(params.theta);
  out.mixing = sc * Complex((bog.f_minus_nu() - bog.f_nu()) / 2.0, -bog.j) * h * h;
  out.normalization = 1.0 + std::norm(out.mixing);
  out.at_theta = [params, bog, h](double t) {
    PureStateParams p = params;
    p.theta = t;
    return pure_eigensystem(p, bog, h);
  };
  return out;
}

PerturbedEigenSystem werner_eigensystem(const WernerParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  check_r(params.r);
  check_validity(params.theta, h);
  const Layout l = werner_layout(params.theta, params, bog, h);
  const BlockSpectrum block = block_spectrum(l);
  PerturbedEigenSystem out;
  out.eigenvalues = {block.upper, block.lower, l.m1, l.m2};
  out.derivatives = {block.d_upper, block.d_lower, l.dm1, l.dm2};
  out.eigenvectors = {block.v_upper, block.v_lower, unit(1), unit(2)};
  const ComplexVector zero = ComplexVector::Zero(4);
  out.eigenvector_derivatives = {block.dv_upper, block.dv_lower, zero, zero};
  const double sc = std::sin(params.theta) * std::cos(params.theta);
  out.mixing = sc * Complex((bog.f_minus_nu() - bog.f_nu()) / 2.0, -params.r * bog.j) * h * h;
  out.normalization = params.r > 0.0 ? 1.0 + std::norm(out.mixing) / (params.r * params.r) : 1.0;
  out.at_theta = [params, bog, h](double t) {
    WernerParams p = params;
    p.theta = t;
    return werner_eigensystem(p, bog, h);
  };
  return out;
}

QfiBreakdown pure_qfi_total(const PureStateParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  check_validity(params.theta, h);
  const double c = std::cos(params.theta), s = std::sin(params.theta);
  const double leak = (s * s * bog.f_minus_nu() + c * c * bog.f_nu()) * h * h;
  QfiBreakdown out;
  out.classical_part = 4.0 * leak;
  out.pure_part = 4.0 * (1.0 - leak);
  out.mixture_part = 0.0;
  out.total = out.pure_part + out.classical_part;
  out.support_rank = 3;
  return out;
}

double pure_qfi_rob(const PureStateParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  check_validity(params.theta, h);
  const double c = std::cos(params.theta), s = std::sin(params.theta);
  return 4.0 - 4.0 * (s * s * bog.f_nu() + c * c * bog.f_minus_nu()) * h * h / (s * s * c * c);
}

double pure_qfi_alice() { return 4.0; }

QfiBreakdown werner_qfi_total(const WernerParams& params, const BogoliubovData& bog, double h) {
  check_r(params.r);
  if (params.r == 1.0) return pure_qfi_total(params.pure(), bog, h);
  check_signs(params.sign, params.mu, params.nu, bog);
  check_validity(params.theta, h);
  QfiBreakdown out;
  out.support_rank = 4;
  if (params.r == 0.0) return out;
  const double r = params.r;
  const double c = std::cos(params.theta), s = std::sin(params.theta);
  const double cos2 = std::cos(2.0 * params.theta);
  const double fn = bog.f_nu(), fm = bog.f_minus_nu(), h2 = h * h;
  const double individual =
      4.0 * ((1.0 + r) / 2.0 + ((1.0 + r) / (2.0 * r) * cos2 * (fm - fn) - r * (c * c * fm + s * s * fn)) * h2);
  const double mixture =
      16.0 * ((1.0 + 2.0 * r - 3.0 * r * r) / (8.0 * (1.0 + r)) * (1.0 + cos2 / r * (fm - fn) * h2) +
              (1.0 - r) * r *
                  ((1.0 + 3.0 * r) / (4.0 * (1.0 + r) * (1.0 + r)) * (s * s * fn + c * c * fm) -
                   1.0 / (2.0 * (1.0 + r)) * (s * s * fm + c * c * fn)) *
                  h2);
  out.classical_part = 0.0;
  out.pure_part = individual;
  out.mixture_part = mixture;
  out.total = individual - mixture;
  return out;
}

double werner_qfi_alice(const WernerParams& params) {
  check_r(params.r);
  const double s2 = std::pow(std::sin(2.0 * params.theta), 2);
  const double r2 = params.r * params.r;
  const double denom = (1.0 - r2) + r2 * s2;
  if (denom == 0.0) return 4.0;  // r = 1 on the theta = 0 boundary
  return 4.0 * r2 * s2 / denom;
}

double werner_qfi_rob(const WernerParams& params, const BogoliubovData& bog, double h) {
  check_r(params.r);
  check_signs(params.sign, params.mu, params.nu, bog);
  check_validity(params.theta, h);
  const double r = params.r;
  const double c = std::cos(params.theta), s = std::sin(params.theta);
  const double cos2 = std::cos(2.0 * params.theta);
  const double fn = bog.f_nu(), fm = bog.f_minus_nu();
  const double gap = 1.0 - r * r * cos2 * cos2;
  if (h * h > 0.1 * gap) throw Error(ErrorCode::PerturbationOutOfRange, "1 - r^2 cos^2 2theta too small for h");
  const double correction = r * cos2 / gap * (4.0 * r * (c * c * fm - s * s * fn) + 2.0 * (1.0 - r) * (fm - fn));
  return werner_qfi_alice(params) * (1.0 - (2.0 * bog.f_total + correction) * h * h);
}

ParameterizedFamily pure_family(const PureStateParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  ParameterizedFamily f;
  f.evaluate = [params, bog, h](double t) {
    PureStateParams p = params;
    p.theta = t;
    return rho_pure_reduced(p, bog, h);
  };
  f.derivative = [params, bog, h](double t) { return assemble(pure_layout(t, params.sign, bog, h), true); };
  return f;
}

ParameterizedFamily werner_family(const WernerParams& params, const BogoliubovData& bog, double h) {
  check_signs(params.sign, params.mu, params.nu, bog);
  check_r(params.r);
  ParameterizedFamily f;
  f.evaluate = [params, bog, h](double t) {
    WernerParams p = params;
    p.theta = t;
    return rho_werner_reduced(p, bog, h);
  };
  f.derivative = [params, bog, h](double t) { return assemble(werner_layout(t, params, bog, h), true); };
  return f;
}

ParameterizedFamily reduced_family(const ParameterizedFamily& two_party, Subsystem keep) {
  ParameterizedFamily f;
  f.evaluate = [two_party, keep](double t) { return partial_trace(two_party.evaluate(t), keep, 2, 2); };
  f.derivative = [two_party, keep](double t) {
    return partial_trace(two_party.derivative(t), keep, 2, 2);
  };
  return f;
}

}  // namespace cavqfi

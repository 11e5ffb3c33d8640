#include "cavqfi/cavity.hpp"

#include <random>
#include <sstream>

namespace cavqfi {

CavityConfig make_config(double a, double b, double u, double s) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidGeometry, "need 0 < a < b, got a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
  if (!(u >= 0.0) || !std::isfinite(u)) throw Error(ErrorCode::InvalidGeometry, "need u >= 0");
  if (!(s >= 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidGeometry, "need 0 <= s < 1");
  CavityConfig c;
  c.a = a;
  c.b = b;
  c.h = 2.0 * (b - a) / (a + b);
  c.s = s;
  c.u = u;
  c.eta1 = 2.0 * u * c.log_ratio();
  c.tau1 = (a + b) / 2.0 * c.eta1;
  return c;
}

CavityConfig config_from_h(double h, double u, double s) {
  if (!(h > 0.0 && h < 2.0)) throw Error(ErrorCode::InvalidGeometry, "need 0 < h < 2");
  CavityConfig c = make_config(1.0 - h / 2.0, 1.0 + h / 2.0, u, s);
  c.h = h;
  return c;
}

namespace {

// exp(2 pi i x) with x reduced to [-1/2, 1/2] first.
Complex unit_phase(double x) {
  const double r = x - std::round(x);
  return std::polar(1.0, 2.0 * kPi * r);
}

}  // namespace

Complex phase_factor(const CavityConfig& config, long n) {
  return unit_phase(config.u * (double(n) + config.s));
}

Complex e1_factor(const CavityConfig& config) { return unit_phase(config.u); }

double phase_gap_squared(double u, long n) {
  const double x = u * double(n);
  const double sn = std::sin(kPi * (x - std::round(x)));
  return 4.0 * sn * sn;
}

std::string_view to_string(ProviderKind kind) {
  return kind == ProviderKind::Synthetic ? "synthetic" : "quadrature";
}

Complex CoefficientProvider::exact(long, long, double) const {
  throw Error(ErrorCode::SpecValidation, std::string(to_string(kind())) + " provider has no exact map");
}

ComplexVector CoefficientProvider::first_order_column(long k, int half_width) const {
  ComplexVector col(2 * half_width + 1);
  for (long p = -half_width; p <= half_width; ++p) col(p + half_width) = first_order(p, k);
  return col;
}

namespace {

class SyntheticProvider final : public CoefficientProvider {
 public:
  SyntheticProvider(std::uint64_t seed, double strength, std::optional<int> support)
      : seed_(seed), strength_(strength), support_(support) {}

  ProviderKind kind() const override { return ProviderKind::Synthetic; }

  Complex first_order(long m, long n) const override {
    if (support_ && (std::abs(m) > *support_ || std::abs(n) > *support_)) return 0.0;
    if (m == n) return kI * strength_ * (2.0 * uniform(m, n, 1) - 1.0);
    if (m > n) return -std::conj(first_order(n, m));
    const double d = double(m - n);
    return std::polar(strength_ / (d * d), 2.0 * kPi * uniform(m, n, 0));
  }

  double decay_constant(long, int) const override { return strength_; }

 private:
  double uniform(long m, long n, std::uint32_t tag) const {
    std::seed_seq seq{std::uint32_t(seed_), std::uint32_t(seed_ >> 32), std::uint32_t(m), std::uint32_t(n), tag};
    std::mt19937_64 engine(seq);
    return double(engine() >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed_;
  double strength_;
  std::optional<int> support_;
};

}  // namespace

ProviderPtr provider_synthetic(std::uint64_t seed, double strength, std::optional<int> support_half_width) {
  if (!(strength > 0.0)) throw Error(ErrorCode::SpecValidation, "synthetic strength must be positive");
  return std::make_shared<SyntheticProvider>(seed, strength, support_half_width);
}

AlphaMatrix compose_alpha(const CoefficientProvider& provider, const CavityConfig& config, int half_width,
                          ComposeMode mode) {
  if (half_width < 2) throw Error(ErrorCode::WindowTooSmall, "half-width must be at least 2");
  if (half_width > 512) throw Error(ErrorCode::SpecValidation, "half-width above 512");
  const bool exact = mode == ComposeMode::Exact || (mode == ComposeMode::Auto && provider.has_exact());
  if (exact && !provider.has_exact()) {
    throw Error(ErrorCode::SpecValidation, "exact composition needs a provider with an exact map");
  }
  const Eigen::Index dim = 2 * half_width + 1;
  AlphaMatrix out;
  out.half_width = half_width;
  out.h = config.h;
  out.exact = exact;
  out.phases.resize(dim);
  for (long n = -half_width; n <= half_width; ++n) out.phases(n + half_width) = phase_factor(config, n);
  const auto g = out.phases.asDiagonal();

  if (exact) {
    ComplexMatrix a(dim, dim);
    for (long m = -half_width; m <= half_width; ++m)
      for (long n = -half_width; n <= half_width; ++n) a(m + half_width, n + half_width) = provider.exact(m, n, config.h);
    out.total = a.adjoint() * g * a;
  } else {
    ComplexMatrix a1(dim, dim);
    for (long m = -half_width; m <= half_width; ++m)
      for (long n = -half_width; n <= half_width; ++n) a1(m + half_width, n + half_width) = provider.first_order(m, n);
    const ComplexMatrix a2 = 0.5 * a1 * a1;
    out.first = g * a1 - a1 * g;
    out.second = a2 * g + g * a2 - a1 * g * a1;
    out.total = ComplexMatrix(g) + config.h * out.first + config.h * config.h * out.second;
  }

  const ComplexMatrix defect = out.total.adjoint() * out.total - ComplexMatrix::Identity(dim, dim);
  const long inner = half_width / 2;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const bool interior = std::abs(i - half_width) <= inner && std::abs(j - half_width) <= inner;
      double& slot = interior ? out.interior_defect : out.edge_defect;
      slot = std::max(slot, std::abs(defect(i, j)));
    }
  }
  const double h3 = std::pow(config.h, 3);
  if (out.interior_defect > std::max(10.0 * h3, 1e-9) && out.edge_defect > 10.0 * out.interior_defect) {
    std::ostringstream msg;
    msg << "edge unitarity defect " << out.edge_defect << " leaks into the interior (" << out.interior_defect
        << ") at half-width " << half_width;
    throw Error(ErrorCode::WindowTooSmall, msg.str());
  }
  return out;
}

Complex BogoliubovData::coherence_phase(double h) const {
  const Complex phase = g_k * std::polar(1.0, j * h * h);
  return nu > 0 ? phase : std::conj(phase);
}

BogoliubovData mode_sums(const CoefficientProvider& provider, const CavityConfig& config, long k, int n_trunc) {
  if (n_trunc < 8 * (std::abs(k) + 1)) {
    throw Error(ErrorCode::TruncationInsufficient,
                "N_trunc=" + std::to_string(n_trunc) + " below 8(|k|+1) for k=" + std::to_string(k));
  }
  if (const auto s = provider.boundary_phase(); s && std::abs(*s - config.s) > 1e-15) {
    throw Error(ErrorCode::SpecValidation, "provider built for a different boundary phase s");
  }
  BogoliubovData out;
  out.k = k;
  out.nu = k >= 0 ? 1 : -1;
  out.u = config.u;
  out.s = config.s;
  out.g_k = phase_factor(config, k);
  out.e1 = e1_factor(config);
  out.n_trunc = n_trunc;
  out.provider = provider.kind();

  const ComplexVector col = provider.first_order_column(k, n_trunc);
  double im_part = 0.0;
  for (long p = -n_trunc; p <= n_trunc; ++p) {
    const double weight = std::norm(col(p + n_trunc));
    const double term = phase_gap_squared(config.u, p - k) * weight;
    (p >= 0 ? out.f_plus : out.f_minus) += term;
    const double x = config.u * double(p - k);
    im_part += weight * std::sin(2.0 * kPi * (x - std::round(x)));
  }
  out.f_total = out.f_plus + out.f_minus;
  out.g_plus = out.f_plus - out.f_minus;
  out.g_minus = -out.g_plus;
  out.j = im_part;
  // conj(G_k) alpha2_kk = sum |A1_pk|^2 (E1^(p-k) - 1), whose real part is -f_total / 2.
  out.alpha2_kk = out.g_k * Complex(-out.f_total / 2.0, im_part);

  if (config.u != std::round(config.u)) {
    const double c = provider.decay_constant(k, n_trunc);
    const double d = double(n_trunc - std::abs(k));
    out.tail_estimate = 8.0 * c * c / (3.0 * d * d * d);
  }
  if (out.tail_estimate > 1e-3 * out.f_total + 1e-6) {
    std::ostringstream msg;
    msg << "tail bound " << out.tail_estimate << " against f_total " << out.f_total << " at N_trunc " << n_trunc;
    throw Error(ErrorCode::TruncationInsufficient, msg.str());
  }
  return out;
}

}  // namespace cavqfi

#include <map>
#include <mutex>
#include <sstream>

#include "cavqfi/cavity.hpp"
#include "cavqfi/quadrature.hpp"

namespace cavqfi {

namespace {

// Integrand of A_mn(h) on the unfolded coordinate t in [0, 1], where
// x = 1 + h (t - 1/2) and g(t) = ln(x / a) / ln(b / a).
struct Overlap {
  double kn, km;  // (n + s) pi, (m + s) pi
  double h, log_a, ell, scale;

  Overlap(long m, long n, double h_, double s) : kn((double(n) + s) * kPi), km((double(m) + s) * kPi), h(h_) {
    log_a = std::log1p(-h / 2.0);
    ell = std::log1p(h / 2.0) - log_a;
    scale = h == 0.0 ? 1.0 : std::sqrt(h / ell);
  }

  double operator()(double t) const {
    if (h == 0.0) return std::cos((kn - km) * t);
    const double y = h * (t - 0.5);
    const double g = (std::log1p(y) - log_a) / ell;
    return scale * std::cos(kn * t - km * g) / std::sqrt(1.0 + y);
  }
};

int initial_panels(long m, long n) { return 2 + int(std::abs(n - m) / 2) + int((std::abs(m) + std::abs(n)) / 16); }

// Central difference of the overlap at step delta, integrated as one integrand
// so the cancellation happens pointwise.
double central_difference(long m, long n, double s, double delta) {
  const Overlap up(m, n, delta, s);
  const Overlap down(m, n, -delta, s);
  const auto diff = [&](double t) { return (up(t) - down(t)) / (2.0 * delta); };
  return integrate(diff, 0.0, 1.0, 1e-13, initial_panels(m, n)).value;
}

class QuadratureProvider final : public CoefficientProvider {
 public:
  explicit QuadratureProvider(double s) : s_(s) {}

  ProviderKind kind() const override { return ProviderKind::Quadrature; }
  bool has_exact() const override { return true; }
  std::optional<double> boundary_phase() const override { return s_; }

  Complex first_order(long m, long n) const override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = cache_.find({m, n}); it != cache_.end()) return it->second;
    }
    const double value = quadrature_first_order(m, n, s_);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(std::make_pair(m, n), value);
    return value;
  }

  Complex exact(long m, long n, double h) const override { return quadrature_overlap(m, n, h, s_); }

  double decay_constant(long k, int half_width) const override {
    double c = 0.0;
    for (long p = -half_width; p <= half_width; ++p) {
      if (p == k) continue;
      const double d = double(p - k);
      c = std::max(c, std::abs(first_order(p, k)) * d * d);
    }
    return c;
  }

 private:
  double s_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<long, long>, Complex> cache_;
};

}  // namespace

double quadrature_overlap(long m, long n, double h, double s, double abs_tol) {
  if (!(std::abs(h) < 2.0)) throw Error(ErrorCode::InvalidGeometry, "overlap needs |h| < 2");
  return integrate(Overlap(m, n, h, s), 0.0, 1.0, abs_tol, initial_panels(m, n)).value;
}

double quadrature_first_order(long m, long n, double s) {
  // Neville table in delta^2: D(delta) = A1 + c2 delta^2 + c4 delta^4 + ...
  double delta = std::min(0.05, 0.5 / (kPi * double(std::abs(m) + std::abs(n) + 1)));
  std::vector<double> row{central_difference(m, n, s, delta)};
  double previous = row.front();
  for (int level = 1; level <= 8; ++level) {
    delta /= 2.0;
    std::vector<double> next{central_difference(m, n, s, delta)};
    double factor = 4.0;
    for (double entry : row) {
      next.push_back(next.back() + (next.back() - entry) / (factor - 1.0));
      factor *= 4.0;
    }
    const double estimate = next.back();
    // Stop well inside the 1e-7 step-halving criterion.
    if (std::abs(estimate - previous) < 1e-11) return estimate;
    previous = estimate;
    row = std::move(next);
  }
  std::ostringstream msg;
  msg << "Richardson extraction of A1(" << m << "," << n << ") did not settle";
  throw Error(ErrorCode::QuadratureNonConvergent, msg.str());
}

ProviderPtr provider_quadrature(const CavityConfig& config) {
  if (config.h > 0.5) throw Error(ErrorCode::PerturbationOutOfRange, "series extraction needs h <= 0.5");
  if (!(config.s >= 0.0 && config.s < 1.0)) throw Error(ErrorCode::InvalidGeometry, "need 0 <= s < 1");

  // Completeness of the mode model: columns n in [-2, 2] must be unit vectors
  // over the window [-128, 128] at h = 0.01.
  static std::mutex checked_mutex;
  static std::map<double, double> checked;
  double worst = 0.0;
  {
    std::lock_guard<std::mutex> lock(checked_mutex);
    if (auto it = checked.find(config.s); it != checked.end()) worst = it->second;
    else {
      for (long n = -2; n <= 2; ++n) {
        double norm = 0.0;
        for (long m = -128; m <= 128; ++m) norm += std::pow(quadrature_overlap(m, n, 0.01, config.s), 2);
        worst = std::max(worst, std::abs(norm - 1.0));
      }
      checked.emplace(config.s, worst);
    }
  }
  if (worst > 1e-4) {
    std::ostringstream msg;
    msg << "column norm deviates from 1 by " << worst << " at h = 0.01";
    throw Error(ErrorCode::UnitarityDefectExceeded, msg.str());
  }
  return std::make_shared<QuadratureProvider>(config.s);
}

}  // namespace cavqfi

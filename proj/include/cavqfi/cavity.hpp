#ifndef CAVQFI_CAVITY_HPP
#define CAVQFI_CAVITY_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "cavqfi/core.hpp"

namespace cavqfi {

/// Rob's cavity: walls at a < b, boundary phase s, accelerated segment of
/// dimensionless duration u.
struct CavityConfig {
  double a = 0.0;
  double b = 0.0;
  double h = 0.0;     // 2 (b - a) / (a + b)
  double s = 0.0;     // in [0, 1)
  double u = 0.0;     // eta1 / (2 ln(b/a))
  double eta1 = 0.0;  // Rindler duration
  double tau1 = 0.0;  // proper duration at the cavity centre

  double log_ratio() const { return std::log(b / a); }
  /// Rindler frequency (n + s) pi / ln(b/a).
  double omega(long n) const { return (double(n) + s) * kPi / log_ratio(); }
};

CavityConfig make_config(double a, double b, double u, double s);

/// Geometry with (a + b) / 2 = 1, so b - a = h.
CavityConfig config_from_h(double h, double u, double s);

/// G_n = exp(i Omega_n eta1) = exp(2 pi i u (n + s)).
Complex phase_factor(const CavityConfig& config, long n);

/// E1 = exp(i pi eta1 / ln(b/a)) = exp(2 pi i u); G_p conj(G_k) = E1^(p-k).
Complex e1_factor(const CavityConfig& config);

/// |E1^n - 1|^2 evaluated through the reduced phase, so it is exactly
/// periodic in u.
double phase_gap_squared(double u, long n);

enum class ProviderKind { Synthetic, Quadrature };

std::string_view to_string(ProviderKind kind);

/// Source of the first-order Bogoliubov coefficients A1_mn (coefficient of h
/// in A_mn) and, when available, of the full A_mn(h).
/// Contract: A1_mn = -conj(A1_nm) and |A1_mn| <= C / (m - n)^2 for m != n.
class CoefficientProvider {
 public:
  virtual ~CoefficientProvider() = default;

  virtual ProviderKind kind() const = 0;
  virtual Complex first_order(long m, long n) const = 0;
  virtual bool has_exact() const { return false; }
  virtual Complex exact(long m, long n, double h) const;
  /// Boundary phase the coefficients were built for, if they depend on one.
  virtual std::optional<double> boundary_phase() const { return std::nullopt; }
  /// Decay constant C bounding column k, used for the truncation tail.
  virtual double decay_constant(long k, int half_width) const = 0;

  /// A1_pk for p = -half_width .. half_width.
  ComplexVector first_order_column(long k, int half_width) const;
};

using ProviderPtr = std::shared_ptr<const CoefficientProvider>;

/// Deterministic pseudo-random test double:
///   A1_mn = strength e^{i phi_mn} / (m - n)^2, A1_nn = i strength x_n,
/// phi and x hashed from (seed, m, n). With `support_half_width`, coefficients
/// touching a mode outside [-W, W] are zero.
ProviderPtr provider_synthetic(std::uint64_t seed, double strength = 0.25,
                               std::optional<int> support_half_width = std::nullopt);

/// Overlap-integral provider for a massless two-component field. Region-I
/// modes are plane waves in x with frequency (n + s) pi / (b - a); region-II
/// modes carry amplitude x^{-1/2} and are plane waves in ln x with the Rindler
/// frequency. The overlap depends on h and s only.
ProviderPtr provider_quadrature(const CavityConfig& config);

/// Overlap integral A_mn(h) of the quadrature model. Defined for |h| < 2.
double quadrature_overlap(long m, long n, double h, double s, double abs_tol = 1e-10);

/// First-order coefficient of the quadrature model extracted by central
/// differences in h with Richardson step halving.
double quadrature_first_order(long m, long n, double s);

enum class ComposeMode { Auto, Series, Exact };

/// Composed transformation over the window [-N, N], indexed by n + N.
///   series: G + h A1c + h^2 A2c with A1c_pk = (G_p - G_k) A1_pk and
///           A2c = A2 G + G A2 - A1 G A1, A2 = A1^2 / 2;
///   exact:  A(h)^dag G A(h).
struct AlphaMatrix {
  int half_width = 0;
  double h = 0.0;
  bool exact = false;
  ComplexVector phases;
  ComplexMatrix first;   // series only
  ComplexMatrix second;  // series only
  ComplexMatrix total;
  double interior_defect = 0.0;  // max |A^dag A - I| over the central half
  double edge_defect = 0.0;      // same over the rest of the window

  Eigen::Index index(long n) const { return n + half_width; }
  Complex operator()(long p, long k) const { return total(index(p), index(k)); }
};

AlphaMatrix compose_alpha(const CoefficientProvider& provider, const CavityConfig& config, int half_width,
                          ComposeMode mode = ComposeMode::Auto);

/// Order-h^2 mode sums for reference mode k.
struct BogoliubovData {
  long k = 0;
  int nu = 1;  // +1 for k >= 0, -1 for k < 0
  double u = 0.0;
  double s = 0.0;
  Complex g_k{1.0, 0.0};
  Complex e1{1.0, 0.0};
  double f_plus = 0.0;   // sum over p >= 0 of |E1^(p-k) - 1|^2 |A1_pk|^2
  double f_minus = 0.0;  // same over q < 0
  double f_total = 0.0;
  double g_plus = 0.0;   // f_plus - f_minus
  double g_minus = 0.0;  // f_minus - f_plus
  Complex alpha2_kk{0.0, 0.0};  // second-order diagonal entry of the composition
  double j = 0.0;               // Im(conj(G_k) alpha2_kk)
  int n_trunc = 0;
  double tail_estimate = 0.0;
  ProviderKind provider = ProviderKind::Synthetic;

  double f_nu() const { return nu > 0 ? f_plus : f_minus; }
  double f_minus_nu() const { return nu > 0 ? f_minus : f_plus; }
  double g_nu() const { return f_nu() - f_minus_nu(); }
  double g_minus_nu() const { return f_minus_nu() - f_nu(); }
  /// Phase of the vacuum/one-particle coherence after the trip:
  /// G_k e^{i J h^2} for particles, its conjugate for antiparticles.
  Complex coherence_phase(double h) const;
};

inline constexpr int kDefaultTruncation = 128;

BogoliubovData mode_sums(const CoefficientProvider& provider, const CavityConfig& config, long k,
                         int n_trunc = kDefaultTruncation);

}  // namespace cavqfi

#endif  // CAVQFI_CAVITY_HPP

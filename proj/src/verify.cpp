#include "cavqfi/verify.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "cavqfi/fock.hpp"
#include "cavqfi/qfi.hpp"
#include "cavqfi/state.hpp"
#include "cavqfi/sweep.hpp"

namespace cavqfi {

namespace {

constexpr double kH = 0.01;
constexpr double kThetas[] = {kPi / 8, kPi / 4, 3 * kPi / 8};
constexpr long kModes[] = {-2, -1, 1, 2};
constexpr double kBoundaryPhases[] = {0.0, 0.25, 0.5, 0.75};

struct Measured {
  double defect;
  std::string detail;
};

class Suite {
 public:
  void run(const std::string& name, double tolerance, const std::function<Measured()>& fn) {
    CheckResult r;
    r.name = name;
    r.tolerance = tolerance;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Measured m = fn();
      r.defect = m.defect;
      r.detail = m.detail;
      r.passed = std::isfinite(m.defect) && m.defect <= tolerance;
    } catch (const std::exception& e) {
      r.passed = false;
      r.defect = std::numeric_limits<double>::infinity();
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results_.push_back(std::move(r));
  }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

int nu_of(long k) { return k >= 0 ? 1 : -1; }

BogoliubovData sums(const CoefficientProvider& p, double u, double s, long k) {
  return mode_sums(p, config_from_h(kH, u, s), k);
}

WernerParams werner(double r, double theta, long k) {
  WernerParams w;
  w.r = r;
  w.theta = theta;
  w.nu = nu_of(k);
  return w;
}

// rho(x) = U(x) diag(p(x)) U(x)^dag with U = exp(i x H), derivatives exact.
struct RandomFamily {
  EigenSystem<Complex> h;
  int rank;
  std::vector<double> freq, phase;

  RandomFamily(std::mt19937_64& rng, int dim, int rank_) : rank(rank_) {
    std::normal_distribution<double> normal;
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    h = hermitian_eig(ComplexMatrix((g + g.adjoint()) / 2.0));
    std::uniform_real_distribution<double> uni(0.5, 2.0);
    for (int i = 0; i < rank; ++i) {
      freq.push_back(uni(rng));
      phase.push_back(3.0 * uni(rng));
    }
  }
  ComplexMatrix unitary(double x) const {
    const ComplexVector e = (kI * x * h.eigenvalues.cast<Complex>()).array().exp();
    return h.eigenvectors * e.asDiagonal() * h.eigenvectors.adjoint();
  }
  ComplexMatrix generator() const {
    return h.eigenvectors * h.eigenvalues.cast<Complex>().asDiagonal() * h.eigenvectors.adjoint();
  }
  double weight(int i, double x) const { return 1.0 + 0.5 * std::sin(freq[i] * x + phase[i]); }
  double dweight(int i, double x) const { return 0.5 * freq[i] * std::cos(freq[i] * x + phase[i]); }
  double p(int i, double x) const {
    double sum = 0.0;
    for (int j = 0; j < rank; ++j) sum += weight(j, x);
    return weight(i, x) / sum;
  }
  double dp(int i, double x) const {
    double sum = 0.0, dsum = 0.0;
    for (int j = 0; j < rank; ++j) sum += weight(j, x), dsum += dweight(j, x);
    return (dweight(i, x) * sum - weight(i, x) * dsum) / (sum * sum);
  }
  RealVector spectrum(double x, bool derivative) const {
    RealVector d = RealVector::Zero(h.eigenvalues.size());
    for (int i = 0; i < rank; ++i) d(i) = derivative ? dp(i, x) : p(i, x);
    return d;
  }
  ParameterizedFamily family() const {
    ParameterizedFamily f;
    f.evaluate = [this](double x) {
      const ComplexMatrix u = unitary(x);
      ComplexMatrix m = u * spectrum(x, false).cast<Complex>().asDiagonal() * u.adjoint();
      return DensityMatrix(ComplexMatrix((m + m.adjoint()) / 2.0));
    };
    f.derivative = [this](double x) {
      const ComplexMatrix u = unitary(x);
      const ComplexMatrix rho = u * spectrum(x, false).cast<Complex>().asDiagonal() * u.adjoint();
      const ComplexMatrix g = generator();
      ComplexMatrix d = kI * (g * rho - rho * g) + u * spectrum(x, true).cast<Complex>().asDiagonal() * u.adjoint();
      return ComplexMatrix((d + d.adjoint()) / 2.0);
    };
    return f;
  }
  std::vector<SpectralBranch> branches() const {
    std::vector<SpectralBranch> out;
    const ComplexMatrix g = generator();
    for (int i = 0; i < rank; ++i) {
      SpectralBranch b;
      b.p = [this, i](double x) { return p(i, x); };
      b.dp = [this, i](double x) { return dp(i, x); };
      b.psi = [this, i](double x) { return ComplexVector(unitary(x).col(i)); };
      b.dpsi = [this, g, i](double x) { return ComplexVector(kI * g * unitary(x).col(i)); };
      out.push_back(std::move(b));
    }
    return out;
  }
};

Measured formula_equivalence(int trials) {
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const RandomFamily fam(rng, 4, 1 + t % 4);
    const double x = 0.3 + 0.01 * t;
    const ParameterizedFamily f = fam.family();
    const double spectral = qfi_spectral(f, x);
    const double sld = qfi_sld_trace(f, x);
    const double support = qfi_support(fam.branches(), x).total;
    worst = std::max({worst, std::abs(spectral - sld), std::abs(spectral - support), std::abs(sld - support)});
  }
  return {worst, std::to_string(trials) + " random 4x4 families"};
}

Measured sld_optimality(int trials) {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const RandomFamily fam(rng, 4, 2 + t % 3);
    const ParameterizedFamily f = fam.family();
    const double x = 0.1 * t;
    const ComplexMatrix l = sld_solve(f.evaluate(x), f.derivative(x));
    const double fisher = classical_fisher(f, x, projective_povm(hermitian_eig(l).eigenvectors));
    worst = std::max(worst, std::abs(fisher - qfi_spectral(f, x)));
  }
  return {worst, "SLD eigenbasis measurement"};
}

double max_abs_value(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Measured pure_invariance(const std::vector<ProviderPtr>& providers, const std::vector<double>& s_values,
                         bool numeric) {
  double worst = 0.0;
  int points = 0;
  for (std::size_t i = 0; i < providers.size(); ++i) {
    for (int ui = 0; ui <= 10; ++ui) {
      for (long k : kModes) {
        const BogoliubovData bog = sums(*providers[i], ui / 10.0, s_values[i], k);
        for (double theta : kThetas) {
          const PureStateParams p{theta, 1, 1, nu_of(k)};
          const double value = numeric ? qfi_spectral(pure_family(p, bog, kH), theta)
                                       : pure_qfi_total(p, bog, kH).total;
          worst = std::max(worst, std::abs(value - 4.0));
          ++points;
        }
      }
    }
  }
  return {worst, std::to_string(points) + " grid points"};
}

Measured oracle_deviation(double h, const std::vector<double>& us) {
  const int window = 4;
  const ProviderPtr p = provider_synthetic(3, 0.25, window);
  const FockSpace fock(window);
  double worst = 0.0;
  for (double u : us) {
    for (long k : kModes) {
      const CavityConfig c = config_from_h(h, u, 0.25);
      const AlphaMatrix alpha = compose_alpha(*p, c, window, ComposeMode::Series);
      const VMatrix v = v_matrix(alpha, window);
      const BogoliubovData bog = mode_sums(*p, c, k);
      const PureStateParams pure{kPi / 4, 1, 1, nu_of(k)};
      const WernerParams w = werner(1.0 / 3.0, kPi / 4, k);
      worst = std::max(worst, max_abs_value(oracle_reduced_rho(pure, fock, v, alpha, k).matrix() -
                                            rho_pure_reduced(pure, bog, h).matrix()));
      worst = std::max(worst, max_abs_value(oracle_reduced_rho(w, fock, v, alpha, k).matrix() -
                                            rho_werner_reduced(w, bog, h).matrix()));
    }
  }
  return {worst, "h = " + std::to_string(h)};
}

}  // namespace

std::vector<CheckResult> run_verification(VerifyLevel level) {
  Suite suite;
  const ProviderPtr synth = provider_synthetic(3);

  suite.run("matrix.eig_reconstruction", 1e-12, [] {
    std::mt19937_64 rng(5);
    const RandomFamily fam(rng, 12, 1);
    const ComplexMatrix h = fam.generator();
    const EigenSystem<Complex> e = hermitian_eig(h);
    const ComplexMatrix back = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
    return Measured{max_abs_value(back - h), "12x12 random Hermitian"};
  });
  suite.run("matrix.partial_trace_bell", 1e-15, [] {
    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix reduced = partial_trace(ComplexMatrix(bell * bell.adjoint()), Subsystem::First, 2, 2);
    return Measured{max_abs_value(reduced - ComplexMatrix::Identity(2, 2) / 2.0), "Bell state"};
  });
  suite.run("qfi.formula_equivalence", 1e-7, [level] { return formula_equivalence(level == VerifyLevel::Full ? 200 : 40); });
  suite.run("qfi.sld_povm_optimality", 1e-9, [] { return sld_optimality(30); });
  suite.run("cavity.phase_ratio_identity", 1e-12, [] {
    const CavityConfig c = config_from_h(kH, 0.37, 0.25);
    double worst = 0.0;
    for (long p = -5; p <= 5; ++p)
      for (long k = -5; k <= 5; ++k)
        worst = std::max(worst, std::abs(phase_factor(c, p) * std::conj(phase_factor(c, k)) -
                                         std::pow(e1_factor(c), double(p - k))));
    return Measured{worst, "p, k in [-5, 5]"};
  });
  suite.run("cavity.synthetic_antihermiticity", 0.0, [&] {
    double worst = 0.0;
    for (long m = -20; m <= 20; ++m)
      for (long n = -20; n <= 20; ++n)
        worst = std::max(worst, std::abs(synth->first_order(m, n) + std::conj(synth->first_order(n, m))));
    return Measured{worst, "window +-20"};
  });
  suite.run("cavity.mode_sums_periodicity", 1e-12, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double u : {0.1, 0.45, 0.8}) {
        const BogoliubovData a = sums(*synth, u, 0.0, k), b = sums(*synth, u + 1.0, 0.0, k);
        worst = std::max({worst, std::abs(a.f_plus - b.f_plus), std::abs(a.f_minus - b.f_minus)});
      }
    return Measured{worst, "u vs u + 1"};
  });
  suite.run("cavity.zero_trip", 1e-12, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double u : {0.0, 1.0, 2.0}) worst = std::max(worst, sums(*synth, u, 0.25, k).f_total);
    return Measured{worst, "integer u"};
  });
  suite.run("cavity.series_unitarity_interior", 1e-5, [&] {
    const AlphaMatrix a = compose_alpha(*synth, config_from_h(kH, 0.4, 0.0), 64, ComposeMode::Series);
    return Measured{a.interior_defect, "window +-64"};
  });
  suite.run("cavity.truncation_convergence", 0.0, [&] {
    const CavityConfig c = config_from_h(kH, 0.3, 0.0);
    const BogoliubovData a = mode_sums(*synth, c, 1, 128), b = mode_sums(*synth, c, 1, 256);
    return Measured{std::max(0.0, std::abs(a.f_total - b.f_total) - a.tail_estimate), "N_trunc 128 vs 256"};
  });
  suite.run("state.pure_total_closed_form", 1e-7, [&] { return pure_invariance({synth}, {0.25}, false); });
  suite.run("state.pure_total_numeric", 1e-6, [&] { return pure_invariance({synth}, {0.25}, true); });
  suite.run("state.pure_total_support_route", 1e-7, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double theta : kThetas) {
        const PureStateParams p{theta, 1, 1, nu_of(k)};
        const BogoliubovData bog = sums(*synth, 0.6, 0.25, k);
        worst = std::max(worst, std::abs(qfi_support(pure_eigensystem(p, bog, kH).branches(), theta).total -
                                         pure_qfi_total(p, bog, kH).total));
      }
    return Measured{worst, "analytic eigen-system"};
  });
  suite.run("state.rob_pure_dual_path", 1e-6, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double u : {0.2, 0.5, 0.7}) {
        const PureStateParams p{kPi / 4, 1, 1, nu_of(k)};
        const BogoliubovData bog = sums(*synth, u, 0.25, k);
        const double numeric = qfi_spectral(reduced_family(pure_family(p, bog, kH), Subsystem::Second), kPi / 4);
        worst = std::max(worst, std::abs(pure_qfi_rob(p, bog, kH) - numeric));
      }
    return Measured{worst, "theta = pi/4"};
  });
  suite.run("state.alice_pure_numeric", 1e-9, [&] {
    double worst = 0.0;
    for (double theta : kThetas) {
      const PureStateParams p{theta, 1, 1, 1};
      const BogoliubovData bog = sums(*synth, 0.4, 0.0, 1);
      worst = std::max(worst, std::abs(qfi_spectral(reduced_family(pure_family(p, bog, kH), Subsystem::First), theta) -
                                       pure_qfi_alice()));
    }
    return Measured{worst, "Alice's reduced family"};
  });
  suite.run("state.werner_total_dual_path", 1e-6, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double u : {0.0, 0.25, 0.5})
        for (double r : {0.1, 1.0 / 3.0, 0.8})
          for (double theta : kThetas) {
            const WernerParams w = werner(r, theta, k);
            const BogoliubovData bog = sums(*synth, u, 0.0, k);
            worst = std::max(worst, std::abs(werner_qfi_total(w, bog, kH).total -
                                             qfi_spectral(werner_family(w, bog, kH), theta)));
          }
    return Measured{worst, "r in {0.1, 1/3, 0.8}"};
  });
  suite.run("state.werner_rob_dual_path", 1e-6, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double r : {0.1, 1.0 / 3.0, 0.8})
        for (double theta : kThetas) {
          const WernerParams w = werner(r, theta, k);
          const BogoliubovData bog = sums(*synth, 0.35, 0.0, k);
          const double numeric = qfi_spectral(reduced_family(werner_family(w, bog, kH), Subsystem::Second), theta);
          worst = std::max(worst, std::abs(werner_qfi_rob(w, bog, kH) - numeric));
        }
    return Measured{worst, "u = 0.35"};
  });
  suite.run("state.werner_alice_numeric", 1e-10, [&] {
    double worst = 0.0;
    const BogoliubovData bog = sums(*synth, 0.3, 0.0, 1);
    for (int i = 1; i <= 20; ++i)
      for (int j = 1; j <= 20; ++j) {
        const double r = i / 20.0, theta = 0.05 + j * (kPi / 2 - 0.1) / 21.0;
        const WernerParams w = werner(r, theta, 1);
        const double numeric = qfi_spectral(reduced_family(werner_family(w, bog, kH), Subsystem::First), theta);
        worst = std::max(worst, std::abs(werner_qfi_alice(w) - numeric));
      }
    return Measured{worst, "20 x 20 (r, theta) grid"};
  });
  suite.run("state.werner_alice_spot_values", 1e-12, [] {
    double worst = std::abs(werner_qfi_alice(werner(1.0 / 3.0, kPi / 4, 1)) - 4.0 / 9.0);
    for (double theta : kThetas) worst = std::max(worst, std::abs(werner_qfi_alice(werner(1.0, theta, 1)) - 4.0));
    return Measured{worst, "r = 1/3 at pi/4 and r = 1"};
  });
  suite.run("state.trip_neutrality", 1e-9, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double u : {0.0, 1.0, 2.0})
        for (double theta : kThetas) {
          const BogoliubovData bog = sums(*synth, u, 0.25, k);
          worst = std::max(worst, std::abs(pure_qfi_rob({theta, 1, 1, nu_of(k)}, bog, kH) - 4.0));
          for (double r : {0.1, 1.0 / 3.0, 0.9}) {
            const WernerParams w = werner(r, theta, k);
            worst = std::max({worst, std::abs(werner_qfi_total(w, bog, kH).total - 8 * r * r / (1 + r)),
                              std::abs(werner_qfi_rob(w, bog, kH) - werner_qfi_alice(w))});
          }
        }
    return Measured{worst, "integer u"};
  });
  suite.run("state.werner_periodicity", 1e-9, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double u : {0.15, 0.5, 0.85}) {
        const WernerParams w = werner(1.0 / 3.0, kPi / 4, k);
        const BogoliubovData a = sums(*synth, u, 0.0, k), b = sums(*synth, u + 1.0, 0.0, k);
        worst = std::max({worst, std::abs(werner_qfi_total(w, a, kH).total - werner_qfi_total(w, b, kH).total),
                          std::abs(werner_qfi_rob(w, a, kH) - werner_qfi_rob(w, b, kH))});
      }
    return Measured{worst, "u vs u + 1"};
  });
  suite.run("state.werner_limit_r_to_one", 1e-6, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double theta : kThetas) {
        const BogoliubovData bog = sums(*synth, 0.6, 0.0, k);
        const double pure = pure_qfi_total({theta, 1, 1, nu_of(k)}, bog, kH).pure_part;
        worst = std::max(worst, std::abs(werner_qfi_total(werner(1.0 - 1e-9, theta, k), bog, kH).total - pure));
      }
    return Measured{worst, "r = 1 - 1e-9 against the pure quantum part"};
  });
  suite.run("state.werner_limit_r_to_zero", 1e-9, [&] {
    double worst = 0.0;
    for (long k : kModes)
      for (double theta : kThetas)
        worst = std::max(worst, std::abs(werner_qfi_total(werner(1e-8, theta, k), sums(*synth, 0.6, 0.0, k), kH).total));
    return Measured{worst, "r = 1e-8"};
  });
  suite.run("state.werner_monotone_in_r", 0.0, [&] {
    const BogoliubovData bog = sums(*synth, 0.5, 0.0, 1);
    double previous = -1.0, violations = 0.0;
    for (double r : {0.1, 0.33, 0.5, 0.66, 0.85, 0.99}) {
      const double value = werner_qfi_total(werner(r, kPi / 4, 1), bog, kH).total;
      if (!(value > previous)) violations += 1.0;
      previous = value;
    }
    return Measured{violations, "ordering violations at u = 0.5"};
  });
  suite.run("state.subadditivity", 0.0, [&] {
    double excess = 0.0;
    for (long k : kModes)
      for (int ui = 0; ui <= 10; ++ui) {
        const BogoliubovData bog = sums(*synth, ui / 10.0, 0.25, k);
        for (double theta : kThetas) {
          const double rob = pure_qfi_rob({theta, 1, 1, nu_of(k)}, bog, kH);
          excess = std::max({excess, rob - 4.0, -rob});
          for (double r : {0.1, 0.5, 0.9}) {
            const WernerParams w = werner(r, theta, k);
            excess = std::max({excess, werner_qfi_rob(w, bog, kH) - 4.0, werner_qfi_alice(w) - 4.0});
          }
        }
      }
    return Measured{std::max(0.0, excess), "largest excess over [0, 4]"};
  });
  suite.run("fock.anticommutators", 1e-14, [] {
    const FockSpace fock(2);
    const auto n = Eigen::Index(fock.dim());
    double worst = 0.0;
    for (long p = -2; p <= 2; ++p)
      for (long q = -2; q <= 2; ++q) {
        const ComplexMatrix a(fock.annihilation_matrix(p)), c(fock.creation_matrix(q));
        const ComplexMatrix expected = p == q ? ComplexMatrix(ComplexMatrix::Identity(n, n)) : ComplexMatrix(ComplexMatrix::Zero(n, n));
        worst = std::max(worst, max_abs_value(a * c + c * a - expected));
      }
    return Measured{worst, "window 2"};
  });
  suite.run("fock.oracle_h1e-3", 1e-7, [] { return oracle_deviation(1e-3, {0.3}); });
  suite.run("cli.sweep_determinism", 0.0, [] {
    SweepSpec spec;
    spec.family = Family::Werner;
    spec.u = linear_grid(0.0, 1.0, 0.1);
    spec.theta = {kPi / 4};
    spec.r = {1.0 / 3.0};
    spec.s = {0.0, 0.5};
    spec.k = {1, -1};
    const bool same = to_csv(run_sweep(spec)) == to_csv(run_sweep(spec));
    return Measured{same ? 0.0 : 1.0, "two identical sweeps"};
  });

  if (level == VerifyLevel::Full) {
    std::vector<ProviderPtr> quad;
    std::vector<double> phases(std::begin(kBoundaryPhases), std::end(kBoundaryPhases));
    for (double s : phases) quad.push_back(provider_quadrature(config_from_h(kH, 0.0, s)));

    suite.run("quadrature.column_norms", 1e-4, [] {
      double worst = 0.0;
      for (long n = -2; n <= 2; ++n) {
        double norm = 0.0;
        for (long m = -128; m <= 128; ++m) norm += std::pow(quadrature_overlap(m, n, kH, 0.25), 2);
        worst = std::max(worst, std::abs(norm - 1.0));
      }
      return Measured{worst, "h = 0.01, window +-128"};
    });
    suite.run("quadrature.antihermiticity", 1e-6, [&] {
      double worst = 0.0;
      for (long m = -4; m <= 4; ++m)
        for (long n = -4; n <= 4; ++n)
          worst = std::max(worst, std::abs(quad[1]->first_order(m, n) + std::conj(quad[1]->first_order(n, m))));
      return Measured{worst, "s = 1/4"};
    });
    suite.run("quadrature.pure_total_closed_form", 1e-7, [&] { return pure_invariance(quad, phases, false); });
    suite.run("quadrature.pure_total_numeric", 1e-6, [&] { return pure_invariance(quad, phases, true); });
    suite.run("fock.oracle_convergence_order", 0.0, [] {
      const std::vector<double> us = {0.25, 0.5, 0.8};
      const double d4 = oracle_deviation(4e-3, us).defect;
      const double d2 = oracle_deviation(2e-3, us).defect;
      const double d1 = oracle_deviation(1e-3, us).defect;
      const double order = 0.5 * (std::log2(d4 / d2) + std::log2(d2 / d1));
      std::ostringstream detail;
      detail << "observed order " << order << ", deviation at 1e-3 " << d1;
      return Measured{std::max(0.0, 2.7 - order), detail.str()};
    });
    suite.run("figure.fig1_shape", 0.0, [] {
      const FigureData fig = run_figure(fig1_spec(ProviderKind::Quadrature), true);
      double violations = fig.merged_s0 ? 0.0 : 1.0;
      std::map<std::pair<double, long>, std::vector<const SweepRow*>> curves;
      for (const SweepRow& r : fig.rows) curves[{r.s, r.k}].push_back(&r);
      for (const auto& [key, rows] : curves) {
        double lowest = 4.0;
        std::size_t at = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i]->qfi_rob > 4.0) violations += 1.0;
          if (rows[i]->qfi_rob < lowest) lowest = rows[i]->qfi_rob, at = i;
        }
        if (rows.front()->qfi_rob != 4.0 || rows.back()->qfi_rob != 4.0) violations += 1.0;
        if (at == 0 || at + 1 == rows.size()) violations += 1.0;
      }
      return Measured{violations, std::to_string(fig.curves) + " curves"};
    });
    suite.run("figure.fig3_ordering", 0.0, [] {
      SweepSpec spec = fig3_spec(ProviderKind::Quadrature);
      spec.u = {0.5};
      const std::vector<SweepRow> rows = run_sweep(spec);
      double violations = 0.0;
      for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].qfi_total > rows[i - 1].qfi_total)) violations += 1.0;
      return Measured{violations, "u = 0.5"};
    });
  }
  return suite.take();
}

nlohmann::ordered_json verification_report(VerifyLevel level, const std::vector<CheckResult>& results) {
  nlohmann::ordered_json doc;
  doc["level"] = level == VerifyLevel::Fast ? "fast" : "full";
  bool all = true;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const CheckResult& r : results) {
    all = all && r.passed;
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["passed"] = r.passed;
    if (std::isfinite(r.defect)) {
      c["defect"] = r.defect;
    } else {
      c["defect"] = nullptr;
    }
    c["tolerance"] = r.tolerance;
    c["seconds"] = r.seconds;
    c["detail"] = r.detail;
    checks.push_back(std::move(c));
  }
  doc["passed"] = all;
  doc["count"] = results.size();
  doc["checks"] = std::move(checks);
  return doc;
}

VerifyLevel parse_level(const std::string& name) {
  if (name == "fast") return VerifyLevel::Fast;
  if (name == "full") return VerifyLevel::Full;
  throw Error(ErrorCode::SpecValidation, "unknown verify level '" + name + "'");
}

}  // namespace cavqfi

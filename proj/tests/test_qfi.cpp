#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "cavqfi/qfi.hpp"
#include "support.hpp"

using namespace cavqfi;

namespace {

ParameterizedFamily diagonal_qubit(double r) {
  ParameterizedFamily f;
  f.evaluate = [r](double theta) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = (1 + r * std::cos(2 * theta)) / 2;
    m(1, 1) = (1 - r * std::cos(2 * theta)) / 2;
    return DensityMatrix(m);
  };
  f.derivative = [r](double theta) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = -r * std::sin(2 * theta);
    m(1, 1) = r * std::sin(2 * theta);
    return m;
  };
  return f;
}

// rho(lambda) = U(lambda) diag(p(lambda)) U(lambda)^dag with U = exp(i lambda H).
struct RandomFamily {
  ComplexMatrix h;
  EigenSystem<Complex> h_eig;
  int rank;
  std::vector<double> freq, phase;

  RandomFamily(std::uint64_t seed, int dim, int rank_) : rank(rank_) {
    std::mt19937_64 rng(seed);
    h = testing::random_hermitian(rng, dim);
    h_eig = hermitian_eig(h);
    std::uniform_real_distribution<double> uni(0.5, 2.0);
    for (int i = 0; i < rank; ++i) {
      freq.push_back(uni(rng));
      phase.push_back(uni(rng) * 3);
    }
  }
  Eigen::Index dim() const { return h.rows(); }
  ComplexMatrix unitary(double x) const {
    ComplexVector e = (kI * x * h_eig.eigenvalues.cast<Complex>()).array().exp();
    return h_eig.eigenvectors * e.asDiagonal() * h_eig.eigenvectors.adjoint();
  }
  double weight(int i, double x) const { return 1.0 + 0.5 * std::sin(freq[i] * x + phase[i]); }
  double dweight(int i, double x) const { return 0.5 * freq[i] * std::cos(freq[i] * x + phase[i]); }
  double p(int i, double x) const {
    double s = 0;
    for (int j = 0; j < rank; ++j) s += weight(j, x);
    return weight(i, x) / s;
  }
  double dp(int i, double x) const {
    double s = 0, ds = 0;
    for (int j = 0; j < rank; ++j) {
      s += weight(j, x);
      ds += dweight(j, x);
    }
    return dweight(i, x) / s - weight(i, x) * ds / (s * s);
  }
  ComplexMatrix diag(double x, bool derivative) const {
    ComplexMatrix d = ComplexMatrix::Zero(dim(), dim());
    for (int i = 0; i < rank; ++i) d(i, i) = derivative ? dp(i, x) : p(i, x);
    return d;
  }
  ParameterizedFamily family() const {
    ParameterizedFamily f;
    f.evaluate = [this](double x) {
      const ComplexMatrix u = unitary(x);
      return DensityMatrix(u * diag(x, false) * u.adjoint());
    };
    f.derivative = [this](double x) {
      const ComplexMatrix u = unitary(x);
      const ComplexMatrix rho = u * diag(x, false) * u.adjoint();
      ComplexMatrix d = kI * (h * rho - rho * h) + u * diag(x, true) * u.adjoint();
      return ComplexMatrix((d + d.adjoint()) / 2.0);
    };
    return f;
  }
  std::vector<SpectralBranch> branches(bool analytic) const {
    std::vector<SpectralBranch> out;
    for (int i = 0; i < rank; ++i) {
      SpectralBranch b;
      b.p = [this, i](double x) { return p(i, x); };
      b.psi = [this, i](double x) { return ComplexVector(unitary(x).col(i)); };
      if (analytic) {
        b.dp = [this, i](double x) { return dp(i, x); };
        b.dpsi = [this, i](double x) { return ComplexVector(kI * h * unitary(x).col(i)); };
      }
      out.push_back(b);
    }
    return out;
  }
};

Povm random_povm(std::mt19937_64& rng, Eigen::Index dim, int outcomes) {
  std::vector<ComplexMatrix> m;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < outcomes; ++k) {
    const ComplexMatrix g = testing::random_complex(rng, dim, 1 + k % dim);
    m.push_back(g * g.adjoint());
    sum += m.back();
  }
  const auto eig = hermitian_eig(sum);
  const ComplexMatrix inv_sqrt = eig.eigenvectors *
                                 eig.eigenvalues.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                                 eig.eigenvectors.adjoint();
  for (auto& e : m) {
    e = inv_sqrt * e * inv_sqrt;
    e = ((e + e.adjoint()) / 2.0).eval();
  }
  return Povm(m);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("classical_fisher of the trivial POVM vanishes") {
  const auto f = diagonal_qubit(1.0 / 3.0);
  CHECK(classical_fisher(f, 0.4, Povm({ComplexMatrix::Identity(2, 2)})) == doctest::Approx(0.0));
}

TEST_CASE("two-outcome Fisher information of the diagonal qubit family") {
  const double r = 1.0 / 3.0;
  const auto f = diagonal_qubit(r);
  const Povm z = projective_povm(ComplexMatrix::Identity(2, 2));
  for (double theta : {kPi / 4, 0.2, 0.9, 1.3}) {
    const double c2 = std::cos(2 * theta), s2 = std::sin(2 * theta);
    const double oracle = 4 * r * r * s2 * s2 / (1 - r * r * c2 * c2);
    CHECK(classical_fisher(f, theta, z) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(qfi_spectral(f, theta) == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK(classical_fisher(f, kPi / 4, z) == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("classical_fisher flags a singular outcome") {
  ParameterizedFamily f;
  f.evaluate = [](double) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1;
    return DensityMatrix(m);
  };
  f.derivative = [](double) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = -0.1;
    m(1, 1) = 0.1;
    return m;
  };
  const Povm z = projective_povm(ComplexMatrix::Identity(2, 2));
  CHECK(code_of([&] { classical_fisher(f, 0.0, z); }) == ErrorCode::SingularOutcome);
}

TEST_CASE("Povm rejects incomplete or negative elements") {
  ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  CHECK(code_of([&] { Povm({half}); }) == ErrorCode::InvalidPovm);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = -0.5;
  ComplexMatrix rest = ComplexMatrix::Identity(2, 2) - neg;
  CHECK(code_of([&] { Povm({neg, rest}); }) == ErrorCode::InvalidPovm);
}

TEST_CASE("sld_solve on a commuting qubit case") {
  const DensityMatrix rho(ComplexMatrix::Identity(2, 2) / 2.0);
  ComplexMatrix sz = ComplexMatrix::Zero(2, 2);
  sz(0, 0) = 1;
  sz(1, 1) = -1;
  const ComplexMatrix l = sld_solve(rho, sz / 2.0);
  CHECK(max_abs(l - sz) <= 1e-14);
}

TEST_CASE("sld_solve on a pure state is twice the derivative") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const RandomFamily fam(seed, 4, 1);
    const auto f = fam.family();
    const DensityMatrix rho = f.evaluate(0.37);
    const ComplexMatrix d = f.derivative(0.37);
    const ComplexMatrix l = sld_solve(rho, d);
    CHECK(max_abs(l - 2.0 * d) <= 1e-9);
    CHECK(max_abs(d - (rho.matrix() * l + l * rho.matrix()) / 2.0) <= 1e-9);
  }
}

TEST_CASE("sld_solve residual on a random rank-2 family") {
  const RandomFamily fam(7, 4, 2);
  const auto f = fam.family();
  for (double x : {-0.5, 0.1, 0.8}) {
    const DensityMatrix rho = f.evaluate(x);
    const ComplexMatrix d = f.derivative(x);
    const ComplexMatrix l = sld_solve(rho, d);
    CHECK(max_abs(d - (rho.matrix() * l + l * rho.matrix()) / 2.0) <= 1e-8);
    CHECK(hermiticity_defect(l) <= 1e-12);
  }
}

TEST_CASE("sld_solve reports derivative weight outside the support") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 1;
  const DensityMatrix rho(m);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(1, 2) = d(2, 1) = 0.3;
  CHECK(code_of([&] { sld_solve(rho, d); }) == ErrorCode::UnsupportedDerivativeComponent);
}

TEST_CASE("invalid derivatives are rejected") {
  const DensityMatrix rho(ComplexMatrix::Identity(2, 2) / 2.0);
  ComplexMatrix d = ComplexMatrix::Identity(2, 2) * 0.1;
  CHECK(code_of([&] { sld_solve(rho, d); }) == ErrorCode::InvalidDerivative);
  d = ComplexMatrix::Zero(2, 2);
  d(0, 1) = 0.2;
  CHECK(code_of([&] { sld_solve(rho, d); }) == ErrorCode::InvalidDerivative);
}

TEST_CASE("qfi_spectral of a constant family vanishes") {
  ParameterizedFamily f;
  f.evaluate = [](double) { return DensityMatrix(ComplexMatrix::Identity(3, 3) / 3.0); };
  f.derivative = [](double) { return ComplexMatrix(ComplexMatrix::Zero(3, 3)); };
  CHECK(qfi_spectral(f, 0.2) == 0.0);
}

TEST_CASE("qfi_spectral of the unperturbed entangled family is four") {
  ParameterizedFamily f;
  auto psi = [](double t) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = std::cos(t);
    v(3) = std::sin(t);
    return v;
  };
  auto dpsi = [](double t) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = -std::sin(t);
    v(3) = std::cos(t);
    return v;
  };
  f.evaluate = [psi](double t) { return DensityMatrix(psi(t) * psi(t).adjoint()); };
  f.derivative = [psi, dpsi](double t) {
    return ComplexMatrix(dpsi(t) * psi(t).adjoint() + psi(t) * dpsi(t).adjoint());
  };
  for (double t : {0.1, kPi / 4, 1.2}) {
    CHECK(qfi_spectral(f, t) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(qfi_sld_trace(f, t) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(qfi_pure(psi, t) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(qfi_pure(psi, t, dpsi) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("qfi_pure vanishes for constant and pure-phase families") {
  std::mt19937_64 rng(4);
  ComplexVector psi0 = testing::random_complex(rng, 3, 1);
  psi0.normalize();
  CHECK(qfi_pure([&](double) { return psi0; }, 0.3) == 0.0);
  CHECK(qfi_pure([&](double x) { return ComplexVector(std::exp(kI * x) * psi0); }, 0.3) <= 1e-9);
  CHECK(code_of([&] { qfi_pure([&](double) { return ComplexVector(2.0 * psi0); }, 0.0); }) ==
        ErrorCode::NonUnitVector);
}

TEST_CASE("formula equivalence on random families") {
  for (int rank = 1; rank <= 4; ++rank) {
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
      const RandomFamily fam(seed + 100 * rank, 4, rank);
      const auto f = fam.family();
      const double x = 0.3 + 0.1 * double(seed);
      const double spectral = qfi_spectral(f, x);
      const double trace = qfi_sld_trace(f, x);
      const auto analytic = fam.branches(true);
      const auto numeric = fam.branches(false);
      const QfiBreakdown b = qfi_support(analytic, x);
      const QfiBreakdown bn = qfi_support(numeric, x);
      CHECK(std::abs(spectral - trace) <= 1e-9);
      CHECK(std::abs(spectral - b.total) <= 1e-7);
      CHECK(std::abs(spectral - bn.total) <= 1e-7);
      CHECK(std::abs(b.total - (b.classical_part + b.pure_part - b.mixture_part)) <= 1e-9);
      CHECK(b.mixture_part >= 0.0);
      CHECK(b.support_rank == rank);
      if (rank == 1) {
        CHECK(b.classical_part <= 1e-20);
        CHECK(b.mixture_part == 0.0);
      }
      // Finite-difference self-check of the analytic derivative.
      const auto fd = finite_difference_family(f.evaluate);
      CHECK(max_abs(fd.derivative(x) - f.derivative(x)) <= 1e-6);
    }
  }
}

TEST_CASE("qfi_support on a classical diagonal family") {
  const double r = 0.6;
  std::vector<SpectralBranch> br(2);
  for (int i = 0; i < 2; ++i) {
    const double sign = i == 0 ? 1.0 : -1.0;
    br[i].p = [r, sign](double t) { return (1 + sign * r * std::cos(2 * t)) / 2; };
    br[i].psi = [i](double) { return ComplexVector(ComplexVector::Unit(2, i)); };
  }
  const double t = 0.7;
  const QfiBreakdown b = qfi_support(br, t);
  CHECK(b.pure_part == 0.0);
  CHECK(b.mixture_part == 0.0);
  const double fisher =
      classical_fisher(diagonal_qubit(r), t, projective_povm(ComplexMatrix::Identity(2, 2)));
  CHECK(b.total == doctest::Approx(fisher).epsilon(1e-8));
}

TEST_CASE("qfi_support validates its spectrum") {
  std::vector<SpectralBranch> br(2);
  br[0].p = [](double) { return 0.5; };
  br[1].p = [](double) { return 0.6; };
  br[0].psi = [](double) { return ComplexVector(ComplexVector::Unit(2, 0)); };
  br[1].psi = [](double) { return ComplexVector(ComplexVector::Unit(2, 1)); };
  CHECK(code_of([&] { qfi_support(br, 0.0); }) == ErrorCode::NonNormalizedSpectrum);
  br[1].p = [](double) { return 0.5; };
  br[1].psi = [](double) { return ComplexVector(ComplexVector::Unit(2, 0)); };
  CHECK(code_of([&] { qfi_support(br, 0.0); }) == ErrorCode::NonOrthonormalBasis);
}

TEST_CASE("classical Fisher never exceeds the QFI and the SLD basis attains it") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomFamily fam(5000 + trial, 2, 1 + trial % 2);
    const auto f = fam.family();
    const double x = 0.05 * trial;
    const double qfi = qfi_spectral(f, x);
    const Povm povm = random_povm(rng, 2, 2 + trial % 4);
    CHECK(classical_fisher(f, x, povm) <= qfi + 1e-8);
    if (trial % 2 == 1) {
      const ComplexMatrix l = sld_solve(f.evaluate(x), f.derivative(x));
      const Povm optimal = projective_povm(hermitian_eig(l).eigenvectors);
      CHECK(std::abs(classical_fisher(f, x, optimal) - qfi) <= 1e-9);
    }
  }
}

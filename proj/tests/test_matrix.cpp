#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "cavqfi/matrix.hpp"
#include "support.hpp"

using namespace cavqfi;

TEST_CASE("hermitian_eig on the identity returns a repeated unit eigenvalue") {
  const auto eig = hermitian_eig(ComplexMatrix::Identity(2, 2).eval());
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(max_abs(eig.eigenvectors.adjoint() * eig.eigenvectors - ComplexMatrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("hermitian_eig on a diagonal matrix returns the standard basis") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  const auto eig = hermitian_eig(d);
  CHECK(eig.eigenvalues(0) == doctest::Approx(0.25));
  CHECK(eig.eigenvalues(1) == doctest::Approx(0.75));
  CHECK(std::abs(eig.eigenvectors(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(eig.eigenvectors(0, 1) - 1.0) < 1e-15);
}

TEST_CASE("hermitian_eig reconstructs random Hermitian input") {
  std::mt19937_64 rng(42);
  for (int n : {2, 3, 4, 8, 16, 33}) {
    const ComplexMatrix h = testing::random_hermitian(rng, n);
    const auto eig = hermitian_eig(h);
    const ComplexMatrix rebuilt =
        eig.eigenvectors * eig.eigenvalues.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    CHECK(max_abs(rebuilt - h) <= 1e-11);
    CHECK(max_abs(eig.eigenvectors.adjoint() * eig.eigenvectors - ComplexMatrix::Identity(n, n)) <= 1e-11);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));

    // Independent reference solver.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h);
    CHECK(max_abs(ref.eigenvalues() - eig.eigenvalues) <= 1e-11);

    // Involution stability.
    const auto again = hermitian_eig(rebuilt);
    CHECK(max_abs(again.eigenvalues - eig.eigenvalues) <= 1e-10);
  }
}

TEST_CASE("hermitian_eig handles real symmetric scalars and is deterministic") {
  Eigen::MatrixXd s(3, 3);
  s << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const auto eig = hermitian_eig(s);
  CHECK(eig.eigenvalues(0) == doctest::Approx(2 - std::sqrt(2.0)));
  CHECK(eig.eigenvalues(2) == doctest::Approx(2 + std::sqrt(2.0)));
  const auto again = hermitian_eig(s);
  CHECK((again.eigenvectors - eig.eigenvectors).norm() == 0.0);
}

TEST_CASE("hermitian_eig keeps degenerate clusters orthonormal") {
  std::mt19937_64 rng(5);
  const ComplexMatrix u = testing::random_unitary(rng, 5);
  RealVector lambda(5);
  lambda << 0.1, 0.1, 0.1, 0.35, 0.35;
  const ComplexMatrix h = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
  const auto eig = hermitian_eig(h);
  CHECK(max_abs(eig.eigenvectors.adjoint() * eig.eigenvectors - ComplexMatrix::Identity(5, 5)) <= 1e-11);
  CHECK(max_abs(eig.eigenvalues - lambda) <= 1e-12);
}

TEST_CASE("hermitian_eig rejects bad input") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(m), Error);
  try {
    hermitian_eig(m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
  try {
    hermitian_eig(ComplexMatrix::Identity(65, 65).eval());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("kron matches the index-loop definition") {
  CHECK(max_abs(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) -
                ComplexMatrix::Identity(4, 4)) == 0.0);
  Eigen::Matrix2d p0 = Eigen::Vector2d(1, 0).asDiagonal();
  Eigen::Matrix2d p1 = Eigen::Vector2d(0, 1).asDiagonal();
  CHECK(kron(p0, p1) == Eigen::Vector4d(0, 1, 0, 0).asDiagonal().toDenseMatrix());

  std::mt19937_64 rng(3);
  const ComplexMatrix a = testing::random_complex(rng, 2, 2);
  const ComplexMatrix b = testing::random_complex(rng, 2, 2);
  const ComplexMatrix k = kron(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) CHECK(k(i * 2 + p, j * 2 + q) == a(i, j) * b(p, q));
}

TEST_CASE("partial_trace of a product state returns the factor") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix ra(testing::random_density(rng, 2, 2), {"A:0", "A:1"});
    const DensityMatrix rb(testing::random_density(rng, 3, 1 + trial % 3));
    const DensityMatrix prod = tensor(ra, rb);
    CHECK(prod.labels()[1] == "A:0 ⊗ 1");
    const DensityMatrix back = partial_trace(prod, Subsystem::First, 2, 3);
    CHECK(max_abs(back.matrix() - ra.matrix()) <= 1e-12);
    CHECK(back.labels()[1] == "A:1");
    CHECK(max_abs(partial_trace(prod, Subsystem::Second, 2, 3).matrix() - rb.matrix()) <= 1e-12);
  }
}

TEST_CASE("partial_trace of a Bell state is maximally mixed") {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho(phi * phi.adjoint());
  const DensityMatrix ra = partial_trace(rho, Subsystem::First, 2, 2);
  CHECK(max_abs(ra.matrix() - ComplexMatrix::Identity(2, 2) / 2.0) <= 1e-15);
}

TEST_CASE("partial_trace of the Werner state agrees with direct summation") {
  const double r = 1.0 / 3.0;
  for (double theta : {kPi / 4, 0.3, 1.1}) {
    ComplexVector psi = ComplexVector::Zero(4);
    psi(0) = std::cos(theta);
    psi(3) = std::sin(theta);
    const ComplexMatrix w = r * psi * psi.adjoint() + (1 - r) / 4 * ComplexMatrix::Identity(4, 4);
    const DensityMatrix ra = partial_trace(DensityMatrix(w), Subsystem::First, 2, 2);
    ComplexMatrix direct = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) direct(i, j) = w(2 * i, 2 * j) + w(2 * i + 1, 2 * j + 1);
    CHECK(max_abs(ra.matrix() - direct) <= 1e-15);
    CHECK(ra.matrix()(0, 0).real() == doctest::Approx((1 + r * std::cos(2 * theta)) / 2));
    CHECK(ra.matrix()(1, 1).real() == doctest::Approx((1 - r * std::cos(2 * theta)) / 2));
  }
}

TEST_CASE("partial_trace rejects inconsistent dimensions") {
  const DensityMatrix rho(ComplexMatrix::Identity(4, 4) / 4.0);
  try {
    partial_trace(rho, Subsystem::First, 3, 2);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("DensityMatrix validates its invariants") {
  auto code_of = [](const ComplexMatrix& m) {
    try {
      DensityMatrix d(m);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoFailure;
  };
  ComplexMatrix bad_trace = ComplexMatrix::Identity(2, 2);
  CHECK(code_of(bad_trace) == ErrorCode::InvalidDensityMatrix);
  ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
  negative(0, 0) = 1.1;
  negative(1, 1) = -0.1;
  CHECK(code_of(negative) == ErrorCode::InvalidDensityMatrix);
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK(code_of(skew) == ErrorCode::InvalidDensityMatrix);
  CHECK(code_of(ComplexMatrix::Identity(2, 2) / 2.0) == ErrorCode::IoFailure);
}

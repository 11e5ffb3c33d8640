#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "cavqfi/fock.hpp"

using namespace cavqfi;

namespace {

constexpr int kWindow = 4;

const ProviderPtr& limited() {
  static const ProviderPtr p = provider_synthetic(3, 0.25, kWindow);
  return p;
}

struct Oracle {
  FockSpace fock{kWindow};
  AlphaMatrix alpha;
  VMatrix v;
  BogoliubovData bog;

  Oracle(double h, double u, double s, long k) {
    const CavityConfig c = config_from_h(h, u, s);
    alpha = compose_alpha(*limited(), c, kWindow, ComposeMode::Series);
    v = v_matrix(alpha, kWindow);
    bog = mode_sums(*limited(), c, k);
  }
};

double max_deviation(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs(a - b); }

int nu_of(long k) { return k >= 0 ? 1 : -1; }

}  // namespace

TEST_CASE("Fock space rejects oversized windows") {
  CHECK_THROWS_AS(FockSpace(7), Error);
  CHECK_THROWS_AS(FockSpace(0), Error);
  CHECK(FockSpace(6).dim() == 8192);
  try {
    FockSpace too_big(9);
    FAIL("expected DimensionTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("canonical anticommutation relations on the full matrices") {
  auto largest = [](const SparseComplexMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m.outerSize(); ++j)
      for (SparseComplexMatrix::InnerIterator it(m, j); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
  };
  for (int window : {1, 2, 4}) {
    const FockSpace fock(window);
    const auto n = Eigen::Index(fock.dim());
    SparseComplexMatrix id(n, n);
    id.setIdentity();
    const SparseComplexMatrix zero(n, n);
    for (long p = -window; p <= window; ++p) {
      const SparseComplexMatrix ap = fock.annihilation_matrix(p);
      const SparseComplexMatrix cp = fock.creation_matrix(p);
      CHECK(largest(ap * ap) == 0.0);
      CHECK(largest(cp * cp) == 0.0);
      for (long q = -window; q <= window; ++q) {
        const SparseComplexMatrix aq = fock.annihilation_matrix(q);
        const SparseComplexMatrix cq = fock.creation_matrix(q);
        const SparseComplexMatrix mixed = ap * cq + cq * ap;
        CHECK(largest(mixed - (p == q ? id : zero)) < 1e-14);
        CHECK(largest(ap * aq + aq * ap) < 1e-14);
        CHECK(largest(cp * cq + cq * cp) < 1e-14);
      }
    }
  }
  // Dense cross-check on the smallest window.
  const FockSpace small(1);
  const ComplexMatrix a0(small.annihilation_matrix(0)), c1(small.creation_matrix(1));
  CHECK(max_abs(a0 * c1 + c1 * a0) == 0.0);
}

TEST_CASE("vector ladder operators match the matrices") {
  const FockSpace fock(2);
  ComplexVector v = fock.vacuum();
  v = fock.create(-1, v);
  v = fock.create(2, v);
  for (long p = -2; p <= 2; ++p) {
    CHECK((fock.create(p, v) - fock.creation_matrix(p) * v).norm() < 1e-15);
    CHECK((fock.annihilate(p, v) - fock.annihilation_matrix(p) * v).norm() < 1e-15);
  }
  CHECK(fock.create(1, fock.create(1, fock.vacuum())).norm() == 0.0);
  // Creation operators anticommute on states.
  const ComplexVector ab = fock.create(0, fock.create(1, fock.vacuum()));
  const ComplexVector ba = fock.create(1, fock.create(0, fock.vacuum()));
  CHECK((ab + ba).norm() < 1e-15);
}

TEST_CASE("V matrix: dual form, zero trip and linearity") {
  for (double u : {0.2, 0.55}) {
    const Oracle o(0.01, u, 0.25, 1);
    CHECK(!o.v.first.empty());
    for (const auto& [pq, value] : o.v.first) {
      CHECK(pq.first >= 0);
      CHECK(pq.second < 0);
      CHECK(std::abs(value - o.v.dual.at(pq)) < 1e-10);
    }
  }
  const Oracle still(0.01, 0.0, 0.25, 1);
  for (const auto& [pq, value] : still.v.first) CHECK(value == 0.0);

  const CavityConfig c1 = config_from_h(0.01, 0.3, 0.0), c2 = config_from_h(0.02, 0.3, 0.0);
  const VMatrix v1 = v_matrix(*limited(), c1, kWindow), v2 = v_matrix(*limited(), c2, kWindow);
  for (const auto& [pq, value] : v1.first) {
    CHECK(std::abs(2.0 * v1.h * value - v2.h * v2.first.at(pq)) < 1e-12);
  }
}

TEST_CASE("V matrix needs the whole coupling inside the window") {
  const CavityConfig c = config_from_h(0.01, 0.3, 0.0);
  try {
    v_matrix(*provider_synthetic(3), c, 3);
    FAIL("expected WindowTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooSmall);
  }
}

TEST_CASE("evolved vacuum") {
  const FockSpace fock(kWindow);
  const RegionIIIState trivial = evolve_vacuum(fock, VMatrix{});
  CHECK(trivial.amplitudes(0.3) == fock.vacuum());

  const Oracle o(0.01, 0.4, 0.25, 1);
  const RegionIIIState vac = evolve_vacuum(o.fock, o.v);
  CHECK(vac.norm_defect(0.01) <= 5e-6);
  double analytic = 0.0;
  for (const auto& [pq, value] : o.v.first) analytic += std::norm(value);
  // Explicit renormalization and the analytic constant agree through O(h^2).
  const ComplexVector bare = vac.orders[0] + 0.01 * vac.orders[1] + 1e-4 * (vac.orders[2] + 0.5 * analytic * vac.orders[0]);
  CHECK(std::abs(1.0 / bare.norm() - (1.0 - 0.5 * analytic * 1e-4)) < 5e-6);

  for (const auto& [state, amp] : vac.sparse_amplitudes(0.01)) {
    CHECK(o.fock.charge(state) == 0);
    int particles = 0, antiparticles = 0;
    for (long n = -kWindow; n <= kWindow; ++n) {
      if (state & (1u << o.fock.bit(n))) ++(n >= 0 ? particles : antiparticles);
    }
    CHECK(particles == antiparticles);
  }
}

TEST_CASE("evolved one-particle states") {
  for (long k : {-2L, -1L, 0L, 1L, 3L}) {
    const Oracle still(0.01, 0.0, 0.0, k);
    const RegionIIIState trivial = evolve_one_particle(still.fock, still.v, still.alpha, k);
    const ComplexVector bare = still.fock.create(k, still.fock.vacuum());
    CHECK((trivial.orders[0] - bare).norm() < 1e-15);

    const Oracle o(0.01, 0.35, 0.25, k);
    const RegionIIIState vac = evolve_vacuum(o.fock, o.v);
    const RegionIIIState one = evolve_one_particle(o.fock, o.v, o.alpha, k);
    CHECK(one.norm_defect(0.01) <= 5e-6);
    CHECK(std::abs(vac.amplitudes(0.01).dot(one.amplitudes(0.01))) <= 5e-6);
    for (const auto& [state, amp] : one.sparse_amplitudes(0.01)) CHECK(o.fock.charge(state) == nu_of(k));

    // Leading amplitude on the bare excitation carries G_k (conjugated for particles).
    const Complex lead = one.orders[0](Eigen::Index(1u << o.fock.bit(k)));
    const Complex g = o.alpha.phases(o.alpha.index(k));
    CHECK(std::abs(lead - (k >= 0 ? std::conj(g) : g)) < 1e-15);
  }
}

TEST_CASE("oracle reproduces the initial state at u = 0") {
  for (long k : {-1L, 2L}) {
    const Oracle o(0.01, 0.0, 0.25, k);
    const PureStateParams p{0.5, -1, 1, nu_of(k)};
    const DensityMatrix rho = oracle_reduced_rho(p, o.fock, o.v, o.alpha, k);
    ComplexVector psi = ComplexVector::Zero(4);
    psi(0) = std::cos(p.theta);
    psi(3) = -std::sin(p.theta);
    CHECK(max_deviation(rho.matrix(), psi * psi.adjoint()) < 1e-15);
    CHECK(max_deviation(rho.matrix(), rho_pure_reduced(p, o.bog, 0.01).matrix()) < 1e-15);
  }
}

TEST_CASE("oracle matches the closed-form reduced states to O(h^3)") {
  for (double u : {0.25, 0.5, 0.8}) {
    for (long k : {-2L, -1L, 1L, 2L}) {
      std::array<double, 3> pure_dev{}, werner_dev{};
      const std::array<double, 3> hs = {4e-3, 2e-3, 1e-3};
      for (std::size_t i = 0; i < hs.size(); ++i) {
        const Oracle o(hs[i], u, 0.25, k);
        const PureStateParams p{kPi / 4, 1, 1, nu_of(k)};
        WernerParams w;
        w.theta = kPi / 4;
        w.nu = nu_of(k);
        pure_dev[i] = max_deviation(oracle_reduced_rho(p, o.fock, o.v, o.alpha, k).matrix(),
                                    rho_pure_reduced(p, o.bog, hs[i]).matrix());
        werner_dev[i] = max_deviation(oracle_reduced_rho(w, o.fock, o.v, o.alpha, k).matrix(),
                                      rho_werner_reduced(w, o.bog, hs[i]).matrix());
        CHECK(pure_dev[i] <= 10.0 * std::pow(hs[i], 3));
        CHECK(werner_dev[i] <= 10.0 * std::pow(hs[i], 3));
        // Vacuum-vacuum entry against its leading-order value.
        const double vv = oracle_reduced_rho(p, o.fock, o.v, o.alpha, k).matrix()(0, 0).real();
        CHECK(std::abs(vv - 0.5 * (1.0 - o.bog.f_minus_nu() * hs[i] * hs[i])) <= 10.0 * std::pow(hs[i], 3));
      }
      const double pure_order = std::log2(pure_dev[0] / pure_dev[1]) / 2 + std::log2(pure_dev[1] / pure_dev[2]) / 2;
      const double werner_order =
          std::log2(werner_dev[0] / werner_dev[1]) / 2 + std::log2(werner_dev[1] / werner_dev[2]) / 2;
      CHECK(pure_order >= 2.7);
      CHECK(werner_order >= 2.7);
      CHECK(pure_dev[2] <= 1e-7);
    }
  }
}

TEST_CASE("oracle validates its parameters") {
  const Oracle o(0.01, 0.3, 0.25, 1);
  CHECK_THROWS_AS(oracle_reduced_rho(PureStateParams{0.4, 1, 1, -1}, o.fock, o.v, o.alpha, 1), Error);
  CHECK_THROWS_AS(oracle_reduced_rho(PureStateParams{0.4, 1, 1, 1}, o.fock, o.v, o.alpha, 5), Error);
}

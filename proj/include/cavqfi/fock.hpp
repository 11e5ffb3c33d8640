#ifndef CAVQFI_FOCK_HPP
#define CAVQFI_FOCK_HPP

#include <array>
#include <cstdint>
#include <map>
#include <utility>

#include <Eigen/SparseCore>

#include "cavqfi/cavity.hpp"
#include "cavqfi/matrix.hpp"
#include "cavqfi/state.hpp"

namespace cavqfi {

using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

/// Fermionic Fock space over the modes -N_w .. N_w. Mode n sits at bit
/// n + N_w; modes n >= 0 are particles, n < 0 antiparticles. A basis state
/// with occupied bits j1 < j2 < ... is c_{j1}^dag c_{j2}^dag ... |0>, so
/// c_j^dag picks up (-1)^(number of occupied bits below j).
class FockSpace {
 public:
  explicit FockSpace(int window);

  int window() const { return window_; }
  int modes() const { return 2 * window_ + 1; }
  std::size_t dim() const { return std::size_t(1) << modes(); }
  int bit(long n) const { return int(n) + window_; }
  bool contains(long n) const { return std::abs(n) <= window_; }

  /// c_n^dag |v> and c_n |v> on dense vectors.
  ComplexVector create(long n, const ComplexVector& v) const;
  ComplexVector annihilate(long n, const ComplexVector& v) const;

  SparseComplexMatrix creation_matrix(long n) const;
  SparseComplexMatrix annihilation_matrix(long n) const;

  /// Net charge of a basis state: particles minus antiparticles.
  int charge(std::uint32_t state) const;

  ComplexVector vacuum() const;

 private:
  int window_;
};

/// V = h V1 on p >= 0, q < 0 with V1_pq = conj(A1c_pq) G_q; `dual` holds the
/// equivalent -A1c_qp conj(G_p).
struct VMatrix {
  double h = 0.0;
  std::map<std::pair<long, long>, Complex> first;
  std::map<std::pair<long, long>, Complex> dual;
};

/// Built from a series composition; throws WindowTooSmall when V couples a
/// mode outside [-window, window].
VMatrix v_matrix(const AlphaMatrix& alpha, int window);
VMatrix v_matrix(const CoefficientProvider& provider, const CavityConfig& config, int window);

/// Region-III state as a polynomial in h through second order.
struct RegionIIIState {
  std::array<ComplexVector, 3> orders;

  ComplexVector amplitudes(double h) const { return orders[0] + h * orders[1] + h * h * orders[2]; }
  /// Nonzero amplitudes of the explicitly normalized state.
  std::map<std::uint32_t, Complex> sparse_amplitudes(double h, double cut = 0.0) const;
  /// |<psi|psi> - 1| of the unnormalized truncated series.
  double norm_defect(double h) const { return std::abs(amplitudes(h).squaredNorm() - 1.0); }
};

/// N e^W |0~> through O(h^2), with N = 1 - (1/2) sum |V|^2 h^2.
RegionIIIState evolve_vacuum(const FockSpace& fock, const VMatrix& v);

/// a_k^dag |0> (k >= 0) or b_k^dag |0> (k < 0) of region I written in region
/// III, where a_k^dag = sum_l conj(A_lk) (a~_l^dag or b~_l) and
/// b_k^dag = sum_l A_lk (a~_l or b~_l^dag).
RegionIIIState evolve_one_particle(const FockSpace& fock, const VMatrix& v, const AlphaMatrix& alpha, long k);

/// Reduced state on {A0, A1} x {R0, R1_k} built from the region-III
/// expansions, every Rob mode except k traced out.
DensityMatrix oracle_reduced_rho(const PureStateParams& params, const FockSpace& fock, const VMatrix& v,
                                 const AlphaMatrix& alpha, long k);
DensityMatrix oracle_reduced_rho(const WernerParams& params, const FockSpace& fock, const VMatrix& v,
                                 const AlphaMatrix& alpha, long k);

}  // namespace cavqfi

#endif  // CAVQFI_FOCK_HPP

#include "cavqfi/fock.hpp"

#include <bit>
#include <sstream>

namespace cavqfi {

namespace {

constexpr int kMaxWindow = 6;

int parity_below(std::uint32_t state, int bit) {
  return std::popcount(state & ((std::uint32_t(1) << bit) - 1)) & 1;
}

void check_mode(const FockSpace& fock, long n) {
  if (!fock.contains(n)) {
    throw Error(ErrorCode::WindowTooSmall,
                "mode " + std::to_string(n) + " outside the Fock window " + std::to_string(fock.window()));
  }
}

const std::vector<std::string>& basis_labels() {
  static const std::vector<std::string> labels = {"A:0 ⊗ R:0", "A:0 ⊗ R:1k", "A:1m ⊗ R:0", "A:1m ⊗ R:1k"};
  return labels;
}

}  // namespace

FockSpace::FockSpace(int window) : window_(window) {
  if (window < 1) throw Error(ErrorCode::SpecValidation, "Fock window must be at least 1");
  if (window > kMaxWindow) {
    throw Error(ErrorCode::DimensionTooLarge, "Fock window " + std::to_string(window) + " above " +
                                                  std::to_string(kMaxWindow));
  }
}

ComplexVector FockSpace::create(long n, const ComplexVector& v) const {
  check_mode(*this, n);
  const int b = bit(n);
  const std::uint32_t mask = std::uint32_t(1) << b;
  ComplexVector out = ComplexVector::Zero(Eigen::Index(dim()));
  for (std::uint32_t x = 0; x < dim(); ++x) {
    if ((x & mask) || v(x) == 0.0) continue;
    out(x | mask) += parity_below(x, b) ? -v(x) : v(x);
  }
  return out;
}

ComplexVector FockSpace::annihilate(long n, const ComplexVector& v) const {
  check_mode(*this, n);
  const int b = bit(n);
  const std::uint32_t mask = std::uint32_t(1) << b;
  ComplexVector out = ComplexVector::Zero(Eigen::Index(dim()));
  for (std::uint32_t x = 0; x < dim(); ++x) {
    if (!(x & mask) || v(x) == 0.0) continue;
    out(x & ~mask) += parity_below(x, b) ? -v(x) : v(x);
  }
  return out;
}

SparseComplexMatrix FockSpace::creation_matrix(long n) const {
  check_mode(*this, n);
  const int b = bit(n);
  const std::uint32_t mask = std::uint32_t(1) << b;
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::uint32_t x = 0; x < dim(); ++x) {
    if (x & mask) continue;
    entries.emplace_back(x | mask, x, parity_below(x, b) ? -1.0 : 1.0);
  }
  SparseComplexMatrix m{Eigen::Index(dim()), Eigen::Index(dim())};
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

SparseComplexMatrix FockSpace::annihilation_matrix(long n) const {
  return SparseComplexMatrix(creation_matrix(n).adjoint());
}

int FockSpace::charge(std::uint32_t state) const {
  int q = 0;
  for (long n = -window_; n <= window_; ++n) {
    if (state & (std::uint32_t(1) << bit(n))) q += n >= 0 ? 1 : -1;
  }
  return q;
}

ComplexVector FockSpace::vacuum() const { return ComplexVector::Unit(Eigen::Index(dim()), 0); }

VMatrix v_matrix(const AlphaMatrix& alpha, int window) {
  if (alpha.exact) throw Error(ErrorCode::SpecValidation, "V needs the series composition");
  const int n = alpha.half_width;
  VMatrix v;
  v.h = alpha.h;
  for (long p = 0; p <= n; ++p) {
    for (long q = -n; q < 0; ++q) {
      const Complex value = std::conj(alpha.first(alpha.index(p), alpha.index(q))) * alpha.phases(alpha.index(q));
      const Complex dual = -alpha.first(alpha.index(q), alpha.index(p)) * std::conj(alpha.phases(alpha.index(p)));
      if (p > window || -q > window) {
        if (value != 0.0) {
          std::ostringstream msg;
          msg << "V(" << p << "," << q << ") = " << std::abs(value) << " lies outside the window " << window;
          throw Error(ErrorCode::WindowTooSmall, msg.str());
        }
        continue;
      }
      v.first[{p, q}] = value;
      v.dual[{p, q}] = dual;
    }
  }
  return v;
}

VMatrix v_matrix(const CoefficientProvider& provider, const CavityConfig& config, int window) {
  // Composed on a wider window so couplings that leave the Fock window are caught.
  return v_matrix(compose_alpha(provider, config, 2 * window + 2, ComposeMode::Series), window);
}

std::map<std::uint32_t, Complex> RegionIIIState::sparse_amplitudes(double h, double cut) const {
  ComplexVector v = amplitudes(h);
  v /= v.norm();
  std::map<std::uint32_t, Complex> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) out[std::uint32_t(i)] = v(i);
  }
  return out;
}

namespace {

ComplexVector apply_w(const FockSpace& fock, const VMatrix& v, const ComplexVector& state) {
  ComplexVector out = ComplexVector::Zero(state.size());
  for (const auto& [pq, value] : v.first) {
    if (value == 0.0) continue;
    out += value * fock.create(pq.first, fock.create(pq.second, state));
  }
  return out;
}

}  // namespace

RegionIIIState evolve_vacuum(const FockSpace& fock, const VMatrix& v) {
  for (const auto& [pq, value] : v.first) {
    if (value != 0.0 && (!fock.contains(pq.first) || !fock.contains(pq.second))) {
      throw Error(ErrorCode::WindowTooSmall, "V index outside the Fock window");
    }
  }
  double weight = 0.0;
  for (const auto& [pq, value] : v.first) weight += std::norm(value);
  RegionIIIState out;
  out.orders[0] = fock.vacuum();
  out.orders[1] = apply_w(fock, v, out.orders[0]);
  out.orders[2] = 0.5 * apply_w(fock, v, out.orders[1]) - 0.5 * weight * out.orders[0];
  return out;
}

RegionIIIState evolve_one_particle(const FockSpace& fock, const VMatrix& v, const AlphaMatrix& alpha, long k) {
  if (alpha.exact) throw Error(ErrorCode::SpecValidation, "one-particle evolution needs the series composition");
  check_mode(fock, k);
  if (std::abs(k) > alpha.half_width) throw Error(ErrorCode::WindowTooSmall, "k outside the composition window");
  const Eigen::Index col = alpha.index(k);
  for (long l = -alpha.half_width; l <= alpha.half_width; ++l) {
    if (fock.contains(l)) continue;
    if (alpha.first(alpha.index(l), col) != 0.0 || alpha.second(alpha.index(l), col) != 0.0) {
      throw Error(ErrorCode::WindowTooSmall, "composition couples mode " + std::to_string(l) +
                                                 " outside the Fock window to k=" + std::to_string(k));
    }
  }

  const RegionIIIState vac = evolve_vacuum(fock, v);
  const bool particle = k >= 0;
  // Coefficients of the region-III operator for each l, order by order in h.
  auto coefficient = [&](long l, int order) -> Complex {
    const Eigen::Index row = alpha.index(l);
    Complex c = order == 0 ? (l == k ? alpha.phases(col) : Complex(0.0))
                : order == 1 ? alpha.first(row, col)
                             : alpha.second(row, col);
    return particle ? std::conj(c) : c;
  };
  auto apply = [&](long l, const ComplexVector& state) {
    const bool raise = particle == (l >= 0);
    return raise ? fock.create(l, state) : fock.annihilate(l, state);
  };

  RegionIIIState out;
  for (auto& o : out.orders) o = ComplexVector::Zero(Eigen::Index(fock.dim()));
  for (long l = -fock.window(); l <= fock.window(); ++l) {
    std::array<ComplexVector, 3> moved;
    for (int j = 0; j < 3; ++j) moved[j] = apply(l, vac.orders[j]);
    for (int i = 0; i < 3; ++i) {
      const Complex c = coefficient(l, i);
      if (c == 0.0) continue;
      for (int j = 0; i + j < 3; ++j) out.orders[i + j] += c * moved[j];
    }
  }
  return out;
}

namespace {

void check_params(int sign, int mu, int nu, long k) {
  if ((sign != 1 && sign != -1) || (mu != 1 && mu != -1) || (nu != 1 && nu != -1)) {
    throw Error(ErrorCode::SpecValidation, "sign, mu and nu must be +1 or -1");
  }
  if (nu != (k >= 0 ? 1 : -1)) throw Error(ErrorCode::SpecValidation, "nu does not match the charge of k");
}

// Rows (n_k) by columns (every other occupation), with mode k moved to the
// front of the creation string.
ComplexMatrix rob_rows(const FockSpace& fock, const ComplexVector& psi, long k) {
  const int b = fock.bit(k);
  const std::uint32_t mask = std::uint32_t(1) << b;
  ComplexMatrix rows = ComplexMatrix::Zero(2, Eigen::Index(fock.dim()));
  for (std::uint32_t x = 0; x < fock.dim(); ++x) {
    if (psi(x) == 0.0) continue;
    const bool occupied = x & mask;
    const Complex value = occupied && parity_below(x, b) ? -psi(x) : psi(x);
    rows(occupied ? 1 : 0, x & ~mask) = value;
  }
  return rows;
}

struct OracleRows {
  ComplexMatrix vacuum, one;
};

OracleRows oracle_rows(const FockSpace& fock, const VMatrix& v, const AlphaMatrix& alpha, long k) {
  const RegionIIIState vac = evolve_vacuum(fock, v);
  const RegionIIIState one = evolve_one_particle(fock, v, alpha, k);
  ComplexVector psi0 = vac.amplitudes(v.h);
  ComplexVector psi1 = one.amplitudes(v.h);
  psi0 /= psi0.norm();
  psi1 /= psi1.norm();
  return {rob_rows(fock, psi0, k), rob_rows(fock, psi1, k)};
}

}  // namespace

DensityMatrix oracle_reduced_rho(const PureStateParams& params, const FockSpace& fock, const VMatrix& v,
                                 const AlphaMatrix& alpha, long k) {
  check_params(params.sign, params.mu, params.nu, k);
  const OracleRows rows = oracle_rows(fock, v, alpha, k);
  ComplexMatrix joint(4, rows.vacuum.cols());
  joint.topRows(2) = std::cos(params.theta) * rows.vacuum;
  joint.bottomRows(2) = double(params.sign) * std::sin(params.theta) * rows.one;
  ComplexMatrix rho = joint * joint.adjoint();
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return DensityMatrix(rho, basis_labels());
}

DensityMatrix oracle_reduced_rho(const WernerParams& params, const FockSpace& fock, const VMatrix& v,
                                 const AlphaMatrix& alpha, long k) {
  check_params(params.sign, params.mu, params.nu, k);
  if (!(params.r >= 0.0 && params.r <= 1.0)) throw Error(ErrorCode::SpecValidation, "need 0 <= r <= 1");
  const OracleRows rows = oracle_rows(fock, v, alpha, k);
  const ComplexMatrix pure = oracle_reduced_rho(params.pure(), fock, v, alpha, k).matrix();
  const ComplexMatrix rob = rows.vacuum * rows.vacuum.adjoint() + rows.one * rows.one.adjoint();
  ComplexMatrix rho = params.r * pure + params.r_c() * kron(ComplexMatrix::Identity(2, 2), rob);
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return DensityMatrix(rho, basis_labels());
}

}  // namespace cavqfi

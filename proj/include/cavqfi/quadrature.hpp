#ifndef CAVQFI_QUADRATURE_HPP
#define CAVQFI_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cavqfi/core.hpp"

namespace cavqfi {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error, magnitude;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gauss_kronrod(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 15> fx;
  fx[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fx[j] = f(center - dx);
    fx[14 - j] = f(center + dx);
  }
  double kronrod = fx[7] * kWgk[7];
  double gauss = fx[7] * kWg[3];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double sum = fx[j] + fx[14 - j];
    kronrod += kWgk[j] * sum;
    abs_sum += kWgk[j] * (std::abs(fx[j]) + std::abs(fx[14 - j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  const double mean = kronrod / 2.0;
  double asc = kWgk[7] * std::abs(fx[7] - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(fx[j] - mean) + std::abs(fx[14 - j] - mean));
  // Error scaling as in QUADPACK's qk15, with a rounding floor.
  double error = std::abs((kronrod - gauss) * half);
  const double resasc = asc * std::abs(half);
  const double resabs = abs_sum * std::abs(half);
  if (resasc != 0.0 && error != 0.0) error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
  return {lo, hi, kronrod * half, error, resabs};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of a real integrand on
/// [lo, hi]. Panels with the largest error estimate are bisected until the
/// summed estimate drops below abs_tol. The reduction order is fixed, so the
/// result is bit-stable for identical input.
template <typename F>
QuadratureResult integrate(const F& f, double lo, double hi, double abs_tol, int initial_panels = 1,
                           int max_panels = 4096) {
  std::priority_queue<detail::Panel> heap;
  const int n0 = std::max(1, initial_panels);
  for (int i = 0; i < n0; ++i) {
    const double a = lo + (hi - lo) * i / n0;
    const double b = i + 1 == n0 ? hi : lo + (hi - lo) * (i + 1) / n0;
    heap.push(detail::gauss_kronrod(f, a, b));
  }
  // Returns the summed error estimate and the rounding-limited target.
  auto totals = [&heap, abs_tol] {
    double e = 0.0, mag = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      e += copy.top().error;
      mag += copy.top().magnitude;
      copy.pop();
    }
    return std::pair{e, std::max(abs_tol, 100.0 * std::numeric_limits<double>::epsilon() * mag)};
  };
  auto [error, target] = totals();
  while (error > target) {
    if (static_cast<int>(heap.size()) >= max_panels) {
      throw Error(ErrorCode::QuadratureNonConvergent,
                  "error estimate " + std::to_string(error) + " above " + std::to_string(abs_tol) +
                      " after " + std::to_string(heap.size()) + " panels");
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const detail::Panel left = detail::gauss_kronrod(f, worst.lo, mid);
    const detail::Panel right = detail::gauss_kronrod(f, mid, worst.hi);
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (error <= target) std::tie(error, target) = totals();
  }

  // Sum in interval order for a deterministic result.
  std::vector<detail::Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.lo < y.lo; });
  QuadratureResult out;
  for (const auto& p : panels) {
    out.value += p.value;
    out.error += p.error;
  }
  out.panels = static_cast<int>(panels.size());
  return out;
}

}  // namespace cavqfi

#endif  // CAVQFI_QUADRATURE_HPP

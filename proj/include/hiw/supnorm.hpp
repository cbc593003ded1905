#ifndef HIW_SUPNORM_HPP
#define HIW_SUPNORM_HPP

// max over xi in {I, W4, V4} of sup_{y >= sqrt(3)/8} y^{k/2} |(f|xi)(z)|, the Fourier lower bound at
// y = k/(4 pi |D|), and the weight sweep of (k/4pi)^k e^{-k} sum_j |f_j(1)|^2.

#include "hiw/fit.hpp"
#include "hiw/level_one.hpp"
#include "hiw/plus_space.hpp"
#include "hiw/salie.hpp"
#include "hiw/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace hiw {

struct ScanGrid {
  int nx = 32;
  int ny = 48;
  /// Coarse maxima refined per frame.
  int seeds = 2;
  int rounds = 4;
};

struct ScanResult {
  LogScaled sup;
  /// truncation error of the value at the argmax
  LogScaled error;
  Frame frame = Frame::I;
  Complex argmax;
  double y_min = 0;
  double y_max = 0;
  bool on_boundary = false;
  /// Im argmax >= k^{1/4}
  bool near_cusp = false;
  std::array<LogScaled, 3> frame_sup;
  std::size_t evaluations = 0;
};

inline double default_scan_y_min() { return std::sqrt(3.0) / 8; }
inline double default_scan_y_max(Weight k) { return 12 * k.value() / std::numbers::pi; }

namespace detail {

inline double golden_max(const std::function<double(double)>& g, double lo, double hi, int iters) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < iters; ++i) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
  return gc >= gd ? c : d;
}

}  // namespace detail

/// Coarse grid over x in [0, 1/step) and log-spaced y per frame, then alternating golden-section
/// refinement in x and log y around the best seeds.
inline ScanResult supnorm_scan(const FrameSet& fs, double y_min = default_scan_y_min(), double y_max = 0,
                               ScanGrid grid = {}) {
  const Weight k = fs.weight;
  if (y_max <= 0) y_max = default_scan_y_max(k);
  if (!(y_max >= y_min) || !(y_min > 0)) throw std::invalid_argument("supnorm_scan: need 0 < y_min <= y_max");
  if (grid.nx < 2 || grid.ny < 2) throw std::invalid_argument("supnorm_scan: grid too coarse");
  ScanResult out;
  out.y_min = y_min;
  out.y_max = y_max;
  const double ly0 = std::log(y_min), ly1 = std::log(y_max);
  const double hly = (ly1 - ly0) / (grid.ny - 1);
  bool first = true;

  for (Frame fr : {Frame::I, Frame::W4, Frame::V4}) {
    const CuspExpansion& e = fs.at(fr);
    const double period = 1 / e.step;
    const double hx = period / grid.nx;
    auto logval = [&](double x, double ly) {
      ++out.evaluations;
      const LogScaled v = eval_at_cusp(e, {x, std::exp(ly)}).value.value;
      return v.is_zero() ? -std::numeric_limits<double>::infinity() : static_cast<double>(v.log_abs());
    };
    struct Cell {
      double v, x, ly;
    };
    std::vector<Cell> cells;
    for (int i = 0; i < grid.nx; ++i)
      for (int j = 0; j < grid.ny; ++j) {
        const double x = i * hx, ly = ly0 + j * hly;
        cells.push_back({logval(x, ly), x, ly});
      }
    const auto n_seeds = static_cast<std::ptrdiff_t>(std::min<std::size_t>(grid.seeds, cells.size()));
    std::partial_sort(cells.begin(), cells.begin() + n_seeds, cells.end(),
                      [](const Cell& a, const Cell& b) { return a.v > b.v; });
    Cell best = cells.front();
    for (std::ptrdiff_t s = 0; s < n_seeds; ++s) {
      Cell c = cells[static_cast<std::size_t>(s)];
      if (!std::isfinite(c.v)) continue;
      double wx = hx, wy = hly;
      for (int r = 0; r < grid.rounds; ++r) {
        c.x = detail::golden_max([&](double x) { return logval(x, c.ly); }, c.x - wx, c.x + wx, 30);
        const double lo = std::max(ly0, c.ly - wy), hi = std::min(ly1, c.ly + wy);
        if (hi > lo) c.ly = detail::golden_max([&](double ly) { return logval(c.x, ly); }, lo, hi, 30);
        // the endpoints are not probed by golden section
        for (double edge : {lo, hi})
          if (logval(c.x, edge) > logval(c.x, c.ly)) c.ly = edge;
        wx /= 2;
        wy /= 2;
      }
      c.v = logval(c.x, c.ly);
      if (c.v > best.v) best = c;
    }
    out.frame_sup[static_cast<std::size_t>(fr)] =
        std::isfinite(best.v) ? LogScaled::from_log(best.v, 1) : LogScaled{};
    if (std::isfinite(best.v) && (first || best.v > static_cast<double>(out.sup.log_abs()))) {
      first = false;
      const double x = best.x - period * std::floor(best.x / period);
      out.frame = fr;
      out.argmax = {x, std::exp(best.ly)};
      const CuspValue cv = eval_at_cusp(e, out.argmax);
      out.sup = cv.value.value;
      out.error = cv.value.err;
    }
  }
  const double yb = out.argmax.imag();
  out.on_boundary = !out.sup.is_zero() && (yb <= y_min * (1 + 1e-9) || yb >= y_max * (1 - 1e-9));
  out.near_cusp = yb >= std::pow(k.value(), 0.25);
  return out;
}

/// y^{k/2} |f(|D|)| <= e^{2 pi |D| y} sup at y = k / (4 pi |D|).
struct FourierLowerCheck {
  std::int64_t n = 0;
  double y = 0;
  LogScaled lhs;
  LogScaled rhs;
  bool holds = false;
};

inline FourierLowerCheck fourier_lower_check(double coefficient, std::int64_t n, Weight k, const LogScaled& sup) {
  FourierLowerCheck c;
  c.n = n;
  c.y = k.value() / (4 * std::numbers::pi * static_cast<double>(n));
  c.lhs = LogScaled(std::fabs(coefficient)) * exp_scaled(k.value() / 2 * std::log(static_cast<long double>(c.y)));
  c.rhs = sup * exp_scaled(2 * std::numbers::pi * static_cast<double>(n) * c.y);
  c.holds = c.lhs.is_zero() || c.lhs.log_abs() <= c.rhs.log_abs();
  return c;
}

struct ScalingRow {
  Weight k;
  /// (k/4pi)^k e^{-k} sum_j |f_j(1)|^2
  CertifiedValue s;
  /// 1 + sign pi sqrt2 sum_c H_c(1,1) J_{k-1}(pi/c)
  double bessel_bracket = 0;
  /// 1 - 2 pi sum_c |J_{k-1}(pi/c)|
  double bessel_lower = 0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  std::vector<Weight> skipped;
  LinearFit fit;
};

/// 2 pi sum_{c >= 1} |J_rho(pi / c)|, tail from |J_rho(x)| <= (x/2)^rho / Gamma(rho + 1).
inline double bessel_abs_sum(Weight order, double tol = 1e-14) {
  const double rho = order.value();
  double s = 0;
  for (std::int64_t c = 1;; ++c) {
    s += std::fabs(bessel_j_half(order, std::numbers::pi / static_cast<double>(c)).to_double());
    const double tail = detail::poincare_tail(rho, std::numbers::pi, c) / salie_h_bound();
    if (tail < tol || c > 1000000) break;
  }
  return 2 * std::numbers::pi * s;
}

/// Weights with m = 1 outside the plus space or an empty space are skipped.
inline ScalingReport scaling_experiment(const std::vector<Weight>& ks, double tol = 1e-12) {
  ScalingReport rep;
  std::vector<double> lx, ly;
  for (Weight k : ks) {
    if (!plus_admissible(k, 1) || level_one_cusp_dimension(k.twice() - 1) == 0) {
      rep.skipped.push_back(k);
      continue;
    }
    const double kk = k.value();
    const CertifiedValue avg = spectral_average(k, 1, tol);
    const LogScaled pre = exp_scaled(kk * std::log(kk / (4 * std::numbers::pi_v<long double>)) - kk);
    ScalingRow row{k, avg * pre, 0, 0};
    row.bessel_bracket = 1 + poincare_coeff(k, 1, 1, tol).bessel_part;
    row.bessel_lower = 1 - bessel_abs_sum(Weight::from_twice(k.twice() - 2));
    lx.push_back(std::log(kk));
    ly.push_back(static_cast<double>(row.s.value.log_abs()));
    rep.rows.push_back(row);
  }
  if (lx.size() >= 2) rep.fit = linear_fit(lx, ly);
  return rep;
}

}  // namespace hiw

#endif  // HIW_SUPNORM_HPP

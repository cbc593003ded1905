#ifndef HIW_SPECIAL_HPP
#define HIW_SPECIAL_HPP

// Special functions in the log domain: Bessel J of half-integer order,
// Gamma at half-integers, the sum S(alpha, beta, kappa), complex log-Gamma,
// and grid checks of the elementary inequalities they satisfy.

#include "hiw/arith.hpp"
#include "hiw/log_scaled.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hiw {

/// s^k for s = +-1 on the principal branch: (-1)^k = e^{i pi k}.
inline std::complex<double> unit_power(int s, Weight k) {
  if (s != 1 && s != -1) throw std::invalid_argument("unit_power: base must be +-1");
  if (s == 1) return {1.0, 0.0};
  switch (mod_floor(k.twice(), 4)) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// e^{i pi k} for integral 2k exponent, any sign of k.
inline std::complex<double> unit_power(int s, int twice_k) { return unit_power(s, Weight::from_twice(twice_k)); }

/// e(x) = exp(2 pi i x) with x reduced mod 1 first.
inline std::complex<double> e_of(double x) {
  double r = x - std::floor(x);
  return std::polar(1.0, 2 * std::numbers::pi * r);
}

struct GammaValue {
  LogScaled value;
  /// Gamma(t) = rational_part * sqrt(pi)^{half ? 1 : 0}.
  Rational rational_part;
  bool times_sqrt_pi = false;
};

/// Gamma(t) for t in (1/2) Z_{>0}: exact r or r sqrt(pi), plus a log-domain value.
inline GammaValue gamma_half(Weight t) {
  if (t.twice() <= 0) throw std::domain_error("gamma_half: argument must be positive");
  GammaValue g;
  if (!t.is_half_integral()) {
    BigInt f = 1;
    for (int i = 2; i < t.twice() / 2; ++i) f *= i;
    g.rational_part = Rational(f);
  } else {
    // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
    const int n = t.lambda();
    Rational r = 1;
    for (int i = 1; i <= n; ++i) r *= Rational(2 * i - 1, 2);
    g.rational_part = r;
    g.times_sqrt_pi = true;
  }
  g.value = LogScaled::from_log(lgammal(static_cast<long double>(t.twice()) / 2), 1);
  return g;
}

inline long double log_gamma(long double t) { return lgammal(t); }

/// log Gamma(z) for Re z > 0 by Stirling's series after shifting to |z| >= 16.
inline std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() <= 0) throw std::domain_error("log_gamma: Re z must be positive");
  std::complex<double> shift = 0;
  while (std::abs(z) < 16) {
    shift += std::log(z);
    z += 1.0;
  }
  static const double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  std::complex<double> s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * std::numbers::pi);
  std::complex<double> zp = z, z2 = z * z;
  for (int m = 1; m <= 7; ++m) {
    s += bern[m - 1] / (2.0 * m * (2.0 * m - 1) * zp);
    zp *= z2;
  }
  return s - shift;
}

namespace detail {

/// Ascending series for J_rho(x), any real rho >= 0, used when x^2 <= 4(rho + 1).
inline CertifiedValue bessel_series(double rho, double x) {
  const long double h = static_cast<long double>(x) * x / 4;
  long double term = 1, sum = 1;
  for (int m = 1; m < 500; ++m) {
    term *= -h / (m * (rho + m));
    sum += term;
    if (std::fabs(term) < 1e-19L * std::fabs(sum)) break;
  }
  long double logpref = rho * std::log(static_cast<long double>(x) / 2) - lgammal(rho + 1);
  LogScaled v = LogScaled::from_log(logpref + std::log(std::fabs(sum)), sum > 0 ? 1 : -1);
  return {v, v.abs() * LogScaled(1e-15)};
}

}  // namespace detail

/// J_rho(x) for half-integer rho >= 1/2 and x > 0.
///
/// rho = n + 1/2 with J_rho(x) = sqrt(2x/pi) j_n(x). n = 0 uses the closed
/// form; x > 2 rho uses upward recurrence from j_0, j_1; otherwise Miller's
/// downward recurrence normalised by sum (2l+1) j_l^2 = 1, kept in range by
/// rescaling, with the sign fixed from the closed forms of j_0 or j_1.
inline CertifiedValue bessel_j_half(Weight rho, double x) {
  if (!rho.is_half_integral() || rho.twice() < 1) throw std::domain_error("bessel_j_half: order must be in 1/2 + N");
  if (!(x > 0)) throw std::domain_error("bessel_j_half: x must be positive");
  const int n = rho.lambda();
  const long double lx = x;
  const long double pref_log = 0.5L * std::log(2 * lx / std::numbers::pi_v<long double>);
  const long double j0 = std::sin(lx) / lx;
  const long double j1 = std::sin(lx) / (lx * lx) - std::cos(lx) / lx;
  auto finish = [&](long double log_abs_j, int sign, double rel) {
    LogScaled v = LogScaled::from_log(pref_log + log_abs_j, sign);
    return CertifiedValue{v, v.abs() * LogScaled(rel)};
  };
  if (n == 0) return finish(std::log(std::fabs(j0)), j0 > 0 ? 1 : (j0 < 0 ? -1 : 0), 1e-15);
  if (x > 2 * rho.value()) {
    long double a = j0, b = j1;
    for (int l = 1; l < n; ++l) {
      long double c = (2 * l + 1) / lx * b - a;
      a = b;
      b = c;
    }
    if (b == 0) return {LogScaled{}, LogScaled(1e-300)};
    return finish(std::log(std::fabs(b)), b > 0 ? 1 : -1, 1e-13);
  }

  const double top = std::max<double>(n, x);
  const int start = static_cast<int>(std::ceil(top)) + 50 + static_cast<int>(std::ceil(4 * std::sqrt(top)));
  long double above = 0, cur = 1e-30L, sum = 0, log_scale = 0;
  long double at_n = 0, log_at_n = 0;  // j_n = at_n * exp(log_at_n - log_scale_final) relative to final scale
  bool captured = false;
  for (int l = start; l >= 0; --l) {
    // cur holds j_l
    sum += (2 * l + 1) * cur * cur;
    if (l == n) {
      at_n = cur;
      log_at_n = log_scale;
      captured = true;
    }
    if (l == 0) break;
    long double below = (2 * l + 1) / lx * cur - above;
    above = cur;
    cur = below;
    if (std::fabs(cur) > 1e100L) {
      cur *= 1e-100L;
      above *= 1e-100L;
      sum *= 1e-200L;
      log_scale += 100 * std::log(10.0L);
    }
  }
  if (!captured || at_n == 0) return {LogScaled{}, LogScaled(1e-300)};
  // stored j_l = true j_l * C * exp(-log_scale); sum(2l+1) j_l^2 = 1 fixes C.
  const long double log_c = 0.5L * std::log(sum) + log_scale;
  const long double log_abs_j = std::log(std::fabs(at_n)) + log_at_n - log_c;
  int sign = at_n > 0 ? 1 : -1;
  // cur = stored j_0, above = stored j_1
  if (std::fabs(j0) >= std::fabs(j1)) {
    if ((cur > 0) != (j0 > 0)) sign = -sign;
  } else if ((above > 0) != (j1 > 0)) {
    sign = -sign;
  }
  return finish(log_abs_j, sign, 1e-13);
}

/// J_rho(x) for real rho >= 0: half-integers via bessel_j_half, other orders
/// via the ascending series (only where x^2 <= 4(rho + 1)).
inline CertifiedValue bessel_j(double rho, double x) {
  double twice = 2 * rho;
  if (std::fabs(twice - std::round(twice)) < 1e-12 && static_cast<long>(std::round(twice)) % 2 == 1)
    return bessel_j_half(Weight::from_twice(static_cast<int>(std::round(twice))), x);
  if (x * x > 4 * (rho + 1)) throw std::domain_error("bessel_j: series route needs x^2 <= 4(rho+1)");
  return detail::bessel_series(rho, x);
}

/// S(alpha, beta, kappa) = sum_{m + kappa > 0} (m + kappa)^alpha e^{-beta (m + kappa)}.
/// Terms are summed until the geometric ratio bound past the peak certifies
/// tail < 1e-15 * value.
inline CertifiedValue s_sum(double alpha, double beta, double kappa) {
  if (alpha < 0 || !(beta > 0) || !(kappa > 0)) throw std::domain_error("s_sum: need alpha >= 0, beta > 0, kappa > 0");
  const long double t0 = kappa - std::ceil(kappa) + 1;  // smallest positive m + kappa
  auto log_term = [&](long double t) { return alpha * std::log(t) - beta * t; };
  LogScaled sum;
  const long double peak = alpha / beta;
  for (long j = 0;; ++j) {
    long double t = t0 + j;
    LogScaled term = LogScaled::from_log(log_term(t), 1);
    sum += term;
    if (t >= peak) {
      long double log_r = alpha * std::log1p(1 / t) - beta;
      if (log_r < 0) {
        // tail <= term * r / (1 - r)
        LogScaled tail = LogScaled::from_log(term.log_abs() + log_r - std::log(-std::expm1(log_r)), 1);
        if (tail.log_abs() - sum.log_abs() < std::log(1e-15L))
          return {sum, tail + sum * LogScaled(1e-15 * std::sqrt(static_cast<double>(j + 1)))};
      }
    }
    if (j > 100000000) throw std::runtime_error("s_sum: no convergence");
  }
}

/// First bound of the lemma on S: beta^{-alpha-1} Gamma(alpha+1) + beta^{-alpha} alpha^alpha e^{-alpha}.
inline LogScaled s_sum_bound(double alpha, double beta) {
  LogScaled a = LogScaled::from_log((-alpha - 1) * std::log(static_cast<long double>(beta)) + lgammal(alpha + 1), 1);
  long double aa = alpha > 0 ? alpha * std::log(static_cast<long double>(alpha)) : 0;
  LogScaled b = LogScaled::from_log(-alpha * std::log(static_cast<long double>(beta)) + aa - alpha, 1);
  return a + b;
}

/// Second bound, valid for alpha <= beta kappa: beta^{-alpha-1} Gamma(alpha+1) + kappa^alpha e^{-beta kappa}.
inline LogScaled s_sum_bound_large_kappa(double alpha, double beta, double kappa) {
  if (alpha > beta * kappa) throw std::domain_error("s_sum_bound_large_kappa: needs alpha <= beta kappa");
  LogScaled a = LogScaled::from_log((-alpha - 1) * std::log(static_cast<long double>(beta)) + lgammal(alpha + 1), 1);
  LogScaled b = LogScaled::from_log(alpha * std::log(static_cast<long double>(kappa)) - beta * kappa, 1);
  return a + b;
}

struct ExpDecaySample {
  double lhs_log;
  double rhs_log;
  bool holds;
};

/// kappa^alpha e^{-beta kappa} <= alpha^alpha beta^{-alpha} e^{-alpha} e^{-beta kappa / 2}, for kappa >= 6 alpha / beta.
inline ExpDecaySample expdecay_check(double alpha, double beta, double kappa) {
  if (!(alpha > 0) || !(beta > 0)) throw std::domain_error("expdecay_check: alpha, beta must be positive");
  if (kappa < 6 * alpha / beta) throw std::domain_error("expdecay_check: needs kappa >= 6 alpha / beta");
  long double lhs = alpha * std::log(static_cast<long double>(kappa)) - beta * kappa;
  long double rhs = alpha * std::log(static_cast<long double>(alpha)) - alpha * std::log(static_cast<long double>(beta)) -
                    alpha - beta * kappa / 2;
  return {static_cast<double>(lhs), static_cast<double>(rhs), lhs <= rhs};
}

struct BesselSmallArgReport {
  double max_ratio = 0;
  double rho_at_max = 0;
  double x_at_max = 0;
  int evaluated = 0;
  int rejected = 0;
};

/// max |J_rho(x)| Gamma(rho+1) / (x/2)^rho over grid pairs with rho >= 2 x^2;
/// pairs violating the condition are counted as rejected and skipped.
inline BesselSmallArgReport check_bessel_smallarg(const std::vector<double>& rho_grid, const std::vector<double>& x_grid) {
  BesselSmallArgReport rep;
  for (double rho : rho_grid)
    for (double x : x_grid) {
      if (rho < 2 * x * x || !(x > 0)) {
        ++rep.rejected;
        continue;
      }
      CertifiedValue j = bessel_j(rho, x);
      long double log_ratio = j.value.log_abs() + lgammal(rho + 1) - rho * std::log(static_cast<long double>(x) / 2);
      double ratio = j.value.is_zero() ? 0.0 : static_cast<double>(std::exp(log_ratio));
      ++rep.evaluated;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.rho_at_max = rho;
        rep.x_at_max = x;
      }
    }
  return rep;
}

}  // namespace hiw

#endif  // HIW_SPECIAL_HPP

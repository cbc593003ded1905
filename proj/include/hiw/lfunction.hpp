#ifndef HIW_LFUNCTION_HPP
#define HIW_LFUNCTION_HPP

// L-functions of a level-one eigenform F of weight w (analytic normalisation,
// s <-> 1 - s): quadratic twists at the centre and the symmetric square at 1.

#include "hiw/arith.hpp"
#include "hiw/hecke.hpp"
#include "hiw/log_scaled.hpp"
#include "hiw/special.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

/// b(n) = (D|n) F^(n) / n^{(w-1)/2}, index 0 unused.
struct TwistedLSeries {
  int weight = 0;
  std::int64_t discriminant = 1;
  std::vector<double> b;

  static TwistedLSeries make(const IntegralForm& F, std::int64_t D, int terms) {
    if (terms > F.precision())
      throw std::out_of_range("TwistedLSeries: need F^(n) up to " + std::to_string(terms) + ", have " +
                              std::to_string(F.precision()));
    TwistedLSeries s{F.weight, D, std::vector<double>(static_cast<std::size_t>(terms) + 1)};
    const double half = (F.weight - 1) / 2.0;
    for (int n = 1; n <= terms; ++n) {
      const int chi = kronecker_symbol(D, n);
      if (chi != 0) s.b[n] = chi * F.numeric(n) / std::pow(static_cast<double>(n), half);
    }
    return s;
  }
};

/// Q(m, x) = Gamma(m, x) / Gamma(m) = e^{-x} sum_{j<m} x^j / j! for integer m >= 1.
inline double gamma_q_integer(int m, double x) {
  if (m < 1) throw std::domain_error("gamma_q_integer: m must be positive");
  if (x <= 0) return 1;
  long double term = 1, sum = 1;
  for (int j = 1; j < m; ++j) {
    term *= x / j;
    sum += term;
  }
  return static_cast<double>(std::exp(std::log(sum) - x));
}

struct CentralValue {
  CertifiedValue value;
  /// Root number solved from two splitting parameters, before rounding.
  double root_number_raw = 0;
  int root_number = 0;
  double root_number_residual = 0;
  int terms = 0;
};

namespace detail {

/// (A(t), B(t)) with L(1/2) = A(t) + eps B(t).
inline std::pair<double, double> afe_halves(const TwistedLSeries& s, double t, double conductor_scale) {
  const int m = s.weight / 2;
  double A = 0, B = 0;
  for (std::size_t n = 1; n < s.b.size(); ++n) {
    if (s.b[n] == 0) continue;
    const double w = s.b[n] / std::sqrt(static_cast<double>(n));
    A += w * gamma_q_integer(m, n * t / conductor_scale);
    B += w * gamma_q_integer(m, n / (t * conductor_scale));
  }
  return {A, B};
}

/// Bound on sum_{n > N} d(n) n^{-1/2} Q(m, n c) with d(n) <= 2 sqrt(n).
inline double afe_tail(int m, double c, int N) {
  const double x = N * c;
  return 2 / c * m * gamma_q_integer(m + 1, x);
}

}  // namespace detail

/// L(F, chi_D, 1/2) by the approximate functional equation with incomplete-gamma
/// weights. Lambda(s) = (|D| / 2pi)^s Gamma(s + (w-1)/2) L(s) = eps Lambda(1 - s);
/// eps is solved from the splittings t = 1 and t = 1.3 and must be +-1.
inline CentralValue central_value(const IntegralForm& F, std::int64_t D, double target_err = 1e-12) {
  if (!is_fundamental_discriminant(D)) throw std::invalid_argument("central_value: D must be a fundamental discriminant");
  if (F.weight % 2 != 0) throw std::invalid_argument("central_value: weight must be even");
  const int half_sign = (F.weight / 2) % 2 == 0 ? 1 : -1;
  if (half_sign * D <= 0) throw std::invalid_argument("central_value: need (-1)^{w/2} D > 0");
  const int m = F.weight / 2;
  const double qc = std::abs(static_cast<double>(D)) / (2 * std::numbers::pi);
  const double t2 = 1.3;
  const double tmin = 1 / t2;
  int N = 1;
  while (detail::afe_tail(m, tmin / qc, N) > target_err / 4) ++N;
  auto series = TwistedLSeries::make(F, D, N);

  auto [a1, b1] = detail::afe_halves(series, 1.0, qc);
  auto [a2, b2] = detail::afe_halves(series, t2, qc);
  CentralValue out;
  out.terms = N;
  if (std::fabs(b2 - b1) < 1e-300) throw std::runtime_error("central_value: root number solve is degenerate");
  out.root_number_raw = (a1 - a2) / (b2 - b1);
  out.root_number = out.root_number_raw > 0 ? 1 : -1;
  out.root_number_residual = std::fabs(out.root_number_raw - out.root_number);
  if (out.root_number_residual > 1e-6)
    throw std::runtime_error("central_value: inconsistent root number " + std::to_string(out.root_number_raw));
  const double L = a1 + out.root_number * b1;
  const double err = 2 * detail::afe_tail(m, 1 / qc, N) + 1e-15 * (std::fabs(a1) + std::fabs(b1)) * std::sqrt(N);
  out.value = {LogScaled(L), LogScaled(err)};
  return out;
}

/// F^(p) / p^{(w-1)/2} = alpha + alpha-bar with |alpha| = 1.
struct SatakeAngle {
  std::complex<double> alpha;
  double trace;
};

inline SatakeAngle satake(const IntegralForm& F, int p) {
  const double lam = F.numeric(p) / std::pow(static_cast<double>(p), (F.weight - 1) / 2.0);
  const double disc = lam * lam - 4;
  std::complex<double> alpha = disc <= 0 ? std::complex<double>(lam / 2, std::sqrt(-disc) / 2)
                                          : std::complex<double>((lam + std::sqrt(disc)) / 2, 0);
  return {alpha, lam};
}

/// Coefficients c(n), n <= N, of L(sym^2 F, s) = prod_p [(1 - a^2 X)(1 - X)(1 - a-bar^2 X)]^{-1}, X = p^{-s}.
inline std::vector<double> sym2_coefficients(const IntegralForm& F, int N) {
  if (N > F.precision()) throw std::out_of_range("sym2_coefficients: need F^(p) up to " + std::to_string(N));
  std::vector<double> c(static_cast<std::size_t>(N) + 1, 0.0);
  c[1] = 1;
  // multiplicative fill: for each prime power p^e compute the local coefficient
  std::vector<double> local;
  for (auto p : primes_up_to(N)) {
    const double lam = F.numeric(static_cast<int>(p)) / std::pow(static_cast<double>(p), (F.weight - 1) / 2.0);
    const double s1 = lam * lam - 1;
    // c(p^e) = s1 c(p^{e-1}) - s1 c(p^{e-2}) + c(p^{e-3})
    local.assign(1, 1.0);
    for (std::int64_t pe = p; pe <= N; pe *= p) {
      const std::size_t e = local.size();
      double v = s1 * local[e - 1];
      if (e >= 2) v -= s1 * local[e - 2];
      if (e >= 3) v += local[e - 3];
      local.push_back(v);
    }
    for (std::int64_t n = N / p; n >= 1; --n) {
      if (n % p == 0) continue;
      if (c[n] == 0 && n != 1) continue;
      std::int64_t pe = p;
      for (std::size_t e = 1; pe * n <= N; ++e, pe *= p) c[pe * n] = c[n] * local[e];
    }
  }
  return c;
}

struct Sym2Value {
  CertifiedValue value;
  double root_number_raw = 0;
  int terms = 0;
  std::string method;
};

namespace detail {

/// log gamma_sym2(s) = -3s/2 log pi + lgamma((s+1)/2) + lgamma((s+w-1)/2) + lgamma((s+w)/2).
inline std::complex<double> log_gamma_sym2(std::complex<double> s, int w) {
  return -1.5 * s * std::log(std::numbers::pi) + log_gamma((s + 1.0) / 2.0) + log_gamma((s + (w - 1.0)) / 2.0) +
         log_gamma((s + static_cast<double>(w)) / 2.0);
}

/// Nodes of (1/2 pi) int gamma(a + u) t^{u} / u dv along u = sigma + iv, trapezoidal.
struct ContourNodes {
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> weight;  // gamma(a+u) t^u / u * h / 2pi, scaled by exp(-log_ref)
  double log_ref = 0;
};

inline ContourNodes sym2_contour(double a, int w, double t, double sigma) {
  ContourNodes c;
  const double h = 0.05;
  c.log_ref = log_gamma_sym2(a + sigma, w).real();
  for (int sgn : {1, -1})
    for (int j = sgn > 0 ? 0 : 1;; ++j) {
      const double v = sgn * j * h;
      const std::complex<double> u(sigma, v);
      const std::complex<double> lg = log_gamma_sym2(a + u, w) + u * std::log(t) - c.log_ref;
      if (lg.real() < -80) break;
      c.u.push_back(u);
      c.weight.push_back(std::exp(lg) / u * (h / (2 * std::numbers::pi)));
    }
  return c;
}

inline double contour_sum(const ContourNodes& c, double a, double n) {
  const double ln = std::log(n);
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < c.u.size(); ++i) s += c.weight[i] * std::exp(-(a + c.u[i]) * ln);
  return s.real();
}

}  // namespace detail

/// L(sym^2 F, 1) by the approximate functional equation with contour-integral
/// weights (conductor 1, Lambda(s) = Lambda(1 - s)); the sign is re-solved from
/// two splitting parameters as a consistency check.
inline Sym2Value sym2_at_1(const IntegralForm& F, double target_err = 1e-10) {
  const int w = F.weight;
  const double sigma = 2;
  const double t1 = 1, t2 = 1.2;
  auto a_nodes1 = detail::sym2_contour(1, w, t1, sigma), b_nodes1 = detail::sym2_contour(0, w, 1 / t1, sigma);
  auto a_nodes2 = detail::sym2_contour(1, w, t2, sigma), b_nodes2 = detail::sym2_contour(0, w, 1 / t2, sigma);
  const double lg1 = detail::log_gamma_sym2(1.0, w).real();

  // Terms until the weights (scaled to the value's size) drop below target.
  int N = 0;
  double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  std::vector<double> c = sym2_coefficients(F, std::min(F.precision(), 4000));
  for (int n = 1;; ++n) {
    if (n >= static_cast<int>(c.size()))
      throw std::out_of_range("sym2_at_1: F^(n) needed beyond " + std::to_string(c.size() - 1));
    const double wa1 = std::exp(a_nodes1.log_ref - lg1) * detail::contour_sum(a_nodes1, 1, n);
    const double wb1 = std::exp(b_nodes1.log_ref - lg1) * detail::contour_sum(b_nodes1, 0, n);
    const double wa2 = std::exp(a_nodes2.log_ref - lg1) * detail::contour_sum(a_nodes2, 1, n);
    const double wb2 = std::exp(b_nodes2.log_ref - lg1) * detail::contour_sum(b_nodes2, 0, n);
    a1 += c[n] * wa1;
    b1 += c[n] * wb1;
    a2 += c[n] * wa2;
    b2 += c[n] * wb2;
    N = n;
    const double d3 = std::pow(static_cast<double>(n), 0.5);  // generous stand-in for the divisor bound
    if (n > 10 && d3 * (std::fabs(wa1) + std::fabs(wb1) + std::fabs(wa2) + std::fabs(wb2)) * n < target_err * 1e-2) break;
  }
  Sym2Value out;
  out.terms = N;
  out.method = "afe";
  out.root_number_raw = (a1 - a2) / (b2 - b1);
  if (std::fabs(out.root_number_raw - 1) > 1e-6)
    throw std::runtime_error("sym2_at_1: functional equation check failed, eps = " + std::to_string(out.root_number_raw));
  const double L = a1 + b1;
  out.value = {LogScaled(L), LogScaled(target_err + std::fabs(a1 + b1 - a2 - b2))};
  return out;
}

/// Euler product over p <= P at s = 1. The error reported is the size of the
/// last dyadic block's contribution, an estimate rather than a bound.
inline Sym2Value sym2_euler_partial(const IntegralForm& F, int P) {
  if (P > F.precision()) throw std::out_of_range("sym2_euler_partial: need F^(p) up to P");
  long double log_prod = 0, log_half = 0;
  for (auto p : primes_up_to(P)) {
    const SatakeAngle sa = satake(F, static_cast<int>(p));
    const std::complex<double> a2 = sa.alpha * sa.alpha;
    const double x = 1.0 / static_cast<double>(p);
    const std::complex<double> local = (1.0 - a2 * x) * (1.0 - x) * (1.0 - std::conj(a2) * x);
    log_prod -= std::log(std::abs(local));
    if (2 * p <= P) log_half = log_prod;
  }
  Sym2Value out;
  out.method = "euler";
  out.terms = P;
  const double v = static_cast<double>(std::exp(log_prod));
  out.value = {LogScaled(v), LogScaled(std::fabs(v - static_cast<double>(std::exp(log_half))))};
  return out;
}

/// <F, F> = Gamma(w) / (2^{2w-1} pi^{w+1}) L(sym^2 F, 1).
inline CertifiedValue norm_from_sym2(int w, const CertifiedValue& sym2) {
  LogScaled factor = LogScaled::from_log(lgammal(w) - (2 * w - 1) * std::log(2.0L) -
                                             (w + 1) * std::log(std::numbers::pi_v<long double>),
                                         1);
  return sym2 * factor;
}

}  // namespace hiw

#endif  // HIW_LFUNCTION_HPP

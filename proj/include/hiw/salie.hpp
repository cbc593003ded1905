#ifndef HIW_SALIE_HPP
#define HIW_SALIE_HPP

// Salie-type sums H_c(n, m), Fourier coefficients of the plus-space Poincare
// series of level 4, and the spectral average of |f_j(m)|^2 they determine.

#include "hiw/arith.hpp"
#include "hiw/log_scaled.hpp"
#include "hiw/plus_space.hpp"
#include "hiw/special.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hiw {

struct SalieParams {
  std::int64_t c = 1;
  std::int64_t n = 1;
  std::int64_t m = 1;
  Weight k = Weight::from_twice(5);
};

/// n may index a plus-space coefficient: (-1)^{k-1/2} n = 0, 1 mod 4.
inline bool plus_admissible(Weight k, std::int64_t n) { return n >= 1 && !plus_forbidden(k, n); }

/// H_c(n, m) = (1 - (-1)^{k-1/2} i)(1 + (4|c)) / (4c)
///             * sum_{delta mod 4c, unit} (4c|delta) (-4|delta)^k e((n delta + m delta^{-1}) / 4c).
/// (4|c) is the Kronecker symbol, so the prefactor is 2 for odd c and 1 for even c.
inline std::complex<double> salie_h(const SalieParams& p) {
  if (p.c < 1 || p.n < 1 || p.m < 1) throw std::invalid_argument("salie_h: c, n, m must be positive");
  if (!p.k.is_half_integral()) throw std::invalid_argument("salie_h: weight must lie in 1/2 + Z");
  const std::int64_t modulus = 4 * p.c;
  const std::complex<double> minus_k = unit_power(-1, p.k);
  std::complex<double> sum = 0;
  for (std::int64_t delta = 1; delta < modulus; delta += 2) {
    if (std::gcd(delta, modulus) != 1) continue;
    const int chi = jacobi_symbol(modulus, delta);
    if (chi == 0) continue;
    const std::complex<double> twist = delta % 4 == 1 ? std::complex<double>(1) : minus_k;
    const std::int64_t inv = inverse_mod(delta, modulus);
    // numerator reduced exactly before forming the angle
    const std::int64_t r = (mod_floor(p.n % modulus * delta, modulus) + mod_floor(p.m % modulus * inv, modulus)) % modulus;
    sum += static_cast<double>(chi) * twist * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(r) / modulus);
  }
  const std::complex<double> lead(1.0, -static_cast<double>(p.k.plus_sign()));
  const double kron = 1 + kronecker_symbol(4, p.c);
  return lead * kron / static_cast<double>(modulus) * sum;
}

/// |H_c(n, m)| <= |1 - i^{..}| * 2 * phi(4c) / (4c) <= sqrt(2).
inline double salie_h_bound() { return std::numbers::sqrt2; }

/// (-1)^{floor((k + 1/2) / 2)}.
inline int poincare_sign(Weight k) { return ((k.twice() + 1) / 4) % 2 == 0 ? 1 : -1; }

struct PoincareCoeff {
  Weight k;
  std::int64_t m = 0;
  std::int64_t n = 0;
  /// g_{k,m}(n), real part; the imaginary part is reported separately.
  CertifiedValue value;
  double imaginary = 0;
  /// The bracketed Bessel sum sign * pi sqrt2 (n/m)^{(k-1)/2} sum_c H_c J_{k-1}.
  double bessel_part = 0;
  std::int64_t c_max = 0;
  double tail_bound = 0;
  /// false when the tail could not be pushed below tol before the c cap.
  bool converged = true;
};

namespace detail {

/// Upper bound on sum_{c > C} |H_c| |J_rho(x0 / c)| via |J_rho(x)| <= (x/2)^rho / Gamma(rho+1)
/// and sum_{c > C} c^{-rho} <= C^{1-rho} / (rho - 1).
inline double poincare_tail(double rho, double x0, std::int64_t C) {
  long double l = rho * std::log(x0 / 2.0L) - lgammal(rho + 1) + (1 - rho) * std::log(static_cast<long double>(C)) -
                  std::log(rho - 1.0L);
  return salie_h_bound() * static_cast<double>(std::exp(l));
}

}  // namespace detail

/// g_{k,m}(n) = (2/3)[delta_{m,n} + sign pi sqrt2 (n/m)^{(k-1)/2} sum_{c>=1} H_c(n,m) J_{k-1}(pi sqrt(nm) / c)].
/// Terms are summed up to c_max, chosen so that the certified tail (absolute, on g) is below tol.
inline PoincareCoeff poincare_coeff(Weight k, std::int64_t m, std::int64_t n, double tol,
                                    std::int64_t c_cap = 1000000) {
  if (k.twice() < 5 || !k.is_half_integral()) throw std::invalid_argument("poincare_coeff: needs k >= 5/2 in 1/2 + Z");
  if (!plus_admissible(k, m) || !plus_admissible(k, n))
    throw std::invalid_argument("poincare_coeff: m and n must be plus-admissible");
  if (!(tol > 0)) throw std::invalid_argument("poincare_coeff: tol must be positive");
  PoincareCoeff out{k, m, n, {}, 0, 0, 0, 0, true};
  const Weight order = Weight::from_twice(k.twice() - 2);
  const double rho = order.value();
  const double x0 = std::numbers::pi * std::sqrt(static_cast<double>(n) * static_cast<double>(m));
  const double scale = (2.0 / 3) * std::numbers::pi * std::numbers::sqrt2 *
                       std::pow(static_cast<double>(n) / static_cast<double>(m), rho / 2);
  // No truncation before the Bessel argument is small against the order.
  const auto c_min = static_cast<std::int64_t>(std::ceil(x0 / std::sqrt(rho / 2)));
  std::complex<double> sum = 0;
  double bessel_err = 0;
  std::int64_t c = 0;
  while (true) {
    ++c;
    auto h = salie_h({c, n, m, k});
    if (std::abs(h) > 0) {
      auto j = bessel_j_half(order, x0 / static_cast<double>(c));
      sum += h * j.to_double();
      bessel_err += std::abs(h) * j.error() + 1e-16 * std::abs(h * j.to_double());
    }
    if (c >= c_min && scale * detail::poincare_tail(rho, x0, c) < tol) break;
    if (c >= c_cap) {
      out.converged = false;
      break;
    }
  }
  out.c_max = c;
  out.tail_bound = scale * detail::poincare_tail(rho, x0, c);
  const double sgn = poincare_sign(k);
  out.bessel_part = 1.5 * sgn * scale * sum.real();
  out.imaginary = sgn * scale * sum.imag();
  const double delta = m == n ? 1.0 : 0.0;
  const double g = (2.0 / 3) * delta + sgn * scale * sum.real();
  out.value = {LogScaled(g), LogScaled(out.tail_bound + scale * bessel_err)};
  return out;
}

/// sum_j |f_j(m)|^2 over an orthonormal basis of S_k^+: 6 (4 pi m)^{k-1} / Gamma(k-1) * g_{k,m}(m).
inline CertifiedValue spectral_average(Weight k, std::int64_t m, double tol = 1e-10) {
  auto g = poincare_coeff(k, m, m, tol);
  if (!g.converged) throw std::runtime_error("spectral_average: tail tolerance unreachable");
  const Weight km1 = Weight::from_twice(k.twice() - 2);
  LogScaled factor = LogScaled(6.0) *
                     exp_scaled(km1.value() * std::log(4 * std::numbers::pi_v<long double> * m)) /
                     gamma_half(km1).value;
  return g.value * factor;
}

}  // namespace hiw

#endif  // HIW_SALIE_HPP

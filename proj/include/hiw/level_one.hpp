#ifndef HIW_LEVEL_ONE_HPP
#define HIW_LEVEL_ONE_HPP

// Cusp forms of integral weight on SL_2(Z): Miller basis and Hecke operators T(p).

#include "hiw/arith.hpp"
#include "hiw/linalg.hpp"
#include "hiw/qexpansion.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

namespace detail {

inline std::vector<BigInt> int_series_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<BigInt> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

/// 1 + c * sum sigma_{e}(n) q^n
inline std::vector<BigInt> eisenstein_int(int precision, int e, long c) {
  std::vector<BigInt> s(static_cast<std::size_t>(precision) + 1);
  s[0] = 1;
  for (int n = 1; n <= precision; ++n) {
    BigInt sig = 0;
    for (auto d : divisors(n)) sig += ipow(BigInt(d), static_cast<unsigned>(e));
    s[n] = c * sig;
  }
  return s;
}

}  // namespace detail

/// Dimension of S_w(SL_2(Z)) by the valence formula.
inline int level_one_cusp_dimension(int w) {
  if (w < 12 || w % 2) return 0;
  return w / 12 - (w % 12 == 2 ? 1 : 0);
}

/// Echelon basis f_1, ..., f_d of S_w(SL_2(Z)) with f_i = q^i + O(q^{d+1}),
/// integer coefficients, from Delta^j E_{w-12j} (E_m built from E_4, E_6).
inline std::vector<RationalQExpansion> miller_basis(int w, int precision) {
  if (w % 2) throw std::invalid_argument("miller_basis: weight must be even");
  const int d = level_one_cusp_dimension(w);
  if (d == 0) return {};
  if (precision < d) throw std::invalid_argument("miller_basis: precision below dimension");
  auto e4 = detail::eisenstein_int(precision, 3, 240);
  auto e6 = detail::eisenstein_int(precision, 5, -504);
  auto e4c = detail::int_series_mul(detail::int_series_mul(e4, e4), e4);
  auto e6s = detail::int_series_mul(e6, e6);
  std::vector<BigInt> delta(static_cast<std::size_t>(precision) + 1);
  for (int n = 0; n <= precision; ++n) delta[n] = (e4c[n] - e6s[n]) / 1728;

  RationalMatrix rows;
  std::vector<BigInt> delta_pow = delta;
  for (int j = 1; j <= d; ++j) {
    int m = w - 12 * j;
    // E_m as E_4^a E_6^b with 4a + 6b = m
    int b = 0;
    while ((m - 6 * b) % 4 != 0) ++b;
    int a = (m - 6 * b) / 4;
    std::vector<BigInt> e(static_cast<std::size_t>(precision) + 1);
    e[0] = 1;
    for (int i = 0; i < a; ++i) e = detail::int_series_mul(e, e4);
    for (int i = 0; i < b; ++i) e = detail::int_series_mul(e, e6);
    auto f = detail::int_series_mul(delta_pow, e);
    rows.emplace_back(f.begin(), f.end());
    if (j < d) delta_pow = detail::int_series_mul(delta_pow, delta);
  }
  auto rr = rref_exact(rows);
  std::vector<RationalQExpansion> out;
  for (auto& row : rr.reduced) out.emplace_back(Weight::integral(w), row);
  return out;
}

/// T(p) F: a(n) -> a(pn) + p^{w-1} a(n/p), for n <= precision(F) / p.
inline RationalQExpansion hecke_integral(const RationalQExpansion& f, int w, int p) {
  if (!is_prime(p)) throw std::invalid_argument("hecke_integral: p must be prime");
  const int out_prec = f.precision() / p;
  if (out_prec < 1)
    throw std::invalid_argument("hecke_integral: need precision >= " + std::to_string(p) + " for T(" +
                                std::to_string(p) + ")");
  const Rational pw = Rational(ipow(BigInt(p), static_cast<unsigned>(w - 1)));
  std::vector<Rational> c(static_cast<std::size_t>(out_prec) + 1);
  for (int n = 0; n <= out_prec; ++n) {
    c[n] = f[p * n];
    if (n % p == 0) c[n] += pw * f[n / p];
  }
  return RationalQExpansion(Weight::integral(w), std::move(c));
}

}  // namespace hiw

#endif  // HIW_LEVEL_ONE_HPP

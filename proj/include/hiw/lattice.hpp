#ifndef HIW_LATTICE_HPP
#define HIW_LATTICE_HPP

// Integer matrices of determinant l with c = 0 mod N inside a hyperbolic ball:
// u(gamma z, w) <= delta, u(z, w) = |z - w|^2 / (4 Im z Im w).

#include "hiw/arith.hpp"
#include "hiw/evaluation.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hiw {

inline double u_invariant(Complex z, Complex w) { return std::norm(z - w) / (4 * z.imag() * w.imag()); }

/// d_gamma(z) = |gamma z - conj z| |j(gamma, z)| / (2 y l^{1/2}), l = det gamma.
inline double d_gamma(const Matrix2& g, Complex z) {
  const double l = static_cast<double>(g.det());
  if (!(l > 0)) throw std::invalid_argument("d_gamma: determinant must be positive");
  return std::abs(g.act(z) - std::conj(z)) * std::abs(g.j(z)) / (2 * z.imag() * std::sqrt(l));
}

namespace detail {

/// Exact u(gamma z, w) <= delta with z, w, delta read as the rationals their doubles denote:
/// |a z + b - w (c z + d)|^2 <= 4 l delta Im z Im w.
inline bool u_within_exact(const Matrix2& g, Complex z, Complex w, double delta) {
  const Rational x(z.real()), y(z.imag()), s(w.real()), t(w.imag()), dl(delta);
  const Rational a(g.a), b(g.b), c(g.c), d(g.d);
  // a z + b - w (c z + d) with z = x + iy, w = s + it
  const Rational czr = c * x + d, czi = c * y;
  const Rational re = a * x + b - (s * czr - t * czi);
  const Rational im = a * y - (s * czi + t * czr);
  return re * re + im * im <= 4 * Rational(g.det()) * dl * y * t;
}

inline std::int64_t floor_i(double v) { return static_cast<std::int64_t>(std::floor(v)); }
inline std::int64_t ceil_i(double v) { return static_cast<std::int64_t>(std::ceil(v)); }

}  // namespace detail

struct BallQuery {
  std::int64_t l = 1;
  Complex z{0, 1};
  Complex w{0, 1};
  double delta = 0;
  /// c = 0 mod modulus.
  std::int64_t modulus = 4;
};

/// All gamma with det l, c = 0 mod N and u(gamma z, w) <= delta. Order: c, then d, then a; b is solved.
/// Ball geometry: 1 + 2u >= (r + 1/r) / 2 for r = y'/v, y' = Im gamma z, v = Im w, so r lies in
/// [1/t, t] with t = A + sqrt(A^2 - 1), A = 1 + 2 delta; hence l y / (v t) <= |cz + d|^2 <= l y t / v,
/// and |Re gamma z - Re w| <= 2 sqrt(delta y' v).
template <class Visit>
void for_each_in_ball(const BallQuery& q, Visit&& visit) {
  if (q.l < 1) throw std::invalid_argument("ball: l must be positive");
  if (!(q.delta >= 0)) throw std::invalid_argument("ball: delta must be non-negative");
  if (!(q.z.imag() > 0) || !(q.w.imag() > 0)) throw std::invalid_argument("ball: points must lie in H");
  const double y = q.z.imag(), x = q.z.real(), v = q.w.imag();
  const double slack = 1e-9;
  const double l = static_cast<double>(q.l);
  const double A = 1 + 2 * q.delta;
  const double t = A + std::sqrt(A * A - 1);
  const double r2 = l * y * t / v * (1 + slack) + slack;
  const double r2_lo = l * y / (v * t) * (1 - slack) - slack;

  auto accept = [&](const Matrix2& g) {
    const double u = u_invariant(g.act(q.z), q.w);
    if (u < q.delta - 1e-9) return true;
    if (u > q.delta + 1e-9) return false;
    return detail::u_within_exact(g, q.z, q.w, q.delta);
  };

  const std::int64_t c_max = detail::floor_i(std::sqrt(r2) / y);
  for (std::int64_t c = -c_max - (-c_max) % q.modulus; c <= c_max; c += q.modulus) {
    const double s2 = r2 - static_cast<double>(c) * c * y * y;
    if (s2 < 0) continue;
    const double s = std::sqrt(s2);
    const double cx = static_cast<double>(c) * x;
    // d outside the open gap where |cz + d|^2 < r2_lo
    const double s2_lo = r2_lo - static_cast<double>(c) * c * y * y;
    const double gap = s2_lo > 0 ? std::sqrt(s2_lo) : -1;
    const std::int64_t gap_lo = detail::floor_i(-cx - gap) + 1, gap_hi = detail::ceil_i(-cx + gap) - 1;
    for (std::int64_t d = detail::ceil_i(-cx - s); d <= detail::floor_i(-cx + s); ++d) {
      if (gap > 0 && d >= gap_lo && d <= gap_hi) {
        d = gap_hi;
        continue;
      }
      const Complex jz = static_cast<double>(c) * q.z + static_cast<double>(d);
      const double nj = std::norm(jz);
      if (nj == 0) continue;
      const double yp = l * y / nj;
      const double rho = 2 * std::sqrt(q.delta * yp * v) * (1 + slack) + slack;
      if (c == 0) {
        if (d == 0 || q.l % d != 0) continue;
        const std::int64_t a = q.l / d;
        // Re gamma z = (a x + b) / d
        const double lo = (q.w.real() - rho) * static_cast<double>(d) - static_cast<double>(a) * x;
        const double hi = (q.w.real() + rho) * static_cast<double>(d) - static_cast<double>(a) * x;
        for (std::int64_t b = detail::ceil_i(std::min(lo, hi)); b <= detail::floor_i(std::max(lo, hi)); ++b) {
          const Matrix2 g{a, b, 0, d};
          if (accept(g)) visit(g);
        }
        continue;
      }
      // a d = l mod c
      const std::int64_t ac = c < 0 ? -c : c;
      const std::int64_t g0 = std::gcd(mod_floor(d, ac), ac);
      if (q.l % g0 != 0) continue;
      const std::int64_t step = ac / g0;
      const std::int64_t a0 =
          step == 1 ? 0 : mod_floor((q.l / g0) % step * inverse_mod(mod_floor(d / g0, step), step), step);
      // Re gamma z = a / c - Re(l / (c (c z + d)))
      const double shift = (l / (static_cast<double>(c) * jz)).real();
      const double lo = (q.w.real() + shift - rho) * static_cast<double>(c);
      const double hi = (q.w.real() + shift + rho) * static_cast<double>(c);
      std::int64_t a = detail::ceil_i(std::min(lo, hi));
      a += mod_floor(a0 - a, step);
      for (; static_cast<double>(a) <= std::max(lo, hi); a += step) {
        const std::int64_t num = a * d - q.l;
        if (num % c != 0) continue;
        const Matrix2 g{a, num / c, c, d};
        if (accept(g)) visit(g);
      }
    }
  }
}

inline std::vector<Matrix2> enumerate_ball(const BallQuery& q) {
  std::vector<Matrix2> out;
  for_each_in_ball(q, [&](const Matrix2& g) { out.push_back(g); });
  return out;
}

/// G_l(4) intersected with {u(gamma z, z) <= delta}.
inline std::vector<Matrix2> enumerate_Gl(std::int64_t l, Complex z, double delta) {
  return enumerate_ball({l, z, z, delta, 4});
}

struct CountRecord {
  Complex z;
  std::int64_t l = 0;
  double delta = 0;
  std::int64_t M = 0;
  /// c != 0 and (a + d)^2 != 4l
  std::int64_t M_star = 0;
  /// c = 0 and a != d
  std::int64_t M_u = 0;
  /// (a + d)^2 = 4l
  std::int64_t M_p = 0;
  std::vector<Matrix2> witnesses;
};

/// M_star, M_u and M_p partition M: with c = 0, (a + d)^2 = 4l = 4ad forces a = d.
inline CountRecord count_matrices(Complex z, std::int64_t l, double delta, bool keep_witnesses = true) {
  CountRecord r{z, l, delta, 0, 0, 0, 0, {}};
  for_each_in_ball({l, z, z, delta, 4}, [&](const Matrix2& g) {
    ++r.M;
    const std::int64_t t = g.a + g.d;
    const bool parabolic = t * t == 4 * l;
    if (g.c != 0 && !parabolic) ++r.M_star;
    if (g.c == 0 && g.a != g.d) ++r.M_u;
    if (parabolic) ++r.M_p;
    if (keep_witnesses) r.witnesses.push_back(g);
  });
  return r;
}

struct LemmaRatio {
  double y = 0;
  double delta = 0;
  std::int64_t L = 0;
  double count = 0;
  double shape = 0;
  double ratio = 0;
};

/// sum_{l <= L square} M_star(z, l, delta) against L^{1/2}/y + L delta^{1/2} + L^{3/2} delta.
inline LemmaRatio generic_lemma_ratio(Complex z, std::int64_t L, double delta) {
  double count = 0;
  for (std::int64_t r = 1; r * r <= L; ++r) count += static_cast<double>(count_matrices(z, r * r, delta, false).M_star);
  const double Ld = static_cast<double>(L);
  const double shape = std::sqrt(Ld) / z.imag() + Ld * std::sqrt(delta) + Ld * std::sqrt(Ld) * delta;
  return {z.imag(), delta, L, count, shape, count / shape};
}

/// M_u and M_p against 1 + l^{1/2} delta^{1/2} y.
inline std::pair<LemmaRatio, LemmaRatio> upper_parabolic_ratios(Complex z, std::int64_t l, double delta) {
  const auto r = count_matrices(z, l, delta, false);
  const double shape = 1 + std::sqrt(static_cast<double>(l) * delta) * z.imag();
  return {{z.imag(), delta, l, static_cast<double>(r.M_u), shape, r.M_u / shape},
          {z.imag(), delta, l, static_cast<double>(r.M_p), shape, r.M_p / shape}};
}

}  // namespace hiw

#endif  // HIW_LATTICE_HPP

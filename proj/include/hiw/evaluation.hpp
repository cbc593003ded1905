#ifndef HIW_EVALUATION_HPP
#define HIW_EVALUATION_HPP

// Pointwise evaluation of level-4 forms.
//
// Two independent routes. Cusp expansions: plus-space coefficients give the
// Fourier series of f, f|W4 and f|V4, and y^{k/2}|f| anywhere in H follows by
// reducing to one of the three frames. Theta route: every form in M_k(Gamma_0(4))
// is a polynomial in T = theta_3(2z) and U = theta_4(2z), and the Jacobi thetas
// are computed at any tau by their transformation laws.

#include "hiw/arith.hpp"
#include "hiw/hecke.hpp"
#include "hiw/log_scaled.hpp"
#include "hiw/special.hpp"
#include "hiw/theta.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

using Complex = std::complex<double>;
using ComplexL = std::complex<long double>;

/// e(x) = exp(2 pi i x) for complex x.
inline Complex e_of(Complex x) { return std::exp(Complex(0, 2 * std::numbers::pi) * x); }

/// w^k on the principal branch -pi < arg w <= pi.
inline Complex principal_power(Complex w, Weight k) {
  if (w == Complex(0)) throw std::domain_error("principal_power: zero base");
  return std::exp(k.value() * std::log(w));
}

// ---------------------------------------------------------------------------
// Integral 2x2 matrices acting on H.

struct Matrix2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  Complex act(Complex z) const { return (static_cast<double>(a) * z + static_cast<double>(b)) /
                                        (static_cast<double>(c) * z + static_cast<double>(d)); }
  Complex j(Complex z) const { return static_cast<double>(c) * z + static_cast<double>(d); }

  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
  /// Inverse for determinant one.
  Matrix2 inverse_sl2() const { return {d, -b, -c, a}; }
};

struct ReducedPoint {
  Complex z;      // in the standard fundamental domain of SL_2(Z)
  Matrix2 to_fd;  // z_fd = to_fd * z_original
};

/// Standard reduction into |x| <= 1/2, |z| >= 1.
inline ReducedPoint reduce_to_fundamental_domain(Complex z) {
  if (!(z.imag() > 0)) throw std::domain_error("reduce: point must lie in the upper half plane");
  Matrix2 m;
  for (int it = 0; it < 10000; ++it) {
    const auto n = static_cast<std::int64_t>(std::floor(z.real() + 0.5));
    if (n != 0) {
      z -= static_cast<double>(n);
      m = Matrix2{1, -n, 0, 1} * m;
    }
    if (std::norm(z) < 1 - 1e-15) {
      z = -1.0 / z;
      m = Matrix2{0, -1, 1, 0} * m;
    } else {
      return {z, m};
    }
  }
  throw std::runtime_error("reduce: no convergence");
}

// ---------------------------------------------------------------------------
// Theta route.

struct ThetaTriple {
  ComplexL theta2, theta3, theta4;
};

namespace detail {

inline ThetaTriple theta_series_at(ComplexL tau) {
  const ComplexL ipi(0, std::numbers::pi_v<long double>);
  const ComplexL q = std::exp(ipi * tau);
  ComplexL t3 = 1, t4 = 1, t2 = 0;
  for (int n = 1; n < 60; ++n) {
    ComplexL qn = std::pow(q, static_cast<long double>(n * n));
    t3 += 2.0L * qn;
    t4 += (n % 2 ? -2.0L : 2.0L) * qn;
    if (std::abs(qn) < 1e-40L) break;
  }
  for (int n = 0; n < 60; ++n) {
    ComplexL qn = std::pow(q, static_cast<long double>(n * (n + 1)));
    t2 += qn;
    if (std::abs(qn) < 1e-40L) break;
  }
  t2 *= 2.0L * std::exp(ipi * tau / 4.0L);
  return {t2, t3, t4};
}

}  // namespace detail

/// (theta_2, theta_3, theta_4)(tau) with theta_3(tau) = sum exp(i pi n^2 tau).
inline ThetaTriple jacobi_thetas(ComplexL tau, int depth = 0) {
  if (!(tau.imag() > 0)) throw std::domain_error("jacobi_thetas: tau must lie in H");
  if (depth > 2000) throw std::runtime_error("jacobi_thetas: reduction did not terminate");
  if (tau.imag() >= 0.8L) return detail::theta_series_at(tau);
  const auto n = static_cast<long long>(std::floor(tau.real() + 0.5L));
  ComplexL t = tau - static_cast<long double>(n);
  ThetaTriple r;
  if (std::norm(t) >= 1) {
    r = detail::theta_series_at(t);
  } else {
    // theta(-1/sigma) = sqrt(-i sigma) * (theta_4, theta_3, theta_2)(sigma)
    ComplexL sigma = -1.0L / t;
    ThetaTriple s = jacobi_thetas(sigma, depth + 1);
    ComplexL root = std::sqrt(ComplexL(0, -1) * sigma);
    r = {root * s.theta4, root * s.theta3, root * s.theta2};
  }
  if (n != 0) {
    const ComplexL phase = std::exp(ComplexL(0, std::numbers::pi_v<long double> * static_cast<long double>(n % 8) / 4));
    r.theta2 *= phase;
    if (n % 2 != 0) std::swap(r.theta3, r.theta4);
  }
  return r;
}

/// Theta(z) = theta_3(2z) and Theta(z + 1/2) = theta_4(2z).
inline std::pair<ComplexL, ComplexL> theta_pair(Complex z) {
  ThetaTriple t = jacobi_thetas(ComplexL(2.0L * z.real(), 2.0L * z.imag()));
  return {t.theta3, t.theta4};
}

/// sum_j c_j T^{2k-4j} U^{4j} with numeric coefficients.
struct PairForm {
  Weight weight;
  std::vector<long double> coeffs;

  Complex operator()(Complex z) const {
    auto [t, u] = theta_pair(z);
    const ComplexL u4 = u * u * u * u;
    ComplexL s = 0, upow = 1;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const int tp = weight.twice() - 4 * static_cast<int>(j);
      if (coeffs[j] != 0) s += coeffs[j] * ipow_complex(t, tp) * upow;
      upow *= u4;
    }
    return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
  }

 private:
  static ComplexL ipow_complex(ComplexL x, int e) {
    ComplexL r = 1;
    for (; e > 0; e >>= 1, x *= x)
      if (e & 1) r *= x;
    return r;
  }
};

inline PairForm pair_form(const PairCombination& pc) {
  PairForm out{pc.weight, {}};
  for (const auto& c : pc.coeffs) out.coeffs.push_back(static_cast<long double>(c));
  return out;
}

/// Numeric pair representation of an eigenform under its embedding.
inline PairForm pair_form(const HalfIntegralForm& f) {
  PairForm out{f.weight, std::vector<long double>(static_cast<std::size_t>(f.weight.twice() / 4) + 1)};
  for (std::size_t i = 0; i < f.basis.size(); ++i) {
    const long double w = static_cast<long double>(f.combination[i].embed(f.embedding));
    for (std::size_t j = 0; j < f.basis[i].coeffs.size(); ++j)
      out.coeffs[j] += w * static_cast<long double>(f.basis[i].coeffs[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cusp frames.

enum class Frame { I, W4, V4 };

inline std::string to_string(Frame f) {
  switch (f) {
    case Frame::I: return "I";
    case Frame::W4: return "W4";
    case Frame::V4: return "V4";
  }
  return "?";
}

/// Element of the multiplier group moving a cusp of Gamma_0(4) to infinity, with
/// the width and parameter of that cusp.
struct CuspFrame {
  Frame label = Frame::I;
  Weight weight;
  /// Width n_tau of the cusp in the SL_2(Z) sense: 1 at infinity, 4 at 0, 1 at 1/2.
  int width = 1;
  /// kappa_tau in [0, 1).
  double parameter = 0;

  static CuspFrame make(Frame label, Weight k) {
    switch (label) {
      case Frame::I: return {label, k, 1, 0.0};
      case Frame::W4: return {label, k, 4, 0.0};
      case Frame::V4: return {label, k, 1, 0.5 - k.plus_sign() / 4.0};
    }
    throw std::invalid_argument("CuspFrame: unknown label");
  }

  /// Moebius action: W4 z = -1/(4z), V4 z = z / (2z + 1).
  Complex act(Complex z) const {
    switch (label) {
      case Frame::I: return z;
      case Frame::W4: return -1.0 / (4.0 * z);
      case Frame::V4: return z / (2.0 * z + 1.0);
    }
    return z;
  }

  /// phi(z) with (f|xi)(z) = phi(z)^{-1} f(xi z): (-2iz)^k for W4, (-i(2z+1))^k for V4.
  Complex multiplier(Complex z) const {
    switch (label) {
      case Frame::I: return 1;
      case Frame::W4: return principal_power(Complex(0, -2) * z, weight);
      case Frame::V4: return principal_power(Complex(0, -1) * (2.0 * z + 1.0), weight);
    }
    return 1;
  }
};

/// (f|xi)(z) = prefactor * sum_m coeffs[m] e(m * step * z).
struct CuspExpansion {
  CuspFrame frame;
  double step = 1;
  std::vector<Complex> coeffs;

  int max_index() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const {
    for (const auto& c : coeffs)
      if (c != Complex(0)) return false;
    return true;
  }
};

/// (2|2k) 2^{1/2-k}.
inline double cusp_lemma_constant(Weight k) {
  return jacobi_symbol(2, k.twice()) * std::pow(2.0, 0.5 - k.value());
}

/// Expansions of f, f|W4, f|V4 for a plus-space form with real coefficients a[0..N].
inline CuspExpansion cusp_expansion(const std::vector<double>& a, Weight k, Frame label) {
  CuspExpansion e{CuspFrame::make(label, k), 1.0, {}};
  const int n_max = static_cast<int>(a.size()) - 1;
  const double lemma = label == Frame::I ? 1.0 : cusp_lemma_constant(k);
  switch (label) {
    case Frame::I:
      for (int n = 0; n <= n_max; ++n) e.coeffs.emplace_back(a[n]);
      break;
    case Frame::W4:
      for (int m = 0; 4 * m <= n_max; ++m) e.coeffs.emplace_back(m == 0 ? 0.0 : lemma * a[4 * m]);
      break;
    case Frame::V4:
      e.step = 0.25;
      for (int m = 0; m <= n_max; ++m) {
        if (m == 0 || mod_floor(k.plus_sign() * m, 4) != 1) {
          e.coeffs.emplace_back(0.0);
          continue;
        }
        // i^{m/2} = e^{i pi m / 4}
        e.coeffs.push_back(lemma * a[m] * std::polar(1.0, std::numbers::pi * (m % 8) / 4));
      }
      break;
  }
  return e;
}

/// Thrown when an expansion lacks the terms needed at a point.
class PrecisionShortfall : public std::runtime_error {
 public:
  PrecisionShortfall(int required, int available)
      : std::runtime_error("cusp expansion needs index " + std::to_string(required) + ", have " +
                           std::to_string(available)),
        required_index(required) {}
  int required_index;
};

/// Indices kept at height y: three times the peak of m^{k/2} e^{-2 pi step m y} plus 40 sqrt(k).
inline int required_index(Weight k, double step, double y) {
  const double peak = k.value() / 2 / (2 * std::numbers::pi * step * y);
  return static_cast<int>(std::ceil(3 * peak + 40 * std::sqrt(k.value())));
}

struct CuspValue {
  /// y^{k/2} |(f|xi)(z)|
  CertifiedValue value;
  Complex series;  // (f|xi)(z) without the y-power
  int terms = 0;
};

namespace detail {

/// Bound on sum_{m > M} C m^alpha e^{-beta m}, valid once M+1 is past the peak alpha / beta.
inline LogScaled power_exp_tail(double C, double alpha, double beta, int M) {
  const long double t = M + 1;
  if (t < alpha / beta) return LogScaled(std::numeric_limits<double>::max());
  long double log_r = alpha * std::log1p(1 / t) - beta;
  if (log_r >= 0) return LogScaled(std::numeric_limits<double>::max());
  long double first = std::log(static_cast<long double>(C)) + alpha * std::log(t) - beta * t;
  return LogScaled::from_log(first - std::log(-std::expm1(log_r)), 1);
}

/// Growth constant C with |c_m| <= C m^{k/2}, fitted on the upper half of the available indices.
inline double growth_constant(const CuspExpansion& e) {
  double c = 0;
  const int top = e.max_index();
  for (int m = std::max(1, top / 2); m <= top; ++m)
    c = std::max(c, std::abs(e.coeffs[m]) / std::pow(static_cast<double>(m), e.frame.weight.value() / 2));
  return std::max(c, 1e-300);
}

}  // namespace detail

/// y^{k/2} |(f|xi)(z)| from the frame's Fourier expansion; the truncation error is
/// the tail of C m^{k/2} e^{-2 pi step m y}, C fitted on the top half of the coefficients.
inline CuspValue eval_at_cusp(const CuspExpansion& e, Complex z, int terms = -1) {
  const double y = z.imag();
  if (!(y > 0)) throw std::domain_error("eval_at_cusp: point must lie in H");
  const Weight k = e.frame.weight;
  CuspValue out;
  // the zero expansion is exact at every height
  if (e.is_zero()) {
    out.value = {LogScaled{}, LogScaled{}};
    return out;
  }
  const int need = terms >= 0 ? terms : required_index(k, e.step, y);
  if (need > e.max_index()) throw PrecisionShortfall(need, e.max_index());
  out.terms = need;
  const Complex q = e_of(e.step * z);
  Complex s = 0, qm = 1;
  for (int m = 1; m <= need; ++m) {
    qm *= q;
    if (m % 64 == 0) qm = e_of(e.step * static_cast<double>(m) * z);
    s += e.coeffs[m] * qm;
  }
  out.series = s;
  const double beta = 2 * std::numbers::pi * e.step * y;
  LogScaled tail = detail::power_exp_tail(detail::growth_constant(e), k.value() / 2, beta, need);
  LogScaled ypow = exp_scaled(k.value() / 2 * std::log(static_cast<long double>(y)));
  LogScaled rounding = LogScaled(1e-15) * LogScaled(std::abs(s) + 1e-300);
  out.value = {LogScaled(std::abs(s)) * ypow, (tail + rounding) * ypow};
  return out;
}

/// The three expansions of a plus-space form.
struct FrameSet {
  Weight weight;
  std::array<CuspExpansion, 3> frames;

  const CuspExpansion& at(Frame f) const { return frames[static_cast<std::size_t>(f)]; }

  static FrameSet from_coefficients(const std::vector<double>& a, Weight k) {
    return {k, {cusp_expansion(a, k, Frame::I), cusp_expansion(a, k, Frame::W4), cusp_expansion(a, k, Frame::V4)}};
  }
};

struct FramePoint {
  Frame frame;
  Complex w;  // point in the frame's coordinate, Im w >= sqrt(3)/8
};

/// Rewrites z as xi(w) modulo Gamma_0(4), xi in {I, W4, V4}, with Im w >= sqrt(3)/8.
inline FramePoint locate_frame(Complex z) {
  ReducedPoint r = reduce_to_fundamental_domain(z);
  Matrix2 g = r.to_fd.inverse_sl2();  // z = g z_fd
  const std::int64_t c = mod_floor(g.c, 4), d = mod_floor(g.d, 4);
  if (c == 0) return {Frame::I, r.z};
  if (c % 2 == 1) {
    // g = delta S T^j with j = d c^{-1} mod 4, and S T^j z = W4((z + j) / 4)
    const std::int64_t j = mod_floor(d * inverse_mod(c, 4), 4);
    return {Frame::W4, (r.z + static_cast<double>(j)) / 4.0};
  }
  return {Frame::V4, r.z};
}

/// y^{k/2} |f(z)| for any z in H.
inline CuspValue eval_anywhere(const FrameSet& fs, Complex z, FramePoint* where = nullptr) {
  FramePoint p = locate_frame(z);
  if (where) *where = p;
  return eval_at_cusp(fs.at(p.frame), p.w);
}

}  // namespace hiw

#endif  // HIW_EVALUATION_HPP

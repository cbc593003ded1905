#ifndef HIW_PETERSSON_HPP
#define HIW_PETERSSON_HPP

// Petersson norms by quadrature over the SL_2(Z) fundamental domain F, either
// through the cusp frames of Gamma_0(4) or directly through the theta route.
// <f, g> on Gamma_0(4) carries the factor 1/[SL_2(Z) : Gamma_0(4)] = 1/6.

#include "hiw/evaluation.hpp"
#include "hiw/hecke.hpp"
#include "hiw/lfunction.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace hiw {

struct QuadratureResult {
  double value = 0;
  /// Adaptive estimate of the quadrature error, not a proof.
  double error = 0;
};

/// int_F h(z) dx dy / y^2, F = {|x| <= 1/2, |z| >= 1}. Outer integrals are adaptive
/// Gauss-Kronrod, inner ones fixed 30-point Gauss.
template <class Integrand>
QuadratureResult integrate_fundamental_domain(Integrand&& h, double tol = 1e-12) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  auto row = [&](double y) {
    return gauss<double, 30>::integrate([&](double x) { return h(Complex(x, y)); }, -0.5, 0.5) / (y * y);
  };
  double err_top = 0, err_arc = 0;
  const double top = gauss_kronrod<double, 31>::integrate(row, 1.0, std::numeric_limits<double>::infinity(), 15, tol,
                                                          &err_top);
  // Below y = 1 the domain is x in [-1/2, 1/2], y in [sqrt(1 - x^2), 1]; symmetric in x
  // only for real-symmetric integrands, so integrate the full width.
  auto column = [&](double x) {
    const double y0 = std::sqrt(1 - x * x);
    return gauss<double, 30>::integrate([&](double y) { return h(Complex(x, y)) / (y * y); }, y0, 1.0);
  };
  const double arc = gauss_kronrod<double, 31>::integrate(column, -0.5, 0.5, 15, tol, &err_arc);
  const double scale = std::fabs(top) + std::fabs(arc);
  return {top + arc, (err_top + err_arc) * std::max(1.0, scale)};
}

/// Complex variant for sesquilinear integrands. The imaginary part is integrated as
/// (re + im) - re so that a vanishing imaginary part does not stall the relative tolerance.
template <class Integrand>
std::complex<double> integrate_fundamental_domain_complex(Integrand&& h, double tol = 1e-12) {
  auto re = integrate_fundamental_domain([&](Complex z) { return h(z).real(); }, tol);
  auto mix = integrate_fundamental_domain(
      [&](Complex z) {
        const auto v = h(z);
        return v.real() + v.imag();
      },
      tol);
  return {re.value, mix.value - re.value};
}

struct NormResult {
  CertifiedValue value;
  std::string method;
};

/// <f, f> = (1/6) sum over the six cosets of Gamma_0(4) in SL_2(Z) of int_F y^k |f|^2 dmu,
/// with y^{k/2}|f| read off the frame covering each coset: I at z, W4 at (z + j)/4, V4 at z.
inline NormResult petersson_norm_quadrature(const FrameSet& fs, double tol = 1e-12) {
  auto sq = [](const CuspValue& v) { return v.value.to_double() * v.value.to_double(); };
  auto h = [&](Complex z) {
    double s = sq(eval_at_cusp(fs.at(Frame::I), z)) + sq(eval_at_cusp(fs.at(Frame::V4), z));
    for (int j = 0; j < 4; ++j) s += sq(eval_at_cusp(fs.at(Frame::W4), (z + static_cast<double>(j)) / 4.0));
    return s;
  };
  auto q = integrate_fundamental_domain(h, tol);
  return {{LogScaled(q.value / 6), LogScaled(q.error / 6 + 1e-14 * std::fabs(q.value / 6))}, "quadrature"};
}

inline NormResult petersson_norm_quadrature(const HalfIntegralForm& f, int terms = 1500, double tol = 1e-12) {
  return petersson_norm_quadrature(FrameSet::from_coefficients(f.numeric_coefficients(terms), f.weight), tol);
}

/// Coset representatives of Gamma_0(4) in SL_2(Z): I, S T^j (j = 0..3), S T^2 S.
inline std::array<Matrix2, 6> gamma0_4_cosets() {
  const Matrix2 S{0, -1, 1, 0};
  auto T = [](std::int64_t j) { return Matrix2{1, j, 0, 1}; };
  return {Matrix2{1, 0, 0, 1}, S, S * T(1), S * T(2), S * T(3), S * T(2) * S};
}

/// <f, g> = (1/6) int_{Gamma_0(4) \ H} y^k f conj(g) dmu via the theta route.
inline std::complex<double> petersson_inner_theta(const PairForm& f, const PairForm& g, double tol = 1e-11) {
  const auto reps = gamma0_4_cosets();
  const double k = f.weight.value();
  auto h = [&](Complex z) {
    std::complex<double> s = 0;
    // y^k e^{-4 pi y} is below double precision there
    if (z.imag() > 40 + k) return s;
    for (const auto& r : reps) {
      const Complex w = r.act(z);
      s += std::pow(w.imag(), k) * Complex(f(w)) * std::conj(Complex(g(w)));
    }
    return s;
  };
  return integrate_fundamental_domain_complex(h, tol) / 6.0;
}

/// <F, F> = int_F y^w |F|^2 dmu for a level-one form.
inline NormResult petersson_norm_level_one(const IntegralForm& F, double tol = 1e-12) {
  std::vector<double> a(static_cast<std::size_t>(std::min(F.precision(), 400)) + 1, 0.0);
  for (std::size_t n = 1; n < a.size(); ++n) a[n] = F.numeric(static_cast<int>(n));
  auto e = cusp_expansion(a, Weight::integral(F.weight), Frame::I);
  auto q = integrate_fundamental_domain(
      [&](Complex z) {
        const double v = eval_at_cusp(e, z).value.to_double();
        return v * v;
      },
      tol);
  return {{LogScaled(q.value), LogScaled(q.error + 1e-14 * std::fabs(q.value))}, "quadrature"};
}

/// <F, F> from L(sym^2 F, 1).
inline NormResult petersson_norm_level_one_sym2(const IntegralForm& F, double tol = 1e-11) {
  return {norm_from_sym2(F.weight, sym2_at_1(F, tol).value), "sym2"};
}

}  // namespace hiw

#endif  // HIW_PETERSSON_HPP

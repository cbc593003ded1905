#ifndef HIW_KOHNEN_ZAGIER_HPP
#define HIW_KOHNEN_ZAGIER_HPP

// Squares of plus-space coefficients against twisted central values:
// |f(|D|)|^2 / <f,f> = Gamma(k - 1/2) / pi^{k-1/2} |D|^{k-1} L(F, chi_D, 1/2) / <F,F>.

#include "hiw/fit.hpp"
#include "hiw/hecke.hpp"
#include "hiw/lfunction.hpp"
#include "hiw/petersson.hpp"
#include "hiw/salie.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hiw {

struct NormData {
  CertifiedValue norm_F;
  CertifiedValue sym2;
  CertifiedValue norm_f;
  /// <F,F> by quadrature, the independent side of the sym^2 identity.
  CertifiedValue norm_F_quadrature;
};

inline NormData norm_data(const HalfIntegralForm& f, int terms = 1500) {
  NormData nd;
  nd.sym2 = sym2_at_1(f.partner).value;
  nd.norm_F = norm_from_sym2(f.partner.weight, nd.sym2);
  nd.norm_F_quadrature = petersson_norm_level_one(f.partner).value;
  nd.norm_f = petersson_norm_quadrature(f, terms).value;
  return nd;
}

enum class NormMethod { Quadrature, Spectral };

/// <f, f> by quadrature, or for one-dimensional plus spaces as |f(m)|^2 / spectral_average(m)
/// at the first admissible m with f(m) != 0.
inline CertifiedValue petersson_norm_f(const HalfIntegralForm& f, NormMethod method, int terms = 1500) {
  if (method == NormMethod::Quadrature) return petersson_norm_quadrature(f, terms).value;
  if (f.basis.size() != 1) throw std::invalid_argument("petersson_norm_f: spectral route needs dim S_k^+ = 1");
  for (int m = 1; m <= 64; ++m) {
    if (!plus_admissible(f.weight, m)) continue;
    const double c = static_cast<double>(f.coefficient(m).embed(f.embedding));
    if (c == 0) continue;
    const CertifiedValue avg = spectral_average(f.weight, m);
    const double v = c * c / avg.to_double();
    return {LogScaled(v), LogScaled(v * avg.relative_error())};
  }
  throw std::runtime_error("petersson_norm_f: no nonzero admissible coefficient below 64");
}

struct KohnenZagierRow {
  std::int64_t discriminant = 0;
  bool skipped = false;
  std::string note;
  LogScaled lhs;
  LogScaled rhs;
  /// |log lhs - log rhs|
  double discrepancy = 0;
  CentralValue central;
};

inline KohnenZagierRow kohnen_zagier_check(const HalfIntegralForm& f, const NormData& nd, std::int64_t D) {
  KohnenZagierRow row;
  row.discriminant = D;
  const std::int64_t ad = D < 0 ? -D : D;
  const FieldElem c = f.coefficient(ad);
  if (c.is_zero()) {
    row.skipped = true;
    row.note = "coefficient f(|D|) vanishes";
    return row;
  }
  const double cd = static_cast<double>(c.embed(f.embedding));
  row.central = central_value(f.partner, D);
  const Weight k = f.weight;
  const Weight km = Weight::from_twice(k.twice() - 1);  // k - 1/2
  row.lhs = LogScaled(cd * cd) / nd.norm_f.value;
  const LogScaled pi_pow = exp_scaled(km.value() * std::log(std::numbers::pi_v<long double>));
  const LogScaled d_pow = exp_scaled((k.value() - 1) * std::log(static_cast<long double>(ad)));
  row.rhs = gamma_half(km).value / pi_pow * d_pow * row.central.value.value / nd.norm_F.value;
  if (row.rhs.sign() <= 0) {
    row.skipped = true;
    row.note = "central value not positive";
    return row;
  }
  row.discrepancy = std::fabs(static_cast<double>(row.lhs.log_abs() - row.rhs.log_abs()));
  return row;
}

/// k^{1/4} L(F, chi_D, 1/2)^{1/2} |D|^{-1/2}.
inline LogScaled lower_bound_rhs(const IntegralForm& F, std::int64_t D, Weight k) {
  const CentralValue L = central_value(F, D);
  if (L.value.to_double() < 0) throw std::domain_error("lower_bound_rhs: negative central value");
  const double ad = std::fabs(static_cast<double>(D));
  return LogScaled(std::pow(k.value(), 0.25)) * L.value.value.sqrt() / LogScaled(std::sqrt(ad));
}

struct LowerBoundArgmax {
  std::int64_t discriminant = 0;
  LogScaled value;
  int evaluated = 0;
};

/// Maximiser of lower_bound_rhs over fundamental |D| <= bound of the admissible sign.
inline LowerBoundArgmax lower_bound_rhs_max(const IntegralForm& F, Weight k, std::int64_t bound) {
  LowerBoundArgmax best;
  for (auto D : fundamental_discriminants(bound, k.plus_sign())) {
    const std::int64_t ad = D < 0 ? -D : D;
    if (ad > bound) continue;
    auto v = lower_bound_rhs(F, D, k);
    ++best.evaluated;
    if (best.evaluated == 1 || v > best.value) best = {D, v, best.evaluated};
  }
  return best;
}

struct CoefficientRatio {
  std::int64_t m = 0;
  /// |f(m)| Gamma(k)^{1/2} / ((4 pi)^{k/2} m^{(k-1)/2}) for the L^2-normalised f.
  double ratio = 0;
};

struct CoefficientBoundReport {
  double alpha = 0;
  double beta = 0;
  std::vector<CoefficientRatio> rows;
  /// Slope of log ratio^2 against log |D|; the bound permits beta.
  std::optional<LinearFit> beta_fit;
};

inline double normalised_ratio(double coefficient, double norm_f, Weight k, std::int64_t m) {
  const long double lr = std::log(std::fabs(coefficient)) - 0.5L * std::log(static_cast<long double>(norm_f)) +
                         0.5L * lgammal(k.value()) - k.value() / 2 * std::log(4 * std::numbers::pi_v<long double>) -
                         (k.value() - 1) / 2 * std::log(static_cast<long double>(m));
  return static_cast<double>(std::exp(lr));
}

/// Ratios at fundamental m = |D| <= d_max and the fitted growth exponent in |D|.
inline CoefficientBoundReport coefficient_bound_report(const HalfIntegralForm& f, double norm_f, double alpha,
                                                       double beta, std::int64_t d_max = 200) {
  CoefficientBoundReport rep{alpha, beta, {}, std::nullopt};
  std::vector<double> lx, ly;
  for (auto D : fundamental_discriminants(d_max, f.weight.plus_sign())) {
    const std::int64_t ad = D < 0 ? -D : D;
    if (ad > d_max || ad > f.table->max_index()) continue;
    const double c = static_cast<double>(f.coefficient(ad).embed(f.embedding));
    if (c == 0) continue;
    const double r = normalised_ratio(c, norm_f, f.weight, ad);
    rep.rows.push_back({ad, r});
    lx.push_back(std::log(static_cast<double>(ad)));
    ly.push_back(2 * std::log(r));
  }
  if (lx.size() >= 2) rep.beta_fit = linear_fit(lx, ly);
  return rep;
}

struct WeightSweepRow {
  Weight k;
  /// sum_j |f_j(1)|^2 Gamma(k) / (4 pi)^k over an orthonormal basis.
  double ratio_sq = 0;
};

/// Sweep of the m = 1 ratio through the spectral average, and its exponent in k.
inline std::pair<std::vector<WeightSweepRow>, LinearFit> coefficient_weight_sweep(const std::vector<Weight>& ks) {
  std::vector<WeightSweepRow> rows;
  std::vector<double> lx, ly;
  for (auto k : ks) {
    const CertifiedValue s = spectral_average(k, 1);
    if (!(s.to_double() > 0)) continue;
    const LogScaled r = s.value * exp_scaled(lgammal(k.value()) - k.value() * std::log(4 * std::numbers::pi_v<long double>));
    rows.push_back({k, r.to_double()});
    lx.push_back(std::log(k.value()));
    ly.push_back(static_cast<double>(r.log_abs()));
  }
  return {rows, linear_fit(lx, ly)};
}

}  // namespace hiw

#endif  // HIW_KOHNEN_ZAGIER_HPP

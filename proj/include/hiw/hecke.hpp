#ifndef HIW_HECKE_HPP
#define HIW_HECKE_HPP

// Hecke operators T(p^2) on the plus space, eigenforms over number fields,
// their level-one partners, and the exact coefficient identities linking them.

#include "hiw/arith.hpp"
#include "hiw/level_one.hpp"
#include "hiw/linalg.hpp"
#include "hiw/number_field.hpp"
#include "hiw/plus_space.hpp"
#include "hiw/qexpansion.hpp"
#include "hiw/theta.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

namespace detail {

/// T(p^2) at index n for a coefficient accessor a(.), exact.
template <class Coeff, class Access>
Coeff hecke_plus_at(Access&& a, Weight k, int p, std::int64_t n) {
  Coeff out = a(static_cast<std::int64_t>(p) * p * n);
  int chi = jacobi_symbol(k.plus_sign() * n, p);
  if (chi != 0) out += a(n) * Rational(chi * ipow(BigInt(p), static_cast<unsigned>(k.lambda() - 1)));
  if (n % (static_cast<std::int64_t>(p) * p) == 0)
    out += a(n / (static_cast<std::int64_t>(p) * p)) * Rational(ipow(BigInt(p), static_cast<unsigned>(k.twice() - 2)));
  return out;
}

}  // namespace detail

/// T(p^2) on a plus-space expansion:
/// a(n) -> a(p^2 n) + ((-1)^{k-1/2} n | p) p^{k-3/2} a(n) + p^{2k-2} a(n/p^2).
inline RationalQExpansion hecke_plus(const RationalQExpansion& f, Weight k, int p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("hecke_plus: p must be an odd prime");
  const int out_prec = f.precision() / (p * p);
  if (out_prec < 0) throw std::invalid_argument("hecke_plus: precision shortfall");
  if (out_prec == 0 && f.precision() < p * p)
    throw std::invalid_argument("hecke_plus: need precision >= " + std::to_string(p * p));
  std::vector<Rational> c(static_cast<std::size_t>(out_prec) + 1);
  auto a = [&](std::int64_t n) { return f[static_cast<int>(n)]; };
  for (int n = 0; n <= out_prec; ++n) c[n] = detail::hecke_plus_at<Rational>(a, k, p, n);
  return RationalQExpansion(k, std::move(c));
}

/// Normalised level-one eigenform F of weight w with F^(1) = 1, coefficients in a number field.
struct IntegralForm {
  int weight = 0;
  FieldPtr field;
  std::size_t embedding = 0;
  std::vector<FieldElem> coeffs;  // index 0..precision

  int precision() const { return static_cast<int>(coeffs.size()) - 1; }
  const FieldElem& coefficient(int n) const {
    if (n < 0 || n > precision())
      throw std::out_of_range("IntegralForm: coefficient " + std::to_string(n) + " beyond precision");
    return coeffs[n];
  }
  /// F^(p), the T(p) eigenvalue.
  const FieldElem& eigenvalue(int p) const { return coefficient(p); }
  double numeric(int n) const { return static_cast<double>(coefficient(n).embed(embedding)); }
};

/// Plus-space Hecke eigenform f = sum_i combination[i] * basis[i], coefficients in `field`.
/// Conjugate eigenforms share field, basis and combination and differ in `embedding`.
struct HalfIntegralForm {
  Weight weight;
  FieldPtr field;
  std::size_t embedding = 0;
  std::shared_ptr<const ThetaPowerTable> table;
  std::vector<PairCombination> basis;
  std::vector<FieldElem> combination;
  /// First index with nonzero coefficient.
  int leading_index = 0;
  /// l = p^2 -> lambda(l), computed from the T(p^2) action on coefficients.
  std::map<int, FieldElem> eigenvalues;
  IntegralForm partner;

  FieldElem coefficient(std::int64_t n) const {
    if (n < 0) return FieldElem(field, Rational(0));
    if (n > table->max_index())
      throw std::out_of_range("HalfIntegralForm: coefficient " + std::to_string(n) + " beyond theta table");
    FieldElem s(field, Rational(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (combination[i].is_zero()) continue;
      Rational c = basis[i].coefficient(*table, static_cast<int>(n));
      if (c != 0) s += combination[i] * c;
    }
    return s;
  }

  std::vector<FieldElem> coefficients(int precision) const {
    std::vector<FieldElem> out;
    out.reserve(static_cast<std::size_t>(precision) + 1);
    for (int n = 0; n <= precision; ++n) out.push_back(coefficient(n));
    return out;
  }

  /// Real coefficients under the chosen embedding.
  std::vector<double> numeric_coefficients(int precision) const {
    std::vector<double> out;
    for (const auto& c : coefficients(precision)) out.push_back(static_cast<double>(c.embed(embedding)));
    return out;
  }

  /// lambda(m^2) for odd m, read through the Shimura partner: lambda(m^2) = F^(m).
  FieldElem lambda_square(int m) const { return partner.coefficient(m); }

  /// T(p^2) eigenvalue from the coefficient action at the leading index.
  FieldElem hecke_eigenvalue(int p) const {
    auto a = [&](std::int64_t n) { return coefficient(n); };
    FieldElem t = detail::hecke_plus_at<FieldElem>(a, weight, p, leading_index);
    return t / coefficient(leading_index);
  }
};

struct EigenbasisOptions {
  /// F^(n) stored for n <= partner_precision.
  int partner_precision = 250;
  /// Odd primes p <= this whose lambda(p^2) is computed from the T(p^2) action.
  int eigenvalue_prime_bound = 50;
};

struct HeckeDiagnostics {
  int separating_prime = 0;
  Poly charpoly;
  std::vector<Poly> factors;
};

namespace detail {

inline std::vector<int> leading_indices(const SpaceBasis& basis) {
  std::vector<int> piv;
  for (const auto& f : basis.forms) {
    int n = 0;
    while (f[n] == 0) ++n;
    piv.push_back(n);
  }
  return piv;
}

/// Matrix of T(p^2) on an echelon plus basis; every image is verified to lie
/// in the span up to the Sturm index.
inline RationalMatrix plus_hecke_matrix(const ThetaPowerTable& table, const SpaceBasis& basis, int p) {
  const auto piv = leading_indices(basis);
  const int sturm = basis.sturm;
  if (static_cast<std::int64_t>(p) * p * sturm > table.max_index())
    throw std::out_of_range("plus_hecke_matrix: theta table too small for T(" + std::to_string(p) + "^2)");
  const std::size_t d = basis.forms.size();
  RationalMatrix m(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i) {
    auto pc = basis.pair_form(i);
    auto a = [&](std::int64_t n) { return pc.coefficient(table, static_cast<int>(n)); };
    std::vector<Rational> image(static_cast<std::size_t>(sturm) + 1);
    for (int n = 0; n <= sturm; ++n) image[n] = hecke_plus_at<Rational>(a, basis.weight, p, n);
    for (std::size_t j = 0; j < d; ++j) m[i][j] = image[piv[j]];
    for (int n = 0; n <= sturm; ++n) {
      Rational s = 0;
      for (std::size_t j = 0; j < d; ++j) s += m[i][j] * basis.forms[j][n];
      if (s != image[n])
        throw std::runtime_error("plus_hecke_matrix: T(p^2) image leaves the plus space at index " +
                                 std::to_string(n));
    }
  }
  return m;
}

inline RationalMatrix level_one_hecke_matrix(const std::vector<RationalQExpansion>& basis, int w, int p) {
  const std::size_t d = basis.size();
  RationalMatrix m(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i) {
    auto t = hecke_integral(basis[i], w, p);
    for (std::size_t j = 0; j < d; ++j) m[i][j] = t[static_cast<int>(j) + 1];
    for (int n = 0; n <= t.precision(); ++n) {
      Rational s = 0;
      for (std::size_t j = 0; j < d; ++j) s += m[i][j] * basis[j][n];
      if (s != t[n]) throw std::runtime_error("level_one_hecke_matrix: image outside the cusp space");
    }
  }
  return m;
}

inline std::vector<FieldElem> eigenvector(const RationalMatrix& m, const FieldPtr& field) {
  const std::size_t d = m.size();
  FieldElem x = FieldElem::generator(field);
  std::vector<std::vector<FieldElem>> a(d, std::vector<FieldElem>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      a[i][j] = FieldElem(field, m[i][j]);
      if (i == j) a[i][j] -= x;
    }
  return left_kernel_vector(a);
}

}  // namespace detail

/// Hecke eigenbasis of S_k^+ with Shimura partners. Uses the smallest odd
/// prime p0 whose T(p0^2) has squarefree characteristic polynomial.
inline std::vector<HalfIntegralForm> eigenbasis_plus(std::shared_ptr<const ThetaPowerTable> table, Weight k,
                                                     const EigenbasisOptions& opt = {},
                                                     HeckeDiagnostics* diag = nullptr) {
  auto basis = cusp_plus_basis(*table, k, sturm_bound(k));
  const std::size_t d = basis.forms.size();
  if (d == 0) return {};
  const int w = k.shimura_weight();
  if (static_cast<int>(d) != level_one_cusp_dimension(w))
    throw std::runtime_error("eigenbasis_plus: plus-space dimension does not match level one");

  int p0 = 0;
  RationalMatrix m;
  Poly cp;
  for (int p : primes_up_to(50)) {
    if (p == 2) continue;
    m = detail::plus_hecke_matrix(*table, basis, p);
    cp = characteristic_polynomial(m);
    if (poly_squarefree(cp)) {
      p0 = p;
      break;
    }
  }
  if (p0 == 0) throw std::runtime_error("eigenbasis_plus: no odd prime p <= 50 separates the eigenforms");
  auto factors = factor_integer_poly(cp);
  if (diag) *diag = {p0, cp, factors};

  const int partner_prec = std::max({opt.partner_precision, p0 * (static_cast<int>(d) + 2), 60});
  auto miller = miller_basis(w, partner_prec);
  auto mf = detail::level_one_hecke_matrix(miller, w, p0);

  std::vector<PairCombination> pcs;
  for (std::size_t i = 0; i < d; ++i) pcs.push_back(basis.pair_form(i));
  const auto piv = detail::leading_indices(basis);

  std::vector<HalfIntegralForm> out;
  for (const auto& q : factors) {
    auto field = std::make_shared<const NumberField>(q);
    auto v = detail::eigenvector(m, field);
    auto c = detail::eigenvector(mf, field);

    IntegralForm partner;
    partner.weight = w;
    partner.field = field;
    partner.coeffs.assign(static_cast<std::size_t>(partner_prec) + 1, FieldElem(field, Rational(0)));
    for (int n = 0; n <= partner_prec; ++n)
      for (std::size_t i = 0; i < d; ++i)
        if (miller[i][n] != 0) partner.coeffs[n] += c[i] * miller[i][n];
    if (!(partner.coeffs[1] == FieldElem(field, Rational(1))))
      throw std::runtime_error("eigenbasis_plus: partner not normalised");

    HalfIntegralForm f;
    f.weight = k;
    f.field = field;
    f.table = table;
    f.basis = pcs;
    f.combination = v;
    std::size_t lead = 0;
    while (v[lead].is_zero()) ++lead;
    f.leading_index = piv[lead];
    f.partner = partner;
    for (int p : primes_up_to(opt.eigenvalue_prime_bound)) {
      if (p == 2) continue;
      if (static_cast<std::int64_t>(p) * p * f.leading_index > table->max_index()) break;
      f.eigenvalues[p * p] = f.hecke_eigenvalue(p);
    }
    // The eigenvalue at p0 is the field generator by construction.
    if (!(f.eigenvalues.at(p0 * p0) == FieldElem::generator(field)))
      throw std::runtime_error("eigenbasis_plus: T(p0^2) eigenvalue mismatch");
    for (std::size_t e = 0; e < field->roots().size(); ++e) {
      f.embedding = e;
      f.partner.embedding = e;
      out.push_back(f);
    }
  }
  return out;
}

struct EigenvalueMatch {
  bool all_match = true;
  std::vector<int> primes_checked;
  int first_mismatch = 0;
};

/// lambda(p^2) from the half-integral T(p^2) action equals F^(p) for every
/// stored prime.
inline EigenvalueMatch match_eigenvalues(const HalfIntegralForm& f) {
  EigenvalueMatch r;
  for (const auto& [l, lam] : f.eigenvalues) {
    int p = static_cast<int>(isqrt(l));
    if (p > f.partner.precision()) break;
    r.primes_checked.push_back(p);
    if (!(lam == f.partner.eigenvalue(p))) {
      r.all_match = false;
      if (!r.first_mismatch) r.first_mismatch = p;
    }
  }
  return r;
}

struct SqrCoeffReport {
  bool pass = true;
  int checked = 0;
  int first_failure = 0;
  bool leading_zero = false;
};

/// f^(n^2|D|) = f^(|D|) sum_{d|n} mu(d) (D|d) d^{k-3/2} F^(n/d), exactly, for n <= n_max.
inline SqrCoeffReport verify_sqrcoeff(const HalfIntegralForm& f, std::int64_t discriminant, int n_max) {
  if (!is_fundamental_discriminant(discriminant))
    throw std::invalid_argument("verify_sqrcoeff: " + std::to_string(discriminant) + " is not fundamental");
  if (f.weight.plus_sign() * discriminant <= 0)
    throw std::invalid_argument("verify_sqrcoeff: sign of D incompatible with the weight");
  if (n_max > f.partner.precision()) throw std::out_of_range("verify_sqrcoeff: partner precision shortfall");
  const std::int64_t ad = discriminant < 0 ? -discriminant : discriminant;
  if (static_cast<std::int64_t>(n_max) * n_max * ad > f.table->max_index())
    throw std::out_of_range("verify_sqrcoeff: theta table shortfall for n_max");
  SqrCoeffReport rep;
  const FieldElem base = f.coefficient(ad);
  rep.leading_zero = base.is_zero();
  for (int n = 1; n <= n_max; ++n) {
    FieldElem s(f.field, Rational(0));
    for (auto dv : divisors(n)) {
      int mu = mobius(dv);
      if (mu == 0) continue;
      int chi = kronecker_symbol(discriminant, dv);
      if (chi == 0) continue;
      Rational w = Rational(mu * chi) * Rational(ipow(BigInt(dv), static_cast<unsigned>(f.weight.lambda() - 1)));
      s += f.partner.coefficient(static_cast<int>(n / dv)) * w;
    }
    FieldElem lhs = f.coefficient(static_cast<std::int64_t>(n) * n * ad);
    ++rep.checked;
    if (!(lhs == base * s)) {
      rep.pass = false;
      if (!rep.first_failure) rep.first_failure = n;
    }
  }
  return rep;
}

enum class DivisorWeight {
  /// d^{2k-2}: the Hecke relation for lambda(m^2) = F^(m).
  Hecke,
  /// d^{k-1}, as printed in the amplification identity.
  Literal,
};

struct MultiplicativityResult {
  bool exact_pass = false;
  /// |lhs - rhs| / max(|lhs|, 1) under each embedding, worst case.
  double relative_residual = 0;
};

/// lambda(m^2) lambda(n^2) = sum_{d | (m,n)} weight(d) lambda(m^2 n^2 / d^4) for odd m, n.
inline MultiplicativityResult multiplicativity_check(const HalfIntegralForm& f, int m, int n,
                                                     DivisorWeight dw = DivisorWeight::Hecke) {
  if (m % 2 == 0 || n % 2 == 0 || m < 1 || n < 1)
    throw std::invalid_argument("multiplicativity_check: m, n must be odd positive");
  if (m * n > f.partner.precision()) throw std::out_of_range("multiplicativity_check: missing eigenvalue");
  const FieldElem lhs = f.lambda_square(m) * f.lambda_square(n);
  MultiplicativityResult res;
  const int g = std::gcd(m, n);
  if (dw == DivisorWeight::Hecke) {
    FieldElem rhs(f.field, Rational(0));
    for (auto d : divisors(g))
      rhs += f.lambda_square(static_cast<int>(m * n / (d * d))) *
             Rational(ipow(BigInt(d), static_cast<unsigned>(f.weight.twice() - 2)));
    res.exact_pass = lhs == rhs;
    for (std::size_t e = 0; e < f.field->roots().size(); ++e) {
      HighReal l = lhs.embed(e), r = rhs.embed(e);
      HighReal al = boost::multiprecision::abs(l);
      HighReal scale = al > 1 ? al : HighReal(1);
      res.relative_residual = std::max(res.relative_residual, static_cast<double>(boost::multiprecision::abs(l - r) / scale));
    }
    return res;
  }
  // d^{k-1} is irrational for non-square d; compare numerically under each embedding.
  for (std::size_t e = 0; e < f.field->roots().size(); ++e) {
    HighReal l = lhs.embed(e), r = 0;
    for (auto d : divisors(g))
      r += boost::multiprecision::pow(HighReal(d), HighReal(f.weight.twice() - 2) / 2) *
           f.lambda_square(static_cast<int>(m * n / (d * d))).embed(e);
    HighReal al = boost::multiprecision::abs(l);
      HighReal scale = al > 1 ? al : HighReal(1);
    res.relative_residual = std::max(res.relative_residual, static_cast<double>(boost::multiprecision::abs(l - r) / scale));
  }
  res.exact_pass = res.relative_residual == 0;
  return res;
}

}  // namespace hiw

#endif  // HIW_HECKE_HPP

#ifndef HIW_PLUS_SPACE_HPP
#define HIW_PLUS_SPACE_HPP

// Exact bases of M_k(Gamma_0(4)), S_k(Gamma_0(4)) and the plus space S_k^+,
// cut out of the span of Theta^a G^b by linear conditions on coefficients.

#include "hiw/arith.hpp"
#include "hiw/linalg.hpp"
#include "hiw/qexpansion.hpp"
#include "hiw/theta.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

enum class SpaceKind { FullM, FullS, PlusM, PlusS };

inline std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::FullM: return "full M";
    case SpaceKind::FullS: return "full S";
    case SpaceKind::PlusM: return "plus M";
    case SpaceKind::PlusS: return "plus S";
  }
  return "?";
}

/// Coefficient index bound used for all linear algebra at weight k.
inline int sturm_bound(Weight k) { return (k.twice() + 1) / 2 + 10; }

/// n is excluded from the plus space when (-1)^{k-1/2} n = 2, 3 mod 4.
inline bool plus_forbidden(Weight k, std::int64_t n) {
  std::int64_t r = mod_floor(k.plus_sign() * n, 4);
  return r == 2 || r == 3;
}

struct SpaceBasis {
  Weight weight;
  SpaceKind kind = SpaceKind::FullM;
  int sturm = 0;
  std::vector<Monomial> monomials;
  /// Echelonised forms: leading coefficient 1, pivots strictly increasing.
  std::vector<RationalQExpansion> forms;
  /// forms[i] = sum_j coordinates[i][j] * monomials[j].
  RationalMatrix coordinates;

  int dimension() const { return static_cast<int>(forms.size()); }

  PairCombination pair_form(std::size_t i) const {
    return to_pair_combination(weight, monomials, coordinates.at(i));
  }
};

namespace detail {

/// Row i holds the coefficients 0..precision of monomial i.
inline RationalMatrix monomial_rows(const ThetaPowerTable& table, const std::vector<Monomial>& monos,
                                    int precision) {
  RationalMatrix rows;
  for (const auto& m : monos) rows.push_back(monomial_series(table, m, precision).coeffs());
  return rows;
}

/// Echelonises the combinations kernel * monomials and records coordinates.
inline void fill_forms(SpaceBasis& basis, const RationalMatrix& mono_rows, const RationalMatrix& combos,
                       int precision) {
  const std::size_t r = basis.monomials.size();
  RationalMatrix aug;
  for (const auto& c : combos) {
    std::vector<Rational> row(static_cast<std::size_t>(precision) + 1 + r);
    for (std::size_t i = 0; i < r; ++i) {
      if (c[i] == 0) continue;
      for (int n = 0; n <= precision; ++n) row[n] += c[i] * mono_rows[i][n];
      row[precision + 1 + i] = c[i];
    }
    aug.push_back(std::move(row));
  }
  auto rr = rref_exact(aug);
  for (int p : rr.pivots)
    if (p > precision)
      throw std::runtime_error("space basis: forms dependent up to index " + std::to_string(precision));
  for (const auto& row : rr.reduced) {
    std::vector<Rational> q(row.begin(), row.begin() + precision + 1);
    basis.forms.emplace_back(basis.weight, std::move(q));
    basis.coordinates.emplace_back(row.begin() + precision + 1, row.end());
  }
}

inline void require_weight(Weight k) {
  if (!k.is_half_integral()) throw std::invalid_argument("weight must lie in 1/2 + Z");
  if (k.twice() < 1) throw std::invalid_argument("weight must be positive");
}

}  // namespace detail

/// All Theta^a G^b of weight k; they are linearly independent and span M_k(Gamma_0(4)).
inline SpaceBasis monomial_span(const ThetaPowerTable& table, Weight k, int precision) {
  detail::require_weight(k);
  SpaceBasis basis{k, SpaceKind::FullM, precision, weight_monomials(k), {}, {}};
  auto rows = detail::monomial_rows(table, basis.monomials, precision);
  RationalMatrix identity(basis.monomials.size(), std::vector<Rational>(basis.monomials.size()));
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i][i] = 1;
  detail::fill_forms(basis, rows, identity, precision);
  return basis;
}

inline SpaceBasis monomial_span(Weight k, int precision) {
  ThetaPowerTable table(k.twice(), precision);
  return monomial_span(table, k, precision);
}

namespace detail {

inline SpaceBasis cut_space(const ThetaPowerTable& table, Weight k, int precision, SpaceKind kind) {
  require_weight(k);
  if (precision < sturm_bound(k))
    throw std::invalid_argument("precision " + std::to_string(precision) + " below Sturm bound " +
                                std::to_string(sturm_bound(k)));
  SpaceBasis basis{k, kind, precision, weight_monomials(k), {}, {}};
  auto rows = monomial_rows(table, basis.monomials, precision);

  // One column per linear condition; the left kernel gives admissible combinations.
  RationalMatrix conditions(rows.size());
  const bool cusp = kind == SpaceKind::FullS || kind == SpaceKind::PlusS;
  const bool plus = kind == SpaceKind::PlusM || kind == SpaceKind::PlusS;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& c = conditions[i];
    if (cusp) c.push_back(rows[i][0]);
    // Constant term at the cusp 0: (Theta^a G^b)|W4 = 16^{-b} T^a U^{4b}.
    if (kind == SpaceKind::FullS) c.push_back(rpow(Rational(16), -basis.monomials[i].b));
    if (plus)
      for (int n = 1; n <= precision; ++n)
        if (plus_forbidden(k, n)) c.push_back(rows[i][n]);
  }
  auto rr = rref_exact(conditions);
  fill_forms(basis, rows, rr.kernel, precision);
  return basis;
}

}  // namespace detail

/// S_k^+(Gamma_0(4)): a(0) = 0 and a(n) = 0 whenever plus_forbidden(k, n).
inline SpaceBasis cusp_plus_basis(const ThetaPowerTable& table, Weight k, int precision) {
  return detail::cut_space(table, k, precision, SpaceKind::PlusS);
}

inline SpaceBasis cusp_plus_basis(Weight k, int precision) {
  ThetaPowerTable table(k.twice(), precision);
  return cusp_plus_basis(table, k, precision);
}

inline SpaceBasis plus_basis(const ThetaPowerTable& table, Weight k, int precision) {
  return detail::cut_space(table, k, precision, SpaceKind::PlusM);
}

/// S_k(Gamma_0(4)): vanishing at infinity and at 0; the cusp 1/2 is irregular
/// for half-integral weight and imposes nothing.
inline SpaceBasis cusp_basis(const ThetaPowerTable& table, Weight k, int precision) {
  return detail::cut_space(table, k, precision, SpaceKind::FullS);
}

inline SpaceBasis cusp_basis(Weight k, int precision) {
  ThetaPowerTable table(k.twice(), precision);
  return cusp_basis(table, k, precision);
}

}  // namespace hiw

#endif  // HIW_PLUS_SPACE_HPP

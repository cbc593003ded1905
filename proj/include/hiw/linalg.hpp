#ifndef HIW_LINALG_HPP
#define HIW_LINALG_HPP

#include "hiw/arith.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace hiw {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct RowReduction {
  int rank = 0;
  /// Reduced row echelon form of the nonzero rows, pivots normalised to 1.
  RationalMatrix reduced;
  std::vector<int> pivots;
  /// Basis of left-kernel vectors c with sum_i c_i * row_i = 0.
  RationalMatrix kernel;
};

namespace detail {

inline BigInt row_common_denominator(const std::vector<Rational>& row) {
  BigInt l = 1;
  for (const auto& x : row) {
    BigInt d = boost::multiprecision::denominator(x);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  return l;
}

}  // namespace detail

/// Fraction-free (Bareiss) elimination of [A | I] followed by back substitution.
inline RowReduction rref_exact(const RationalMatrix& rows) {
  RowReduction out;
  const std::size_t n = rows.size();
  if (n == 0) return out;
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw std::invalid_argument("rref_exact: ragged input");

  const std::size_t width = cols + n;
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(width));
  std::vector<BigInt> row_scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    BigInt den = detail::row_common_denominator(rows[i]);
    row_scale[i] = den;
    for (std::size_t j = 0; j < cols; ++j)
      m[i][j] = boost::multiprecision::numerator(rows[i][j]) * (den / boost::multiprecision::denominator(rows[i][j]));
    m[i][cols + i] = 1;
  }

  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(m[piv], m[r]);
    out.pivots.push_back(static_cast<int>(c));
    const BigInt p = m[r][c];
    for (std::size_t i = r + 1; i < n; ++i) {
      const BigInt f = m[i][c];
      for (std::size_t j = c; j < width; ++j) {
        m[i][j] = (p * m[i][j] - f * m[r][j]) / prev;
      }
    }
    prev = p;
    ++r;
  }
  out.rank = static_cast<int>(r);

  for (std::size_t i = r; i < n; ++i) {
    std::vector<Rational> k(n);
    // augmented columns record combinations of the denominator-cleared rows
    for (std::size_t j = 0; j < n; ++j) k[j] = Rational(m[i][cols + j] * row_scale[j]);
    out.kernel.push_back(std::move(k));
  }

  out.reduced.assign(r, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.reduced[i][j] = Rational(m[i][j]);
  for (std::size_t i = r; i-- > 0;) {
    const int pc = out.pivots[i];
    const Rational inv = Rational(1) / out.reduced[i][pc];
    for (auto& x : out.reduced[i]) x *= inv;
    for (std::size_t above = 0; above < i; ++above) {
      const Rational f = out.reduced[above][pc];
      if (f == 0) continue;
      for (std::size_t j = pc; j < cols; ++j) out.reduced[above][j] -= f * out.reduced[i][j];
    }
  }
  return out;
}

/// Coordinates of v in the span of an RREF basis (read off at pivots),
/// or nullopt when v is not in the span.
inline std::optional<std::vector<Rational>> coordinates_in_rref(const RowReduction& rr,
                                                                const std::vector<Rational>& v) {
  std::vector<Rational> coords(rr.reduced.size());
  std::vector<Rational> residual = v;
  for (std::size_t i = 0; i < rr.reduced.size(); ++i) {
    coords[i] = residual[rr.pivots[i]];
    if (coords[i] == 0) continue;
    for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= coords[i] * rr.reduced[i][j];
  }
  for (const auto& x : residual)
    if (x != 0) return std::nullopt;
  return coords;
}

/// Characteristic polynomial det(x I - M), coefficients low to high (monic),
/// by the Faddeev-LeVerrier recursion over Q.
inline std::vector<Rational> characteristic_polynomial(const RationalMatrix& mat) {
  const std::size_t n = mat.size();
  std::vector<Rational> coeffs(n + 1);
  coeffs[n] = 1;
  RationalMatrix m_k(n, std::vector<Rational>(n));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A * M_{k-1} + c_{n-k+1} I
    RationalMatrix next(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t l = 0; l < n; ++l) s += mat[i][l] * m_k[l][j];
        next[i][j] = s;
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += coeffs[n - k + 1];
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += mat[i][l] * next[l][i];
    coeffs[n - k] = -trace / static_cast<long>(k);
    m_k = std::move(next);
  }
  return coeffs;
}

}  // namespace hiw

#endif  // HIW_LINALG_HPP

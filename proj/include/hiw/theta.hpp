#ifndef HIW_THETA_HPP
#define HIW_THETA_HPP

// Theta series, the weight-2 generator G of Gamma_0(4), and exact
// coefficients of the monomials Theta^a G^b.
//
// G(z) = sum_{n odd} sigma(n) q^n = eta(4z)^8 / eta(2z)^4 = (T^4 - U^4) / 16
// where T = Theta(z) and U = Theta(z + 1/2) = sum (-1)^n q^{n^2}.
// Every monomial is therefore a combination of products T^A U^B whose
// coefficients are signed convolutions of sums-of-squares counts r_A(n).

#include "hiw/arith.hpp"
#include "hiw/qexpansion.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace hiw {

/// Theta(z) = sum_{n in Z} e(n^2 z); weight 1/2, width 1, parameter 0.
inline RationalQExpansion theta_series(int precision) {
  if (precision < 0) throw std::invalid_argument("theta_series: negative precision");
  std::vector<Rational> c(static_cast<std::size_t>(precision) + 1);
  c[0] = 1;
  for (long n = 1; n * n <= precision; ++n) c[n * n] = 2;
  return RationalQExpansion(Weight::from_twice(1), std::move(c));
}

inline BigInt divisor_sigma(std::int64_t n) {
  BigInt s = 0;
  for (auto d : divisors(n)) s += d;
  return s;
}

/// The weight-2 form G = sum_{n odd} sigma(n) q^n on Gamma_0(4).
inline RationalQExpansion weight2_generator(int precision) {
  if (precision < 1) throw std::invalid_argument("weight2_generator: precision must be >= 1");
  std::vector<Rational> c(static_cast<std::size_t>(precision) + 1);
  for (int n = 1; n <= precision; n += 2) c[n] = Rational(divisor_sigma(n));
  return RationalQExpansion(Weight::integral(2), std::move(c));
}

/// Multiply a dense integer series by Theta (sign = +1) or by
/// Theta(z + 1/2) (sign = -1), in place up to its length.
inline void multiply_by_theta(std::vector<BigInt>& series, int sign = 1) {
  const long n_max = static_cast<long>(series.size()) - 1;
  BigInt acc;
  for (long n = n_max; n >= 0; --n) {
    acc = 0;
    for (long s = 1; s * s <= n; ++s) {
      if (sign < 0 && (s & 1))
        acc -= series[n - s * s];
      else
        acc += series[n - s * s];
    }
    series[n] += 2 * acc;
  }
}

/// Table of r_A(n) = #{x in Z^A : |x|^2 = n} for A <= max_power, n <= max_index.
class ThetaPowerTable {
 public:
  ThetaPowerTable(int max_power, int max_index) : max_index_(max_index) {
    if (max_power < 0 || max_index < 0) throw std::invalid_argument("ThetaPowerTable: negative size");
    table_.reserve(static_cast<std::size_t>(max_power) + 1);
    std::vector<BigInt> cur(static_cast<std::size_t>(max_index) + 1);
    cur[0] = 1;
    table_.push_back(cur);
    for (int a = 1; a <= max_power; ++a) {
      multiply_by_theta(cur, 1);
      table_.push_back(cur);
    }
  }

  int max_power() const { return static_cast<int>(table_.size()) - 1; }
  int max_index() const { return max_index_; }

  const BigInt& r(int power, int n) const {
    check(power, n);
    return table_[power][n];
  }

  /// Coefficient of q^n in T^A U^B. Uses T U = U(2z)^2, so with s = min(A, B)
  /// the product is U(2z)^{2s} times T^{A-s} or U^{B-s}; only even shifts occur.
  /// Requires max(2 min(A,B), |A-B|) <= max_power().
  BigInt pair_coefficient(int a, int b, int n) const {
    const int s = std::min(a, b);
    const int rest = a > b ? a - b : b - a;
    const bool rest_twisted = b > a;
    check(std::max(2 * s, rest), n);
    const auto& rs = table_[2 * s];
    const auto& rr = table_[rest];
    BigInt acc = 0;
    for (int t = 0; 2 * t <= n; ++t) {
      if (rs[t] == 0) continue;
      const int m = n - 2 * t;
      if (rr[m] == 0) continue;
      bool negative = (t & 1) != 0;
      if (rest_twisted && (m & 1)) negative = !negative;
      if (negative)
        acc -= rs[t] * rr[m];
      else
        acc += rs[t] * rr[m];
    }
    return acc;
  }

  /// Dense T^A U^B up to precision, built by sparse theta products from the
  /// table row of the larger exponent.
  std::vector<BigInt> pair_series(int a, int b, int precision) const {
    check(std::max(a, b), precision);
    if (a + b == 0) {
      std::vector<BigInt> one(static_cast<std::size_t>(precision) + 1);
      one[0] = 1;
      return one;
    }
    std::vector<BigInt> s;
    if (a >= b) {
      s.assign(table_[a].begin(), table_[a].begin() + precision + 1);
      for (int i = 0; i < b; ++i) multiply_by_theta(s, -1);
    } else {
      s.assign(table_[b].begin(), table_[b].begin() + precision + 1);
      for (int m = 1; m <= precision; m += 2) s[m] = -s[m];
      for (int i = 0; i < a; ++i) multiply_by_theta(s, 1);
    }
    return s;
  }

 private:
  void check(int power, int n) const {
    if (power < 0 || power > max_power()) throw std::out_of_range("ThetaPowerTable: power out of range");
    if (n < 0 || n > max_index_) throw std::out_of_range("ThetaPowerTable: index out of range");
  }

  int max_index_;
  std::vector<std::vector<BigInt>> table_;
};

/// Theta^a G^b.
struct Monomial {
  int a = 0;
  int b = 0;
  Weight weight() const { return Weight::from_twice(a + 4 * b); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// All (a, b) with a/2 + 2b = k, ordered by increasing b.
inline std::vector<Monomial> weight_monomials(Weight k) {
  std::vector<Monomial> out;
  for (int b = 0; 4 * b <= k.twice(); ++b) out.push_back({k.twice() - 4 * b, b});
  return out;
}

/// Terms of Theta^a G^b = 16^{-b} sum_j C(b,j) (-1)^j T^{a+4b-4j} U^{4j}.
struct PairTerm {
  int t_power;
  int u_power;
  Rational weight;
};

inline std::vector<PairTerm> monomial_pair_terms(const Monomial& mono) {
  std::vector<PairTerm> out;
  Rational scale = rpow(Rational(16), -mono.b);
  for (int j = 0; j <= mono.b; ++j) {
    Rational w = scale * Rational(binomial(mono.b, j));
    if (j & 1) w = -w;
    out.push_back({mono.a + 4 * mono.b - 4 * j, 4 * j, w});
  }
  return out;
}

inline Rational monomial_coefficient(const ThetaPowerTable& table, const Monomial& mono, int n) {
  Rational s = 0;
  for (const auto& t : monomial_pair_terms(mono)) s += t.weight * Rational(table.pair_coefficient(t.t_power, t.u_power, n));
  return s;
}

inline RationalQExpansion monomial_series(const ThetaPowerTable& table, const Monomial& mono, int precision) {
  std::vector<Rational> c(static_cast<std::size_t>(precision) + 1);
  for (const auto& t : monomial_pair_terms(mono)) {
    auto s = table.pair_series(t.t_power, t.u_power, precision);
    for (int n = 0; n <= precision; ++n)
      if (s[n] != 0) c[n] += t.weight * Rational(s[n]);
  }
  return RationalQExpansion(mono.weight(), std::move(c));
}

/// A weight-k form written as sum_j c_j T^{2k-4j} U^{4j}; the cheapest shape
/// for coefficients at isolated large indices.
struct PairCombination {
  Weight weight;
  std::vector<Rational> coeffs;

  Rational coefficient(const ThetaPowerTable& table, int n) const {
    Rational s = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] == 0) continue;
      const int u = 4 * static_cast<int>(j);
      s += coeffs[j] * Rational(table.pair_coefficient(weight.twice() - u, u, n));
    }
    return s;
  }
};

/// Rewrites sum_i coords[i] * monomials[i] in the T^{2k-4j} U^{4j} basis.
inline PairCombination to_pair_combination(Weight k, const std::vector<Monomial>& monomials,
                                           const std::vector<Rational>& coords) {
  if (monomials.size() != coords.size()) throw std::invalid_argument("to_pair_combination: size mismatch");
  PairCombination out{k, std::vector<Rational>(static_cast<std::size_t>(k.twice() / 4) + 1)};
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    if (!(monomials[i].weight() == k)) throw std::invalid_argument("to_pair_combination: weight mismatch");
    if (coords[i] == 0) continue;
    for (const auto& t : monomial_pair_terms(monomials[i])) out.coeffs[t.u_power / 4] += coords[i] * t.weight;
  }
  return out;
}

}  // namespace hiw

#endif  // HIW_THETA_HPP

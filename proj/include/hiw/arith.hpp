#ifndef HIW_ARITH_HPP
#define HIW_ARITH_HPP

// Exact scalar types and elementary number theory shared by every module.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

// Expression templates off: generic code (QExpansion<Coeff>, ternaries, auto)
// needs plain value types.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

/// A weight k stored as the integer 2k, so 13/2 and 12 are both exact.
class Weight {
 public:
  constexpr Weight() = default;
  static constexpr Weight from_twice(int twice) { return Weight(twice); }
  static constexpr Weight integral(int w) { return Weight(2 * w); }

  /// Parses "13/2", "12" or "6.5".
  static Weight parse(const std::string& text) {
    auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        int num = std::stoi(text.substr(0, slash));
        int den = std::stoi(text.substr(slash + 1));
        if (den == 1) return integral(num);
        if (den == 2) return from_twice(num);
      } else if (auto dot = text.find('.'); dot != std::string::npos) {
        double v = std::stod(text);
        int twice = static_cast<int>(v * 2.0 + (v >= 0 ? 0.5 : -0.5));
        if (twice == v * 2.0) return from_twice(twice);
      } else {
        return integral(std::stoi(text));
      }
    } catch (const std::logic_error&) {
    }
    throw std::invalid_argument("not a half-integer weight: " + text);
  }

  constexpr int twice() const { return twice_; }
  constexpr bool is_half_integral() const { return twice_ % 2 != 0; }
  constexpr double value() const { return twice_ / 2.0; }
  /// k - 1/2 for half-integral weight; requires is_half_integral().
  constexpr int lambda() const { return (twice_ - 1) / 2; }
  /// Weight 2k-1 of the Shimura partner.
  constexpr int shimura_weight() const { return twice_ - 1; }
  /// (-1)^{k-1/2}
  constexpr int plus_sign() const { return lambda() % 2 == 0 ? 1 : -1; }

  Rational as_rational() const { return Rational(twice_, 2); }
  std::string str() const {
    return twice_ % 2 == 0 ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

  friend constexpr bool operator==(Weight a, Weight b) { return a.twice_ == b.twice_; }
  friend constexpr auto operator<=>(Weight a, Weight b) { return a.twice_ <=> b.twice_; }
  friend constexpr Weight operator+(Weight a, Weight b) { return Weight(a.twice_ + b.twice_); }

 private:
  constexpr explicit Weight(int twice) : twice_(twice) {}
  int twice_ = 0;
};

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Inverse of a modulo m via extended Euclid; throws if gcd(a, m) != 1.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod_floor(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("inverse_mod: not a unit");
  return mod_floor(old_s, m);
}

/// Jacobi symbol (a|n) for odd positive n. With extended = true the
/// Kronecker extension is used, so n may be even, zero or negative.
inline int jacobi_symbol(std::int64_t a, std::int64_t n, bool extended = false) {
  if (!extended && (n <= 0 || n % 2 == 0))
    throw std::domain_error("jacobi_symbol: n must be odd and positive");
  int result = 1;
  if (extended) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (n < 0) {
      n = -n;
      if (a < 0) result = -result;
    }
    while (n % 2 == 0) {
      n /= 2;
      if (a % 2 == 0) return 0;
      std::int64_t a8 = mod_floor(a, 8);
      if (a8 == 3 || a8 == 5) result = -result;
    }
  }
  std::int64_t x = mod_floor(a, n);
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      std::int64_t n8 = n % 8;
      if (n8 == 3 || n8 == 5) result = -result;
    }
    std::swap(x, n);
    if (x % 4 == 3 && n % 4 == 3) result = -result;
    x %= n;
  }
  return n == 1 ? result : 0;
}

inline int kronecker_symbol(std::int64_t a, std::int64_t n) { return jacobi_symbol(a, n, true); }

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<int> primes_up_to(int n) {
  std::vector<char> sieve(static_cast<std::size_t>(std::max(n + 1, 2)), 1);
  std::vector<int> out;
  for (int i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (long j = static_cast<long>(i) * i; j <= n; j += i) sieve[j] = 0;
  }
  return out;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d * d != n) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline int mobius(std::int64_t n) {
  int mu = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

inline bool is_squarefree(std::int64_t n) { return mobius(n) != 0; }

inline bool is_square(std::int64_t n) {
  if (n < 0) return false;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

inline std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// D = 1 counts as fundamental (trivial character).
inline bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 1) return true;
  if (d == 0) return false;
  std::int64_t m4 = mod_floor(d, 4);
  if (m4 == 1) return is_squarefree(d < 0 ? -d : d);
  if (m4 != 0) return false;
  std::int64_t e = d / 4;
  std::int64_t e4 = mod_floor(e, 4);
  return (e4 == 2 || e4 == 3) && is_squarefree(e < 0 ? -e : e);
}

/// Fundamental discriminants D with |D| <= bound and sign(D) = sign.
inline std::vector<std::int64_t> fundamental_discriminants(std::int64_t bound, int sign) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a <= bound; ++a)
    if (is_fundamental_discriminant(sign * a)) out.push_back(sign * a);
  return out;
}

inline BigInt ipow(const BigInt& base, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

inline Rational rpow(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < (e < 0 ? -e : e); ++i) r *= base;
  return e < 0 ? Rational(1) / r : r;
}

inline BigInt binomial(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace hiw

#endif  // HIW_ARITH_HPP

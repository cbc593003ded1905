#ifndef HIW_NUMBER_FIELD_HPP
#define HIW_NUMBER_FIELD_HPP

// Totally real number fields Q[x]/(P) for Hecke eigenvalue systems, with
// exact arithmetic and high-precision embeddings.

#include "hiw/arith.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

using HighReal =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>, boost::multiprecision::et_off>;

/// Polynomial over Q, coefficients low to high, no trailing zeros (zero = empty).
using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly poly_add(const Poly& a, const Poly& b, int sign = 1) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign > 0 ? b[i] : Rational(-b[i]);
  poly_trim(r);
  return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  poly_trim(r);
  return r;
}

inline Poly poly_scale(const Poly& a, const Rational& s) {
  if (s == 0) return {};
  Poly r = a;
  for (auto& x : r) x *= s;
  return r;
}

/// Quotient and remainder of a by nonzero b.
inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
  if (b.empty()) throw std::domain_error("poly_divmod: division by zero polynomial");
  poly_trim(a);
  const int db = poly_degree(b);
  if (poly_degree(a) < db) return {{}, a};
  Poly q(a.size() - b.size() + 1);
  const Rational lead = b.back();
  for (int i = poly_degree(a); i >= db; --i) {
    Rational c = a[i] / lead;
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  a.resize(db);
  poly_trim(a);
  poly_trim(q);
  return {q, a};
}

inline Poly poly_monic(Poly p) {
  poly_trim(p);
  if (p.empty()) return p;
  Rational lead = p.back();
  for (auto& x : p) x /= lead;
  return p;
}

inline Poly poly_gcd(Poly a, Poly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    auto r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

inline Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long>(i);
  poly_trim(d);
  return d;
}

inline bool poly_squarefree(const Poly& p) { return poly_degree(poly_gcd(p, poly_derivative(p))) == 0; }

inline HighReal to_high(const Rational& q) {
  return HighReal(boost::multiprecision::numerator(q).str()) / HighReal(boost::multiprecision::denominator(q).str());
}

inline HighReal poly_eval(const Poly& p, const HighReal& x) {
  HighReal r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + to_high(p[i]);
  return r;
}

/// Rounds a high-precision value to the nearest integer.
inline BigInt round_to_integer(const HighReal& x) {
  BigInt z;
  mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDN);
  return z;
}

/// All roots of a squarefree polynomial, assumed real; double seeds from the
/// companion matrix, polished by Newton in HighReal. Sorted increasingly.
inline std::vector<HighReal> real_roots(const Poly& poly) {
  Poly p = poly_monic(poly);
  const int n = poly_degree(p);
  if (n < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(static_cast<double>(p[i])));
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -static_cast<double>(p[i]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  Poly dp = poly_derivative(p);
  std::vector<HighReal> roots;
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z)))
      throw std::runtime_error("real_roots: polynomial has a non-real root");
    HighReal x = z.real();
    for (int it = 0; it < 200; ++it) {
      HighReal step = poly_eval(p, x) / poly_eval(dp, x);
      x -= step;
      if (boost::multiprecision::abs(step) <= boost::multiprecision::abs(x) * HighReal("1e-95") + HighReal("1e-95"))
        break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  for (int i = 1; i < n; ++i)
    if (boost::multiprecision::abs(roots[i] - roots[i - 1]) < HighReal("1e-40"))
      throw std::runtime_error("real_roots: Newton polishing merged two roots");
  return roots;
}

/// Monic irreducible factors over Q of a squarefree polynomial with integer
/// coefficients, found by grouping numerical roots; each candidate is verified
/// by exact division.
inline std::vector<Poly> factor_integer_poly(const Poly& poly) {
  Poly rest = poly_monic(poly);
  if (!poly_squarefree(rest)) throw std::invalid_argument("factor_integer_poly: not squarefree");
  std::vector<HighReal> roots = real_roots(rest);
  std::vector<Poly> factors;
  std::vector<bool> used(roots.size(), false);
  const int n = static_cast<int>(roots.size());
  if (n > 20) throw std::invalid_argument("factor_integer_poly: degree too large for subset search");
  for (int first = 0; first < n; ++first) {
    if (used[first]) continue;
    std::vector<int> free_idx;
    for (int i = first + 1; i < n; ++i)
      if (!used[i]) free_idx.push_back(i);
    bool found = false;
    for (int size = 0; size <= static_cast<int>(free_idx.size()) && !found; ++size) {
      // enumerate subsets of free_idx with the given size
      std::vector<int> pick(size);
      for (int i = 0; i < size; ++i) pick[i] = i;
      while (true) {
        std::vector<HighReal> prod{HighReal(1)};
        auto mul_root = [&](const HighReal& r) {
          std::vector<HighReal> next(prod.size() + 1, HighReal(0));
          for (std::size_t i = 0; i < prod.size(); ++i) {
            next[i + 1] += prod[i];
            next[i] -= prod[i] * r;
          }
          prod = std::move(next);
        };
        mul_root(roots[first]);
        for (int i : pick) mul_root(roots[free_idx[i]]);
        Poly cand(prod.size());
        bool near_integral = true;
        for (std::size_t i = 0; i < prod.size(); ++i) {
          BigInt c = round_to_integer(prod[i]);
          if (boost::multiprecision::abs(prod[i] - HighReal(c)) > HighReal("1e-30")) near_integral = false;
          cand[i] = Rational(c);
        }
        if (near_integral) {
          auto [q, r] = poly_divmod(rest, cand);
          if (r.empty()) {
            factors.push_back(cand);
            rest = q;
            used[first] = true;
            for (int i : pick) used[free_idx[i]] = true;
            found = true;
            break;
          }
        }
        int j = size - 1;
        while (j >= 0 && pick[j] == static_cast<int>(free_idx.size()) - size + j) --j;
        if (j < 0) break;
        ++pick[j];
        for (int l = j + 1; l < size; ++l) pick[l] = pick[l - 1] + 1;
      }
    }
    if (!found) throw std::runtime_error("factor_integer_poly: no factor found (coefficients not integral?)");
  }
  return factors;
}

inline std::string poly_to_string(const Poly& p) {
  std::string s;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] == 0) continue;
    if (!s.empty()) s += p[i] > 0 ? " + " : " - ";
    else if (p[i] < 0) s += "-";
    Rational a = boost::multiprecision::abs(p[i]);
    if (a != 1 || i == 0) s += a.str();
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

/// Q[x]/(modulus) with modulus monic irreducible and all roots real.
class NumberField {
 public:
  explicit NumberField(Poly modulus) : modulus_(poly_monic(std::move(modulus))) {
    if (poly_degree(modulus_) < 1) throw std::invalid_argument("NumberField: modulus must have degree >= 1");
    roots_ = real_roots(modulus_);
  }

  static std::shared_ptr<const NumberField> rationals() {
    static const auto q = std::make_shared<const NumberField>(Poly{Rational(0), Rational(1)});
    return q;
  }

  int degree() const { return poly_degree(modulus_); }
  const Poly& modulus() const { return modulus_; }
  const std::vector<HighReal>& roots() const { return roots_; }

  Poly reduce(const Poly& p) const { return poly_divmod(p, modulus_).second; }

 private:
  Poly modulus_;
  std::vector<HighReal> roots_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// Element of a NumberField. The default value is zero and carries no field;
/// it adopts the field of the other operand on first use.
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(FieldPtr field, Poly value) : field_(std::move(field)), value_(field_->reduce(value)) {}
  FieldElem(FieldPtr field, const Rational& c) : field_(std::move(field)) {
    if (c != 0) value_ = {c};
  }
  /// The generator x of the field.
  static FieldElem generator(FieldPtr field) { return FieldElem(field, Poly{Rational(0), Rational(1)}); }

  const FieldPtr& field() const { return field_; }
  const Poly& poly() const { return value_; }
  bool is_zero() const { return value_.empty(); }
  bool is_rational() const { return value_.size() <= 1; }
  Rational rational_value() const {
    if (!is_rational()) throw std::domain_error("FieldElem: not rational");
    return value_.empty() ? Rational(0) : value_[0];
  }

  /// Image under the embedding x -> roots()[i].
  HighReal embed(std::size_t i) const {
    if (value_.empty()) return 0;
    if (value_.size() == 1) return to_high(value_[0]);
    return poly_eval(value_, field_->roots().at(i));
  }

  FieldElem inverse() const {
    if (is_zero()) throw std::domain_error("FieldElem: inverse of zero");
    if (is_rational()) return FieldElem(field_, Rational(1) / value_[0]);
    // extended Euclid: s * value + t * modulus = 1
    Poly r0 = field_->modulus(), r1 = value_;
    Poly s0{}, s1{Rational(1)};
    while (!r1.empty()) {
      auto [q, r] = poly_divmod(r0, r1);
      Poly s = poly_add(s0, poly_mul(q, s1), -1);
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    if (poly_degree(r0) != 0) throw std::domain_error("FieldElem: modulus not irreducible");
    return FieldElem(field_, poly_scale(s0, Rational(1) / r0[0]));
  }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    return FieldElem(common(a, b), poly_add(a.value_, b.value_), 0);
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    return FieldElem(common(a, b), poly_add(a.value_, b.value_, -1), 0);
  }
  friend FieldElem operator-(const FieldElem& a) { return FieldElem(a.field_, poly_scale(a.value_, -1), 0); }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    if (a.is_zero() || b.is_zero()) return FieldElem(common(a, b), Poly{}, 0);
    const FieldPtr& f = common(a, b);
    return FieldElem(f, f->reduce(poly_mul(a.value_, b.value_)), 0);
  }
  friend FieldElem operator*(const FieldElem& a, const Rational& s) { return FieldElem(a.field_, poly_scale(a.value_, s), 0); }
  friend FieldElem operator*(const Rational& s, const FieldElem& a) { return a * s; }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    if (a.field_ && b.field_ && a.field_ != b.field_ && a.field_->modulus() != b.field_->modulus()) return false;
    return a.value_ == b.value_;
  }

  std::string str() const { return poly_to_string(value_); }

 private:
  // already-reduced constructor
  FieldElem(FieldPtr field, Poly value, int) : field_(std::move(field)), value_(std::move(value)) {}

  static const FieldPtr& common(const FieldElem& a, const FieldElem& b) {
    if (a.field_ && b.field_ && a.field_ != b.field_ && a.field_->modulus() != b.field_->modulus())
      throw std::invalid_argument("FieldElem: operands from different fields");
    return a.field_ ? a.field_ : b.field_;
  }

  FieldPtr field_;
  Poly value_;
};

/// A nonzero vector v with sum_i v_i A[i][j] = 0 for all j, normalised so its
/// first nonzero entry is 1; throws unless the left kernel is one-dimensional.
inline std::vector<FieldElem> left_kernel_vector(const std::vector<std::vector<FieldElem>>& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  // Solve A^T v = 0 by Gauss-Jordan on the transpose.
  std::vector<std::vector<FieldElem>> m(cols, std::vector<FieldElem>(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[j][i] = a[i][j];
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < rows && r < cols; ++c) {
    std::size_t p = r;
    while (p < cols && m[p][c].is_zero()) ++p;
    if (p == cols) continue;
    std::swap(m[p], m[r]);
    FieldElem inv = m[r][c].inverse();
    for (auto& x : m[r]) x = x * inv;
    for (std::size_t i = 0; i < cols; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      FieldElem f = m[i][c];
      for (std::size_t j = 0; j < rows; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  if (rows - r != 1) throw std::runtime_error("left_kernel_vector: kernel dimension " + std::to_string(rows - r));
  std::size_t free_c = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(free_c)) != pivot_col.end()) ++free_c;
  FieldPtr field;
  for (const auto& row : a)
    for (const auto& x : row)
      if (x.field()) field = x.field();
  if (!field) field = NumberField::rationals();
  std::vector<FieldElem> v(rows, FieldElem(field, Rational(0)));
  v[free_c] = FieldElem(field, Rational(1));
  for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = -m[i][free_c];
  std::size_t lead = 0;
  while (v[lead].is_zero()) ++lead;
  FieldElem inv = v[lead].inverse();
  for (auto& x : v) x = x * inv;
  return v;
}

}  // namespace hiw

#endif  // HIW_NUMBER_FIELD_HPP

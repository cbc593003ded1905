#ifndef HIW_QEXPANSION_HPP
#define HIW_QEXPANSION_HPP

#include "hiw/arith.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hiw {

/// Truncated Fourier expansion sum_{m <= precision} a(m) e((m + kappa) z / width).
///
/// Coeff is any commutative ring type whose default value is zero
/// (Rational, FieldElem, double, std::complex<double>).
template <class Coeff>
class QExpansion {
 public:
  QExpansion() : coeffs_(1) {}
  QExpansion(Weight weight, std::vector<Coeff> coeffs, int width = 1, Rational parameter = 0)
      : weight_(weight), width_(width), parameter_(std::move(parameter)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("QExpansion: need at least one coefficient");
    if (width_ <= 0) throw std::invalid_argument("QExpansion: width must be positive");
    if (parameter_ < 0 || parameter_ >= 1) throw std::invalid_argument("QExpansion: parameter outside [0,1)");
  }

  static QExpansion zero(Weight weight, int precision) {
    return QExpansion(weight, std::vector<Coeff>(static_cast<std::size_t>(precision) + 1));
  }

  Weight weight() const { return weight_; }
  int width() const { return width_; }
  const Rational& parameter() const { return parameter_; }
  int precision() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }
  std::vector<Coeff>& coeffs() { return coeffs_; }

  const Coeff& operator[](int m) const {
    if (m < 0 || m > precision()) throw std::out_of_range("QExpansion: index beyond precision");
    return coeffs_[static_cast<std::size_t>(m)];
  }
  Coeff& operator[](int m) {
    if (m < 0 || m > precision()) throw std::out_of_range("QExpansion: index beyond precision");
    return coeffs_[static_cast<std::size_t>(m)];
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coeff& c) { return c == Coeff{}; });
  }

  QExpansion truncated(int precision) const {
    if (precision > this->precision()) throw std::out_of_range("QExpansion: cannot extend precision");
    std::vector<Coeff> c(coeffs_.begin(), coeffs_.begin() + precision + 1);
    return QExpansion(weight_, std::move(c), width_, parameter_);
  }

  /// Same function written with a larger width L (L a multiple of width).
  QExpansion rescaled(int new_width) const {
    if (new_width % width_ != 0) throw std::invalid_argument("QExpansion: width must divide new width");
    int f = new_width / width_;
    Rational scaled = parameter_ * f;
    BigInt shift = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
    Rational kappa = scaled - Rational(shift);
    int s = static_cast<int>(shift);
    std::vector<Coeff> c(static_cast<std::size_t>(precision() * f + s) + 1);
    for (int m = 0; m <= precision(); ++m) c[static_cast<std::size_t>(m * f + s)] = coeffs_[m];
    // indices above precision()*f+s are unknown, so the expansion stops there
    return QExpansion(weight_, std::move(c), new_width, kappa);
  }

  QExpansion& operator+=(const QExpansion& o) { return combine(o, 1); }
  QExpansion& operator-=(const QExpansion& o) { return combine(o, -1); }

  QExpansion& operator*=(const Coeff& s) {
    for (auto& c : coeffs_) c = c * s;
    return *this;
  }

  friend QExpansion operator+(QExpansion a, const QExpansion& b) { return a += b; }
  friend QExpansion operator-(QExpansion a, const QExpansion& b) { return a -= b; }
  friend QExpansion operator*(QExpansion a, const Coeff& s) { return a *= s; }
  friend QExpansion operator*(const Coeff& s, QExpansion a) { return a *= s; }

  /// Product of expansions; widths are brought to their lcm, parameters add mod 1.
  friend QExpansion operator*(const QExpansion& a, const QExpansion& b) {
    int width = std::lcm(a.width_, b.width_);
    if (a.width_ != width || b.width_ != width) return a.rescaled(width) * b.rescaled(width);
    Rational total = a.parameter_ + b.parameter_;
    int carry = total >= 1 ? 1 : 0;
    int prec = std::min(a.precision(), b.precision()) + carry;
    std::vector<Coeff> c(static_cast<std::size_t>(prec) + 1);
    for (int i = 0; i <= a.precision(); ++i) {
      if (a.coeffs_[i] == Coeff{}) continue;
      for (int j = 0; j <= b.precision() && i + j + carry <= prec; ++j)
        c[i + j + carry] = c[i + j + carry] + a.coeffs_[i] * b.coeffs_[j];
    }
    return QExpansion(a.weight_ + b.weight_, std::move(c), width, total - carry);
  }

  friend bool operator==(const QExpansion& a, const QExpansion& b) {
    return a.weight_ == b.weight_ && a.width_ == b.width_ && a.parameter_ == b.parameter_ &&
           a.coeffs_ == b.coeffs_;
  }

 private:
  QExpansion& combine(const QExpansion& o, int sign) {
    if (!(weight_ == o.weight_) || width_ != o.width_ || parameter_ != o.parameter_)
      throw std::invalid_argument("QExpansion: incompatible operands");
    int prec = std::min(precision(), o.precision());
    coeffs_.resize(static_cast<std::size_t>(prec) + 1);
    for (int m = 0; m <= prec; ++m)
      coeffs_[m] = sign > 0 ? coeffs_[m] + o.coeffs_[m] : coeffs_[m] - o.coeffs_[m];
    return *this;
  }

  Weight weight_{};
  int width_ = 1;
  Rational parameter_ = 0;
  std::vector<Coeff> coeffs_;
};

using RationalQExpansion = QExpansion<Rational>;

}  // namespace hiw

#endif  // HIW_QEXPANSION_HPP

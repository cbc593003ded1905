#ifndef HIW_LOG_SCALED_HPP
#define HIW_LOG_SCALED_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace hiw {

/// Real number stored as sign * exp(logmag). sign == 0 means exactly zero.
class LogScaled {
 public:
  using Real = long double;

  LogScaled() = default;
  static LogScaled from_log(Real logmag, int sign = 1) {
    LogScaled r;
    r.sign_ = sign == 0 ? 0 : (sign > 0 ? 1 : -1);
    r.logmag_ = r.sign_ == 0 ? 0 : logmag;
    return r;
  }
  static LogScaled from_value(Real x) {
    if (x == 0) return {};
    if (!std::isfinite(x)) throw std::domain_error("LogScaled: non-finite value");
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
  }
  LogScaled(double x) : LogScaled(from_value(x)) {}  // NOLINT: implicit by design
  static LogScaled zero() { return {}; }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  /// log|x|; -inf for zero.
  Real log_abs() const { return sign_ == 0 ? -std::numeric_limits<Real>::infinity() : logmag_; }
  Real value() const { return sign_ == 0 ? 0 : sign_ * std::exp(logmag_); }
  double to_double() const { return static_cast<double>(value()); }

  LogScaled abs() const { return from_log(logmag_, sign_ == 0 ? 0 : 1); }
  LogScaled pow(Real e) const {
    if (sign_ < 0) throw std::domain_error("LogScaled::pow of a negative number");
    if (sign_ == 0) {
      if (e > 0) return {};
      throw std::domain_error("LogScaled::pow(0, e <= 0)");
    }
    return from_log(logmag_ * e, 1);
  }
  LogScaled sqrt() const { return pow(0.5L); }

  friend LogScaled operator*(const LogScaled& a, const LogScaled& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return {};
    return from_log(a.logmag_ + b.logmag_, a.sign_ * b.sign_);
  }
  friend LogScaled operator/(const LogScaled& a, const LogScaled& b) {
    if (b.sign_ == 0) throw std::domain_error("LogScaled: division by zero");
    if (a.sign_ == 0) return {};
    return from_log(a.logmag_ - b.logmag_, a.sign_ * b.sign_);
  }
  friend LogScaled operator-(const LogScaled& a) { return from_log(a.logmag_, -a.sign_); }
  friend LogScaled operator+(const LogScaled& a, const LogScaled& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const LogScaled& hi = a.logmag_ >= b.logmag_ ? a : b;
    const LogScaled& lo = a.logmag_ >= b.logmag_ ? b : a;
    Real t = std::exp(lo.logmag_ - hi.logmag_);  // in (0, 1]
    if (hi.sign_ == lo.sign_) return from_log(hi.logmag_ + std::log1p(t), hi.sign_);
    if (t == 1) return {};
    return from_log(hi.logmag_ + std::log1p(-t), hi.sign_);
  }
  friend LogScaled operator-(const LogScaled& a, const LogScaled& b) { return a + (-b); }
  LogScaled& operator+=(const LogScaled& o) { return *this = *this + o; }
  LogScaled& operator*=(const LogScaled& o) { return *this = *this * o; }

  friend bool operator<(const LogScaled& a, const LogScaled& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    return a.sign_ > 0 ? a.logmag_ < b.logmag_ : a.logmag_ > b.logmag_;
  }
  friend bool operator>(const LogScaled& a, const LogScaled& b) { return b < a; }
  friend bool operator<=(const LogScaled& a, const LogScaled& b) { return !(b < a); }
  friend bool operator>=(const LogScaled& a, const LogScaled& b) { return !(a < b); }

  std::string str() const {
    if (sign_ == 0) return "0";
    const Real l10 = logmag_ / std::log(Real(10));
    const Real e = std::floor(l10);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.12Lfe%+lld", sign_ < 0 ? "-" : "", std::pow(Real(10), l10 - e),
                  static_cast<long long>(e));
    return buf;
  }

 private:
  int sign_ = 0;
  Real logmag_ = 0;
};

inline LogScaled exp_scaled(long double x) { return LogScaled::from_log(x, 1); }

/// A value with a non-negative bound on its absolute error.
struct CertifiedValue {
  LogScaled value;
  LogScaled err;

  double to_double() const { return value.to_double(); }
  double error() const { return err.to_double(); }
  /// err / |value|, or +inf at zero.
  double relative_error() const {
    if (value.is_zero()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(std::exp(err.log_abs() - value.log_abs()));
  }

  friend CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
    return {a.value + b.value, a.err + b.err};
  }
  friend CertifiedValue operator*(const CertifiedValue& a, const CertifiedValue& b) {
    return {a.value * b.value, a.value.abs() * b.err + b.value.abs() * a.err + a.err * b.err};
  }
  friend CertifiedValue operator*(const CertifiedValue& a, const LogScaled& s) {
    return {a.value * s, a.err * s.abs()};
  }
};

}  // namespace hiw

#endif  // HIW_LOG_SCALED_HPP

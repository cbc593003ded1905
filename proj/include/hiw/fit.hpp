#ifndef HIW_FIT_HPP
#define HIW_FIT_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hiw {

/// Least-squares line y = intercept + slope * x.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double residual_rms = 0;
  std::size_t points = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need two or more paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("linear_fit: abscissae are all equal");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  f.points = x.size();
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  return f;
}

}  // namespace hiw

#endif  // HIW_FIT_HPP

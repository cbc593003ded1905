#ifndef HIW_AMPLIFIER_HPP
#define HIW_AMPLIFIER_HPP

// Amplifiers over M1 = {p^2} and M2 = {p^4}, Lambda <= p < 2 Lambda odd, and the
// geometric side 3(k-1)/(4 pi) sum_l |y_l| l^{-1/2} sum_{gamma in G_l(4)} (1 + u(gamma z, z))^{-k/2}.

#include "hiw/arith.hpp"
#include "hiw/bergman.hpp"
#include "hiw/hecke.hpp"
#include "hiw/lattice.hpp"
#include "hiw/log_scaled.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiw {

enum class AmplifierSet { M1, M2 };

inline std::string to_string(AmplifierSet s) { return s == AmplifierSet::M1 ? "M1" : "M2"; }

struct AmplifierSpec {
  double lambda = 0;
  AmplifierSet kind = AmplifierSet::M1;
  std::vector<int> primes;
  /// m -> x_m = +-1
  std::map<std::int64_t, int> x;
  /// l -> y_l, nonzero entries only
  std::map<std::int64_t, double> y;
  /// every nonzero y_l has one of the listed shapes
  bool shapes_ok = true;
};

inline std::int64_t ipow64(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Odd primes in [Lambda, 2 Lambda).
inline std::vector<int> amplifier_primes(double lambda) {
  std::vector<int> out;
  for (int p : primes_up_to(static_cast<int>(std::ceil(2 * lambda)))) {
    if (p == 2 || p < lambda || p >= 2 * lambda) continue;
    out.push_back(p);
  }
  return out;
}

/// x_m = sign(A(m)) and y_l from the pair structure: for M1, y_1 = #P, y_{p^4} = 1, y_{p^2 q^2} = 2 x x;
/// for M2 additionally y_{p^4} = 1 from d = p, y_{p^8} = 1 and y_{p^4 q^4} = 2 x x.
inline AmplifierSpec amplifier_build(double lambda, AmplifierSet kind, const std::function<double(std::int64_t)>& A) {
  if (lambda < 3) throw std::invalid_argument("amplifier_build: Lambda >= 3 required");
  AmplifierSpec s{lambda, kind, amplifier_primes(lambda), {}, {}, true};
  if (s.primes.empty()) throw std::runtime_error("amplifier_build: no odd primes in [Lambda, 2 Lambda)");
  const int e = kind == AmplifierSet::M1 ? 2 : 4;
  for (int p : s.primes) {
    const std::int64_t m = ipow64(p, e);
    const double a = A(m);
    s.x[m] = a < 0 ? -1 : 1;
  }
  s.y[1] = static_cast<double>(s.primes.size());
  for (std::size_t i = 0; i < s.primes.size(); ++i) {
    const std::int64_t pi = s.primes[i];
    const int xi = s.x[ipow64(pi, e)];
    s.y[ipow64(pi, 2 * e)] += 1;
    if (kind == AmplifierSet::M2) s.y[ipow64(pi, 4)] += 1;
    for (std::size_t j = i + 1; j < s.primes.size(); ++j) {
      const std::int64_t pj = s.primes[j];
      s.y[ipow64(pi * pj, e)] += 2.0 * xi * s.x[ipow64(pj, e)];
    }
  }
  for (auto it = s.y.begin(); it != s.y.end();)
    it = it->second == 0 ? s.y.erase(it) : std::next(it);
  // shape audit
  for (const auto& [l, v] : s.y) {
    if (l == 1) {
      s.shapes_ok = s.shapes_ok && std::fabs(v) <= static_cast<double>(s.primes.size());
      continue;
    }
    bool ok = false;
    for (int p : s.primes)
      for (int q : s.primes) {
        if (kind == AmplifierSet::M1 && l == ipow64(static_cast<std::int64_t>(p) * q, 2)) ok = true;
        if (kind == AmplifierSet::M2 && (l == ipow64(p, 4) || l == ipow64(static_cast<std::int64_t>(p) * q, 4))) ok = true;
      }
    s.shapes_ok = s.shapes_ok && ok && std::fabs(v) <= 2;
  }
  return s;
}

/// A_1(n^2) = lambda(n^2) n^{-(k-1)} = F^(n) / n^{k-1} for odd n.
inline double normalised_eigenvalue(const HalfIntegralForm& f, std::int64_t m) {
  const std::int64_t n = isqrt(m);
  if (n * n != m || n % 2 == 0) throw std::invalid_argument("normalised_eigenvalue: m must be an odd square");
  return f.partner.numeric(static_cast<int>(n)) / std::pow(static_cast<double>(n), f.weight.value() - 1);
}

/// |sum_m x_m A(m)|
inline double amplifier_weight(const AmplifierSpec& s, const std::function<double(std::int64_t)>& A) {
  double t = 0;
  for (const auto& [m, xm] : s.x) t += xm * A(m);
  return std::fabs(t);
}

struct AmplifiedTerm {
  std::int64_t l = 0;
  double y_l = 0;
  double u_cut = 0;
  std::size_t matrices = 0;
  /// sum over gamma with u <= u_cut of (1 + u)^{-k/2}
  double partial = 0;
  /// estimate of the rest from #{u <= U} ~ 4 sigma(l) U
  double tail_estimate = 0;
};

struct AmplifiedRhs {
  /// Partial sum over u <= u_cut; a lower bound for the full right side since every term is positive.
  LogScaled value;
  double tail_estimate = 0;
  std::vector<AmplifiedTerm> terms;
};

struct AmplifiedOptions {
  /// Default 20 log k / k.
  double u_cut = 0;
  /// Per-l cap on the expected ball population 4 sigma(l) u; u_cut is lowered to meet it.
  double matrix_budget = 4e5;
};

inline double sigma1(std::int64_t n) {
  double s = 0;
  for (auto d : divisors(n)) s += static_cast<double>(d);
  return s;
}

inline AmplifiedRhs amplified_rhs(Complex z, Weight k, const AmplifierSpec& s, AmplifiedOptions opt = {}) {
  const double kk = k.value();
  if (opt.u_cut <= 0) opt.u_cut = 20 * std::log(kk) / kk;
  AmplifiedRhs out;
  double total = 0;
  for (const auto& [l, yl] : s.y) {
    AmplifiedTerm t;
    t.l = l;
    t.y_l = yl;
    const double sig = sigma1(l);
    t.u_cut = std::min(opt.u_cut, opt.matrix_budget / (4 * sig));
    for_each_in_ball({l, z, z, t.u_cut, 4}, [&](const Matrix2& g) {
      t.partial += std::pow(1 + u_invariant(g.act(z), z), -kk / 2);
      ++t.matrices;
    });
    t.tail_estimate = 4 * sig * std::pow(1 + t.u_cut, 1 - kk / 2) / (kk / 2 - 1);
    const double w = std::fabs(yl) / std::sqrt(static_cast<double>(l));
    total += w * t.partial;
    out.tail_estimate += bergman_prefactor(k) * w * t.tail_estimate;
    out.terms.push_back(t);
  }
  out.value = LogScaled(bergman_prefactor(k) * total);
  return out;
}

struct AmplifiedCheck {
  Complex w;
  /// |sum_m x_m A(m)|
  double weight = 0;
  LogScaled lhs;
  AmplifiedRhs rhs;
  bool holds = false;
};

/// weight^2 (y^{k/2}|(f|xi)(w)|)^2 / <f,f> against the truncated right side at w; the frame
/// does not enter the right side since W4 and V4 normalise G_l(4) for odd l.
inline AmplifiedCheck amplified_check(const LogScaled& value, double norm, Complex w, Weight k, const AmplifierSpec& s,
                                      double weight, AmplifiedOptions opt = {}, double tol = 1e-6) {
  AmplifiedCheck c;
  c.w = w;
  c.weight = weight;
  c.lhs = LogScaled(weight * weight) * value * value / LogScaled(norm);
  c.rhs = amplified_rhs(w, k, s, opt);
  c.holds = c.lhs.log_abs() <= c.rhs.value.log_abs() + std::log1p(tol);
  return c;
}

/// The four terms 1/Lambda, y k^{-1/2}, Lambda^2 k^{-1/2}, Lambda^6 k^{-1}.
inline std::array<double, 4> sup_bookkeeping(double lambda, double y, Weight k) {
  const double kk = k.value();
  return {1 / lambda, y / std::sqrt(kk), lambda * lambda / std::sqrt(kk), std::pow(lambda, 6) / kk};
}

}  // namespace hiw

#endif  // HIW_AMPLIFIER_HPP

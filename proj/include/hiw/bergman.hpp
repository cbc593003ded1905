#ifndef HIW_BERGMAN_HPP
#define HIW_BERGMAN_HPP

// Reproducing kernel of S_k(Gamma_0(4)) two ways: the geometric series
// 3(k-1)/(4 pi) sum_{gamma in Gamma_0(4)} j_Theta(gamma, z)^{-2k} ((gamma z - conj w) / 2i)^{-k}
// and sum_j f_j(z) conj f_j(w) over an orthonormal basis from a quadrature Gram matrix.

#include "hiw/evaluation.hpp"
#include "hiw/lattice.hpp"
#include "hiw/petersson.hpp"
#include "hiw/plus_space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hiw {

/// Theta(z) = theta_3(2z).
inline ComplexL theta_value(Complex z) { return theta_pair(z).first; }

class MultiplierInstability : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// j_Theta(gamma, z) = Theta(gamma z) / Theta(z) for gamma in Gamma_0(4).
inline Complex j_theta(const Matrix2& g, Complex z) {
  if (g.det() != 1 || mod_floor(g.c, 4) != 0) throw std::invalid_argument("j_theta: gamma must lie in Gamma_0(4)");
  const ComplexL den = theta_value(z);
  if (std::abs(den) < 1e-6L) throw MultiplierInstability("j_theta: |Theta(z)| < 1e-6");
  const ComplexL q = theta_value(g.act(z)) / den;
  return {static_cast<double>(q.real()), static_cast<double>(q.imag())};
}

struct KernelValue {
  Complex value;
  /// Estimated tail beyond u_cut from the hyperbolic lattice-point density, not a proof.
  double error = 0;
  std::size_t terms = 0;
};

inline double bergman_prefactor(Weight k) { return 3 * (k.value() - 1) / (4 * std::numbers::pi); }

/// sum over gamma in Gamma_0(4) with u(gamma z, w) <= u_cut; both signs of gamma are summed.
/// Tail: |term| = (1 + u)^{-k/2} (y v)^{-k/2}, and #{u <= U} ~ 4U (area 4 pi U over vol 2 pi, twice for +-).
inline KernelValue bergman_geometric(Complex z, Complex w, Weight k, double u_cut) {
  KernelValue out;
  const double kk = k.value();
  Complex sum = 0;
  for_each_in_ball({1, z, w, u_cut, 4}, [&](const Matrix2& g) {
    const Complex gz = g.act(z);
    const Complex jt = j_theta(g, z);
    Complex term = principal_power((gz - std::conj(w)) / Complex(0, 2), k);
    term = 1.0 / term;
    // j_Theta^{-2k}, 2k an odd integer
    Complex jp = 1;
    for (int i = 0; i < k.twice(); ++i) jp *= jt;
    sum += term / jp;
    ++out.terms;
  });
  const double pre = bergman_prefactor(k);
  out.value = pre * sum;
  const double scale = std::pow(z.imag() * w.imag(), -kk / 2);
  out.error = pre * scale * 4 * std::pow(1 + u_cut, 1 - kk / 2) / (kk / 2 - 1);
  return out;
}

/// u_cut with the tail estimate below rel_tol times the diagonal lower bound pre (yv)^{-k/2}.
inline double bergman_cutoff(Weight k, double rel_tol) {
  const double e = k.value() / 2 - 1;
  if (e <= 0) throw std::invalid_argument("bergman_cutoff: k > 2 required");
  return std::pow(rel_tol * e / 4, -1 / e) - 1;
}

/// Orthonormal basis data for the full cusp space: pair forms and the inverse Gram matrix.
struct SpectralKernel {
  Weight weight;
  std::vector<PairForm> basis;
  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd gram_inverse;

  static SpectralKernel build(Weight k, int precision = 60) {
    auto table = std::make_shared<const ThetaPowerTable>(k.twice(), precision);
    SpaceBasis sb = cusp_basis(*table, k, precision);
    SpectralKernel sk{k, {}, {}, {}};
    for (int i = 0; i < sb.dimension(); ++i) sk.basis.push_back(pair_form(sb.pair_form(static_cast<std::size_t>(i))));
    const auto n = static_cast<Eigen::Index>(sk.basis.size());
    sk.gram = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        sk.gram(i, j) = petersson_inner_theta(sk.basis[i], sk.basis[j]);
        sk.gram(j, i) = std::conj(sk.gram(i, j));
      }
    sk.gram_inverse = sk.gram.llt().solve(Eigen::MatrixXcd::Identity(n, n));
    return sk;
  }

  /// sum_j f_j(z) conj f_j(w) = sum_{i,j} g_i(z) (G^{-1})_{ji} conj g_j(w).
  Complex operator()(Complex z, Complex w) const {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::VectorXcd gz(n), gw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      gz(i) = basis[i](z);
      gw(i) = std::conj(basis[i](w));
    }
    return (gz.transpose() * gram_inverse.transpose() * gw)(0, 0);
  }

  int dimension() const { return static_cast<int>(basis.size()); }
};

}  // namespace hiw

#endif  // HIW_BERGMAN_HPP

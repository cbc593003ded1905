#include "hiw/salie.hpp"
#include "hiw/hecke.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace hiw;

namespace {

using Oracle = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<40>>;

/// Legendre symbol by Euler's criterion.
int legendre_euler(std::int64_t a, std::int64_t p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  std::int64_t r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

/// Jacobi symbol as the product of Legendre symbols over the factorisation of odd n.
int jacobi_by_factoring(std::int64_t a, std::int64_t n) {
  int s = 1;
  for (std::int64_t p = 3; n > 1; p += 2)
    while (n % p == 0) {
      s *= legendre_euler(a, p);
      n /= p;
    }
  return s;
}

/// Direct summation of H_c(n, m) in 40-digit arithmetic, inverses by search.
std::complex<double> salie_oracle(std::int64_t c, std::int64_t n, std::int64_t m, Weight k) {
  const std::int64_t q = 4 * c;
  const Oracle pi = boost::math::constants::pi<Oracle>();
  Oracle re = 0, im = 0;
  for (std::int64_t d = 1; d < q; ++d) {
    if (std::gcd(d, q) != 1) continue;
    std::int64_t inv = 1;
    while (d * inv % q != 1) ++inv;
    int chi = jacobi_by_factoring(q, d);
    // (-4|d)^k = e^{i pi k} when d = 3 mod 4
    Oracle tw = d % 4 == 3 ? pi * k.twice() / 2 : Oracle(0);
    Oracle ang = 2 * pi * Oracle(n * d + m * inv) / q + tw;
    re += chi * cos(ang);
    im += chi * sin(ang);
  }
  // (1 - (-1)^{k-1/2} i)(1 + (4|c)) / 4c, (4|c) = 1 for odd c and 0 otherwise
  Oracle pre = Oracle(c % 2 == 1 ? 2 : 1) / q;
  double s = k.lambda() % 2 == 0 ? 1 : -1;
  std::complex<double> sum(static_cast<double>(re * pre), static_cast<double>(im * pre));
  return std::complex<double>(1, -s) * sum;
}

const Weight k13 = Weight::parse("13/2");

}  // namespace

TEST(Salie, LeadingTermAtWeightThirteenHalves) {
  auto h = salie_h({1, 1, 1, k13});
  EXPECT_NEAR(h.real(), -1, 1e-14);
  EXPECT_NEAR(h.imag(), 0, 1e-14);
  auto o = salie_oracle(1, 1, 1, k13);
  EXPECT_NEAR(std::abs(h - o), 0, 1e-14);
}

TEST(Salie, MatchesDirectSummationOracle) {
  for (auto ks : {"5/2", "7/2", "13/2", "25/2", "41/2"}) {
    Weight k = Weight::parse(ks);
    for (std::int64_t c = 1; c <= 30; ++c)
      for (auto [n, m] : {std::pair<int, int>{1, 1}, {4, 5}, {8, 12}, {3, 7}, {13, 1}}) {
        auto h = salie_h({c, n, m, k});
        auto o = salie_oracle(c, n, m, k);
        EXPECT_LT(std::abs(h - o), 1e-12) << ks << " c=" << c << " n=" << n << " m=" << m;
        EXPECT_LE(std::abs(h), salie_h_bound() + 1e-12);
      }
  }
}

TEST(Salie, EvenCHalvesPrefactorRatherThanVanishingAtThreeModFour) {
  // The prefactor 1 + (4|c) is 2 for every odd c; c = 3 mod 4 does not kill H_c.
  EXPECT_GT(std::abs(salie_h({3, 1, 1, k13})), 0.5);
  EXPECT_GT(std::abs(salie_h({7, 1, 1, k13})), 0.5);
}

TEST(Salie, RealOnAdmissibleIndices) {
  for (auto ks : {"5/2", "13/2", "21/2"}) {
    Weight k = Weight::parse(ks);
    for (std::int64_t c = 1; c <= 60; ++c)
      for (std::int64_t n = 1; n <= 12; ++n) {
        if (!plus_admissible(k, n)) continue;
        auto h = salie_h({c, n, n, k});
        EXPECT_LT(std::abs(h.imag()), 1e-12) << ks << " " << c << " " << n;
      }
  }
}

TEST(Poincare, ImaginaryPartVanishes) {
  for (int m : {1, 4, 5, 8}) {
    auto g = poincare_coeff(k13, m, m, 1e-10);
    EXPECT_LT(std::fabs(g.imaginary), 1e-10 * std::max(1.0, std::fabs(g.value.to_double())));
  }
  auto g = poincare_coeff(k13, 1, 5, 1e-10);
  EXPECT_LT(std::fabs(g.imaginary), 1e-10);
}

TEST(Poincare, VanishesWhereThePlusSpaceIsZero) {
  // S_k^+ = 0 for k = 9/2, 11/2, 15/2, so every Poincare coefficient is 0. Lower
  // weights converge too slowly in c for a certified check.
  for (auto ks : {"9/2", "11/2", "15/2"}) {
    Weight k = Weight::parse(ks);
    ASSERT_EQ(level_one_cusp_dimension(k.shimura_weight()), 0);
    for (int m = 1; m <= 5; ++m) {
      if (!plus_admissible(k, m)) continue;
      auto g = poincare_coeff(k, m, m, 1e-6);
      EXPECT_LE(std::fabs(g.value.to_double()), g.value.error()) << ks << " m=" << m;
      EXPECT_LT(std::fabs(g.value.to_double()), 1e-6) << ks << " m=" << m;
    }
  }
}

TEST(Poincare, LargeWeightApproachesDeltaTerm) {
  double prev = 1;
  for (auto ks : {"21/2", "29/2", "37/2", "45/2", "61/2"}) {
    auto g = poincare_coeff(Weight::parse(ks), 1, 1, 1e-14);
    double dev = std::fabs(g.bessel_part);
    EXPECT_LT(dev, prev) << ks;
    EXPECT_NEAR(g.value.to_double(), 2.0 / 3, dev + 1e-14);
    prev = dev;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Poincare, TruncationHonesty) {
  for (auto [ks, m, n] : {std::tuple<const char*, int, int>{"13/2", 1, 1}, {"13/2", 4, 9}, {"17/2", 5, 5}, {"21/2", 1, 4}}) {
    Weight k = Weight::parse(ks);
    auto g = poincare_coeff(k, m, n, 1e-6);
    auto fine = poincare_coeff(k, m, n, 1e-300, 2 * g.c_max);
    EXPECT_EQ(fine.c_max, 2 * g.c_max);
    EXPECT_FALSE(fine.converged);
    EXPECT_LE(std::fabs(fine.value.to_double() - g.value.to_double()), g.tail_bound + g.value.error())
        << ks << " " << m << " " << n;
  }
}

TEST(Poincare, RejectsInadmissibleIndices) {
  EXPECT_THROW(poincare_coeff(k13, 2, 1, 1e-8), std::invalid_argument);
  EXPECT_THROW(poincare_coeff(k13, 1, 3, 1e-8), std::invalid_argument);
  EXPECT_THROW(poincare_coeff(Weight::parse("7/2"), 1, 1, 1e-8), std::invalid_argument);
}

TEST(SpectralAverage, RatiosMatchTheExactEigenform) {
  // dim S_{13/2}^+ = 1, so the ratio of spectral averages is |f(m)|^2 / |f(1)|^2.
  auto f = cusp_plus_basis(k13, 40).forms.at(0);
  auto base = spectral_average(k13, 1);
  for (int m : {4, 5, 8, 9, 12}) {
    auto s = spectral_average(k13, m);
    double want = static_cast<double>(f[m] * f[m] / (f[1] * f[1]));
    EXPECT_NEAR(s.to_double() / base.to_double() / want, 1, 1e-8) << m;
    EXPECT_GT(s.to_double(), 0);
  }
}

TEST(SpectralAverage, InferredNormIsIndependentOfM) {
  auto f = cusp_plus_basis(k13, 60).forms.at(0);
  double first = 0;
  int used = 0;
  for (int m = 1; used < 10; ++m) {
    if (!plus_admissible(k13, m) || f[m] == 0) continue;
    double c = static_cast<double>(f[m]);
    double norm = c * c / spectral_average(k13, m).to_double();
    if (used == 0) first = norm;
    EXPECT_NEAR(norm / first, 1, 1e-5) << m;
    ++used;
  }
}

#include "hiw/arith.hpp"
#include "hiw/log_scaled.hpp"
#include "hiw/special.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hiw;

namespace {

using Oracle = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<60>>;

/// (x/2)^rho / Gamma(rho+1) * sum_m (-x^2/4)^m / (m! (rho+1)_m) in 60 digits.
Oracle series_j(Oracle rho, Oracle x) {
  Oracle h = x * x / 4, term = 1, sum = 1;
  for (int m = 1; m < 2000; ++m) {
    term *= -h / (m * (rho + m));
    sum += term;
    if (m > h && abs(term) < 1e-70 * abs(sum)) break;
  }
  return pow(x / 2, rho) / boost::multiprecision::tgamma(rho + 1) * sum;
}

double rel_err(const CertifiedValue& got, const Oracle& want) {
  return static_cast<double>(abs((Oracle(static_cast<double>(got.value.value())) - want) / want));
}

}  // namespace

TEST(LogScaled, RoundTripAcrossSixHundredDecades) {
  for (int e = -300; e <= 300; e += 7) {
    long double x = 3.7L * std::pow(10.0L, e);
    LogScaled v = LogScaled::from_value(x);
    EXPECT_LT(std::fabs((v.value() - x) / x), 1e-14L) << e;
  }
}

TEST(LogScaled, ArithmeticFarBeyondDoubleRange) {
  LogScaled big = exp_scaled(5000), tiny = exp_scaled(-5000);
  EXPECT_NEAR(static_cast<double>((big * tiny).value()), 1.0, 1e-15);
  LogScaled s = big + big;
  EXPECT_NEAR(static_cast<double>(s.log_abs() - big.log_abs()), std::log(2.0), 1e-15);
  EXPECT_TRUE((big - big).is_zero());
  EXPECT_LT(tiny, big);
  EXPECT_LT(-big, tiny);
  EXPECT_EQ(LogScaled(-2.0).sign(), -1);
  EXPECT_NEAR(LogScaled(3.0).pow(2).to_double(), 9.0, 1e-13);
}

TEST(CertifiedValue, FirstOrderPropagation) {
  CertifiedValue a{LogScaled(2.0), LogScaled(0.01)}, b{LogScaled(3.0), LogScaled(0.02)};
  auto p = a * b;
  EXPECT_NEAR(p.to_double(), 6.0, 1e-14);
  EXPECT_NEAR(p.error(), 2 * 0.02 + 3 * 0.01 + 0.0002, 1e-14);
  EXPECT_NEAR((a + b).error(), 0.03, 1e-15);
}

TEST(UnitPower, PrincipalBranch) {
  auto i13 = unit_power(-1, Weight::parse("13/2"));
  EXPECT_EQ(i13, std::complex<double>(0, 1));
  EXPECT_EQ(unit_power(-1, Weight::parse("5/2")), std::complex<double>(0, 1));
  EXPECT_EQ(unit_power(-1, Weight::parse("7/2")), std::complex<double>(0, -1));
  EXPECT_EQ(unit_power(1, Weight::parse("7/2")), std::complex<double>(1, 0));
  for (int t = -9; t <= 9; ++t) {
    auto z = unit_power(-1, t);
    auto want = std::polar(1.0, std::numbers::pi * t / 2);
    EXPECT_NEAR(std::abs(z - want), 0, 1e-14) << t;
  }
  EXPECT_THROW(unit_power(2, 1), std::invalid_argument);
}

TEST(GammaHalf, ExactForms) {
  auto g = gamma_half(Weight::parse("1/2"));
  EXPECT_TRUE(g.times_sqrt_pi);
  EXPECT_EQ(g.rational_part, Rational(1));
  EXPECT_NEAR(g.value.to_double(), std::sqrt(std::numbers::pi), 1e-15);
  g = gamma_half(Weight::parse("5/2"));
  EXPECT_EQ(g.rational_part, Rational(3, 4));
  EXPECT_NEAR(g.value.to_double(), 0.75 * std::sqrt(std::numbers::pi), 1e-14);
  g = gamma_half(Weight::integral(12));
  EXPECT_FALSE(g.times_sqrt_pi);
  EXPECT_EQ(g.rational_part, Rational(39916800));
  EXPECT_NEAR(g.value.to_double() / 39916800.0, 1.0, 1e-14);
  EXPECT_THROW(gamma_half(Weight::from_twice(0)), std::domain_error);
}

TEST(GammaHalf, LogDomainAgainstOracle) {
  for (int t = 1; t <= 400; t += 3) {
    Oracle want = boost::multiprecision::lgamma(Oracle(t) / 2);
    long double got = gamma_half(Weight::from_twice(t)).value.log_abs();
    EXPECT_LT(std::fabs(static_cast<double>(Oracle(static_cast<double>(got)) - want)) /
                  std::max(1.0, std::fabs(static_cast<double>(want))),
              1e-14)
        << t;
  }
}

TEST(LogGamma, ComplexMatchesRealAndRecurrence) {
  for (double x : {0.3, 1.0, 2.5, 7.25, 40.0}) {
    EXPECT_NEAR(log_gamma(std::complex<double>(x, 0)).real(), std::lgamma(x), 1e-12) << x;
  }
  std::complex<double> z(0.75, 3.2);
  auto lhs = log_gamma(z + 1.0) - log_gamma(z);
  auto d = std::exp(lhs) - z;
  EXPECT_LT(std::abs(d), 1e-12);
  // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
  double t = 2.3;
  double m = 2 * log_gamma(std::complex<double>(0.5, t)).real();
  EXPECT_NEAR(m, std::log(std::numbers::pi / std::cosh(std::numbers::pi * t)), 1e-12);
}

TEST(BesselHalf, ClosedFormsAndDomain) {
  auto j = bessel_j_half(Weight::parse("1/2"), std::numbers::pi / 2);
  EXPECT_NEAR(j.to_double(), 2 / std::numbers::pi, 1e-15);
  auto j32 = bessel_j_half(Weight::parse("3/2"), 1.0);
  EXPECT_LT(rel_err(j32, series_j(Oracle(1.5), Oracle(1))), 1e-12);
  EXPECT_THROW(bessel_j_half(Weight::parse("3/2"), 0.0), std::domain_error);
  EXPECT_THROW(bessel_j_half(Weight::parse("3/2"), -1.0), std::domain_error);
  EXPECT_THROW(bessel_j_half(Weight::integral(2), 1.0), std::domain_error);
}

TEST(BesselHalf, DeepOrderTinyMagnitude) {
  // J_{99/2}(1) is about 1e-78, and J_{199/2}(1e-3) underflows a double.
  auto j = bessel_j_half(Weight::parse("99/2"), 1.0);
  EXPECT_LT(rel_err(j, series_j(Oracle(99) / 2, Oracle(1))), 1e-12);
  auto bound = std::exp(-99.0 / 2 * std::log(2.0) - std::lgamma(99.0 / 2 + 1));
  EXPECT_LT(j.to_double(), 2 * bound);
  auto tiny = bessel_j_half(Weight::parse("199/2"), 1e-3);
  Oracle want = series_j(Oracle(199) / 2, Oracle(1) / 1000);
  Oracle got_log(static_cast<double>(tiny.value.log_abs()));
  EXPECT_LT(static_cast<double>(abs(got_log - log(want))), 1e-12);
}

TEST(BesselHalf, GridAgainstSixtyDigitSeries) {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<int> order(0, 99);
  std::uniform_real_distribution<double> arg(0.01, 50.0);
  double worst = 0;
  int samples = 0;
  while (samples < 200) {
    int n = order(rng);
    double x = arg(rng);
    Oracle want = series_j(Oracle(2 * n + 1) / 2, Oracle(x));
    // Skip points within 1e-4 of a zero; relative error is undefined there.
    Oracle scale = series_j(Oracle(2 * n + 1) / 2, Oracle(x) * (1 + Oracle(1) / 1000));
    if (abs(want) < 1e-4 * abs(scale) && abs(want) < 1e-4) continue;
    auto got = bessel_j_half(Weight::from_twice(2 * n + 1), x);
    double e = rel_err(got, want);
    worst = std::max(worst, e);
    EXPECT_LT(e, 1e-12) << "rho=" << n << ".5 x=" << x;
    EXPECT_LT(e, got.relative_error() + 1e-15);
    ++samples;
  }
  RecordProperty("worst_rel_err", std::to_string(worst));
}

TEST(SSum, GeometricCase) {
  auto s = s_sum(0, 1, 1);
  EXPECT_NEAR(s.to_double(), 1 / (std::numbers::e - 1), 1e-15);
  // kappa non-integral starts at the fractional part
  auto f = s_sum(0, 1, 0.25);
  EXPECT_NEAR(f.to_double(), std::exp(-0.25) / (1 - std::exp(-1.0)), 1e-15);
  EXPECT_THROW(s_sum(1, 0, 1), std::domain_error);
}

TEST(SSum, ClosedFormAlphaOne) {
  // sum_{t>=1} t e^{-beta t} = e^{-beta} / (1 - e^{-beta})^2
  for (double beta : {0.01, 0.3, 2.0}) {
    auto s = s_sum(1, beta, 3);
    double g = std::exp(-beta) / std::pow(1 - std::exp(-beta), 2);
    EXPECT_NEAR(s.to_double() / g, 1, 1e-12) << beta;
  }
}

TEST(SSum, RefinementStaysWithinReportedError) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(0.0, 30.0), b(0.05, 5.0), k(0.01, 20.0);
  for (int i = 0; i < 50; ++i) {
    double alpha = a(rng), beta = b(rng), kappa = k(rng);
    auto s = s_sum(alpha, beta, kappa);
    // Refined sum: explicit summation far past the certified stopping point.
    long double t0 = kappa - std::ceil(kappa) + 1;
    long double peak = alpha / beta;
    long double lmax = alpha * std::log(std::max<long double>(peak, t0)) - beta * std::max<long double>(peak, t0);
    long double acc = 0;
    for (long j = 0; j < 200000; ++j) {
      long double t = t0 + j;
      acc += std::exp(alpha * std::log(t) - beta * t - lmax);
    }
    long double refined_log = std::log(acc) + lmax;
    long double diff = std::fabs(std::exp(refined_log - s.value.log_abs()) - 1);
    EXPECT_LE(diff, s.relative_error() + 1e-13L) << alpha << " " << beta << " " << kappa;
    EXPECT_LT(s.relative_error(), 1e-13);
  }
}

TEST(SSum, FirstLemmaBoundOnRandomGrid) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> a(0.0, 50.0), b(0.01, 10.0), k(0.001, 30.0);
  for (int i = 0; i < 100; ++i) {
    double alpha = a(rng), beta = b(rng), kappa = k(rng);
    auto s = s_sum(alpha, beta, kappa);
    EXPECT_LE(s.value, s_sum_bound(alpha, beta)) << alpha << " " << beta << " " << kappa;
  }
}

TEST(SSum, SecondLemmaBoundForUnitRangeKappa) {
  // For kappa in (0, 1] the sum starts at t = kappa, and alpha <= beta kappa puts
  // every term past the peak.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> b(0.05, 60.0), k(0.001, 1.0), u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    double beta = b(rng), kappa = k(rng);
    double alpha = beta * kappa * u(rng);
    auto s = s_sum(alpha, beta, kappa);
    EXPECT_LE(s.value, s_sum_bound_large_kappa(alpha, beta, kappa)) << alpha << " " << beta << " " << kappa;
  }
  EXPECT_THROW(s_sum_bound_large_kappa(10, 1, 1), std::domain_error);
}

TEST(SSum, SecondLemmaBoundFailsWhenPeakPrecedesKappa) {
  // With kappa > 1 the terms between t0 and kappa include the peak at alpha / beta,
  // which kappa^alpha e^{-beta kappa} does not cover.
  double alpha = 33.752054901447735, beta = 3.2797640213983223, kappa = 35.191950174088632;
  ASSERT_LE(alpha, beta * kappa);
  EXPECT_GT(s_sum(alpha, beta, kappa).value, s_sum_bound_large_kappa(alpha, beta, kappa));
}

TEST(ExpDecay, HoldsOnRandomGrid) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(0.01, 100.0), b(0.01, 10.0), extra(1.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    double alpha = a(rng), beta = b(rng);
    double kappa = 6 * alpha / beta * extra(rng);
    auto r = expdecay_check(alpha, beta, kappa);
    EXPECT_TRUE(r.holds) << alpha << " " << beta << " " << kappa;
  }
  EXPECT_THROW(expdecay_check(1, 1, 5), std::domain_error);
}

TEST(BesselSmallArg, BoundaryAndSeriesOracle) {
  auto r = check_bessel_smallarg({2.0}, {1.0});
  EXPECT_EQ(r.evaluated, 1);
  EXPECT_TRUE(std::isfinite(r.max_ratio));
  EXPECT_GT(r.max_ratio, 0);
  Oracle j = series_j(Oracle(2), Oracle(1));
  Oracle want = j * boost::multiprecision::tgamma(Oracle(3)) / pow(Oracle(1) / 2, 2);
  EXPECT_NEAR(r.max_ratio, static_cast<double>(want), 1e-12);

  auto r2 = check_bessel_smallarg({10.5}, {1.0});
  EXPECT_LT(r2.max_ratio, 2);

  auto bad = check_bessel_smallarg({1.0}, {1.0});
  EXPECT_EQ(bad.rejected, 1);
  EXPECT_EQ(bad.evaluated, 0);
}

TEST(BesselSmallArg, FullGridBoundedByTwo) {
  std::vector<double> rhos, xs;
  for (int t = 1; t <= 199; t += 2) rhos.push_back(t / 2.0);
  for (int i = 1; i <= 70; ++i) xs.push_back(i / 10.0);
  auto r = check_bessel_smallarg(rhos, xs);
  EXPECT_GT(r.evaluated, 1000);
  EXPECT_GT(r.rejected, 0);
  EXPECT_LE(r.max_ratio, 2.0);
  EXPECT_LE(r.max_ratio, 1.0 + 1e-12);
  RecordProperty("max_ratio", std::to_string(r.max_ratio));
}

TEST(Jacobi, Examples) {
  EXPECT_EQ(jacobi_symbol(2, 7, false), 1);
  for (int a = -20; a <= 20; ++a) EXPECT_EQ(jacobi_symbol(a, 1, false), 1);
  EXPECT_EQ(kronecker_symbol(-4, 3), -1);
  EXPECT_THROW(jacobi_symbol(3, 8, false), std::domain_error);
}

TEST(Jacobi, AgainstSquaresModPrime) {
  for (int p : {3, 5, 7, 11, 13, 101}) {
    std::vector<bool> sq(p, false);
    for (int x = 1; x < p; ++x) sq[x * x % p] = true;
    for (int a = 0; a < 3 * p; ++a) {
      int want = a % p == 0 ? 0 : (sq[a % p] ? 1 : -1);
      EXPECT_EQ(jacobi_symbol(a, p, false), want) << a << " " << p;
    }
  }
}

#include "hiw/hecke.hpp"

#include <gtest/gtest.h>

using namespace hiw;

namespace {

// Delta = q prod (1 - q^n)^24 by direct polynomial arithmetic.
std::vector<BigInt> delta_product(int prec) {
  std::vector<BigInt> s(prec + 1);
  s[0] = 1;
  for (int n = 1; n <= prec; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (int i = prec; i >= n; --i) s[i] -= s[i - n];
  std::vector<BigInt> d(prec + 1);
  for (int i = 1; i <= prec; ++i) d[i] = s[i - 1];
  return d;
}

std::shared_ptr<const ThetaPowerTable> shared_table(int power, int index) {
  static std::map<std::pair<int, int>, std::shared_ptr<const ThetaPowerTable>> cache;
  auto& t = cache[{power, index}];
  if (!t) t = std::make_shared<const ThetaPowerTable>(power, index);
  return t;
}

}  // namespace

TEST(MillerBasis, Weight12MatchesDeltaProduct) {
  auto b = miller_basis(12, 30);
  ASSERT_EQ(b.size(), 1u);
  auto d = delta_product(30);
  for (int n = 0; n <= 30; ++n) EXPECT_EQ(b[0][n], Rational(d[n])) << n;
  EXPECT_EQ(b[0][1], 1);
  EXPECT_EQ(b[0][2], -24);
  EXPECT_EQ(b[0][3], 252);
  EXPECT_EQ(b[0][4], -1472);
}

TEST(MillerBasis, Dimensions) {
  EXPECT_TRUE(miller_basis(14, 20).empty());
  auto b24 = miller_basis(24, 20);
  ASSERT_EQ(b24.size(), 2u);
  EXPECT_EQ(b24[0][1], 1);
  EXPECT_EQ(b24[0][2], 0);
  EXPECT_EQ(b24[1][1], 0);
  EXPECT_EQ(b24[1][2], 1);
  for (int w = 12; w <= 60; w += 2) EXPECT_EQ(static_cast<int>(miller_basis(w, 12).size()), level_one_cusp_dimension(w));
  for (auto& f : miller_basis(36, 40))
    for (auto& c : f.coeffs()) EXPECT_EQ(boost::multiprecision::denominator(c), 1);
}

TEST(HeckeIntegral, DeltaEigenvalue) {
  auto delta = miller_basis(12, 40)[0];
  auto t = hecke_integral(delta, 12, 2);
  for (int n = 0; n <= t.precision(); ++n) EXPECT_EQ(t[n], Rational(-24) * delta[n]);
  auto zero = RationalQExpansion::zero(Weight::integral(12), 20);
  EXPECT_TRUE(hecke_integral(zero, 12, 5).is_zero());
  EXPECT_THROW(hecke_integral(miller_basis(12, 3)[0], 12, 5), std::invalid_argument);
}

TEST(HeckeIntegral, Weight24CharpolyIrrational) {
  auto b = miller_basis(24, 40);
  auto m = detail::level_one_hecke_matrix(b, 24, 2);
  auto cp = characteristic_polynomial(m);
  ASSERT_EQ(cp.size(), 3u);
  for (auto& c : cp) EXPECT_EQ(boost::multiprecision::denominator(c), 1);
  EXPECT_EQ(cp[0], Rational(-20468736));
  EXPECT_EQ(cp[1], Rational(-1080));
  EXPECT_EQ(factor_integer_poly(cp).size(), 1u);  // irreducible over Q
}

TEST(HeckePlus, Weight13Over2EigenvalueIsTau3) {
  Weight k = Weight::from_twice(13);
  ThetaPowerTable table(13, 9 * 40);
  auto basis = cusp_plus_basis(table, k, 9 * 40);
  ASSERT_EQ(basis.dimension(), 1);
  auto f = basis.forms[0];
  auto tf = hecke_plus(f, k, 3);
  ASSERT_EQ(tf.precision(), 40);
  for (int n = 0; n <= 40; ++n) EXPECT_EQ(tf[n], Rational(252) * f[n]) << n;
  EXPECT_TRUE(hecke_plus(RationalQExpansion::zero(k, 50), k, 3).is_zero());
  EXPECT_THROW(hecke_plus(f, k, 2), std::invalid_argument);
}

TEST(HeckePlus, MiddleTermVanishesOnMultiplesOfP) {
  // Coefficient accessor picking out a(n) only: T(9) at n = 3 sees a(27) and no middle term.
  Weight k = Weight::from_twice(13);
  auto a = [](std::int64_t n) { return n == 3 ? Rational(1) : Rational(0); };
  EXPECT_EQ(detail::hecke_plus_at<Rational>(a, k, 3, 3), 0);
  auto b = [](std::int64_t n) { return n == 1 ? Rational(1) : Rational(0); };
  // (1|3) = 1 and 3^{k-3/2} = 3^5
  EXPECT_EQ(detail::hecke_plus_at<Rational>(b, k, 3, 1), 243);
}

TEST(Eigenbasis, Weight13Over2) {
  auto forms = eigenbasis_plus(shared_table(13, 4000), Weight::from_twice(13));
  ASSERT_EQ(forms.size(), 1u);
  const auto& f = forms[0];
  EXPECT_EQ(f.partner.weight, 12);
  EXPECT_EQ(f.partner.coefficient(2).rational_value(), -24);
  EXPECT_EQ(f.partner.coefficient(3).rational_value(), 252);
  EXPECT_EQ(f.coefficient(1).rational_value(), 1);
  EXPECT_EQ(f.coefficient(4).rational_value(), -56);
  auto match = match_eigenvalues(f);
  EXPECT_TRUE(match.all_match);
  EXPECT_GE(match.primes_checked.size(), 5u);
  EXPECT_EQ(f.eigenvalues.at(9).rational_value(), 252);
}

TEST(Eigenbasis, EmptyAtSmallWeight) {
  EXPECT_TRUE(eigenbasis_plus(shared_table(5, 200), Weight::from_twice(5)).empty());
}

TEST(Eigenbasis, Weight25Over2ConjugatePair) {
  HeckeDiagnostics diag;
  auto forms = eigenbasis_plus(shared_table(25, 4000), Weight::from_twice(25), {}, &diag);
  ASSERT_EQ(forms.size(), 2u);
  ASSERT_EQ(diag.factors.size(), 1u);
  EXPECT_EQ(poly_degree(diag.factors[0]), 2);
  EXPECT_EQ(forms[0].field, forms[1].field);
  EXPECT_NE(forms[0].embedding, forms[1].embedding);
  // Sum and product of F^(2) over the conjugates are the T(2) char-poly coefficients.
  HighReal a = forms[0].partner.coefficient(2).embed(0), b = forms[1].partner.coefficient(2).embed(1);
  EXPECT_LT(static_cast<double>(boost::multiprecision::abs(a + b - 1080)), 1e-20);
  EXPECT_LT(static_cast<double>(boost::multiprecision::abs(a * b + 20468736) / 20468736), 1e-20);
  for (const auto& f : forms) EXPECT_TRUE(match_eigenvalues(f).all_match);
}

TEST(Eigenbasis, SweepEigenvalueSystemsAndDeligne) {
  auto table = shared_table(41, 9000);
  for (int twice = 5; twice <= 41; twice += 2) {
    Weight k = Weight::from_twice(twice);
    auto forms = eigenbasis_plus(table, k);
    EXPECT_EQ(static_cast<int>(forms.size()), level_one_cusp_dimension(k.shimura_weight())) << twice;
    for (const auto& f : forms) {
      auto m = match_eigenvalues(f);
      EXPECT_TRUE(m.all_match) << twice << " first mismatch p=" << m.first_mismatch;
      for (int p : primes_up_to(50)) {
        double fp = std::abs(f.partner.numeric(p));
        double bound = 2 * std::pow(p, (k.shimura_weight() - 1) / 2.0);
        EXPECT_LE(fp, bound * (1 + 1e-12)) << twice << " p=" << p;
      }
    }
  }
}

TEST(SqrCoeff, Weight13Over2) {
  auto forms = eigenbasis_plus(shared_table(13, 4000), Weight::from_twice(13));
  const auto& f = forms[0];
  auto r1 = verify_sqrcoeff(f, 1, 1);
  EXPECT_TRUE(r1.pass);
  // n = 2: f^(4) = f^(1) (F^(2) - 2^5)
  EXPECT_EQ(f.coefficient(4), f.coefficient(1) * (f.partner.coefficient(2) - FieldElem(f.field, Rational(32))));
  auto r = verify_sqrcoeff(f, 1, 50);
  EXPECT_TRUE(r.pass) << r.first_failure;
  EXPECT_EQ(r.checked, 50);
  EXPECT_TRUE(verify_sqrcoeff(f, 5, 20).pass);
  EXPECT_TRUE(verify_sqrcoeff(f, 8, 20).pass);
  EXPECT_THROW(verify_sqrcoeff(f, 9, 5), std::invalid_argument);
  EXPECT_THROW(verify_sqrcoeff(f, -3, 5), std::invalid_argument);
}

TEST(SqrCoeff, DetectsCorruptedPartner) {
  auto forms = eigenbasis_plus(shared_table(13, 4000), Weight::from_twice(13));
  auto f = forms[0];
  f.partner.coeffs[5] = f.partner.coeffs[5] + FieldElem(f.field, Rational(1));
  auto r = verify_sqrcoeff(f, 1, 10);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_failure, 5);
}

TEST(Multiplicativity, Weight13Over2) {
  auto forms = eigenbasis_plus(shared_table(13, 4000), Weight::from_twice(13));
  const auto& f = forms[0];
  EXPECT_TRUE(multiplicativity_check(f, 1, 7).exact_pass);
  EXPECT_TRUE(multiplicativity_check(f, 3, 5).exact_pass);
  EXPECT_TRUE(multiplicativity_check(f, 3, 3).exact_pass);
  // lambda(9)^2 = lambda(81) + 3^{11}
  EXPECT_EQ(f.lambda_square(3) * f.lambda_square(3),
            f.lambda_square(9) + FieldElem(f.field, Rational(177147)));
  EXPECT_FALSE(multiplicativity_check(f, 3, 3, DivisorWeight::Literal).exact_pass);
  EXPECT_TRUE(multiplicativity_check(f, 3, 5, DivisorWeight::Literal).exact_pass);
}

#include "hiw/evaluation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace hiw;

namespace {

struct Fixture {
  HalfIntegralForm form;
  FrameSet frames;
  PairForm theta;
};

const Fixture& fixture(const char* ks) {
  static std::map<std::string, Fixture> cache;
  auto it = cache.find(ks);
  if (it != cache.end()) return it->second;
  const Weight k = Weight::parse(ks);
  auto table = std::make_shared<const ThetaPowerTable>(k.twice(), 1600);
  auto forms = eigenbasis_plus(table, k, {}, nullptr);
  const auto& f = forms.at(0);
  Fixture fx{f, FrameSet::from_coefficients(f.numeric_coefficients(1500), k), pair_form(f)};
  return cache.emplace(ks, std::move(fx)).first->second;
}

double theta_side(const Fixture& fx, Complex z) {
  return std::pow(z.imag(), fx.form.weight.value() / 2) * std::abs(fx.theta(z));
}

}  // namespace

TEST(CuspFrame, WidthsAndParameters) {
  const Weight k13 = Weight::parse("13/2"), k15 = Weight::parse("15/2");
  EXPECT_EQ(CuspFrame::make(Frame::I, k13).width, 1);
  EXPECT_EQ(CuspFrame::make(Frame::W4, k13).width, 4);
  EXPECT_EQ(CuspFrame::make(Frame::V4, k13).width, 1);
  EXPECT_DOUBLE_EQ(CuspFrame::make(Frame::I, k13).parameter, 0);
  EXPECT_DOUBLE_EQ(CuspFrame::make(Frame::W4, k13).parameter, 0);
  EXPECT_DOUBLE_EQ(CuspFrame::make(Frame::V4, k13).parameter, 0.25);
  EXPECT_DOUBLE_EQ(CuspFrame::make(Frame::V4, k15).parameter, 0.75);
}

TEST(CuspFrame, LemmaConstant) {
  // (2|13) = -1, (2|17) = 1
  EXPECT_NEAR(cusp_lemma_constant(Weight::parse("13/2")), -std::pow(2.0, -6), 1e-16);
  EXPECT_NEAR(cusp_lemma_constant(Weight::parse("17/2")), std::pow(2.0, -8), 1e-16);
}

TEST(CuspExpansion, AgreesWithThetaRouteEverywhere) {
  const auto& fx = fixture("13/2");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-2, 2), ly(std::log(0.02), std::log(3.0));
  std::map<Frame, int> seen;
  for (int i = 0; i < 60; ++i) {
    Complex z(x(rng), std::exp(ly(rng)));
    FramePoint p;
    auto v = eval_anywhere(fx.frames, z, &p);
    ++seen[p.frame];
    const double th = theta_side(fx, z);
    EXPECT_NEAR(v.value.to_double() / th, 1, 1e-9) << z;
  }
  EXPECT_GT(seen[Frame::I], 0);
  EXPECT_GT(seen[Frame::W4], 0);
  EXPECT_GT(seen[Frame::V4], 0);
}

TEST(CuspExpansion, NearTheHalfCusp) {
  const auto& fx = fixture("13/2");
  for (double eps : {0.05, 0.02, 0.01}) {
    Complex z(0.5 + eps / 3, eps);
    FramePoint p;
    auto v = eval_anywhere(fx.frames, z, &p);
    EXPECT_EQ(p.frame, Frame::V4);
    EXPECT_NEAR(v.value.to_double() / theta_side(fx, z), 1, 1e-9);
  }
}

TEST(CuspExpansion, AutomorphyUnderW4) {
  // (Im W4 z)^{k/2} |f(W4 z)| from the plain expansion equals y^{k/2} |(f|W4)(z)|.
  for (auto ks : {"13/2", "17/2", "21/2"}) {
    const auto& fx = fixture(ks);
    const CuspFrame w4 = CuspFrame::make(Frame::W4, fx.form.weight);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x(-0.5, 0.5), y(0.35, 1.0);
    for (int i = 0; i < 10; ++i) {
      Complex z(x(rng), y(rng));
      auto lhs = eval_at_cusp(fx.frames.at(Frame::I), w4.act(z));
      auto rhs = eval_at_cusp(fx.frames.at(Frame::W4), z);
      EXPECT_NEAR(lhs.value.to_double() / rhs.value.to_double(), 1, 1e-6) << ks << " " << z;
    }
  }
}

TEST(CuspExpansion, AutomorphyUnderV4) {
  for (auto ks : {"13/2", "17/2", "21/2"}) {
    const auto& fx = fixture(ks);
    const CuspFrame v4 = CuspFrame::make(Frame::V4, fx.form.weight);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> x(-0.5, 0.5), y(0.9, 2.0);
    for (int i = 0; i < 10; ++i) {
      Complex z(x(rng), y(rng));
      const Complex w = v4.act(z);
      auto rhs = eval_at_cusp(fx.frames.at(Frame::V4), z);
      EXPECT_NEAR(theta_side(fx, w) / rhs.value.to_double(), 1, 1e-6) << ks << " " << z;
    }
  }
}

TEST(CuspExpansion, W4IsAnInvolution) {
  for (auto ks : {"13/2", "17/2", "21/2"}) {
    const auto& fx = fixture(ks);
    const CuspFrame w4 = CuspFrame::make(Frame::W4, fx.form.weight);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> x(-0.5, 0.5), y(0.4, 1.2);
    for (int i = 0; i < 10; ++i) {
      Complex z(x(rng), y(rng));
      auto twice = eval_at_cusp(fx.frames.at(Frame::W4), w4.act(z));
      auto plain = eval_at_cusp(fx.frames.at(Frame::I), z);
      EXPECT_NEAR(twice.value.to_double() / plain.value.to_double(), 1, 1e-8) << ks << " " << z;
    }
  }
}

TEST(CuspExpansion, V4CoefficientFilter) {
  for (auto ks : {"13/2", "17/2", "21/2"}) {
    const auto& fx = fixture(ks);
    const auto& e = fx.frames.at(Frame::V4);
    EXPECT_DOUBLE_EQ(e.step, 0.25);
    const int residue = fx.form.weight.plus_sign() == 1 ? 1 : 3;
    int nonzero = 0;
    for (int m = 0; m <= e.max_index(); ++m) {
      if (std::abs(e.coeffs[m]) == 0) continue;
      ++nonzero;
      EXPECT_EQ(m % 4, residue) << ks << " m=" << m;
    }
    EXPECT_GT(nonzero, 100);
  }
}

TEST(CuspExpansion, ZeroFormHasSignZero) {
  const Weight k = Weight::parse("13/2");
  auto fs = FrameSet::from_coefficients(std::vector<double>(200, 0.0), k);
  for (Frame fr : {Frame::I, Frame::W4, Frame::V4}) {
    auto v = eval_at_cusp(fs.at(fr), Complex(0.1, 1.0));
    EXPECT_EQ(v.value.value.sign(), 0);
    EXPECT_TRUE(v.value.value.is_zero());
  }
}

TEST(CuspExpansion, TruncationHonesty) {
  const auto& fx = fixture("17/2");
  for (Frame fr : {Frame::I, Frame::W4, Frame::V4}) {
    const auto& e = fx.frames.at(fr);
    for (double y : {std::sqrt(3.0) / 8, 0.5, 1.0, 3.0}) {
      const Complex z(0.123, y);
      auto base = eval_at_cusp(e, z);
      auto fine = eval_at_cusp(e, z, std::min(2 * base.terms, e.max_index()));
      const double dlog = std::fabs(std::log(fine.value.to_double()) - std::log(base.value.to_double()));
      EXPECT_LE(dlog, base.value.relative_error() + 1e-15) << to_string(fr) << " y=" << y;
    }
  }
}

TEST(CuspExpansion, ReportsPrecisionShortfall) {
  const Weight k = Weight::parse("13/2");
  std::vector<double> a(50, 1.0);
  auto e = cusp_expansion(a, k, Frame::I);
  try {
    eval_at_cusp(e, Complex(0, 0.01));
    FAIL() << "expected PrecisionShortfall";
  } catch (const PrecisionShortfall& s) {
    EXPECT_EQ(s.required_index, required_index(k, 1.0, 0.01));
    EXPECT_GT(s.required_index, 49);
  }
}

TEST(LocateFrame, CoversTheGamma04Domain) {
  // Random points of the six SL_2(Z)-translates of F land in a frame strip with Im w >= sqrt3/8,
  // and the frame point maps back to a Gamma_0(4)-equivalent of z (same invariant value).
  const auto& fx = fixture("13/2");
  const Matrix2 S{0, -1, 1, 0};
  auto T = [](std::int64_t j) { return Matrix2{1, j, 0, 1}; };
  const std::array<Matrix2, 6> reps{Matrix2{1, 0, 0, 1}, S, S * T(1), S * T(2), S * T(3), S * T(2) * S};
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> x(-0.5, 0.5), y(std::sqrt(3.0) / 2, 3.0);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int i = 0; i < 100; ++i) {
    Complex z0(x(rng), y(rng));
    if (std::abs(z0) < 1) continue;
    const Complex z = reps[pick(rng)].act(z0);
    const FramePoint p = locate_frame(z);
    EXPECT_GE(p.w.imag(), std::sqrt(3.0) / 8 - 1e-12);
    const Complex back = CuspFrame::make(p.frame, fx.form.weight).act(p.w);
    EXPECT_NEAR(theta_side(fx, back) / theta_side(fx, z), 1, 1e-9);
  }
}

TEST(Reduction, LandsInTheFundamentalDomain) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> x(-5, 5), ly(-6, 1);
  for (int i = 0; i < 200; ++i) {
    const Complex z(x(rng), std::exp(ly(rng)));
    auto r = reduce_to_fundamental_domain(z);
    EXPECT_LE(std::fabs(r.z.real()), 0.5 + 1e-12);
    EXPECT_GE(std::abs(r.z), 1 - 1e-12);
    EXPECT_EQ(r.to_fd.det(), 1);
    EXPECT_LT(std::abs(r.to_fd.act(z) - r.z), 1e-9 * std::max(1.0, std::abs(r.z)));
  }
}

#include <orbitcount.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace orbitcount;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(ExpectedLambda, Examples) {
  EXPECT_EQ(expected_lambda(make_preset("zsqrt2").scenario), Rational(1));
  EXPECT_EQ(expected_lambda(make_preset("model-quadric").scenario), Rational(1));
  EXPECT_EQ(expected_lambda(make_preset("lipschitz").scenario), Rational(2));
  ScenarioSpec s = make_preset("model-quadric").scenario;
  Rational h(1, 2);
  RMatrix g{{0, 0, 0, h}, {0, -1, 0, 0}, {0, 0, -1, 0}, {h, 0, 0, 0}};
  s.payload = make_section(g, RVec{Rational(1), Rational(0), Rational(0), Rational(1)});
  EXPECT_EQ(expected_lambda(s), Rational(2));
}

TEST(FitPower, ExactPowerLaw) {
  auto f = fit_power([](double r) { return 3 * r * r; }, FitWindow{10, 1000, 16});
  EXPECT_NEAR(f.c_hat, 3, 3e-10);
  EXPECT_NEAR(f.lambda_hat, 2, 2e-10);
  EXPECT_NEAR(f.residual_rms, 0, 1e-10);
  EXPECT_EQ(f.samples, 16);
  auto fixed = fit_power([](double r) { return 0.7 * std::pow(r, 1.5); }, FitWindow{5, 5000, 8}, 1.5);
  EXPECT_TRUE(fixed.lambda_fixed);
  EXPECT_NEAR(fixed.c_hat, 0.7, 7e-11);
}

TEST(FitPower, RescalingOnlyMovesTheConstant) {
  auto S = [](double r) { return 1.25 * std::pow(r, 1.7); };
  const double alpha = 3.5;
  auto a = fit_power(S, FitWindow{10, 1e4, 16});
  auto b = fit_power([&](double r) { return S(alpha * r); }, FitWindow{10, 1e4, 16});
  EXPECT_NEAR(a.lambda_hat, b.lambda_hat, 1e-10);
  EXPECT_NEAR(b.c_hat, a.c_hat * std::pow(alpha, a.lambda_hat), 1e-8);
}

TEST(FitPower, BoundedNoise) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> noise(64);
  for (auto& v : noise) v = 20 * u(rng);
  auto S = [&](double r) { return 0.9 * r + noise[static_cast<std::size_t>(r) % noise.size()]; };
  auto f = fit_power(S, FitWindow{1e3, 1e5, 16});
  EXPECT_GE(f.lambda_hat, 0.95);
  EXPECT_LE(f.lambda_hat, 1.05);
  EXPECT_GE(f.residual_rms, 0);
}

TEST(FitPower, Errors) {
  EXPECT_THROW(fit_power([](double) { return 0.0; }, FitWindow{10, 100, 16}), InvalidArgument);
  EXPECT_THROW(fit_power([](double r) { return r; }, FitWindow{10, 100, 7}), InvalidArgument);
  EXPECT_THROW(fit_power([](double r) { return r; }, FitWindow{100, 10, 16}), InvalidArgument);
  CountSeries empty;
  EXPECT_THROW(fit_power(empty, FitWindow{10, 100, 16}), InvalidArgument);
}

TEST(FitRlogr, Examples) {
  auto f = fit_rlogr([](double r) { return 2 * r * std::log(r); }, FitWindow{10, 1e4, 16});
  EXPECT_NEAR(f.c_hat, 2, 1e-12);
  EXPECT_NEAR(f.spread, 0, 1e-12);
  auto c = fit_rlogr([](double) { return 5.0; }, FitWindow{1e6, 1e8, 16});
  EXPECT_LT(c.c_hat, 1e-6);
  EXPECT_THROW(fit_rlogr([](double r) { return r; }, FitWindow{1, 100, 16}), InvalidArgument);
}

TEST(FitRlogr, HarmonicAggregationStabilizes) {
  // S_prim(r) = r aggregated with d = 1: S_all(r) = sum_p floor(r / p)
  auto S = [](double r) {
    long long n = static_cast<long long>(r), s = 0;
    for (long long p = 1; p <= n; ++p) s += n / p;
    return static_cast<double>(s);
  };
  auto lo = fit_rlogr(S, FitWindow{1e2, 1e3, 8});
  auto hi = fit_rlogr(S, FitWindow{1e4, 1e5, 8});
  EXPECT_LT(std::abs(hi.c_hat - 1), std::abs(lo.c_hat - 1));
  EXPECT_LT(hi.spread, lo.spread);
}

TEST(FitOnSeries, PowerLawSeriesFromCsvLikeData) {
  CountSeries s;
  for (long long k = 1; k <= 2000; ++k) {
    s.levels.push_back(k);
    s.n_all.push_back(2 * k - 1);  // S(r) = r^2 at integers
    s.n_prim.push_back(0);
    s.exact.push_back(true);
  }
  auto f = fit_power(s, FitWindow{10, 2000, 16});
  // the integer floor of sample radii perturbs this slightly
  EXPECT_NEAR(f.lambda_hat, 2, 0.01);
  auto fx = fit_power(s, default_window(2000), 2.0);
  EXPECT_NEAR(fx.c_hat, 1, 0.01);
  EXPECT_THROW(fit_power(s, FitWindow{10, 4000, 16}), InvalidArgument);
}

TEST(PredictedConstant, Examples) {
  EXPECT_NEAR(predicted_constant_ideal(0, 1, 1.0, 1, 4, -4), pi / 4, 1e-12);
  EXPECT_NEAR(predicted_constant_ideal(2, 0, std::log(1 + std::sqrt(2.0)), 1, 2, 8), 0.62323, 5e-6);
  EXPECT_NEAR(predicted_constant_ideal(2, 0, std::log(1 + std::sqrt(2.0)), 1, 2, 8),
              std::log(1 + std::sqrt(2.0)) / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(predicted_constant_ideal(2, 0, 1.0, 1, 2, 8, 3), InvalidArgument);
  EXPECT_THROW(predicted_constant_ideal(0, 1, 1.0, 1, 4, 4), InvalidArgument);
  EXPECT_THROW(predicted_constant_ideal(2, 0, 1.0, 0, 2, 8), InvalidArgument);
  EXPECT_THROW(predicted_constant_ideal(2, 0, 1.0, 1, 2, 0), InvalidArgument);
}

TEST(PredictedConstant, InvariantsFromOrders) {
  auto z = zsqrt2_order();
  auto fz = quadratic_invariants(z, unit_group(z), 1);
  ASSERT_TRUE(fz);
  EXPECT_EQ(fz->disc, 8);
  EXPECT_NEAR(predicted_constant_ideal(*fz), 0.62323, 5e-6);
  auto g = gauss_order();
  auto fg = quadratic_invariants(g, unit_group(g), 1);
  ASSERT_TRUE(fg);
  EXPECT_EQ(fg->omega, 4);
  EXPECT_NEAR(predicted_constant_ideal(*fg), pi / 4, 1e-12);
  // Z[sqrt 3]: fundamental unit has norm +1, orbits of norm k are not ideal classes
  auto z3 = make_order("zsqrt3", quadratic_algebra(3), 1);
  EXPECT_FALSE(quadratic_invariants(z3, unit_group(z3), 1));
  // Z[sqrt 5] is not the maximal order
  auto z5 = make_order("zsqrt5", quadratic_algebra(5), 1);
  EXPECT_FALSE(quadratic_invariants(z5, unit_group(z5), 1));
}

TEST(PredictedConstant, GaussCircleTailMean) {
  // density of the ideal oracle itself at s = 1e5
  const long long s = 100000;
  long long total = ideal_count_quadratic(-4, s);
  EXPECT_NEAR(static_cast<double>(total) / s, pi / 4, 0.01 * pi / 4);
}

TEST(ZetaCorrection, Examples) {
  EXPECT_NEAR(zeta_correction(4), std::pow(pi, 4) / 90, 1e-9);
  EXPECT_NEAR(zeta_correction(2), pi * pi / 6, 1e-9);
  EXPECT_THROW(zeta_correction(1), InvalidArgument);
}

TEST(EmpiricalDelta, ReportedForNoisyPowerLaw) {
  // S = r^2 + r^1.2: the error term has exponent 1.2, i.e. delta about 0.8
  auto f = fit_power([](double r) { return r * r + std::pow(r, 1.2); }, FitWindow{1e3, 1e6, 16}, 2.0);
  ASSERT_TRUE(f.empirical_delta.has_value());
  EXPECT_GT(*f.empirical_delta, 0);
  EXPECT_FALSE(f.delta_note.empty());
}

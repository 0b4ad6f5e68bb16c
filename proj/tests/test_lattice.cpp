#include <orbitcount.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace orbitcount;

namespace {

/// All x in [-b, b]^n with x^T g x == m, by exhaustive scan.
std::vector<IntVec> brute_shell(const RMatrix& g, const Rational& m, long long b) {
  const std::size_t n = g.size();
  GramForm form(g);
  std::vector<IntVec> out;
  IntVec x(n, -b);
  for (;;) {
    if (form.evaluate(x) == m) out.push_back(x);
    std::size_t i = n;
    while (i > 0 && x[i - 1] == b) x[--i] = -b;
    if (i == 0) break;
    ++x[i - 1];
  }
  return out;  // lexicographic by construction
}

RMatrix diag(std::initializer_list<long long> d) {
  RMatrix m(d.size(), RVec(d.size(), Rational(0)));
  std::size_t i = 0;
  for (auto v : d) m[i][i] = v, ++i;
  return m;
}

}  // namespace

TEST(DefiniteShell, Examples) {
  auto s5 = definite_shell(identity_form(2), Rational(5));
  EXPECT_EQ(s5, (std::vector<IntVec>{{-2, -1}, {-2, 1}, {-1, -2}, {-1, 2}, {1, -2}, {1, 2}, {2, -1}, {2, 1}}));
  EXPECT_TRUE(definite_shell(identity_form(2), Rational(3)).empty());
  EXPECT_EQ(definite_shell(identity_form(4), Rational(1)).size(), 8u);
  EXPECT_EQ(definite_shell(identity_form(3), Rational(0)), (std::vector<IntVec>{{0, 0, 0}}));
  EXPECT_THROW(definite_shell(identity_form(2), Rational(-1)), InvalidArgument);
  EXPECT_THROW(definite_shell(GramForm(diag({1, -1})), Rational(1)), InvalidArgument);
}

TEST(DefiniteShell, MatchesExhaustiveScanOnSeveralForms) {
  Rational h(1, 2);
  std::vector<RMatrix> forms{
      diag({1, 1}),
      diag({1, 2, 3}),
      {{Rational(2), Rational(1)}, {Rational(1), Rational(2)}},
      {{Rational(1), h, Rational(0)}, {h, Rational(1), h}, {Rational(0), h, Rational(1)}},
      norm_gram(hurwitz_order()),
  };
  for (const auto& g : forms) {
    for (long long m = 0; m <= 12; ++m) {
      // every form above has minimum eigenvalue >= 1/4, so |x_i| <= 2 sqrt(m) + 1
      long long b = 2 * static_cast<long long>(std::sqrt(static_cast<double>(m))) + 2;
      ASSERT_EQ(definite_shell(GramForm(g), Rational(m)), brute_shell(g, Rational(m), b)) << "m=" << m;
    }
  }
}

TEST(DefiniteShell, RationalLevelsAndSymmetry) {
  RMatrix g{{Rational(1, 3), Rational(0)}, {Rational(0), Rational(1, 3)}};
  EXPECT_EQ(definite_shell(GramForm(g), Rational(5, 3)).size(), 8u);
  EXPECT_TRUE(definite_shell(GramForm(g), Rational(1, 2)).empty());
  for (long long m = 1; m <= 50; ++m) {
    auto s = definite_shell(GramForm(diag({1, 2, 5})), Rational(m));
    std::set<IntVec> set(s.begin(), s.end());
    for (const auto& x : s) {
      IntVec neg = x;
      for (auto& c : neg) c = -c;
      ASSERT_TRUE(set.count(neg));
    }
    // permuting coordinates of the form permutes the solution set
    auto p = definite_shell(GramForm(diag({5, 1, 2})), Rational(m));
    std::set<IntVec> permuted;
    for (const auto& x : p) permuted.insert({x[1], x[2], x[0]});
    ASSERT_EQ(permuted, set);
  }
}

TEST(DefiniteBall, Examples) {
  auto b1 = definite_ball(identity_form(4), Rational(1));
  ASSERT_EQ(b1.size(), 1u);
  EXPECT_EQ(b1[0].first, 1);
  EXPECT_EQ(b1[0].second.size(), 8u);
  auto b2 = definite_ball(identity_form(2), Rational(2));
  ASSERT_EQ(b2.size(), 2u);
  EXPECT_EQ(b2[0].first, 1);
  EXPECT_EQ(b2[0].second.size(), 4u);
  EXPECT_EQ(b2[1].first, 2);
  EXPECT_EQ(b2[1].second.size(), 4u);
  EXPECT_TRUE(definite_ball(identity_form(2), Rational(0)).empty());
}

TEST(DefiniteBall, CountsAgreeWithShellsAndThreading) {
  auto g = GramForm(norm_gram(hurwitz_order()));
  auto one = ball_counts(g, 60, 1);
  auto three = ball_counts(g, 60, 3);
  EXPECT_EQ(one.all, three.all);
  EXPECT_EQ(one.prim, three.prim);
  for (long long m = 1; m <= 60; ++m) {
    auto shell = definite_shell(g, Rational(m));
    std::uint64_t prim = 0;
    for (const auto& x : shell) prim += gcd_of(x) == 1;
    ASSERT_EQ(one.all[static_cast<std::size_t>(m)], shell.size());
    ASSERT_EQ(one.prim[static_cast<std::size_t>(m)], prim);
  }
}

TEST(ConeSection, ModelExamples) {
  auto s = model_section();
  EXPECT_EQ(cone_section_points(s, Rational(5)), (std::vector<IntVec>{{1, -2, 4}, {1, 2, 4}, {4, -2, 1}, {4, 2, 1}}));
  EXPECT_TRUE(cone_section_points(s, Rational(3)).empty());
  EXPECT_EQ(cone_section_points(s, Rational(2)), (std::vector<IntVec>{{1, -1, 1}, {1, 1, 1}}));
  EXPECT_THROW(cone_section_points(s, Rational(0)), InvalidArgument);
  // x + z = 3/2 has no integral points
  EXPECT_TRUE(cone_section_points(s, Rational(3, 2)).empty());
}

TEST(ConeSection, MatchesDirectScanOnTheModelSection) {
  auto s = model_section();
  SectionEnumerator se(s);
  for (long long k = 1; k <= 300; ++k) {
    // direct scan: x in [0, k], z = k - x, y^2 = x z
    std::vector<IntVec> brute, brute_all;
    for (long long x = 0; x <= k; ++x) {
      long long z = k - x;
      auto y = exact_sqrt(static_cast<i128>(x) * z);
      if (!y) continue;
      for (long long sy : {-1LL, 1LL}) {
        if (*y == 0 && sy == 1) continue;
        IntVec p{x, sy * static_cast<long long>(*y), z};
        brute_all.push_back(p);
        if (gcd_of(p) == 1) brute.push_back(p);
      }
    }
    std::sort(brute.begin(), brute.end());
    std::sort(brute_all.begin(), brute_all.end());
    ASSERT_EQ(se.cone_points(Rational(k)), brute) << k;
    ASSERT_EQ(se.cone_points(Rational(k), false), brute_all) << k;
  }
}

TEST(ConeSection, OutputsSatisfyTheDefiningEquationsOnAFourDimensionalSection) {
  // q = x0 x3 - x1^2 - x2^2, l = x0 + x3 + x1
  Rational h(1, 2);
  RMatrix g{{0, 0, 0, h}, {0, -1, 0, 0}, {0, 0, -1, 0}, {h, 0, 0, 0}};
  auto s = make_section(g, RVec{Rational(1), Rational(1), Rational(0), Rational(1)});
  for (long long k = 1; k <= 40; ++k)
    for (const auto& x : cone_section_points(s, Rational(k))) {
      ASSERT_EQ(s.q(x), 0);
      ASSERT_EQ(s.l(x), Rational(k));
      ASSERT_EQ(gcd_of(x), 1);
    }
}

TEST(ConeSection, RejectsIndefiniteRestriction) {
  // q = x^2 - y^2 + z^2 - w^2 style restriction on l = w: q|W indefinite
  RMatrix g = diag({1, -1, 1, -1});
  auto s = make_section(g, RVec{Rational(0), Rational(0), Rational(0), Rational(1)}, IntVec{0, 0, 1, 1});
  EXPECT_THROW(SectionEnumerator{s}, Error);
}

TEST(LinearFiber, PointsLieOnTheHyperplane) {
  RVec ell{Rational(2, 3), Rational(4, 3), Rational(-2)};
  for (const char* kt : {"2/3", "4", "-10/3"}) {
    Rational k = parse_rational(kt);
    auto f = linear_fiber(ell, k);
    ASSERT_TRUE(f.has_value()) << kt;
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
      IntVec x = f->offset;
      for (std::size_t c = 0; c < f->basis[0].size(); ++c) {
        long long a = static_cast<long long>(rng() % 11) - 5;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += a * f->basis[i][c];
      }
      ASSERT_EQ(dot(ell, to_rational(x)), k);
    }
  }
  EXPECT_FALSE(linear_fiber(ell, Rational(1, 3)).has_value());
}

TEST(BoxScan, SignedAndAbsoluteReadings) {
  auto o = zsqrt2_order();
  EXPECT_EQ(box_scan(o, 1, 3, true), (std::vector<IntVec>{{-3, -2}, {-3, 2}, {-1, 0}, {1, 0}, {3, -2}, {3, 2}}));
  auto abs = box_scan(o, 1, 3);
  std::set<IntVec> a(abs.begin(), abs.end());
  EXPECT_EQ(abs.size(), 10u);
  for (IntVec x : {IntVec{1, 1}, IntVec{-1, 1}, IntVec{1, -1}, IntVec{-1, -1}}) EXPECT_TRUE(a.count(x));
  EXPECT_TRUE(box_scan(o, 3, 10, true).empty());
  EXPECT_TRUE(box_scan(gauss_order(), 3, 10).empty());
  EXPECT_THROW(box_scan(o, 1, 0), InvalidArgument);
}

TEST(IndefiniteShell, ZSqrt2Examples) {
  auto o = zsqrt2_order();
  auto u = unit_group(o);
  EXPECT_EQ(indefinite_quadratic_shell(o, u, 1).size(), 1u);
  auto two = indefinite_quadratic_shell(o, u, 2);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_TRUE(associated(AlgebraElement(two[0]), AlgebraElement(IntVec{0, 1}), o));
  EXPECT_TRUE(indefinite_quadratic_shell(o, u, 3).empty());
  EXPECT_THROW(indefinite_quadratic_shell(o, u, 0), InvalidArgument);
  EXPECT_THROW(indefinite_quadratic_shell(gauss_order(), u, 1), InvalidArgument);
}

TEST(IndefiniteShell, OrbitCountStableUnderDoubledBound) {
  auto o = zsqrt2_order();
  auto u = unit_group(o);
  for (long long k = -300; k <= 300; ++k) {
    if (k == 0) continue;
    ASSERT_EQ(indefinite_quadratic_shell(o, u, k), indefinite_quadratic_shell(o, u, k, 2)) << k;
  }
}

TEST(IndefiniteShell, AgreesWithPairwiseOracleOnALargeBox) {
  auto o = zsqrt2_order();
  auto u = unit_group(o);
  for (long long k : {1LL, 2LL, -1LL, 7LL, -7LL, 14LL, 17LL, 23LL, 49LL}) {
    auto box = box_scan(o, k, 100, true);
    auto part = pairwise_orbits(box, o);
    ASSERT_EQ(indefinite_quadratic_shell(o, u, k).size(), part.classes.size()) << k;
  }
}

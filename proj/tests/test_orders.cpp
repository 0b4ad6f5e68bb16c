#include <orbitcount.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace orbitcount;

namespace {

AlgebraElement el(std::initializer_list<long long> c) { return AlgebraElement(IntVec(c)); }

/// Norm-one orbit of x under the listed units, by brute multiplication.
std::set<IntVec> orbit_brute(const IntVec& x, const std::vector<IntVec>& units, const OrderSpec& o) {
  IntegralArithmetic ar(o.algebra);
  std::set<IntVec> out;
  for (const auto& u : units) out.insert(ar.mul(u, x));
  return out;
}

}  // namespace

TEST(Units, IsUnitExamples) {
  EXPECT_TRUE(is_unit(el({1, 1}), zsqrt2_order()));
  EXPECT_TRUE(is_unit(el({0, 1}), gauss_order()));
  EXPECT_FALSE(is_unit(el({1, 1, 0, 0}), lipschitz_order()));
  EXPECT_FALSE(is_unit(AlgebraElement(RVec{Rational(1, 2), Rational(0)}), zsqrt2_order()));
}

TEST(Units, FiniteUnitCounts) {
  EXPECT_EQ(finite_units(gauss_order()).torsion.size(), 4u);
  EXPECT_EQ(finite_units(lipschitz_order()).torsion.size(), 8u);
  EXPECT_EQ(finite_units(hurwitz_order()).torsion.size(), 24u);
  EXPECT_THROW(finite_units(zsqrt2_order()), Unsupported);
}

TEST(Units, FundamentalUnitExamples) {
  auto u = fundamental_unit(zsqrt2_order());
  ASSERT_EQ(u.fundamental.size(), 1u);
  EXPECT_EQ(u.fundamental[0], el({1, 1}));
  EXPECT_EQ(alg_norm(u.fundamental[0], zsqrt2_order().algebra), Rational(-1));
  EXPECT_EQ(*u.norm_one_fundamental, el({3, 2}));
  auto z3 = make_order("zsqrt3", quadratic_algebra(3), 1);
  auto u3 = fundamental_unit(z3);
  EXPECT_EQ(u3.fundamental[0], el({2, 1}));
  EXPECT_EQ(*u3.norm_one_fundamental, el({2, 1}));
  EXPECT_THROW(fundamental_unit(gauss_order()), Unsupported);
  for (const auto& t : u.torsion) EXPECT_TRUE(is_unit(t, zsqrt2_order()));
}

TEST(Associated, Examples) {
  EXPECT_TRUE(associated(el({1, 0}), el({3, 2}), zsqrt2_order()));
  EXPECT_TRUE(associated(el({1, 1}), el({1, -1}), gauss_order()));
  EXPECT_FALSE(associated(el({1, 1}), el({1, 2}), gauss_order()));
  EXPECT_THROW(associated(el({0, 0}), el({1, 0}), gauss_order()), InvalidArgument);
}

TEST(Associated, IsAnEquivalenceRelationOnRandomTriples) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long long> c(-3, 3);
  for (const auto& order : {gauss_order(), zsqrt2_order(), lipschitz_order(), hurwitz_order()}) {
    const auto n = order.algebra.dim;
    IntegralArithmetic ar(order.algebra);
    auto units = order.unit_rank == 0 ? finite_units(order).torsion : std::vector<AlgebraElement>{};
    if (order.unit_rank == 1) {
      auto u = fundamental_unit(order);
      units = u.torsion;
      units.push_back(u.fundamental[0]);
    }
    auto rand_elem = [&] {
      IntVec x(n);
      do
        for (auto& v : x) v = c(rng);
      while (gcd_of(x) == 0);
      return x;
    };
    for (int t = 0; t < 60; ++t) {
      IntVec x = rand_elem();
      // y, z associated to x by construction, w random
      IntVec y = ar.mul(*to_integral(units[rng() % units.size()].coords), x);
      IntVec z = ar.mul(*to_integral(units[rng() % units.size()].coords), y);
      IntVec w = rand_elem();
      AlgebraElement ex(x), ey(y), ez(z), ew(w);
      ASSERT_TRUE(associated(ex, ex, order));
      ASSERT_TRUE(associated(ex, ey, order));
      ASSERT_TRUE(associated(ey, ex, order));
      ASSERT_TRUE(associated(ey, ez, order));
      ASSERT_TRUE(associated(ex, ez, order));
      ASSERT_EQ(associated(ex, ew, order), associated(ew, ex, order));
      if (associated(ex, ew, order)) ASSERT_EQ(std::llabs(ar.norm(x)), std::llabs(ar.norm(w)));
      if (associated(ex, ew, order)) ASSERT_EQ(associated(ey, ew, order), true);
    }
  }
}

TEST(Canonical, Examples) {
  auto o = zsqrt2_order();
  auto u = unit_group(o);
  EXPECT_EQ(canonical_rep(el({17, 12}), u, o), canonical_rep(el({1, 0}), u, o));
  EXPECT_EQ(canonical_rep(el({-17, 12}), u, o), canonical_rep(el({1, 0}), u, o));
  auto g = gauss_order();
  auto ug = unit_group(g);
  EXPECT_EQ(canonical_rep(el({-1, -2}), ug, g), el({1, 2}));
  for (auto x : {el({5, 3}), el({-7, 2}), el({0, 4})}) {
    auto c = canonical_rep(x, u, o);
    EXPECT_EQ(canonical_rep(c, u, o), c);
  }
  auto rank2 = make_order("rank2", quadratic_algebra(2), 2);
  EXPECT_THROW(canonical_rep(el({1, 0}), u, rank2), Unsupported);
}

TEST(Canonical, InvariantUnderNormOneUnitsOnShells) {
  // x ranges over shells with level <= 200; u over norm-one units
  auto o = zsqrt2_order();
  auto u = unit_group(o);
  Canonicalizer canon(o, u);
  IntegralArithmetic ar(o.algebra);
  std::vector<IntVec> mults{{1, 0}, {-1, 0}, {3, 2}, {3, -2}, {-3, 2}, {17, 12}, {17, -12}, {99, 70}, {-99, 70}};
  for (long long k = -200; k <= 200; ++k) {
    if (k == 0) continue;
    for (const auto& x : quadratic_norm_candidates(2, {3, 2}, k)) {
      auto c = canon(x);
      for (const auto& m : mults) ASSERT_EQ(canon(ar.mul(m, x)), c) << "k=" << k;
    }
  }
  for (const auto& order : {gauss_order(), lipschitz_order(), hurwitz_order()}) {
    auto units = finite_units(order);
    Canonicalizer cn(order, units);
    IntegralArithmetic a2(order.algebra);
    for (long long m = 1; m <= 40; ++m)
      for (const auto& x : definite_shell(GramForm(norm_gram(order)), Rational(m)))
        for (const auto& un : units.torsion) ASSERT_EQ(cn(a2.mul(*to_integral(un.coords), x)), cn(x));
  }
}

TEST(Canonical, PartitionMatchesPairwiseOracleOnShellsUpTo200) {
  auto check = [](const OrderSpec& order, const std::vector<IntVec>& shell, const UnitGroupData& units) {
    if (shell.empty()) return;
    Canonicalizer cn(order, units);
    std::map<IntVec, std::vector<std::size_t>> by_rep;
    for (std::size_t i = 0; i < shell.size(); ++i) by_rep[cn(shell[i])].push_back(i);
    auto part = pairwise_orbits(shell, order);
    std::set<std::vector<std::size_t>> a, b;
    for (auto& [r, v] : by_rep) a.insert(v);
    for (auto& v : part.classes) b.insert(v);
    ASSERT_EQ(a, b);
  };
  auto g = gauss_order();
  auto ug = unit_group(g);
  for (long long m = 1; m <= 200; ++m) check(g, definite_shell(GramForm(norm_gram(g)), Rational(m)), ug);
  // Z[sqrt 2]: candidates of signed norm k; pairwise classes there are norm-one orbits
  auto o = zsqrt2_order();
  auto u = unit_group(o);
  for (long long k = -200; k <= 200; ++k)
    if (k != 0) check(o, quadratic_norm_candidates(2, {3, 2}, k, 2), u);
}

TEST(Canonical, UnitOrbitsAreFreeOnDefiniteShells) {
  for (const auto& order : {gauss_order(), lipschitz_order(), hurwitz_order()}) {
    auto units = finite_units(order);
    std::vector<IntVec> us;
    for (const auto& x : units.torsion) us.push_back(*to_integral(x.coords));
    for (long long m = 1; m <= 30; ++m)
      for (const auto& x : definite_shell(GramForm(norm_gram(order)), Rational(m)))
        ASSERT_EQ(orbit_brute(x, us, order).size(), us.size());
  }
}

TEST(IntegralArithmetic, MatchesRationalArithmetic) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long long> c(-20, 20);
  for (const auto& order : {gauss_order(), zsqrt2_order(), lipschitz_order(), hurwitz_order(),
                            make_order("cubic", pure_cubic_algebra(2), 1)}) {
    IntegralArithmetic ar(order.algebra);
    for (int t = 0; t < 50; ++t) {
      IntVec x(order.algebra.dim), y(order.algebra.dim);
      for (auto& v : x) v = c(rng);
      for (auto& v : y) v = c(rng);
      ASSERT_EQ(AlgebraElement(ar.mul(x, y)), alg_mul(AlgebraElement(x), AlgebraElement(y), order.algebra));
      ASSERT_EQ(Rational(ar.norm(x)), alg_norm(AlgebraElement(x), order.algebra));
    }
  }
}

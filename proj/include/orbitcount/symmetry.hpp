#pragma once

// Finite integral symmetry group of a quadric section with definite
// restriction to ker l, orbit partitions of section points, and relative
// Siegel weights 1/|stabilizer|.

#include "section.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace orbitcount {

struct SymmetryGroup {
  std::vector<IntMatrix> elements;  // identity first
  std::size_t order() const { return elements.size(); }
};

struct OrbitInfo {
  IntVec representative;  // lexicographically least orbit member
  std::size_t size = 0;
  std::size_t stabilizer_order = 0;
  Rational relative_weight;
};

struct OrbitReport {
  Rational level;
  std::size_t group_order = 1;
  std::vector<OrbitInfo> orbits;

  std::size_t point_count() const {
    std::size_t s = 0;
    for (const auto& o : orbits) s += o.size;
    return s;
  }
};

constexpr std::size_t symmetry_candidate_cap = 1000000;

inline bool is_symmetry(const QuadricSectionSpec& s, const IntMatrix& g) {
  RMatrix gr;
  for (const auto& row : g) gr.push_back(to_rational(row));
  if (!(matmul(transpose(gr), matmul(s.gram.gram, gr)) == s.gram.gram)) return false;
  RMatrix ell_row{s.ell};
  if (!(matmul(ell_row, gr)[0] == s.ell)) return false;
  return int_determinant(g) == 1;
}

/// Determinant of g restricted to ker l, in the integral kernel basis.
inline Rational kernel_determinant(const SectionEnumerator& se, const IntMatrix& g) {
  const auto& u = se.frame().unimodular;
  RMatrix ur;
  for (const auto& row : u) ur.push_back(to_rational(row));
  RMatrix gr;
  for (const auto& row : g) gr.push_back(to_rational(row));
  RMatrix conj = matmul(*inverse(ur), matmul(gr, ur));
  const std::size_t n = u.size();
  RMatrix w(n - 1, RVec(n - 1));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) w[i - 1][j - 1] = conj[i][j];
  return determinant(std::move(w));
}

/// Integral g with det g = 1, g^T G g = G, l g = l and det(g|ker l) = +1.
inline SymmetryGroup integral_symmetries(const QuadricSectionSpec& section) {
  SectionEnumerator se(section);
  const std::size_t n = section.dim();
  const auto& gram = section.gram.gram;
  const BigInt l = common_denominator(gram);
  IntMatrix gint(n, IntVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gint[i][j] = to_ll(gram[i][j] * l);

  // candidate images of each standard basis vector
  std::vector<std::vector<IntVec>> cands(n);
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    se.for_each_point(section.l(e), gram[i][i], [&](const IntVec& x) {
      if (cands[i].size() >= symmetry_candidate_cap)
        throw Error("integral_symmetries: more than 10^6 candidates for basis image " + std::to_string(i));
      cands[i].push_back(x);
    });
    sort_lex(cands[i]);
  }
  auto bil = [&](const IntVec& x, const IntVec& y) {
    i128 s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += static_cast<i128>(x[i]) * gint[i][j] * y[j];
    return s;
  };

  SymmetryGroup group;
  std::vector<IntVec> images(n);
  auto accept = [&] {
    IntMatrix g(n, IntVec(n));
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) g[r][c] = images[c][r];
    if (int_determinant(g) != 1) return;
    if (kernel_determinant(se, g) != 1) return;
    group.elements.push_back(std::move(g));
  };
  auto search = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      accept();
      return;
    }
    for (const auto& y : cands[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = bil(y, images[j]) == gint[i][j];
      if (!ok) continue;
      images[i] = y;
      self(self, i + 1);
    }
  };
  search(search, 0);
  auto id = int_identity(n);
  std::stable_partition(group.elements.begin(), group.elements.end(), [&](const IntMatrix& g) { return g == id; });
  if (group.elements.empty() || !(group.elements.front() == id))
    throw Error("integral_symmetries: identity missing from computed group");
  return group;
}

/// Orbits of a point set closed under the group, with exact stabilizer orders.
inline OrbitReport orbit_partition(std::vector<IntVec> points, const SymmetryGroup& group,
                                   const Rational& level = Rational(0)) {
  OrbitReport rep;
  rep.level = level;
  rep.group_order = group.order();
  sort_lex(points);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<bool> seen(points.size(), false);
  auto index_of = [&](const IntVec& p) -> std::size_t {
    auto it = std::lower_bound(points.begin(), points.end(), p);
    if (it == points.end() || !(*it == p))
      throw Error("orbit_partition: point set is not closed under the symmetry group");
    return static_cast<std::size_t>(it - points.begin());
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> members;
    for (const auto& g : group.elements) {
      std::size_t j = index_of(int_matvec(g, points[i]));
      if (!seen[j]) {
        seen[j] = true;
        members.push_back(j);
      }
    }
    OrbitInfo o;
    o.representative = points[*std::min_element(members.begin(), members.end())];
    o.size = members.size();
    if (group.order() % o.size != 0) throw Error("orbit_partition: orbit size does not divide the group order");
    o.stabilizer_order = group.order() / o.size;
    o.relative_weight = Rational(1, static_cast<long long>(o.stabilizer_order));
    rep.orbits.push_back(std::move(o));
  }
  // points are visited in lexicographic order, so orbit representatives are too
  return rep;
}

/// Sum of relative weights; equals the Siegel-weight sum up to one global
/// normalization constant shared by every orbit of the family.
inline Rational weighted_count(const OrbitReport& report) {
  Rational s = 0;
  for (const auto& o : report.orbits) s += o.relative_weight;
  return s;
}

}  // namespace orbitcount

#pragma once

// Hyperplane sections of a rational quadric: {x in Z^n : q(x) = 0, l(x) = k}.

#include "lattice.hpp"

#include <optional>
#include <vector>

namespace orbitcount {

struct QuadricSectionSpec {
  GramForm gram;       // q(x) = x^T gram x
  RVec ell;            // l(x) = ell . x
  IntVec base_point;   // q(v0) = 0, l(v0) > 0
  long long scale_e = 1;

  std::size_t dim() const { return ell.size(); }
  Rational q(const IntVec& x) const { return gram.evaluate(x); }
  Rational l(const IntVec& x) const { return dot(ell, to_rational(x)); }
};

/// Integer level index for k (scale_e * k), or nullopt when not integral.
inline std::optional<long long> level_index(const QuadricSectionSpec& s, const Rational& k) {
  Rational v = k * s.scale_e;
  if (!is_integer(v)) return std::nullopt;
  return to_ll(v);
}

/// Gram of q restricted to ker l, on the integral kernel basis.
inline RMatrix restricted_gram(const RMatrix& gram, const IntMatrix& basis) {
  const std::size_t n = gram.size(), m = basis.empty() ? 0 : basis[0].size();
  RMatrix b(n, RVec(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) b[i][j] = basis[i][j];
  return matmul(transpose(b), matmul(gram, b));
}

/// Search |coords| <= bound for a primitive isotropic vector with l > 0.
inline std::optional<IntVec> find_base_point(const RMatrix& gram, const RVec& ell, long long bound) {
  const std::size_t n = ell.size();
  IntVec x(n, -bound);
  GramForm form(gram);
  for (;;) {
    if (gcd_of(x) == 1 && dot(ell, to_rational(x)) > 0 && form.evaluate(x) == 0) return x;
    std::size_t i = 0;
    while (i < n && x[i] == bound) x[i++] = -bound;
    if (i == n) return std::nullopt;
    ++x[i];
  }
}

/// Builds a section, deriving scale_e and (when absent) searching for v0.
inline QuadricSectionSpec make_section(RMatrix gram, RVec ell, std::optional<IntVec> base_point = std::nullopt,
                                       long long search_bound = 6) {
  QuadricSectionSpec s;
  s.gram = GramForm(std::move(gram));
  s.ell = std::move(ell);
  if (s.gram.dim() != s.ell.size()) throw InvalidArgument("section: gram and linear form sizes differ");
  s.scale_e = to_ll(common_denominator(s.ell));
  if (!base_point) base_point = find_base_point(s.gram.gram, s.ell, search_bound);
  if (!base_point) throw InvalidArgument("section: no isotropic base point with l > 0 found in the search box");
  s.base_point = *base_point;
  return s;
}

/// Enumerates points of the section fibers { l = k } with a fixed q-value,
/// reusing the kernel frame and Schur data across levels.
class SectionEnumerator {
 public:
  explicit SectionEnumerator(const QuadricSectionSpec& s) : n_(s.dim()), frame_(s.ell) {
    const std::size_t n = s.dim();
    if (n < 2) throw InvalidArgument("section: dimension must be at least 2");
    basis_ = frame_.kernel_basis();
    lift_ = frame_.lift_direction();
    RMatrix a = restricted_gram(s.gram.gram, basis_);
    auto def = definiteness(a);
    if (def == Definiteness::indefinite_or_degenerate)
      throw Unsupported("section: q restricted to ker l is not definite over R");
    sign_ = def == Definiteness::positive ? 1 : -1;
    // P(t) = sign * q(K u + B t) = t^T A t + 2 K g.t + K^2 h
    RVec u = to_rational(lift_);
    RMatrix bm(n, RVec(n - 1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j) bm[i][j] = basis_[i][j];
    RVec g = matvec(transpose(bm), matvec(s.gram.gram, u));
    Rational h = bilinear(s.gram.gram, u, u);
    for (auto& row : a)
      for (auto& v : row) v *= sign_;
    for (auto& v : g) v *= sign_;
    h *= sign_;
    enumerator_.emplace(a, g, h);
  }

  const LinearFormFrame& frame() const { return frame_; }
  const IntMatrix& kernel_basis() const { return basis_; }
  int restricted_sign() const { return sign_; }

  /// Calls visit(x) for every x in Z^n with l(x) = k and q(x) = value.
  template <class Visit>
  void for_each_point(const Rational& k, const Rational& value, Visit&& visit) const {
    auto mult = frame_.lift_multiple(k);
    if (!mult) return;
    const std::size_t n = n_;
    IntVec x(n);
    enumerator_->for_each_equal(value * sign_, *mult, [&](const std::vector<long long>& t, i128) {
      for (std::size_t i = 0; i < n; ++i) {
        i128 v = static_cast<i128>(lift_[i]) * *mult;
        for (std::size_t j = 0; j + 1 < n; ++j) v += static_cast<i128>(basis_[i][j]) * t[j];
        x[i] = checked_ll(v);
      }
      visit(static_cast<const IntVec&>(x));
    });
  }

  /// Sigma_k (primitive) or all integral points of q = 0, l = k, sorted.
  std::vector<IntVec> cone_points(const Rational& k, bool primitive_only = true) const {
    std::vector<IntVec> out;
    for_each_point(k, Rational(0), [&](const IntVec& x) {
      if (!primitive_only || gcd_of(x) == 1) out.push_back(x);
    });
    sort_lex(out);
    return out;
  }

 private:
  std::size_t n_;
  LinearFormFrame frame_;
  IntMatrix basis_;
  IntVec lift_;
  int sign_ = 1;
  std::optional<QuadraticEnumerator> enumerator_;
};

/// Primitive x in Z^n with q(x) = 0 and l(x) = k.
inline std::vector<IntVec> cone_section_points(const QuadricSectionSpec& section, const Rational& k,
                                               bool primitive_only = true) {
  if (k <= 0) throw InvalidArgument("cone_section_points: level must be positive");
  return SectionEnumerator(section).cone_points(k, primitive_only);
}

/// The section (U^T G U, l U) pulled back by a unimodular change of variables x = U x'.
inline QuadricSectionSpec transform_section(const QuadricSectionSpec& s, const IntMatrix& u) {
  if (std::llabs(int_determinant(u)) != 1) throw InvalidArgument("transform_section: matrix is not unimodular");
  RMatrix ur;
  for (const auto& row : u) ur.push_back(to_rational(row));
  QuadricSectionSpec t;
  t.gram = GramForm(matmul(transpose(ur), matmul(s.gram.gram, ur)));
  RMatrix ell_row{s.ell};
  t.ell = matmul(ell_row, ur)[0];
  t.scale_e = s.scale_e;
  RMatrix inv = *inverse(ur);
  auto bp = to_integral(matvec(inv, to_rational(s.base_point)));
  t.base_point = *bp;
  return t;
}

/// The model section q = xz - y^2, l = x + z.
inline QuadricSectionSpec model_section() {
  Rational h(1, 2);
  RMatrix g{{Rational(0), Rational(0), h}, {Rational(0), Rational(-1), Rational(0)}, {h, Rational(0), Rational(0)}};
  return make_section(std::move(g), RVec{Rational(1), Rational(0), Rational(1)}, IntVec{1, 0, 0});
}

}  // namespace orbitcount

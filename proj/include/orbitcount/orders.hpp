#pragma once

// Orders in structure-constant algebras: unit predicates, the associate
// relation, unit groups in the supported ranks, and canonical orbit
// representatives under the norm-one unit group.

#include "algebra.hpp"
#include "lattice.hpp"
#include "numeric.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace orbitcount {

struct OrderSpec {
  std::string name;
  AlgebraSpec algebra;
  int norm_degree = 2;
  int unit_rank = 0;
};

struct UnitGroupData {
  std::vector<AlgebraElement> torsion;
  std::vector<AlgebraElement> fundamental;
  bool complete = false;
  // Generator of the norm-one part of the free unit group (rank 1 only).
  std::optional<AlgebraElement> norm_one_fundamental;
  bool user_asserted = false;
};

inline void require_order(const OrderSpec& order) {
  const auto& alg = order.algebra;
  if (!structure_constants_integral(alg))
    throw InvalidArgument("order '" + order.name + "': structure constants are not integral");
  if (alg.kind == AlgebraKind::number_field && order.norm_degree != static_cast<int>(alg.dim))
    throw InvalidArgument("order '" + order.name + "': norm degree must equal the field degree");
  if (alg.kind == AlgebraKind::quaternion && (alg.dim != 4 || order.norm_degree != 2))
    throw InvalidArgument("order '" + order.name + "': quaternion orders have dimension 4 and norm degree 2");
  if (order.unit_rank < 0) throw InvalidArgument("unit rank must be nonnegative");
}

inline OrderSpec make_order(std::string name, AlgebraSpec alg, int unit_rank) {
  OrderSpec o;
  o.name = std::move(name);
  o.norm_degree = alg.kind == AlgebraKind::quaternion ? 2 : static_cast<int>(alg.dim);
  o.algebra = std::move(alg);
  o.unit_rank = unit_rank;
  require_order(o);
  return o;
}

inline bool is_integral(const AlgebraElement& x) {
  for (const auto& c : x.coords)
    if (!is_integer(c)) return false;
  return true;
}

inline bool is_unit(const AlgebraElement& x, const OrderSpec& order) {
  if (x.size() != order.algebra.dim || !is_integral(x)) return false;
  Rational n = alg_norm(x, order.algebra);
  if (n != 1 && n != -1) return false;
  return is_integral(alg_inverse(x, order.algebra));
}

/// y in O^x * x: both y x^-1 and x y^-1 lie in the order.
inline bool associated(const AlgebraElement& x, const AlgebraElement& y, const OrderSpec& order) {
  if (x.is_zero() || y.is_zero()) throw InvalidArgument("associated: zero element");
  const auto& alg = order.algebra;
  return is_integral(alg_mul(y, alg_inverse(x, alg), alg)) && is_integral(alg_mul(x, alg_inverse(y, alg), alg));
}

/// Gram matrix of the norm when it is a quadratic form on the order
/// (quadratic fields, quaternion reduced norm).
inline RMatrix norm_gram(const OrderSpec& order) {
  if (order.norm_degree != 2) throw Unsupported("norm form of degree " + std::to_string(order.norm_degree) +
                                                " is not a quadratic form");
  const auto& alg = order.algebra;
  const std::size_t n = alg.dim;
  RMatrix g(n, RVec(n));
  std::vector<Rational> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = alg_norm(basis_element(alg, i), alg);
  for (std::size_t i = 0; i < n; ++i) {
    g[i][i] = diag[i];
    for (std::size_t j = 0; j < i; ++j) {
      auto s = alg_add(basis_element(alg, i), basis_element(alg, j));
      g[i][j] = g[j][i] = (alg_norm(s, alg) - diag[i] - diag[j]) / 2;
    }
  }
  return g;
}

inline bool norm_form_definite(const OrderSpec& order) {
  if (order.norm_degree != 2) return false;
  return definiteness(norm_gram(order)) == Definiteness::positive;
}

inline std::vector<AlgebraElement> sorted_elements(std::vector<AlgebraElement> v) {
  std::sort(v.begin(), v.end(), [](const AlgebraElement& a, const AlgebraElement& b) { return a.coords < b.coords; });
  return v;
}

/// Complete unit group of an order with definite norm form, from the norm-1 shell.
inline UnitGroupData finite_units(const OrderSpec& order) {
  require_order(order);
  if (!norm_form_definite(order))
    throw Unsupported("finite_units: norm form of '" + order.name + "' is not definite; use fundamental_unit");
  UnitGroupData u;
  for (const auto& x : definite_shell(GramForm(norm_gram(order)), Rational(1))) {
    AlgebraElement e(x);
    if (is_unit(e, order)) u.torsion.push_back(std::move(e));
  }
  u.torsion = sorted_elements(std::move(u.torsion));
  u.complete = true;
  return u;
}

/// Units of Z[sqrt(d)]: torsion +-1 and the Pell fundamental unit.
inline UnitGroupData fundamental_unit(const OrderSpec& order) {
  auto d = quadratic_radicand(order.algebra);
  if (!d) throw Unsupported("fundamental_unit: '" + order.name + "' is not an order Z[sqrt(d)]");
  if (*d < 2) throw Unsupported("fundamental_unit: '" + order.name + "' has unit rank 0");
  auto sol = pell(*d);
  UnitGroupData u;
  u.torsion = {AlgebraElement(IntVec{-1, 0}), AlgebraElement(IntVec{1, 0})};
  AlgebraElement eps(RVec{Rational(sol.x), Rational(sol.y)});
  u.fundamental = {eps};
  u.norm_one_fundamental = sol.norm_sign == 1 ? eps : alg_mul(eps, eps, order.algebra);
  u.complete = true;
  return u;
}

inline UnitGroupData unit_group(const OrderSpec& order) {
  if (order.unit_rank == 0) return finite_units(order);
  if (order.unit_rank == 1) return fundamental_unit(order);
  throw Unsupported("unit rank " + std::to_string(order.unit_rank) + " is not supported exactly");
}

// ------------------------------------------------------------ integer fast path

/// Order arithmetic on integer coordinates (structure constants must be integral).
class IntegralArithmetic {
 public:
  explicit IntegralArithmetic(const AlgebraSpec& alg) : n_(alg.dim), kind_(alg.kind) {
    if (!structure_constants_integral(alg)) throw InvalidArgument("structure constants are not integral");
    c_.reserve(alg.structure.size());
    for (const auto& x : alg.structure) c_.push_back(to_ll(x));
    for (const auto& x : alg.unity) unity_.push_back(to_ll(x));
    if (alg.involution) involution_ = *alg.involution;
  }

  std::size_t dim() const { return n_; }

  IntVec mul(const IntVec& a, const IntVec& b) const {
    std::vector<i128> acc(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (b[j] == 0) continue;
        i128 ab = static_cast<i128>(a[i]) * b[j];
        const long long* row = &c_[(i * n_ + j) * n_];
        for (std::size_t k = 0; k < n_; ++k)
          if (row[k] != 0) acc[k] += ab * row[k];
      }
    }
    IntVec out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = checked_ll(acc[k]);
    return out;
  }

  /// Norm as in alg_norm, for integral elements.
  long long norm(const IntVec& x) const {
    if (kind_ == AlgebraKind::quaternion && !involution_.empty()) {
      auto p = mul(x, int_matvec(involution_, x));
      std::size_t idx = 0;
      while (unity_[idx] == 0) ++idx;
      return p[idx] / unity_[idx];
    }
    // Bareiss on the left-multiplication matrix
    std::vector<std::vector<i128>> m(n_, std::vector<i128>(n_, 0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) m[k][j] += static_cast<i128>(x[i]) * c_[(i * n_ + j) * n_ + k];
    }
    i128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (m[k][k] == 0) {
        std::size_t p = k + 1;
        while (p < n_ && m[p][k] == 0) ++p;
        if (p == n_) return 0;
        std::swap(m[p], m[k]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n_; ++i)
        for (std::size_t j = k + 1; j < n_; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      prev = m[k][k];
    }
    return checked_ll(sign * m[n_ - 1][n_ - 1]);
  }

 private:
  std::size_t n_;
  AlgebraKind kind_;
  std::vector<long long> c_;
  IntVec unity_;
  IntMatrix involution_;
};

/// x^-1 = adjoint / denom with integral adjoint; y x^-1 integral iff y*adjoint = 0 mod denom.
struct ScaledInverse {
  IntVec adjoint;
  long long denom = 1;
};

inline ScaledInverse scaled_inverse(const IntVec& x, const AlgebraSpec& alg) {
  auto inv = alg_inverse(AlgebraElement(x), alg);
  ScaledInverse s;
  s.denom = to_ll(common_denominator(inv.coords));
  for (const auto& c : inv.coords) s.adjoint.push_back(to_ll(c * s.denom));
  return s;
}

inline bool divides_all(const IntVec& v, long long d) {
  for (long long c : v)
    if (c % d != 0) return false;
  return true;
}

/// Integer version of associated() with precomputed scaled inverses.
inline bool associated_fast(const IntVec& x, const ScaledInverse& xinv, const IntVec& y, const ScaledInverse& yinv,
                            const IntegralArithmetic& arith) {
  return divides_all(arith.mul(y, xinv.adjoint), xinv.denom) && divides_all(arith.mul(x, yinv.adjoint), yinv.denom);
}

// ------------------------------------------------------------ canonical representatives

namespace detail {

inline bool first_nonzero_positive(const IntVec& v) {
  for (long long c : v)
    if (c != 0) return c > 0;
  return false;
}

/// Lexicographically least candidate among those with first nonzero coordinate positive.
inline IntVec lex_pick(const std::vector<IntVec>& cands) {
  const IntVec* best = nullptr;
  for (const auto& c : cands)
    if (first_nonzero_positive(c) && (!best || c < *best)) best = &c;
  if (!best)
    for (const auto& c : cands)
      if (!best || c < *best) best = &c;
  return *best;
}

inline i128 mul_checked(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("128-bit overflow in quadratic unit walk");
  return r;
}

struct QuadInt {
  i128 a, b;  // a + b sqrt(d)
};

inline QuadInt qmul(QuadInt x, QuadInt y, i128 d) {
  return {mul_checked(x.a, y.a) + mul_checked(mul_checked(x.b, y.b), d),
          mul_checked(x.a, y.b) + mul_checked(x.b, y.a)};
}

}  // namespace detail

/// Canonicalization under the norm-one unit group of a supported order.
class Canonicalizer {
 public:
  Canonicalizer(const OrderSpec& order, const UnitGroupData& units) : arith_(order.algebra) {
    if (!units.complete) throw InvalidArgument("canonical_rep: unit group data is incomplete");
    if (order.unit_rank >= 2)
      throw Unsupported("canonical_rep: unit rank " + std::to_string(order.unit_rank) +
                        " has no exact fundamental domain here");
    for (const auto& u : units.torsion) {
      auto iu = to_integral(u.coords);
      if (!iu) throw InvalidArgument("torsion unit is not integral");
      if (arith_.norm(*iu) == 1) torsion_.push_back(*iu);
    }
    if (order.unit_rank == 1) {
      auto d = quadratic_radicand(order.algebra);
      if (!d) throw Unsupported("canonical_rep: rank-1 canonicalization is implemented for Z[sqrt(d)] only");
      if (!units.norm_one_fundamental) throw InvalidArgument("canonical_rep: missing norm-one fundamental unit");
      auto eta = to_integral(units.norm_one_fundamental->coords);
      if (!eta || arith_.norm(*eta) != 1) throw InvalidArgument("canonical_rep: invalid norm-one fundamental unit");
      d_ = *d;
      eta_ = {(*eta)[0], (*eta)[1]};
      // orient eta > 1 under the first embedding
      if (eta_.a < 0) eta_ = {-eta_.a, -eta_.b};
      if (eta_.b < 0) eta_.b = -eta_.b;
      rank_ = 1;
    }
  }

  std::size_t torsion_size() const { return torsion_.size(); }

  IntVec operator()(const IntVec& x) const {
    if (std::all_of(x.begin(), x.end(), [](long long c) { return c == 0; }))
      throw InvalidArgument("canonical_rep: zero element");
    std::vector<IntVec> balanced{x};
    if (rank_ == 1) balanced = balance(x);
    std::vector<IntVec> cands;
    for (const auto& y : balanced)
      for (const auto& u : torsion_) cands.push_back(arith_.mul(u, y));
    return detail::lex_pick(cands);
  }

 private:
  // Minimizers of |log|s1(y)/s2(y)|| over y in eta^Z x. For y and z = eta y,
  // |log r(y)| > |log r(z)| iff |w| < |w'| for w = eta y^2, i.e. iff the two
  // coordinates of w have opposite signs; equal magnitude iff one is zero.
  std::vector<IntVec> balance(const IntVec& x) const {
    using detail::QuadInt;
    const QuadInt eta = eta_, eta_bar{eta_.a, -eta_.b};
    QuadInt y{x[0], x[1]};
    auto sign = [](i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    auto test = [&](QuadInt y0, QuadInt unit) {
      auto w = detail::qmul(unit, detail::qmul(y0, y0, d_), d_);
      return sign(w.a) * sign(w.b);
    };
    while (test(y, eta) < 0) y = detail::qmul(eta, y, d_);
    while (test(y, eta_bar) > 0) y = detail::qmul(eta_bar, y, d_);
    std::vector<IntVec> out{{checked_ll(y.a), checked_ll(y.b)}};
    if (test(y, eta) == 0) {
      auto z = detail::qmul(eta, y, d_);
      out.push_back({checked_ll(z.a), checked_ll(z.b)});
    }
    if (test(y, eta_bar) == 0) {
      auto z = detail::qmul(eta_bar, y, d_);
      out.push_back({checked_ll(z.a), checked_ll(z.b)});
    }
    return out;
  }

  IntegralArithmetic arith_;
  std::vector<IntVec> torsion_;
  int rank_ = 0;
  long long d_ = 0;
  detail::QuadInt eta_{1, 0};
};

inline AlgebraElement canonical_rep(const AlgebraElement& x, const UnitGroupData& units, const OrderSpec& order) {
  auto ix = to_integral(x.coords);
  if (!ix) throw InvalidArgument("canonical_rep: element is not integral");
  return AlgebraElement(Canonicalizer(order, units)(*ix));
}

}  // namespace orbitcount

#pragma once

// Finite-dimensional associative Q-algebras given by structure constants
// on a distinguished basis, with exact multiplication, norm and inverse.

#include "arith.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbitcount {

enum class AlgebraKind { number_field, quaternion };

inline std::string to_string(AlgebraKind k) {
  return k == AlgebraKind::number_field ? "number-field" : "quaternion";
}

struct AlgebraSpec {
  std::size_t dim = 0;
  // e_i * e_j = sum_k c[(i*dim + j)*dim + k] e_k
  RVec structure;
  RVec unity;
  // Coordinate matrix of x -> conj(x): conj(x) = involution * x.
  std::optional<IntMatrix> involution;
  AlgebraKind kind = AlgebraKind::number_field;

  const Rational& c(std::size_t i, std::size_t j, std::size_t k) const {
    return structure[(i * dim + j) * dim + k];
  }
  Rational& c(std::size_t i, std::size_t j, std::size_t k) {
    return structure[(i * dim + j) * dim + k];
  }
};

struct AlgebraElement {
  RVec coords;

  AlgebraElement() = default;
  explicit AlgebraElement(RVec c) : coords(std::move(c)) {}
  explicit AlgebraElement(const IntVec& c) : coords(to_rational(c)) {}

  std::size_t size() const { return coords.size(); }
  bool is_zero() const {
    for (const auto& x : coords)
      if (x != 0) return false;
    return true;
  }
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

inline AlgebraElement basis_element(const AlgebraSpec& spec, std::size_t i) {
  RVec v(spec.dim, Rational(0));
  v[i] = 1;
  return AlgebraElement(std::move(v));
}

inline AlgebraElement unity(const AlgebraSpec& spec) { return AlgebraElement(spec.unity); }

inline void require_dim(const AlgebraElement& a, const AlgebraSpec& spec) {
  if (a.size() != spec.dim)
    throw InvalidArgument("element has " + std::to_string(a.size()) + " coordinates, algebra has dimension " +
                          std::to_string(spec.dim));
}

inline AlgebraElement alg_mul(const AlgebraElement& a, const AlgebraElement& b, const AlgebraSpec& spec) {
  require_dim(a, spec);
  require_dim(b, spec);
  const std::size_t n = spec.dim;
  RVec out(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b.coords[j] == 0) continue;
      Rational ab = a.coords[i] * b.coords[j];
      for (std::size_t k = 0; k < n; ++k) {
        const auto& ck = spec.c(i, j, k);
        if (ck != 0) out[k] += ab * ck;
      }
    }
  }
  return AlgebraElement(std::move(out));
}

inline AlgebraElement alg_add(const AlgebraElement& a, const AlgebraElement& b) {
  RVec out(a.coords);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.coords[i];
  return AlgebraElement(std::move(out));
}

inline AlgebraElement alg_scale(const AlgebraElement& a, const Rational& s) {
  RVec out(a.coords);
  for (auto& x : out) x *= s;
  return AlgebraElement(std::move(out));
}

/// Column j holds the coordinates of a * e_j.
inline RMatrix left_mult_matrix(const AlgebraElement& a, const AlgebraSpec& spec) {
  require_dim(a, spec);
  const std::size_t n = spec.dim;
  RMatrix m(n, RVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m[k][j] += a.coords[i] * spec.c(i, j, k);
  }
  return m;
}

/// Column i holds the coordinates of e_i * a.
inline RMatrix right_mult_matrix(const AlgebraElement& a, const AlgebraSpec& spec) {
  require_dim(a, spec);
  const std::size_t n = spec.dim;
  RMatrix m(n, RVec(n, Rational(0)));
  for (std::size_t j = 0; j < n; ++j) {
    if (a.coords[j] == 0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) m[k][i] += a.coords[j] * spec.c(i, j, k);
  }
  return m;
}

inline AlgebraElement conjugate(const AlgebraElement& a, const AlgebraSpec& spec) {
  if (!spec.involution) throw InvalidArgument("algebra has no involution");
  RVec out(spec.dim, Rational(0));
  for (std::size_t i = 0; i < spec.dim; ++i)
    for (std::size_t j = 0; j < spec.dim; ++j) out[i] += Rational((*spec.involution)[i][j]) * a.coords[j];
  return AlgebraElement(std::move(out));
}

/// Scalar s with x = s * unity; nullopt when x is not central-scalar.
inline std::optional<Rational> scalar_part(const AlgebraElement& x, const AlgebraSpec& spec) {
  std::size_t idx = 0;
  while (idx < spec.dim && spec.unity[idx] == 0) ++idx;
  if (idx == spec.dim) return std::nullopt;
  Rational s = x.coords[idx] / spec.unity[idx];
  for (std::size_t i = 0; i < spec.dim; ++i)
    if (x.coords[i] != s * spec.unity[i]) return std::nullopt;
  return s;
}

/// Field norm (determinant of left multiplication) for number-field kind,
/// reduced norm a * conj(a) for quaternion kind.
inline Rational alg_norm(const AlgebraElement& a, const AlgebraSpec& spec) {
  require_dim(a, spec);
  if (spec.kind == AlgebraKind::number_field) return determinant(left_mult_matrix(a, spec));
  if (!spec.involution) throw InvalidArgument("quaternion algebra requires an involution for the reduced norm");
  auto prod = alg_mul(a, conjugate(a, spec), spec);
  auto s = scalar_part(prod, spec);
  if (!s) throw Error("a * conj(a) is not a scalar: involution is not the standard one");
  return *s;
}

inline AlgebraElement alg_inverse(const AlgebraElement& a, const AlgebraSpec& spec) {
  auto x = solve(left_mult_matrix(a, spec), spec.unity);
  if (!x) throw InvalidArgument("element is not invertible (norm 0): not in a division algebra");
  return AlgebraElement(std::move(*x));
}

/// First violated axiom, if any: associativity and two-sided unity on basis elements.
inline std::optional<std::string> check_associative_unital(const AlgebraSpec& spec) {
  const std::size_t n = spec.dim;
  if (spec.structure.size() != n * n * n) return "structure constant array has wrong size";
  if (spec.unity.size() != n) return "unity has wrong length";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto eij = alg_mul(basis_element(spec, i), basis_element(spec, j), spec);
      for (std::size_t k = 0; k < n; ++k) {
        auto lhs = alg_mul(eij, basis_element(spec, k), spec);
        auto rhs = alg_mul(basis_element(spec, i), alg_mul(basis_element(spec, j), basis_element(spec, k), spec), spec);
        if (!(lhs == rhs))
          return "not associative on basis triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                 std::to_string(k) + ")";
      }
    }
  auto one = unity(spec);
  for (std::size_t i = 0; i < n; ++i) {
    auto e = basis_element(spec, i);
    if (!(alg_mul(one, e, spec) == e) || !(alg_mul(e, one, spec) == e))
      return "unity is not a two-sided identity on e_" + std::to_string(i);
  }
  return std::nullopt;
}

/// Anti-automorphism of order two, fixing unity.
inline std::optional<std::string> check_involution(const AlgebraSpec& spec) {
  if (!spec.involution) return "no involution supplied";
  const auto& m = *spec.involution;
  if (m.size() != spec.dim) return "involution matrix has wrong size";
  if (!(int_matmul(m, m) == int_identity(spec.dim))) return "involution does not have order 2";
  for (std::size_t i = 0; i < spec.dim; ++i)
    for (std::size_t j = 0; j < spec.dim; ++j) {
      auto ei = basis_element(spec, i), ej = basis_element(spec, j);
      auto lhs = conjugate(alg_mul(ei, ej, spec), spec);
      auto rhs = alg_mul(conjugate(ej, spec), conjugate(ei, spec), spec);
      if (!(lhs == rhs)) return "involution is not an anti-automorphism on basis pair (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")";
    }
  if (!(conjugate(unity(spec), spec) == unity(spec))) return "involution does not fix unity";
  return std::nullopt;
}

/// Structure constants of the same algebra on a new basis; column j of
/// `basis` holds the old coordinates of the j-th new basis vector.
inline AlgebraSpec change_basis(const AlgebraSpec& spec, const RMatrix& basis) {
  const std::size_t n = spec.dim;
  auto inv = inverse(basis);
  if (!inv) throw InvalidArgument("change of basis matrix is singular");
  auto column = [&](std::size_t j) {
    RVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = basis[i][j];
    return AlgebraElement(std::move(v));
  };
  AlgebraSpec out;
  out.dim = n;
  out.kind = spec.kind;
  out.structure.assign(n * n * n, Rational(0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto prod = matvec(*inv, alg_mul(column(a), column(b), spec).coords);
      for (std::size_t k = 0; k < n; ++k) out.c(a, b, k) = prod[k];
    }
  out.unity = matvec(*inv, spec.unity);
  if (spec.involution) {
    RMatrix m;
    for (const auto& row : *spec.involution) m.push_back(to_rational(row));
    auto conj = matmul(*inv, matmul(m, basis));
    IntMatrix im(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_integer(conj[i][j])) throw InvalidArgument("involution is not integral on the new basis");
        im[i][j] = to_ll(conj[i][j]);
      }
    out.involution = im;
  }
  return out;
}

/// Z[sqrt(d)] on the basis (1, sqrt(d)).
inline AlgebraSpec quadratic_algebra(long long d) {
  AlgebraSpec s;
  s.dim = 2;
  s.kind = AlgebraKind::number_field;
  s.structure.assign(8, Rational(0));
  s.c(0, 0, 0) = 1;
  s.c(0, 1, 1) = 1;
  s.c(1, 0, 1) = 1;
  s.c(1, 1, 0) = d;
  s.unity = {Rational(1), Rational(0)};
  return s;
}

/// Z[theta], theta^3 = m, on the basis (1, theta, theta^2).
inline AlgebraSpec pure_cubic_algebra(long long m) {
  AlgebraSpec s;
  s.dim = 3;
  s.kind = AlgebraKind::number_field;
  s.structure.assign(27, Rational(0));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::size_t e = i + j;
      if (e < 3)
        s.c(i, j, e) = 1;
      else
        s.c(i, j, e - 3) = m;
    }
  s.unity = {Rational(1), Rational(0), Rational(0)};
  return s;
}

/// Q x Q on idempotents: the "norm" is x1 * x2, a reducible split form.
inline AlgebraSpec split_product_algebra() {
  AlgebraSpec s;
  s.dim = 2;
  s.kind = AlgebraKind::number_field;
  s.structure.assign(8, Rational(0));
  s.c(0, 0, 0) = 1;
  s.c(1, 1, 1) = 1;
  s.unity = {Rational(1), Rational(1)};
  return s;
}

/// Quaternion algebra (a, b | Q) on (1, i, j, k), i^2 = a, j^2 = b, ij = -ji = k.
inline AlgebraSpec quaternion_algebra(long long a, long long b) {
  AlgebraSpec s;
  s.dim = 4;
  s.kind = AlgebraKind::quaternion;
  s.structure.assign(64, Rational(0));
  auto set = [&](std::size_t i, std::size_t j, std::size_t k, long long v) { s.c(i, j, k) = v; };
  for (std::size_t i = 0; i < 4; ++i) {
    set(0, i, i, 1);
    set(i, 0, i, 1);
  }
  set(1, 1, 0, a);
  set(2, 2, 0, b);
  set(3, 3, 0, -a * b);
  set(1, 2, 3, 1);
  set(2, 1, 3, -1);
  set(1, 3, 2, a);
  set(3, 1, 2, -a);
  set(3, 2, 1, b);
  set(2, 3, 1, -b);
  s.unity = {Rational(1), Rational(0), Rational(0), Rational(0)};
  s.involution = IntMatrix{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}};
  return s;
}

/// Hamilton quaternions (-1,-1) on the Hurwitz basis (1, i, j, (1+i+j+k)/2).
inline AlgebraSpec hurwitz_algebra() {
  Rational h(1, 2);
  RMatrix basis{{Rational(1), Rational(0), Rational(0), h},
                {Rational(0), Rational(1), Rational(0), h},
                {Rational(0), Rational(0), Rational(1), h},
                {Rational(0), Rational(0), Rational(0), h}};
  return change_basis(quaternion_algebra(-1, -1), basis);
}

inline bool structure_constants_integral(const AlgebraSpec& spec) {
  for (const auto& x : spec.structure)
    if (!is_integer(x)) return false;
  for (const auto& x : spec.unity)
    if (!is_integer(x)) return false;
  return true;
}

/// If spec is Z[sqrt(d)] on the basis (1, sqrt(d)), returns d.
inline std::optional<long long> quadratic_radicand(const AlgebraSpec& spec) {
  if (spec.dim != 2 || spec.kind != AlgebraKind::number_field) return std::nullopt;
  auto ref = quadratic_algebra(0);
  Rational d = spec.c(1, 1, 0);
  ref.c(1, 1, 0) = d;
  if (!(ref.structure == spec.structure) || !(ref.unity == spec.unity) || !is_integer(d)) return std::nullopt;
  return to_ll(d);
}

}  // namespace orbitcount

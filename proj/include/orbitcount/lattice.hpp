#pragma once

// Exact enumeration of integer points on definite quadratic shells and balls.
//
// The enumerator handles inhomogeneous forms
//     P(t) = t^T A t + 2 s g^T t + s^2 h,      t in Z^m, s a fixed integer,
// with A positive definite. Coordinates are fixed from last to first; at
// depth i the minimum of P over the still-free coordinates t_0..t_{i-1} is
// the Schur complement of the augmented matrix [[A, g], [g^T, h]], scaled
// to an integer matrix. Every pruning bound is then an integer inequality
// (a t + b)^2 <= a (D U - c) + b^2, so no rounding enters the search.

#include "arith.hpp"

#include <algorithm>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace orbitcount {

struct GramForm {
  RMatrix gram;

  GramForm() = default;
  explicit GramForm(RMatrix g) : gram(std::move(g)) {}
  std::size_t dim() const { return gram.size(); }

  Rational evaluate(const IntVec& x) const {
    auto r = to_rational(x);
    return bilinear(gram, r, r);
  }
  bool symmetric() const {
    for (std::size_t i = 0; i < dim(); ++i) {
      if (gram[i].size() != dim()) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (gram[i][j] != gram[j][i]) return false;
    }
    return true;
  }
};

inline GramForm identity_form(std::size_t n) { return GramForm(identity_matrix(n)); }

class QuadraticEnumerator {
 public:
  QuadraticEnumerator(const RMatrix& a, const RVec& g, const Rational& h) : m_(a.size()) {
    if (m_ == 0) throw InvalidArgument("enumerator: empty form");
    if (g.size() != m_) throw InvalidArgument("enumerator: linear part has wrong length");
    if (definiteness(a) != Definiteness::positive) throw InvalidArgument("enumerator: form is not positive definite");
    // augmented integer matrix
    BigInt l = lcm(common_denominator(a), lcm(common_denominator(g), denominator(h)));
    scale_ = to_ll(l);
    const std::size_t n = m_ + 1;
    RMatrix s(n, RVec(n, Rational(0)));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) s[i][j] = a[i][j] * l;
      s[i][m_] = s[m_][i] = g[i] * l;
    }
    s[m_][m_] = h * l;
    // Schur complements, stored over the trailing index range [i, m]
    for (std::size_t i = 0; i < m_; ++i) {
      RMatrix tail(n - i, RVec(n - i));
      for (std::size_t r = i; r < n; ++r)
        for (std::size_t c = i; c < n; ++c) tail[r - i][c - i] = s[r][c];
      BigInt d = common_denominator(tail);
      Level lv;
      lv.denom = to_ll(d);
      lv.t.assign((n - i) * (n - i), 0);
      for (std::size_t r = 0; r < n - i; ++r)
        for (std::size_t c = 0; c < n - i; ++c) lv.t[r * (n - i) + c] = to_ll(tail[r][c] * d);
      levels_.push_back(std::move(lv));
      // eliminate variable i
      for (std::size_t r = i + 1; r < n; ++r)
        for (std::size_t c = i + 1; c < n; ++c) s[r][c] -= s[r][i] * s[i][c] / s[i][i];
    }
  }

  std::size_t dim() const { return m_; }
  /// P is evaluated internally as scale() * P, an integer for integer t.
  long long scale() const { return scale_; }

  /// Visits every t with P(t) <= bound as visit(t, scale()*P(t)).
  /// `stride`/`offset` split the outermost coordinate for parallel runs.
  template <class Visit>
  void for_each_at_most(const Rational& bound, long long s, Visit&& visit, long long stride = 1,
                        long long offset = 0) const {
    Rational u = bound * scale_;
    BigInt fl = numerator(u) / denominator(u);
    if (u < 0 && !is_integer(u)) fl -= 1;
    Run run(*this, static_cast<i128>(to_ll(fl)), s, stride, offset);
    run.descend_le(m_ - 1, visit);
  }

  /// Visits every t with P(t) == value exactly.
  template <class Visit>
  void for_each_equal(const Rational& value, long long s, Visit&& visit) const {
    Rational u = value * scale_;
    if (!is_integer(u)) return;
    Run run(*this, static_cast<i128>(to_ll(u)), s, 1, 0);
    run.descend_eq(m_ - 1, visit);
  }

 private:
  struct Level {
    long long denom = 1;
    std::vector<long long> t;  // (m+1-i)^2 row-major
  };

  struct Run {
    const QuadraticEnumerator& e;
    i128 bound;
    std::vector<long long> x;  // t_0..t_{m-1}, then s
    long long stride, offset;

    Run(const QuadraticEnumerator& en, i128 b, long long s, long long st, long long off)
        : e(en), bound(b), x(en.m_ + 1, 0), stride(st), offset(off) {
      x[en.m_] = s;
    }

    // a, b, c of the restricted quadratic in x[i] at depth i
    void coefficients(std::size_t i, i128& a, i128& b, i128& c) const {
      const auto& lv = e.levels_[i];
      const std::size_t w = e.m_ + 1 - i;
      a = lv.t[0];
      b = 0;
      c = 0;
      for (std::size_t j = 1; j < w; ++j) {
        i128 xj = x[i + j];
        if (xj == 0) continue;
        b += static_cast<i128>(lv.t[j]) * xj;
        i128 row = 0;
        for (std::size_t k = 1; k < w; ++k) row += static_cast<i128>(lv.t[j * w + k]) * x[i + k];
        c += row * xj;
      }
    }

    bool range(std::size_t i, i128& lo, i128& hi) const {
      i128 a, b, c;
      coefficients(i, a, b, c);
      i128 disc = a * (static_cast<i128>(e.levels_[i].denom) * bound - c) + b * b;
      if (disc < 0) return false;
      i128 r = isqrt(disc);
      lo = ceil_div(-b - r, a);
      hi = floor_div(-b + r, a);
      return lo <= hi;
    }

    template <class Visit>
    void descend_le(std::size_t i, Visit& visit) {
      if (i == 0) {
        i128 a, b, c;
        coefficients(0, a, b, c);
        i128 disc = a * (bound - c) + b * b;
        if (disc < 0) return;
        i128 r = isqrt(disc);
        i128 lo = ceil_div(-b - r, a), hi = floor_div(-b + r, a);
        if (e.m_ == 1) {
          if (!adjust_top(lo)) return;
        }
        long long step = (e.m_ == 1) ? stride : 1;
        for (i128 t = lo; t <= hi; t += step) {
          x[0] = static_cast<long long>(t);
          visit(static_cast<const std::vector<long long>&>(x), (a * t + 2 * b) * t + c);
        }
        return;
      }
      i128 lo, hi;
      if (!range(i, lo, hi)) return;
      long long step = 1;
      if (i == e.m_ - 1) {
        if (!adjust_top(lo)) return;
        step = stride;
      }
      for (i128 t = lo; t <= hi; t += step) {
        x[i] = static_cast<long long>(t);
        descend_le(i - 1, visit);
      }
      x[i] = 0;
    }

    // first value >= lo congruent to offset mod stride
    bool adjust_top(i128& lo) const {
      if (stride == 1) return true;
      i128 r = ((lo - offset) % stride + stride) % stride;
      if (r != 0) lo += stride - r;
      return true;
    }

    template <class Visit>
    void descend_eq(std::size_t i, Visit& visit) {
      if (i == 0) {
        i128 a, b, c;
        coefficients(0, a, b, c);
        i128 disc = a * (bound - c) + b * b;
        auto r = exact_sqrt(disc);
        if (!r) return;
        // (a t + b)^2 == disc
        for (i128 v : {-*r, *r}) {
          i128 num = v - b;
          if (num % a != 0) continue;
          x[0] = static_cast<long long>(num / a);
          visit(static_cast<const std::vector<long long>&>(x), bound);
          if (*r == 0) break;
        }
        return;
      }
      i128 lo, hi;
      if (!range(i, lo, hi)) return;
      if (i == 1) {
        last_two_eq(lo, hi, visit);
        return;
      }
      for (i128 t = lo; t <= hi; ++t) {
        x[i] = static_cast<long long>(t);
        descend_eq(i - 1, visit);
      }
      x[i] = 0;
    }

    // depth 1 with the depth-0 discriminant a(bound - c) + b^2 stepped by
    // finite differences: b is linear and the discriminant quadratic in x[1]
    template <class Visit>
    void last_two_eq(i128 lo, i128 hi, Visit& visit) {
      i128 a = 0, b[3], d[3], c;
      for (int k = 0; k < 3; ++k) {
        x[1] = static_cast<long long>(lo + k);
        coefficients(0, a, b[k], c);
        d[k] = a * (bound - c) + b[k] * b[k];
      }
      const i128 db = b[1] - b[0], d2 = d[2] - 2 * d[1] + d[0];
      i128 bt = b[0], dt = d[0], d1 = d[1] - d[0];
      for (i128 t = lo; t <= hi; ++t) {
        if (auto r = exact_sqrt(dt)) {
          x[1] = static_cast<long long>(t);
          for (i128 v : {-*r, *r}) {
            i128 num = v - bt;
            if (num % a != 0) continue;
            x[0] = static_cast<long long>(num / a);
            visit(static_cast<const std::vector<long long>&>(x), bound);
            if (*r == 0) break;
          }
        }
        bt += db;
        dt += d1;
        d1 += d2;
      }
      x[1] = 0;
    }
  };

  std::size_t m_;
  long long scale_ = 1;
  std::vector<Level> levels_;
};

inline void sort_lex(std::vector<IntVec>& pts) { std::sort(pts.begin(), pts.end()); }

inline void require_positive_definite(const GramForm& form) {
  if (!form.symmetric()) throw InvalidArgument("Gram matrix is not symmetric");
  if (definiteness(form.gram) != Definiteness::positive) throw InvalidArgument("form is not positive definite");
}

/// {x in Z^n : x^T G x = m}, lexicographically sorted.
inline std::vector<IntVec> definite_shell(const GramForm& form, const Rational& m) {
  require_positive_definite(form);
  if (m < 0) throw InvalidArgument("definite_shell: level must be nonnegative");
  QuadraticEnumerator en(form.gram, RVec(form.dim(), Rational(0)), Rational(0));
  std::vector<IntVec> out;
  en.for_each_equal(m, 0, [&](const std::vector<long long>& t, i128) {
    out.emplace_back(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(form.dim()));
  });
  sort_lex(out);
  return out;
}

/// Shells for every integer level 1..floor(r).
inline std::vector<std::pair<long long, std::vector<IntVec>>> definite_ball(const GramForm& form, const Rational& r) {
  require_positive_definite(form);
  std::vector<std::pair<long long, std::vector<IntVec>>> out;
  if (r < 1) return out;
  const long long top = to_ll(BigInt(numerator(r) / denominator(r)));
  QuadraticEnumerator en(form.gram, RVec(form.dim(), Rational(0)), Rational(0));
  for (long long m = 1; m <= top; ++m) out.emplace_back(m, std::vector<IntVec>{});
  const long long l = en.scale();
  en.for_each_at_most(Rational(top), 0, [&](const std::vector<long long>& t, i128 v) {
    if (v == 0 || v % l != 0) return;
    out[static_cast<std::size_t>(v / l - 1)].second.emplace_back(t.begin(),
                                                                 t.begin() + static_cast<std::ptrdiff_t>(form.dim()));
  });
  for (auto& [m, shell] : out) sort_lex(shell);
  return out;
}

struct BallCounts {
  std::vector<std::uint64_t> all;   // index = integer level
  std::vector<std::uint64_t> prim;  // gcd of coordinates == 1
};

/// Point counts per integer level 0..top for a positive definite form,
/// optionally split over `jobs` threads on the outermost coordinate.
inline BallCounts ball_counts(const GramForm& form, long long top, unsigned jobs = 1) {
  require_positive_definite(form);
  BallCounts out;
  out.all.assign(static_cast<std::size_t>(std::max<long long>(top, 0) + 1), 0);
  out.prim = out.all;
  if (top < 0) return out;
  QuadraticEnumerator en(form.gram, RVec(form.dim(), Rational(0)), Rational(0));
  const long long l = en.scale();
  const std::size_t n = form.dim();
  jobs = std::max(1u, jobs);
  std::vector<BallCounts> partial(jobs, out);
  auto work = [&](unsigned j) {
    auto& bc = partial[j];
    en.for_each_at_most(
        Rational(top), 0,
        [&](const std::vector<long long>& t, i128 v) {
          if (v % l != 0) return;
          auto level = static_cast<std::size_t>(v / l);
          ++bc.all[level];
          long long g = 0;
          for (std::size_t i = n; i-- > 0;) {
            g = gcd_ll(g, t[i]);
            if (g == 1) break;
          }
          if (g == 1) ++bc.prim[level];
        },
        jobs, static_cast<long long>(j));
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& th : pool) th.join();
  }
  for (const auto& bc : partial)
    for (std::size_t i = 0; i < out.all.size(); ++i) {
      out.all[i] += bc.all[i];
      out.prim[i] += bc.prim[i];
    }
  return out;
}

// ------------------------------------------------------------ linear fibers

/// {offset + basis * t : t in Z^(n-1)} = {x in Z^n : ell(x) = k}.
struct AffineLatticeFiber {
  IntVec offset;
  IntMatrix basis;  // n rows, n-1 columns
};

/// Unimodular completion of an integer linear form: U with ell * U = (g, 0, ..., 0), g > 0.
struct LinearFormFrame {
  IntVec ell_int;      // e * ell
  long long scale_e = 1;
  long long content = 1;  // g = gcd(ell_int)
  IntMatrix unimodular;   // columns: u_1 (ell_int . u_1 = g), then a basis of ker ell

  explicit LinearFormFrame(const RVec& ell) {
    const std::size_t n = ell.size();
    if (n == 0) throw InvalidArgument("linear form has no coefficients");
    scale_e = to_ll(common_denominator(ell));
    for (const auto& c : ell) ell_int.push_back(to_ll(c * scale_e));
    content = gcd_of(ell_int);
    if (content == 0) throw InvalidArgument("linear form is zero");
    unimodular = int_identity(n);
    IntVec v = ell_int;
    for (std::size_t j = 1; j < n; ++j) {
      if (v[j] == 0) continue;
      auto [g, a, b] = ext_gcd(v[0], v[j]);
      long long p = v[j] / g, q = v[0] / g;
      for (std::size_t r = 0; r < n; ++r) {
        long long c0 = unimodular[r][0], cj = unimodular[r][j];
        unimodular[r][0] = checked_ll(static_cast<i128>(a) * c0 + static_cast<i128>(b) * cj);
        unimodular[r][j] = checked_ll(-static_cast<i128>(p) * c0 + static_cast<i128>(q) * cj);
      }
      v[0] = g;
      v[j] = 0;
    }
    if (v[0] < 0)
      for (std::size_t r = 0; r < n; ++r) unimodular[r][0] = -unimodular[r][0];
  }

  std::size_t dim() const { return ell_int.size(); }

  IntMatrix kernel_basis() const {
    IntMatrix b(dim(), IntVec(dim() - 1));
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = 1; c < dim(); ++c) b[r][c - 1] = unimodular[r][c];
    return b;
  }
  IntVec lift_direction() const {
    IntVec u(dim());
    for (std::size_t r = 0; r < dim(); ++r) u[r] = unimodular[r][0];
    return u;
  }
  /// Multiple K of lift_direction() lying on ell = k, if the fiber is nonempty.
  std::optional<long long> lift_multiple(const Rational& k) const {
    Rational kk = k * scale_e / content;
    if (!is_integer(kk)) return std::nullopt;
    return to_ll(kk);
  }
};

inline std::optional<AffineLatticeFiber> linear_fiber(const RVec& ell, const Rational& k) {
  LinearFormFrame frame(ell);
  auto mult = frame.lift_multiple(k);
  if (!mult) return std::nullopt;
  AffineLatticeFiber f;
  for (long long u : frame.lift_direction()) f.offset.push_back(checked_ll(static_cast<i128>(u) * *mult));
  f.basis = frame.kernel_basis();
  return f;
}

}  // namespace orbitcount

#pragma once

// Hypothesis checks run before counting: algebra axioms, irreducibility and
// zero-divisor probes for norm forms, division probes for quaternion orders,
// nondegeneracy and definiteness for quadric sections.

#include "counting.hpp"

#include <random>

namespace orbitcount {

enum class CheckStatus { pass, fail, undetermined };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "undetermined";
  }
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
  }
  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::fail) return &c;
    return nullptr;
  }
  void add(std::string name, CheckStatus st, std::string detail = {}) {
    checks.push_back({std::move(name), st, std::move(detail)});
  }
};

// ------------------------------------------------------------ polynomials mod p

namespace detail {

using ModPoly = std::vector<long long>;  // low to high, reduced mod p, trimmed

inline void mp_trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline long long mp_inv(long long a, long long p) {
  return static_cast<long long>(powmod(static_cast<unsigned long long>(a), static_cast<unsigned long long>(p - 2),
                                       static_cast<unsigned long long>(p)));
}

inline ModPoly mp_mod(ModPoly a, const ModPoly& b, long long p) {
  const long long inv = mp_inv(b.back(), p);
  while (a.size() >= b.size()) {
    long long f = a.back() * inv % p;
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ((a[shift + i] - f * b[i]) % p + p) % p;
    mp_trim(a);
  }
  return a;
}

inline ModPoly mp_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& f, long long p) {
  if (a.empty() || b.empty()) return {};
  ModPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  mp_trim(c);
  return mp_mod(std::move(c), f, p);
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, long long p) {
  mp_trim(a);
  mp_trim(b);
  while (!b.empty()) {
    auto r = mp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Ben-Or: f of degree n is irreducible over F_p iff gcd(x^(p^i) - x, f) = 1 for i <= n/2.
inline bool irreducible_mod_p(const ModPoly& f, long long p) {
  const std::size_t n = f.size() - 1;
  ModPoly x{0, 1};
  ModPoly xp = mp_mod(x, f, p);
  for (std::size_t i = 1; i <= n / 2; ++i) {
    // xp <- xp^p mod f
    ModPoly result{1}, base = xp;
    for (long long e = p; e > 0; e >>= 1) {
      if (e & 1) result = mp_mulmod(result, base, f, p);
      base = mp_mulmod(base, base, f, p);
    }
    xp = result;
    ModPoly diff = xp;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    mp_trim(diff);
    auto g = mp_gcd(f, diff, p);
    if (g.size() != 1) return false;
  }
  return true;
}

inline ModPoly reduce_mod(const std::vector<long long>& f, long long p) {
  ModPoly out;
  for (long long c : f) out.push_back(((c % p) + p) % p);
  mp_trim(out);
  return out;
}

inline ModPoly mp_derivative(const ModPoly& f, long long p) {
  ModPoly out;
  for (std::size_t i = 1; i < f.size(); ++i) out.push_back(static_cast<long long>(i) % p * f[i] % p);
  mp_trim(out);
  return out;
}

}  // namespace detail

/// Irreducibility of an integral monic polynomial by reduction modulo the first 25 primes
/// not dividing its discriminant: pass if irreducible modulo one of them.
inline CheckStatus irreducibility_probe(const std::vector<long long>& f) {
  if (f.size() < 2) return CheckStatus::fail;
  if (f.size() == 2) return CheckStatus::pass;
  for (long long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97}) {
    auto fp = detail::reduce_mod(f, p);
    if (fp.size() != f.size()) continue;  // leading coefficient vanishes
    if (detail::mp_gcd(fp, detail::mp_derivative(fp, p), p).size() != 1) continue;  // p | disc
    if (detail::irreducible_mod_p(fp, p)) return CheckStatus::pass;
  }
  return CheckStatus::undetermined;
}

/// Characteristic polynomial of left multiplication by the first basis
/// combination whose polynomial is squarefree (a primitive element).
inline std::optional<std::vector<long long>> generator_minpoly(const AlgebraSpec& alg) {
  const std::size_t n = alg.dim;
  std::vector<IntVec> trials;
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    trials.push_back(e);
  }
  for (long long s = 1; s <= 3; ++s) {
    IntVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<long long>(i) * s + 1;
    trials.push_back(v);
  }
  for (const auto& t : trials) {
    auto cp = charpoly(left_mult_matrix(AlgebraElement(t), alg));
    if (!poly_squarefree(cp)) continue;
    std::vector<long long> out;
    for (const auto& c : cp) {
      if (!is_integer(c)) return std::nullopt;
      out.push_back(to_ll(c));
    }
    return out;
  }
  return std::nullopt;
}

namespace detail {

/// A nonzero element of norm 0 with coordinates in [-b, b], if any.
inline std::optional<IntVec> find_norm_zero(const AlgebraSpec& alg, long long b) {
  IntegralArithmetic arith(alg);
  const std::size_t n = alg.dim;
  IntVec x(n, -b);
  for (;;) {
    if (!all_zero(x) && arith.norm(x) == 0) return x;
    std::size_t i = 0;
    while (i < n && x[i] == b) x[i++] = -b;
    if (i == n) return std::nullopt;
    ++x[i];
  }
}

/// Random products x*y == 0 with x, y nonzero.
inline std::optional<std::pair<IntVec, IntVec>> find_zero_divisor(const AlgebraSpec& alg, int pairs) {
  IntegralArithmetic arith(alg);
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<long long> coord(-4, 4);
  const std::size_t n = alg.dim;
  // basis pairs first: catches idempotent splittings immediately
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntVec x(n, 0), y(n, 0);
      x[i] = 1;
      y[j] = 1;
      if (all_zero(arith.mul(x, y))) return std::make_pair(x, y);
    }
  for (int t = 0; t < pairs; ++t) {
    IntVec x(n), y(n);
    for (auto& c : x) c = coord(rng);
    for (auto& c : y) c = coord(rng);
    if (all_zero(x) || all_zero(y)) continue;
    if (all_zero(arith.mul(x, y))) return std::make_pair(x, y);
  }
  return std::nullopt;
}

inline std::string vec_str(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace detail

inline ValidationReport validate_order(const OrderSpec& order, Family family) {
  ValidationReport rep;
  const auto& alg = order.algebra;
  if (auto msg = check_associative_unital(alg))
    rep.add("associative-unital", CheckStatus::fail, *msg);
  else
    rep.add("associative-unital", CheckStatus::pass);
  try {
    require_order(order);
    rep.add("integral-order", CheckStatus::pass);
  } catch (const Error& e) {
    rep.add("integral-order", CheckStatus::fail, e.what());
    return rep;
  }
  if (!rep.ok()) return rep;

  if (auto zd = detail::find_zero_divisor(alg, 1000))
    rep.add("zero-divisors", CheckStatus::fail,
            "zero divisors " + detail::vec_str(zd->first) + " * " + detail::vec_str(zd->second) + " = 0");
  else if (auto z = detail::find_norm_zero(alg, alg.dim <= 3 ? 4 : 2))
    rep.add("zero-divisors", CheckStatus::fail, "nonzero element of norm 0: " + detail::vec_str(*z));
  else
    rep.add("zero-divisors", CheckStatus::pass, "none among 1000 random pairs; no norm-0 element in the probe box");

  if (family == Family::normform) {
    if (alg.kind != AlgebraKind::number_field) rep.add("family", CheckStatus::fail, "normform needs a number field");
    auto mp = generator_minpoly(alg);
    if (!mp) {
      rep.add("irreducible", CheckStatus::fail, "no generator with squarefree characteristic polynomial");
    } else {
      auto st = irreducibility_probe(*mp);
      // a zero divisor already proves reducibility
      if (st != CheckStatus::pass && !rep.ok()) st = CheckStatus::fail;
      rep.add("irreducible", st, st == CheckStatus::pass ? "irreducible modulo a prime" : "no prime certifies irreducibility");
    }
    try {
      if (!norm_form_definite(order) && order.unit_rank >= 2)
        rep.add("exact-support", CheckStatus::undetermined, "unit rank >= 2: only box mode is available");
      else
        rep.add("exact-support", CheckStatus::pass);
    } catch (const Unsupported&) {
      rep.add("exact-support", CheckStatus::undetermined, "norm form is not quadratic: only box mode is available");
    }
  } else if (family == Family::algebra_norm) {
    if (alg.kind != AlgebraKind::quaternion) {
      rep.add("family", CheckStatus::fail, "algebra-norm needs a quaternion algebra");
    } else {
      if (auto msg = check_involution(alg))
        rep.add("involution", CheckStatus::fail, *msg);
      else
        rep.add("involution", CheckStatus::pass);
      rep.add("division", rep.ok() ? CheckStatus::pass : CheckStatus::fail,
              rep.ok() ? "division probe passed" : "not a division algebra");
      rep.add("definite", norm_form_definite(order) ? CheckStatus::pass : CheckStatus::undetermined,
              norm_form_definite(order) ? "" : "indefinite: only box mode is available");
    }
  } else {
    rep.add("family", CheckStatus::fail, "quadric family needs a section payload");
  }
  return rep;
}

inline ValidationReport validate_section(const QuadricSectionSpec& s) {
  ValidationReport rep;
  const std::size_t n = s.dim();
  if (!s.gram.symmetric()) rep.add("symmetric", CheckStatus::fail, "gram matrix is not symmetric");
  if (s.gram.dim() != n) {
    rep.add("dimensions", CheckStatus::fail, "gram and linear form sizes differ");
    return rep;
  }
  rep.add("dimension", n >= 3 ? CheckStatus::pass : CheckStatus::fail, "n = " + std::to_string(n) + " (need n >= 3)");
  Rational det = determinant(s.gram.gram);
  rep.add("nondegenerate", det != 0 ? CheckStatus::pass : CheckStatus::fail, "det = " + to_string(det));
  if (std::all_of(s.ell.begin(), s.ell.end(), [](const Rational& c) { return c == 0; })) {
    rep.add("linear-form", CheckStatus::fail, "linear form is zero");
    return rep;
  }
  if (!rep.ok()) return rep;
  LinearFormFrame frame(s.ell);
  auto def = definiteness(restricted_gram(s.gram.gram, frame.kernel_basis()));
  rep.add("restricted-definite", def != Definiteness::indefinite_or_degenerate ? CheckStatus::pass : CheckStatus::fail,
          def == Definiteness::positive   ? "q on ker l is positive definite"
          : def == Definiteness::negative ? "q on ker l is negative definite"
                                          : "q on ker l is not definite");
  bool bp_ok = s.base_point.size() == n && gcd_of(s.base_point) == 1 && s.q(s.base_point) == 0 && s.l(s.base_point) > 0;
  rep.add("base-point", bp_ok ? CheckStatus::pass : CheckStatus::fail,
          bp_ok ? "v0 = " + detail::vec_str(s.base_point) : "v0 must be primitive with q(v0) = 0 and l(v0) > 0");
  return rep;
}

inline ValidationReport validate(const ScenarioSpec& s) {
  if (s.family == Family::quadric) return validate_section(s.section());
  return validate_order(s.order(), s.family);
}

}  // namespace orbitcount

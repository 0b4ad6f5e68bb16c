#pragma once

// Number-theoretic and numeric helpers: Pell solutions by continued
// fractions, 64-bit factorization, zeta brackets, certified polynomial roots.

#include "arith.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

namespace orbitcount {

// ---------------------------------------------------------------- Pell

struct PellSolution {
  BigInt x;
  BigInt y;
  int norm_sign = 1;  // x^2 - d y^2
};

/// Smallest positive solution of x^2 - d y^2 = +-1 from the continued
/// fraction of sqrt(d).
inline PellSolution pell(long long d) {
  if (d < 2) throw InvalidArgument("pell: d must be >= 2");
  const long long a0 = static_cast<long long>(isqrt_u64(static_cast<unsigned long long>(d)));
  if (a0 * a0 == d) throw InvalidArgument("pell: d = " + std::to_string(d) + " is a perfect square");
  // sqrt(d) = [a0; a1, a2, ...], complete quotients (sqrt(d) + m) / q
  long long m = 0, q = 1, a = a0;
  BigInt p_prev = 1, p = a0, h_prev = 0, h = 1;
  const BigInt D = d;
  for (;;) {
    BigInt val = p * p - D * h * h;
    if (val == 1 || val == -1) return {p, h, val == 1 ? 1 : -1};
    m = a * q - m;
    q = (d - m * m) / q;
    a = (a0 + m) / q;
    BigInt p_next = a * p + p_prev, h_next = a * h + h_prev;
    p_prev = p;
    p = p_next;
    h_prev = h;
    h = h_next;
  }
}

// ---------------------------------------------------------------- factor

namespace detail {

inline unsigned long long mulmod(unsigned long long a, unsigned long long b, unsigned long long m) {
  return static_cast<unsigned long long>(static_cast<unsigned __int128>(a) * b % m);
}

inline unsigned long long powmod(unsigned long long b, unsigned long long e, unsigned long long m) {
  unsigned long long r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline const std::vector<unsigned>& small_primes() {
  static const std::vector<unsigned> primes = [] {
    constexpr unsigned limit = 1000000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<unsigned> out;
    for (unsigned i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long long j = static_cast<unsigned long long>(i) * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

inline unsigned long long pollard_rho(unsigned long long n) {
  if (n % 2 == 0) return 2;
  for (unsigned long long c = 1;; ++c) {
    unsigned long long x = 2, y = 2, d = 1;
    auto f = [&](unsigned long long v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

}  // namespace detail

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(unsigned long long n) {
  if (n < 2) return false;
  for (unsigned long long p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  unsigned long long d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned long long a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    unsigned long long x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

constexpr unsigned long long factor_limit = 1000000000000000000ULL;

/// Sorted prime multiset of m (m = 1 gives the empty list).
inline std::vector<unsigned long long> factor(unsigned long long m) {
  if (m == 0) throw InvalidArgument("factor: m must be >= 1");
  if (m > factor_limit) throw InvalidArgument("factor: inputs above 10^18 are not supported");
  std::vector<unsigned long long> out;
  for (unsigned p : detail::small_primes()) {
    if (static_cast<unsigned long long>(p) * p > m) break;
    while (m % p == 0) {
      out.push_back(p);
      m /= p;
    }
  }
  std::vector<unsigned long long> stack;
  if (m > 1) stack.push_back(m);
  while (!stack.empty()) {
    unsigned long long v = stack.back();
    stack.pop_back();
    if (is_prime(v)) {
      out.push_back(v);
      continue;
    }
    unsigned long long d = detail::pollard_rho(v);
    stack.push_back(d);
    stack.push_back(v / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// (prime, exponent) pairs.
inline std::vector<std::pair<unsigned long long, int>> factor_exponents(unsigned long long m) {
  std::vector<std::pair<unsigned long long, int>> out;
  for (auto p : factor(m)) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

// ---------------------------------------------------------------- zeta

struct Interval {
  long double lo = 0;
  long double hi = 0;
  long double mid() const { return (lo + hi) / 2; }
  long double width() const { return hi - lo; }
  bool contains(long double v) const { return lo <= v && v <= hi; }
};

/// Bracket for zeta(s): partial sum through N plus the integral tail bounds
/// int_{N+1}^inf x^-s dx <= tail <= int_N^inf x^-s dx, widened for rounding.
inline Interval zeta_value(int s) {
  if (s < 2) throw InvalidArgument("zeta_value: s must be >= 2 (pole at s = 1)");
  // width of the tail bracket is below N^-s; pick N with N^-s <= 1e-10
  long long n_terms = static_cast<long long>(std::ceil(std::pow(1e10L, 1.0L / s)));
  n_terms = std::max<long long>(n_terms, 10);
  long double sum = 0, comp = 0;
  for (long long k = n_terms; k >= 1; --k) {
    long double term = std::pow(static_cast<long double>(k), -static_cast<long double>(s));
    long double y = term - comp;
    long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const long double sm1 = s - 1;
  long double tail_lo = std::pow(static_cast<long double>(n_terms + 1), -sm1) / sm1;
  long double tail_hi = std::pow(static_cast<long double>(n_terms), -sm1) / sm1;
  long double slack = 64 * std::numeric_limits<long double>::epsilon() * (sum + 1);
  return {sum + tail_lo - slack, sum + tail_hi + slack};
}

// ---------------------------------------------------------------- polynomials

/// Coefficients low to high.
using RPoly = std::vector<Rational>;

inline void poly_trim(RPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rational poly_eval(const RPoly& p, const Rational& x) {
  Rational v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

inline RPoly poly_derivative(const RPoly& p) {
  RPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long long>(i));
  poly_trim(d);
  return d;
}

inline RPoly poly_mod(RPoly a, const RPoly& b) {
  poly_trim(a);
  if (b.empty()) throw InvalidArgument("polynomial division by zero");
  while (a.size() >= b.size()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    poly_trim(a);
  }
  return a;
}

inline RPoly poly_gcd(RPoly a, RPoly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    RPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

inline bool poly_squarefree(const RPoly& p) { return poly_gcd(p, poly_derivative(p)).size() <= 1; }

/// Characteristic polynomial det(x I - M), monic, by Faddeev-LeVerrier.
inline RPoly charpoly(const RMatrix& m) {
  const std::size_t n = m.size();
  RPoly coeff(n + 1, Rational(0));
  coeff[n] = 1;
  RMatrix mk(n, RVec(n, Rational(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = M * M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(M M_k)/k
    RMatrix prod = matmul(m, mk);
    for (std::size_t i = 0; i < n; ++i) prod[i][i] += coeff[n - k + 1];
    mk = prod;
    RMatrix mm = matmul(m, mk);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += mm[i][i];
    coeff[n - k] = -tr / static_cast<long long>(k);
  }
  return coeff;
}

// ---------------------------------------------------------------- embeddings

struct CertifiedRoot {
  std::complex<long double> value;
  long double radius = 0;  // |true root - value| <= radius
  bool real = false;
};

struct Embeddings {
  std::vector<CertifiedRoot> roots;
  int r1 = 0;
  int r2 = 0;
};

namespace detail {

inline std::vector<RPoly> sturm_chain(const RPoly& p) {
  std::vector<RPoly> chain{p, poly_derivative(p)};
  while (chain.back().size() > 1) {
    RPoly r = poly_mod(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  return chain;
}

inline int sign_changes(const std::vector<RPoly>& chain, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    Rational v = poly_eval(p, x);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

inline std::complex<long double> eval_c(const RPoly& p, std::complex<long double> z) {
  std::complex<long double> v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + static_cast<long double>(*it);
  return v;
}

}  // namespace detail

/// All roots of a squarefree integer polynomial (coefficients low to high).
/// Real roots are isolated exactly with a Sturm chain and bisected to width
/// <= precision; complex roots come from Durand-Kerner iteration with the
/// inclusion radius n |p(z)| / |p'(z)|.
inline Embeddings embeddings(const std::vector<BigInt>& minpoly, long double precision) {
  RPoly p;
  for (const auto& c : minpoly) p.emplace_back(c);
  poly_trim(p);
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) throw InvalidArgument("embeddings: constant polynomial");
  if (!poly_squarefree(p)) throw InvalidArgument("embeddings: polynomial is not squarefree");
  if (!(precision > 0)) throw InvalidArgument("embeddings: precision must be positive");

  Embeddings out;
  auto chain = detail::sturm_chain(p);
  // Cauchy bound
  Rational bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, Rational(boost::multiprecision::abs(p[i] / p[n])));
  bound += 1;
  std::vector<std::pair<Rational, Rational>> pending{{-bound, bound}}, isolated;
  while (!pending.empty()) {
    auto [lo, hi] = pending.back();
    pending.pop_back();
    int count = detail::sign_changes(chain, lo) - detail::sign_changes(chain, hi);
    if (count == 0) continue;
    if (count == 1) {
      isolated.emplace_back(lo, hi);
      continue;
    }
    Rational mid = (lo + hi) / 2;
    // split points must not be roots; a root in (lo, hi] is counted once
    while (poly_eval(p, mid) == 0) mid += (hi - mid) / 3;
    pending.emplace_back(lo, mid);
    pending.emplace_back(mid, hi);
  }
  const Rational prec(static_cast<double>(precision));
  for (auto [lo, hi] : isolated) {
    if (lo != hi) {
      // invariant: exactly one root in (lo, hi]
      while (hi - lo > prec) {
        Rational mid = (lo + hi) / 2;
        Rational v = poly_eval(p, mid);
        if (v == 0) {
          lo = hi = mid;
          break;
        }
        if (detail::sign_changes(chain, lo) - detail::sign_changes(chain, mid) == 1)
          hi = mid;
        else
          lo = mid;
      }
    }
    long double c = static_cast<long double>((lo + hi) / 2);
    long double r = static_cast<long double>((hi - lo) / 2);
    out.roots.push_back({{c, 0.0L}, r, true});
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const CertifiedRoot& a, const CertifiedRoot& b) { return a.value.real() < b.value.real(); });
  out.r1 = static_cast<int>(out.roots.size());
  if ((n - out.r1) % 2 != 0) throw Error("embeddings: inconsistent real root count");
  out.r2 = (n - out.r1) / 2;
  if (out.r2 == 0) return out;

  // Durand-Kerner on the monic polynomial
  RPoly monic = p;
  for (auto& c : monic) c /= p[n];
  RPoly deriv = poly_derivative(monic);
  std::vector<std::complex<long double>> z(n);
  const std::complex<long double> seed(0.4L, 0.9L);
  for (int i = 0; i < n; ++i) z[i] = std::pow(seed, i) * static_cast<long double>(bound);
  for (int iter = 0; iter < 2000; ++iter) {
    long double delta = 0;
    for (int i = 0; i < n; ++i) {
      std::complex<long double> denom = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      auto step = detail::eval_c(monic, z[i]) / denom;
      z[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-30L) break;
  }
  std::vector<CertifiedRoot> complex_roots;
  for (auto zi : z) {
    long double rad =
        n * std::abs(detail::eval_c(monic, zi)) / std::abs(detail::eval_c(deriv, zi)) +
        16 * std::numeric_limits<long double>::epsilon() * (1 + std::abs(zi));
    if (std::abs(zi.imag()) > rad) complex_roots.push_back({zi, rad, false});
  }
  if (static_cast<int>(complex_roots.size()) != 2 * out.r2)
    throw Error("embeddings: could not separate complex roots at the requested precision");
  for (const auto& cr : complex_roots) {
    if (cr.radius > precision) throw Error("embeddings: complex root not certified to the requested precision");
  }
  std::sort(complex_roots.begin(), complex_roots.end(), [](const CertifiedRoot& a, const CertifiedRoot& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() > b.value.imag();
  });
  out.roots.insert(out.roots.end(), complex_roots.begin(), complex_roots.end());
  return out;
}

}  // namespace orbitcount

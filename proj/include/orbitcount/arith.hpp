#pragma once

// Exact integer/rational substrate: bignum aliases, "p/q" text form,
// overflow-checked machine-integer helpers and exact rational linear algebra.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orbitcount {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using i128 = __int128;

using IntVec = std::vector<long long>;
using RVec = std::vector<Rational>;
using RMatrix = std::vector<RVec>;
using IntMatrix = std::vector<IntVec>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition.
struct InvalidArgument : Error {
  using Error::Error;
};

/// Configuration outside the exactly supported regime.
struct Unsupported : Error {
  using Error::Error;
};

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    auto b = t.find_first_not_of(" \t");
    auto e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? std::string{} : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw InvalidArgument("empty rational literal");
  auto check_digits = [&](const std::string& part) {
    std::size_t i = (part.size() > 0 && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) throw InvalidArgument("malformed rational literal '" + s + "'");
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw InvalidArgument("malformed rational literal '" + s + "'");
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    check_digits(s);
    return Rational(BigInt(s[0] == '+' ? s.substr(1) : s));
  }
  std::string p = s.substr(0, slash), q = s.substr(slash + 1);
  trim(p);
  trim(q);
  check_digits(p);
  check_digits(q);
  BigInt den(q[0] == '+' ? q.substr(1) : q);
  if (den == 0) throw InvalidArgument("zero denominator in '" + s + "'");
  BigInt num(p[0] == '+' ? p.substr(1) : p);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline long long to_ll(const BigInt& v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw Error("integer does not fit in 64 bits: " + v.str());
  return static_cast<long long>(v);
}

inline long long to_ll(const Rational& r) {
  if (!is_integer(r)) throw Error("expected an integer, got " + to_string(r));
  return to_ll(numerator(r));
}

inline long long checked_ll(i128 v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw Error("64-bit overflow in exact integer path");
  return static_cast<long long>(v);
}

inline double to_double(const Rational& r) { return static_cast<double>(r); }

inline long long gcd_ll(long long a, long long b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

inline long long gcd_of(const IntVec& v) {
  long long g = 0;
  for (long long x : v) g = gcd_ll(g, x);
  return g;
}

/// floor(sqrt(n)) for n >= 0.
inline unsigned long long isqrt_u64(unsigned long long n) {
  if (n == 0) return 0;
  auto r = static_cast<unsigned long long>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (static_cast<unsigned __int128>(r) * r > n)) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline i128 isqrt(i128 n) {
  if (n < 0) throw InvalidArgument("isqrt of negative value");
  if (n <= static_cast<i128>(std::numeric_limits<unsigned long long>::max() >> 1))
    return static_cast<i128>(isqrt_u64(static_cast<unsigned long long>(n)));
  auto r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw InvalidArgument("isqrt of negative value");
  return boost::multiprecision::sqrt(n);
}

/// Exact square root when n is a perfect square.
inline std::optional<i128> exact_sqrt(i128 n) {
  if (n < 0) return std::nullopt;
  // quadratic residues mod 64 and 63 reject most non-squares cheaply
  constexpr std::uint64_t qr64 = [] {
    std::uint64_t mask = 0;
    for (unsigned i = 0; i < 64; ++i) mask |= 1ULL << ((i * i) & 63);
    return mask;
  }();
  constexpr std::uint64_t qr63 = [] {
    std::uint64_t mask = 0;
    for (unsigned i = 0; i < 63; ++i) mask |= 1ULL << ((i * i) % 63);
    return mask;
  }();
  if (!((qr64 >> static_cast<unsigned>(n & 63)) & 1ULL)) return std::nullopt;
  if (!((qr63 >> static_cast<unsigned>(n % 63)) & 1ULL)) return std::nullopt;
  i128 r = isqrt(n);
  if (r * r != n) return std::nullopt;
  return r;
}

inline bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  BigInt r = isqrt(n);
  return r * r == n;
}

inline i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

inline BigInt common_denominator(const RVec& v) {
  BigInt l = 1;
  for (const auto& x : v) l = lcm(l, denominator(x));
  return l;
}

inline BigInt common_denominator(const RMatrix& m) {
  BigInt l = 1;
  for (const auto& row : m) l = lcm(l, common_denominator(row));
  return l;
}

inline RVec to_rational(const IntVec& v) {
  RVec out;
  out.reserve(v.size());
  for (long long x : v) out.emplace_back(x);
  return out;
}

inline std::optional<IntVec> to_integral(const RVec& v) {
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!is_integer(x)) return std::nullopt;
    out.push_back(to_ll(x));
  }
  return out;
}

inline RMatrix identity_matrix(std::size_t n) {
  RMatrix m(n, RVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline RMatrix transpose(const RMatrix& a) {
  if (a.empty()) return {};
  RMatrix t(a[0].size(), RVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline RMatrix matmul(const RMatrix& a, const RMatrix& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RMatrix c(n, RVec(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

inline RVec matvec(const RMatrix& a, const RVec& x) {
  RVec y(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline Rational dot(const RVec& a, const RVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// x^T A y
inline Rational bilinear(const RMatrix& a, const RVec& x, const RVec& y) {
  return dot(x, matvec(a, y));
}

inline Rational determinant(RMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

/// Solves A x = b exactly; nullopt when A is singular.
inline std::optional<RVec> solve(RMatrix a, RVec b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline std::optional<RMatrix> inverse(const RMatrix& a) {
  const std::size_t n = a.size();
  RMatrix cols;
  for (std::size_t j = 0; j < n; ++j) {
    RVec e(n, Rational(0));
    e[j] = 1;
    auto x = solve(a, e);
    if (!x) return std::nullopt;
    cols.push_back(std::move(*x));
  }
  return transpose(cols);
}

/// Leading principal minors d_1..d_n.
inline RVec leading_minors(const RMatrix& a) {
  RVec out;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    RMatrix sub(k, RVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[i][j];
    out.push_back(determinant(std::move(sub)));
  }
  return out;
}

enum class Definiteness { positive, negative, indefinite_or_degenerate };

/// Sylvester's criterion, exact.
inline Definiteness definiteness(const RMatrix& a) {
  if (a.empty()) return Definiteness::indefinite_or_degenerate;
  auto minors = leading_minors(a);
  bool pos = true, neg = true;
  for (std::size_t k = 0; k < minors.size(); ++k) {
    if (minors[k] <= 0) pos = false;
    bool odd = (k % 2 == 0);  // minor of size k+1
    if (odd ? minors[k] >= 0 : minors[k] <= 0) neg = false;
  }
  if (pos) return Definiteness::positive;
  if (neg) return Definiteness::negative;
  return Definiteness::indefinite_or_degenerate;
}

inline long long int_determinant(const IntMatrix& m) {
  RMatrix r;
  for (const auto& row : m) r.push_back(to_rational(row));
  return to_ll(determinant(std::move(r)));
}

inline IntMatrix int_matmul(const IntMatrix& a, const IntMatrix& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMatrix c(n, IntVec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      i128 s = 0;
      for (std::size_t l = 0; l < k; ++l) s += static_cast<i128>(a[i][l]) * b[l][j];
      c[i][j] = checked_ll(s);
    }
  return c;
}

inline IntVec int_matvec(const IntMatrix& a, const IntVec& x) {
  IntVec y(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    i128 s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += static_cast<i128>(a[i][j]) * x[j];
    y[i] = checked_ll(s);
  }
  return y;
}

inline IntMatrix int_identity(std::size_t n) {
  IntMatrix m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

/// Extended gcd: returns (g, x, y) with a x + b y = g >= 0.
inline std::array<long long, 3> ext_gcd(long long a, long long b) {
  long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long long q = old_r / r;
    long long tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

}  // namespace orbitcount

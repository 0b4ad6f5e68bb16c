#pragma once

// Reference counts built on different algorithms from the main pipeline:
// Kronecker-symbol ideal counts, two-squares scans, Jacobi's four-squares
// formula, direct half-integer scans and pairwise associate classes.

#include "numeric.hpp"
#include "orders.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace orbitcount {

inline bool is_squarefree(unsigned long long m) {
  for (auto [p, e] : factor_exponents(m))
    if (e > 1) return false;
  return true;
}

inline bool is_fundamental_discriminant(long long d) {
  if (d == 0 || d == 1) return false;
  long long r = ((d % 4) + 4) % 4;
  if (r == 1) return is_squarefree(static_cast<unsigned long long>(std::llabs(d)));
  if (r != 0) return false;
  long long m = d / 4;
  long long rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && is_squarefree(static_cast<unsigned long long>(std::llabs(m)));
}

/// Kronecker symbol (D / p) for a prime p.
inline int kronecker_prime(long long d, unsigned long long p) {
  if (p == 2) {
    if (d % 2 == 0) return 0;
    long long r = ((d % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
  }
  long long r = ((d % static_cast<long long>(p)) + static_cast<long long>(p)) % static_cast<long long>(p);
  if (r == 0) return 0;
  auto e = detail::powmod(static_cast<unsigned long long>(r), (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

/// a(m) = sum_{d | m} chi_D(d): the number of ideals of norm m in the quadratic order of discriminant D.
inline long long ideal_count_at(long long disc, unsigned long long m) {
  long long a = 1;
  for (auto [p, e] : factor_exponents(m)) {
    int chi = kronecker_prime(disc, p);
    long long local = 0, pw = 1;
    for (int i = 0; i <= e; ++i) {
      local += pw;
      pw *= chi;
    }
    a *= local;
  }
  return a;
}

/// sum_{m <= s} a(m).
inline long long ideal_count_quadratic(long long disc, long long s) {
  if (!is_fundamental_discriminant(disc))
    throw InvalidArgument("ideal_count_quadratic: " + std::to_string(disc) + " is not a fundamental discriminant");
  if (s < 1) throw InvalidArgument("ideal_count_quadratic: s must be >= 1");
  long long total = 0;
  for (long long m = 1; m <= s; ++m) total += ideal_count_at(disc, static_cast<unsigned long long>(m));
  return total;
}

/// Per-level a(1..s), index 0 unused.
inline std::vector<long long> ideal_counts_per_level(long long disc, long long s) {
  if (!is_fundamental_discriminant(disc))
    throw InvalidArgument("ideal_count_quadratic: " + std::to_string(disc) + " is not a fundamental discriminant");
  std::vector<long long> out(static_cast<std::size_t>(s + 1), 0);
  for (long long m = 1; m <= s; ++m) out[static_cast<std::size_t>(m)] = ideal_count_at(disc, static_cast<unsigned long long>(m));
  return out;
}

/// #{(a, b) : a^2 + b^2 = k, gcd(a, b) = 1} / 2 by a direct scan.
inline long long two_squares_primitive(long long k) {
  if (k < 1) throw InvalidArgument("two_squares_primitive: k must be >= 1");
  long long count = 0;
  for (long long a = 0; a * a <= k; ++a) {
    long long rest = k - a * a;
    auto b = exact_sqrt(rest);
    if (!b) continue;
    long long bb = static_cast<long long>(*b);
    if (gcd_ll(a, bb) != 1) continue;
    // sign choices for (a, b), without double counting zero coordinates
    count += (a == 0 ? 1 : 2) * (bb == 0 ? 1 : 2);
  }
  return count / 2;
}

enum class FourSquareLattice { lipschitz, hurwitz };

/// Cumulative counts sum_{m <= r} #{x : N(x) = m} for m = 1..r (index 0 unused).
inline std::vector<long long> four_square_counts(long long r, FourSquareLattice lattice) {
  if (r < 1) throw InvalidArgument("jacobi_r4_cumulative: r must be >= 1");
  std::vector<long long> per(static_cast<std::size_t>(r + 1), 0);
  if (lattice == FourSquareLattice::lipschitz) {
    // r4(m) = 8 * sum_{d | m, 4 does not divide d} d
    for (long long d = 1; d <= r; ++d) {
      if (d % 4 == 0) continue;
      for (long long m = d; m <= r; m += d) per[static_cast<std::size_t>(m)] += 8 * d;
    }
  } else {
    // y = 2x with all coordinates of equal parity, |y|^2 = 4m
    const long long lim = 4 * r;
    auto span = [&](long long rest, long long parity) {
      long long b = static_cast<long long>(isqrt_u64(static_cast<unsigned long long>(rest)));
      if (((b % 2) + 2) % 2 != parity) --b;
      return b;  // largest value <= sqrt(rest) with the given parity
    };
    for (long long p = 0; p < 2; ++p) {
      for (long long y0 = -span(lim, p); y0 <= span(lim, p); y0 += 2) {
        long long s0 = y0 * y0;
        long long b1 = span(lim - s0, p);
        for (long long y1 = -b1; y1 <= b1; y1 += 2) {
          long long s1 = s0 + y1 * y1;
          long long b2 = span(lim - s1, p);
          for (long long y2 = -b2; y2 <= b2; y2 += 2) {
            long long s2 = s1 + y2 * y2;
            long long b3 = span(lim - s2, p);
            for (long long y3 = -b3; y3 <= b3; y3 += 2) {
              long long s3 = s2 + y3 * y3;
              if (s3 != 0 && s3 % 4 == 0) ++per[static_cast<std::size_t>(s3 / 4)];
            }
          }
        }
      }
    }
  }
  return per;
}

inline long long jacobi_r4_cumulative(long long r, FourSquareLattice lattice) {
  auto per = four_square_counts(r, lattice);
  return std::accumulate(per.begin(), per.end(), 0LL);
}

struct Partition {
  std::vector<std::vector<std::size_t>> classes;  // indices into the input, each sorted
  std::vector<IntVec> representatives;            // lexicographically least member
};

/// Associate classes by direct comparison against one member of every class
/// found so far.
inline Partition pairwise_orbits(const std::vector<IntVec>& elements, const OrderSpec& order) {
  IntegralArithmetic arith(order.algebra);
  std::vector<ScaledInverse> inv;
  inv.reserve(elements.size());
  for (const auto& x : elements) {
    if (gcd_of(x) == 0) throw InvalidArgument("pairwise_orbits: zero element");
    inv.push_back(scaled_inverse(x, order.algebra));
  }
  std::vector<long long> norms;
  for (const auto& x : elements) norms.push_back(std::llabs(arith.norm(x)));
  Partition part;
  std::vector<std::size_t> heads;
  for (std::size_t j = 0; j < elements.size(); ++j) {
    bool placed = false;
    for (std::size_t c = 0; c < heads.size() && !placed; ++c) {
      std::size_t h = heads[c];
      if (norms[h] != norms[j]) continue;
      if (associated_fast(elements[h], inv[h], elements[j], inv[j], arith)) {
        part.classes[c].push_back(j);
        placed = true;
      }
    }
    if (!placed) {
      heads.push_back(j);
      part.classes.push_back({j});
    }
  }
  for (auto& cls : part.classes) {
    std::sort(cls.begin(), cls.end());
    IntVec best = elements[cls.front()];
    for (auto i : cls) best = std::min(best, elements[i]);
    part.representatives.push_back(best);
  }
  // deterministic order: by representative
  std::vector<std::size_t> order_idx(part.classes.size());
  std::iota(order_idx.begin(), order_idx.end(), 0);
  std::sort(order_idx.begin(), order_idx.end(),
            [&](std::size_t a, std::size_t b) { return part.representatives[a] < part.representatives[b]; });
  Partition sorted;
  for (auto i : order_idx) {
    sorted.classes.push_back(std::move(part.classes[i]));
    sorted.representatives.push_back(std::move(part.representatives[i]));
  }
  return sorted;
}

}  // namespace orbitcount

#pragma once

// Norm-level scans over orders: bounded boxes (heuristic) and the
// orbit-complete balanced region for real quadratic orders.

#include "orders.hpp"

#include <map>
#include <set>
#include <vector>

namespace orbitcount {

/// All x with |coords| <= bound and |norm(x)| = |k| (norm(x) = k when `signed_norm`).
/// Not orbit-exhaustive.
inline std::vector<IntVec> box_scan(const OrderSpec& order, long long k, long long bound, bool signed_norm = false) {
  if (bound < 1) throw InvalidArgument("box_scan: bound must be >= 1");
  IntegralArithmetic arith(order.algebra);
  const std::size_t n = order.algebra.dim;
  const long long target = std::llabs(k);
  std::vector<IntVec> out;
  IntVec x(n, -bound);
  for (;;) {
    long long v = arith.norm(x);
    if ((signed_norm ? v == k : std::llabs(v) == target) && gcd_of(x) != 0) out.push_back(x);
    std::size_t i = n;
    while (i-- > 0) {
      if (x[i] < bound) {
        ++x[i];
        break;
      }
      x[i] = -bound;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;  // already lexicographic
}

/// One box pass bucketed by norm value; key is the signed norm, |norm| in [1, top].
inline std::map<long long, std::vector<IntVec>> box_scan_levels(const OrderSpec& order, long long top,
                                                                long long bound) {
  if (bound < 1) throw InvalidArgument("box_scan: bound must be >= 1");
  IntegralArithmetic arith(order.algebra);
  const std::size_t n = order.algebra.dim;
  std::map<long long, std::vector<IntVec>> out;
  IntVec x(n, -bound);
  for (;;) {
    long long v = arith.norm(x);
    if (v != 0 && std::llabs(v) <= top) out[v].push_back(x);
    std::size_t i = n;
    while (i-- > 0) {
      if (x[i] < bound) {
        ++x[i];
        break;
      }
      x[i] = -bound;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

/// Elements of Z[sqrt(d)] of norm k whose embeddings are bounded by
/// sqrt|k| * eta * factor (eta the norm-one fundamental unit). Every
/// norm-one orbit meets this region, since a unit power balances the two
/// embeddings to within a factor eta.
inline std::vector<IntVec> quadratic_norm_candidates(long long d, const IntVec& eta, long long k,
                                                     long long factor = 1) {
  if (k == 0) throw InvalidArgument("indefinite_quadratic_shell: level 0 is not allowed");
  const i128 root_d_up = static_cast<i128>(isqrt_u64(static_cast<unsigned long long>(d))) + 1;
  const i128 eta_up = std::llabs(eta[0]) + std::llabs(eta[1]) * root_d_up;
  // |b| = |s1 - s2| / (2 sqrt d) <= sqrt(|k|) * eta * factor / sqrt(d)
  const i128 bmax = isqrt(static_cast<i128>(std::llabs(k)) * eta_up * eta_up * factor * factor / d);
  std::vector<IntVec> out;
  for (i128 b = -bmax; b <= bmax; ++b) {
    auto a = exact_sqrt(static_cast<i128>(k) + static_cast<i128>(d) * b * b);
    if (!a) continue;
    out.push_back({checked_ll(-*a), checked_ll(b)});
    if (*a != 0) out.push_back({checked_ll(*a), checked_ll(b)});
  }
  sort_lex(out);
  return out;
}

/// Canonical representatives of all norm-one orbits of {x in Z[sqrt d] : N(x) = k}.
inline std::vector<IntVec> indefinite_quadratic_shell(const OrderSpec& order, const UnitGroupData& units, long long k,
                                                      long long factor = 1) {
  auto d = quadratic_radicand(order.algebra);
  if (!d || *d < 2) throw InvalidArgument("indefinite_quadratic_shell: order is not a real quadratic Z[sqrt(d)]");
  if (!units.norm_one_fundamental) throw InvalidArgument("indefinite_quadratic_shell: fundamental unit missing");
  auto eta = to_integral(units.norm_one_fundamental->coords);
  Canonicalizer canon(order, units);
  std::set<IntVec> reps;
  for (const auto& x : quadratic_norm_candidates(*d, *eta, k, factor)) reps.insert(canon(x));
  return {reps.begin(), reps.end()};
}

}  // namespace orbitcount

#pragma once

// Per-level and cumulative orbit counts for norm forms, quadric sections
// and quaternion orders.

#include "oracles.hpp"
#include "shells.hpp"
#include "symmetry.hpp"

#include <atomic>
#include <functional>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <variant>
#include <vector>

namespace orbitcount {

enum class Family { normform, quadric, algebra_norm };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::normform: return "normform";
    case Family::quadric: return "quadric";
    default: return "algebra-norm";
  }
}

inline Family parse_family(const std::string& s) {
  if (s == "normform") return Family::normform;
  if (s == "quadric") return Family::quadric;
  if (s == "algebra-norm") return Family::algebra_norm;
  throw InvalidArgument("unknown family '" + s + "'");
}

struct CountMode {
  bool box = false;
  long long bound = 0;  // initial half-width of the box

  static CountMode exact() { return {}; }
  static CountMode box_of(long long b) { return {true, b}; }
};

inline std::string to_string(const CountMode& m) { return m.box ? "box:" + std::to_string(m.bound) : "exact"; }

inline CountMode parse_mode(const std::string& s) {
  if (s == "exact") return CountMode::exact();
  if (s.rfind("box:", 0) == 0) {
    long long b = 0;
    try {
      std::size_t used = 0;
      b = std::stoll(s.substr(4), &used);
      if (used != s.size() - 4) throw InvalidArgument("");
    } catch (const std::exception&) {
      throw InvalidArgument("mode '" + s + "': box bound is not an integer");
    }
    if (b < 1) throw InvalidArgument("mode '" + s + "': box bound must be >= 1");
    return CountMode::box_of(b);
  }
  throw InvalidArgument("mode must be 'exact' or 'box:B', got '" + s + "'");
}

/// Thrown when box doubling does not stabilize the orbit counts.
struct SaturationError : Error {
  using Error::Error;
};

struct ScenarioSpec {
  Family family = Family::normform;
  std::variant<OrderSpec, QuadricSectionSpec> payload;
  Rational k_max = 0;
  CountMode mode;
  bool primitive_only = false;
  bool abs_norm = false;         // count |N| = k rather than N = k (norm forms)
  std::optional<UnitGroupData> units;  // computed on demand when absent

  const OrderSpec& order() const {
    if (!std::holds_alternative<OrderSpec>(payload)) throw InvalidArgument("scenario payload is not an order");
    return std::get<OrderSpec>(payload);
  }
  const QuadricSectionSpec& section() const {
    if (!std::holds_alternative<QuadricSectionSpec>(payload))
      throw InvalidArgument("scenario payload is not a quadric section");
    return std::get<QuadricSectionSpec>(payload);
  }
  long long scale_e() const { return family == Family::quadric ? section().scale_e : 1; }
  long long top_index() const { return to_ll(BigInt(numerator(k_max * scale_e()) / denominator(k_max * scale_e()))); }
};

struct CountSeries {
  Family family = Family::normform;
  std::vector<long long> levels;  // integer level indices; level = index / scale_e
  std::vector<long long> n_prim;
  std::vector<long long> n_all;
  std::vector<Rational> weighted;  // quadric family only
  std::vector<bool> exact;
  long long scale_e = 1;
  bool primitive_only = false;

  std::size_t size() const { return levels.size(); }
  bool all_exact() const { return std::all_of(exact.begin(), exact.end(), [](bool b) { return b; }); }
  /// Column summed by cumulative(): primitive points for quadrics or when requested, else all.
  const std::vector<long long>& counts() const {
    return (primitive_only || family == Family::quadric) ? n_prim : n_all;
  }
};

/// Level-scaling degree: how the level index moves under x -> p x.
inline int level_scaling_degree(const ScenarioSpec& s) {
  switch (s.family) {
    case Family::normform: return s.order().norm_degree;
    case Family::quadric: return 1;
    default: return 2;
  }
}

// ------------------------------------------------------------ parallel map

/// out[i] = fn(first + i) over a bounded pool; the result order is fixed.
template <class T, class Fn>
std::vector<T> parallel_levels(long long first, long long last, unsigned jobs, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(std::max<long long>(last - first + 1, 0)));
  if (out.empty()) return out;
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(out.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(first + static_cast<long long>(i));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= out.size()) return;
      try {
        out[i] = fn(first + static_cast<long long>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = out.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

// ------------------------------------------------------------ norm forms

namespace detail {

inline long long to_level(const Rational& k, const char* who) {
  if (k == 0) throw InvalidArgument(std::string(who) + ": level 0 is not allowed");
  if (!is_integer(k)) throw InvalidArgument(std::string(who) + ": norm levels of an order are integers");
  return to_ll(k);
}

inline std::size_t norm_one_torsion(const OrderSpec& order, const UnitGroupData& units) {
  IntegralArithmetic arith(order.algebra);
  std::size_t c = 0;
  for (const auto& u : units.torsion)
    if (arith.norm(*to_integral(u.coords)) == 1) ++c;
  return c;
}

inline bool all_zero(const IntVec& x) {
  return std::all_of(x.begin(), x.end(), [](long long c) { return c == 0; });
}

/// Norm-one orbits among elements of a single signed norm.
inline long long pairwise_class_count(const std::vector<IntVec>& elems, const OrderSpec& order, bool primitive) {
  std::vector<IntVec> use;
  for (const auto& x : elems)
    if (!primitive || gcd_of(x) == 1) use.push_back(x);
  if (use.empty()) return 0;
  return static_cast<long long>(pairwise_orbits(use, order).classes.size());
}

}  // namespace detail

/// Orbit counts (primitive, all) of {x in O : N(x) = k} under norm-one units,
/// exactly for definite or real quadratic orders.
inline std::pair<long long, long long> normform_level_exact(const OrderSpec& order, const UnitGroupData& units,
                                                            long long k) {
  if (k == 0) throw InvalidArgument("count_normform_level: level 0 is not allowed");
  if (order.norm_degree == 2 && norm_form_definite(order)) {
    if (k < 0) return {0, 0};
    auto shell = definite_shell(GramForm(norm_gram(order)), Rational(k));
    auto w = static_cast<long long>(detail::norm_one_torsion(order, units));
    long long prim = 0;
    for (const auto& x : shell) prim += gcd_of(x) == 1;
    if (static_cast<long long>(shell.size()) % w != 0 || prim % w != 0)
      throw Error("count_normform_level: shell size not divisible by the unit count; action is not free");
    return {prim / w, static_cast<long long>(shell.size()) / w};
  }
  if (order.unit_rank == 1 && quadratic_radicand(order.algebra)) {
    auto reps = indefinite_quadratic_shell(order, units, k);
    long long prim = 0;
    for (const auto& x : reps) prim += gcd_of(x) == 1;
    return {prim, static_cast<long long>(reps.size())};
  }
  throw Unsupported("count_normform_level: exact mode needs a definite norm form or Z[sqrt(d)]; use box mode");
}

inline long long count_normform_level(const OrderSpec& order, const Rational& k_in, const CountMode& mode = {},
                                      const std::optional<UnitGroupData>& units = std::nullopt) {
  long long k = detail::to_level(k_in, "count_normform_level");
  if (!mode.box) return normform_level_exact(order, units ? *units : unit_group(order), k).second;
  return detail::pairwise_class_count(box_scan(order, k, mode.bound, true), order, false);
}

// ------------------------------------------------------------ quadric sections

struct QuadricLevel {
  long long orbits_prim = 0;
  long long orbits_all = 0;
  Rational weighted = 0;
  long long points_prim = 0;  // |Sigma_k|
};

/// Orbits of all and of primitive points on level k, with the weighted count of the primitive ones.
inline QuadricLevel quadric_level(const SectionEnumerator& se, const SymmetryGroup& group, const Rational& k) {
  std::vector<IntVec> all, prim;
  se.for_each_point(k, Rational(0), [&](const IntVec& x) {
    all.push_back(x);
    if (gcd_of(x) == 1) prim.push_back(x);
  });
  QuadricLevel out;
  auto rp = orbit_partition(std::move(prim), group, k);
  out.points_prim = static_cast<long long>(rp.point_count());
  out.orbits_prim = static_cast<long long>(rp.orbits.size());
  out.weighted = weighted_count(rp);
  out.orbits_all = static_cast<long long>(orbit_partition(std::move(all), group, k).orbits.size());
  return out;
}

inline std::pair<long long, Rational> count_quadric_level(const QuadricSectionSpec& section, const Rational& k) {
  if (k <= 0) throw InvalidArgument("count_quadric_level: level must be positive");
  SectionEnumerator se(section);
  auto lv = quadric_level(se, integral_symmetries(section), k);
  return {lv.orbits_prim, lv.weighted};
}

// ------------------------------------------------------------ quaternion orders

namespace detail {

inline void require_division_payload(const OrderSpec& order) {
  if (order.algebra.kind != AlgebraKind::quaternion)
    throw InvalidArgument("algebra-norm family needs a quaternion order");
  IntegralArithmetic arith(order.algebra);
  // a norm-0 element in a small box means a matrix algebra
  IntVec x(4, -2);
  for (;;) {
    if (!all_zero(x) && arith.norm(x) == 0)
      throw InvalidArgument("algebra '" + order.name + "' has zero divisors; it is not a division algebra");
    std::size_t i = 0;
    while (i < 4 && x[i] == 2) x[i++] = -2;
    if (i == 4) break;
    ++x[i];
  }
}

/// Every orbit of the unit group on the shell has size |units|.
inline void check_free_action(const OrderSpec& order, const UnitGroupData& units, const std::vector<IntVec>& shell) {
  IntegralArithmetic arith(order.algebra);
  std::vector<IntVec> us;
  for (const auto& u : units.torsion) us.push_back(*to_integral(u.coords));
  for (const auto& x : shell) {
    std::set<IntVec> orbit;
    for (const auto& u : us) orbit.insert(arith.mul(u, x));
    if (orbit.size() != us.size())
      throw Error("unit action is not free on the norm shell of " + std::to_string(arith.norm(x)));
  }
}

}  // namespace detail

inline long long count_algebra_shell(const OrderSpec& order, long long m, const CountMode& mode = {},
                                     const std::optional<UnitGroupData>& units_in = std::nullopt) {
  if (m < 1) throw InvalidArgument("count_algebra_shell: level must be a positive integer");
  detail::require_division_payload(order);
  if (mode.box) {
    return detail::pairwise_class_count(box_scan(order, m, mode.bound, true), order, false);
  }
  if (!norm_form_definite(order)) throw Unsupported("count_algebra_shell: exact mode needs a definite order");
  auto units = units_in ? *units_in : finite_units(order);
  auto shell = definite_shell(GramForm(norm_gram(order)), Rational(m));
  detail::check_free_action(order, units, shell);
  return static_cast<long long>(shell.size() / units.torsion.size());
}

// ------------------------------------------------------------ series

namespace detail {

inline CountSeries empty_series(const ScenarioSpec& s) {
  CountSeries out;
  out.family = s.family;
  out.scale_e = s.scale_e();
  out.primitive_only = s.primitive_only;
  return out;
}

inline void push_level(CountSeries& out, long long level, long long prim, long long all, bool exact) {
  out.levels.push_back(level);
  out.n_prim.push_back(prim);
  out.n_all.push_back(all);
  out.exact.push_back(exact);
}

/// Definite quadratic norm: one ball pass, divided by the unit count after a freeness check.
inline CountSeries definite_series(const ScenarioSpec& s, const UnitGroupData& units, long long top, unsigned jobs,
                                   bool norm_one_only) {
  const auto& order = s.order();
  GramForm form(norm_gram(order));
  UnitGroupData acting = units;
  if (norm_one_only) {
    IntegralArithmetic arith(order.algebra);
    std::erase_if(acting.torsion, [&](const AlgebraElement& u) { return arith.norm(*to_integral(u.coords)) != 1; });
  }
  const std::size_t w = acting.torsion.size();
  // freeness on the first few nonempty shells
  int checked = 0;
  for (long long m = 1; m <= std::min<long long>(top, 50) && checked < 5; ++m) {
    auto shell = definite_shell(form, Rational(m));
    if (shell.empty()) continue;
    if (shell.size() % w != 0) throw Error("unit action is not free on the shell of norm " + std::to_string(m));
    check_free_action(order, acting, shell);
    ++checked;
  }
  auto bc = ball_counts(form, top, jobs);
  CountSeries out = empty_series(s);
  for (long long m = 1; m <= top; ++m) {
    auto i = static_cast<std::size_t>(m);
    if (bc.all[i] % w != 0 || bc.prim[i] % w != 0)
      throw Error("shell of norm " + std::to_string(m) + " is not a union of free unit orbits");
    push_level(out, m, static_cast<long long>(bc.prim[i] / w), static_cast<long long>(bc.all[i] / w), true);
  }
  return out;
}

/// Box mode: classes at bound B and 2B must agree level by level.
inline CountSeries box_series(const ScenarioSpec& s, long long top, bool allow_heuristic) {
  const auto& order = s.order();
  auto counts_at = [&](long long bound) {
    auto buckets = box_scan_levels(order, top, bound);
    std::vector<std::pair<long long, long long>> c(static_cast<std::size_t>(top + 1), {0, 0});
    for (const auto& [norm, elems] : buckets) {
      if (norm < 0 && !s.abs_norm) continue;
      auto& slot = c[static_cast<std::size_t>(std::llabs(norm))];
      slot.first += pairwise_class_count(elems, order, true);
      slot.second += pairwise_class_count(elems, order, false);
    }
    return c;
  };
  long long bound = s.mode.bound;
  auto prev = counts_at(bound);
  bool stable = false;
  for (int round = 0; round < 3 && !stable; ++round) {
    auto next = counts_at(bound * 2);
    stable = next == prev;
    prev = std::move(next);
    bound *= 2;
  }
  if (!stable && !allow_heuristic)
    throw SaturationError("box mode: orbit counts still changing at bound " + std::to_string(bound));
  CountSeries out = empty_series(s);
  for (long long m = 1; m <= top; ++m) {
    auto [p, a] = prev[static_cast<std::size_t>(m)];
    push_level(out, m, p, a, false);
  }
  return out;
}

}  // namespace detail

struct SeriesOptions {
  unsigned jobs = 1;
  bool allow_heuristic = false;
};

inline CountSeries normform_series(const ScenarioSpec& s, const SeriesOptions& opt = {}) {
  const auto& order = s.order();
  require_order(order);
  const long long top = s.top_index();
  if (s.mode.box) return detail::box_series(s, top, opt.allow_heuristic);
  auto units = s.units ? *s.units : unit_group(order);
  if (order.norm_degree == 2 && norm_form_definite(order)) return detail::definite_series(s, units, top, opt.jobs, true);
  if (order.unit_rank == 1 && quadratic_radicand(order.algebra)) {
    auto rows = parallel_levels<std::pair<long long, long long>>(1, top, opt.jobs, [&](long long k) {
      auto [p, a] = normform_level_exact(order, units, k);
      if (s.abs_norm) {
        auto [pn, an] = normform_level_exact(order, units, -k);
        p += pn;
        a += an;
      }
      return std::make_pair(p, a);
    });
    CountSeries out = detail::empty_series(s);
    for (long long k = 1; k <= top; ++k) {
      auto [p, a] = rows[static_cast<std::size_t>(k - 1)];
      detail::push_level(out, k, p, a, true);
    }
    return out;
  }
  throw Unsupported("normform: exact counting for '" + order.name + "' is not supported; use --mode box:B");
}

/// Quadric series together with the primitive point counts |Sigma_k| per level.
struct QuadricSeries {
  CountSeries series;
  std::vector<long long> points_prim;
  std::size_t group_order = 1;
};

inline QuadricSeries quadric_series_detail(const ScenarioSpec& s, const SeriesOptions& opt = {}) {
  const auto& section = s.section();
  if (s.mode.box) throw Unsupported("quadric sections are counted exactly only");
  SectionEnumerator se(section);
  auto group = integral_symmetries(section);
  const long long top = s.top_index();
  const Rational e(section.scale_e);
  auto rows = parallel_levels<QuadricLevel>(1, top, opt.jobs,
                                            [&](long long j) { return quadric_level(se, group, Rational(j) / e); });
  QuadricSeries out;
  out.series = detail::empty_series(s);
  out.group_order = group.order();
  for (long long j = 1; j <= top; ++j) {
    const auto& r = rows[static_cast<std::size_t>(j - 1)];
    detail::push_level(out.series, j, r.orbits_prim, r.orbits_all, true);
    out.series.weighted.push_back(r.weighted);
    out.points_prim.push_back(r.points_prim);
  }
  return out;
}

inline CountSeries algebra_series(const ScenarioSpec& s, const SeriesOptions& opt = {}) {
  const auto& order = s.order();
  require_order(order);
  detail::require_division_payload(order);
  const long long top = s.top_index();
  if (s.mode.box) return detail::box_series(s, top, opt.allow_heuristic);
  if (!norm_form_definite(order)) throw Unsupported("algebra-norm: exact counting needs a definite order; use box mode");
  auto units = s.units ? *s.units : finite_units(order);
  return detail::definite_series(s, units, top, opt.jobs, false);
}

inline CountSeries count_series(const ScenarioSpec& s, const SeriesOptions& opt = {}) {
  if (s.k_max < 0) throw InvalidArgument("k_max must be nonnegative");
  switch (s.family) {
    case Family::normform: return normform_series(s, opt);
    case Family::quadric: return quadric_series_detail(s, opt).series;
    default: return algebra_series(s, opt);
  }
}

// ------------------------------------------------------------ aggregation

/// S(r): sum of counts() over levels <= r (r in original units).
inline long long cumulative(const CountSeries& series, const Rational& r) {
  if (series.levels.empty()) return 0;
  Rational top(series.levels.back(), series.scale_e);
  if (r > top) throw InvalidArgument("cumulative: r = " + to_string(r) + " exceeds the computed range " + to_string(top));
  const auto& c = series.counts();
  long long s = 0;
  for (std::size_t i = 0; i < series.size() && Rational(series.levels[i], series.scale_e) <= r; ++i) s += c[i];
  return s;
}

inline Rational cumulative_weighted(const CountSeries& series, const Rational& r) {
  if (series.weighted.empty()) throw InvalidArgument("cumulative_weighted: series carries no weights");
  Rational top(series.levels.back(), series.scale_e);
  if (r > top) throw InvalidArgument("cumulative: r = " + to_string(r) + " exceeds the computed range " + to_string(top));
  Rational s = 0;
  for (std::size_t i = 0; i < series.size() && Rational(series.levels[i], series.scale_e) <= r; ++i)
    s += series.weighted[i];
  return s;
}

/// Prefix sums of a count column, index = position in the series.
inline std::vector<long long> prefix_sums(const std::vector<long long>& v) {
  std::vector<long long> out(v.size());
  long long s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s += v[i];
  return out;
}

/// n_all(k) = sum over p >= 1 with p^d | k of n_prim(k / p^d); levels must be 1..top contiguous.
inline CountSeries imprimitive_from_primitive(const CountSeries& prim, int d, const std::optional<long long>& r = {}) {
  if (d < 1) throw InvalidArgument("imprimitive_from_primitive: degree must be >= 1");
  for (std::size_t i = 0; i < prim.size(); ++i)
    if (prim.levels[i] != static_cast<long long>(i) + 1)
      throw InvalidArgument("imprimitive_from_primitive: levels must be 1, 2, ..., top");
  long long top = static_cast<long long>(prim.size());
  if (r) top = std::min(top, *r);
  CountSeries out = prim;
  out.levels.resize(static_cast<std::size_t>(top));
  out.n_prim.resize(static_cast<std::size_t>(top));
  out.exact.resize(static_cast<std::size_t>(top));
  if (!out.weighted.empty()) out.weighted.resize(static_cast<std::size_t>(top));
  out.n_all.assign(static_cast<std::size_t>(top), 0);
  for (long long p = 1;; ++p) {
    long long pd = 1;
    bool over = false;
    for (int i = 0; i < d && !over; ++i) over = __builtin_mul_overflow(pd, p, &pd) || pd > top;
    if (over) break;
    for (long long j = 1; j * pd <= top; ++j)
      out.n_all[static_cast<std::size_t>(j * pd - 1)] += prim.n_prim[static_cast<std::size_t>(j - 1)];
  }
  return out;
}

}  // namespace orbitcount

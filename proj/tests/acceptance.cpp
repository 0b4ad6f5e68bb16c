// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <orbitcount.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

using namespace orbitcount;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "first failure: " << what << "; ";
      ok = false;
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, Outcome& o, double elapsed, double limit) {
  o.require(elapsed < limit, "runtime " + std::to_string(elapsed) + " s over the " + std::to_string(limit) + " s bound");
  if (!o.ok) ++failures;
  std::printf("%s [%d] %s (%.1f s of %.0f s) %s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), elapsed, limit,
              o.note.str().c_str());
  std::fflush(stdout);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

ScenarioSpec preset(const std::string& name, long long k) { return make_preset(name, Rational(k)).scenario; }

/// Cumulative orbit counts against the Kronecker-symbol ideal oracle at every s.
void oracle_equality(int id, const std::string& name, long long disc, double limit) {
  auto t0 = Clock::now();
  Outcome o;
  const long long top = 10000;
  auto series = count_series(preset(name, top));
  auto oracle = ideal_counts_per_level(disc, top);
  auto sums = prefix_sums(series.counts());
  long long cum = 0, first_bad = 0;
  for (long long s = 1; s <= top; ++s) {
    cum += oracle[static_cast<std::size_t>(s)];
    if (sums[static_cast<std::size_t>(s - 1)] != cum && first_bad == 0) first_bad = s;
  }
  o.require(first_bad == 0, "divergence at s = " + std::to_string(first_bad));
  o.note << "S(10) = " << cumulative(series, Rational(10)) << " vs oracle " << ideal_count_quadratic(disc, 10)
         << "; S(1e4) = " << sums.back() << " vs oracle " << cum;
  if (id == 1) o.require(cumulative(series, Rational(10)) == 9, "spot value S(10) = 9");
  report(id, "ideal-oracle equality for " + name + " (D = " + std::to_string(disc) + "), s <= 1e4", o, seconds_since(t0),
         limit);
}

void criterion3() {
  auto t0 = Clock::now();
  Outcome o;
  const long long top = 100000;
  for (const std::string name : {"zsqrt2", "gauss"}) {
    auto s = preset(name, top);
    auto series = count_series(s);
    auto inv = quadratic_invariants(s.order(), unit_group(s.order()), 1);
    o.require(inv.has_value(), name + ": invariants unavailable");
    if (!inv) continue;
    double predicted = predicted_constant_ideal(*inv);
    auto fit = fit_power(series, default_window(static_cast<double>(top)), 1.0);
    double err = rel_err(fit.c_hat, predicted);
    o.note << name << ": c_hat = " << fit.c_hat << " predicted " << predicted << " (rel err " << err << "); ";
    o.require(err < 0.02, name + " constant outside 2%");
  }
  const double pi = std::numbers::pi;
  o.require(rel_err(predicted_constant_ideal(2, 0, std::log(1 + std::sqrt(2.0)), 1, 2, 8), 0.62323) < 1e-5,
            "closed form for Z[sqrt 2]");
  o.require(rel_err(predicted_constant_ideal(0, 1, 1.0, 1, 4, -4), pi / 4) < 1e-12, "closed form for Z[i]");
  report(3, "fixed-lambda = 1 constants at r = 1e5 within 2% of the class-number formula", o, seconds_since(t0), 600);
}

/// Criteria 4 and 6 share one model-quadric pass to 1e5.
struct QuadricPass {
  QuadricSeries detail;
  double seconds = 0;
};

QuadricPass quadric_pass() {
  auto t0 = Clock::now();
  QuadricPass q;
  q.detail = quadric_series_detail(preset("model-quadric", 100000));
  q.seconds = seconds_since(t0);
  return q;
}

void criterion4(const QuadricPass& q) {
  auto t0 = Clock::now();
  Outcome o;
  const auto& series = q.detail.series;
  auto fit = fit_power(series, FitWindow{1e3, 1e5, 16});
  o.note << "lambda_hat = " << fit.lambda_hat << " (c_hat " << fit.c_hat << ", expected 1); ";
  o.require(fit.lambda_hat >= 0.9 && fit.lambda_hat <= 1.1, "lambda_hat outside [0.9, 1.1]");
  long long first_bad = 0;
  for (long long k = 1; k <= 10000; ++k) {
    auto i = static_cast<std::size_t>(k - 1);
    if (q.detail.points_prim[i] != two_squares_primitive(k) && first_bad == 0) first_bad = k;
    // per-level weighted count times |G| recovers the point count
    if (series.weighted[i] * static_cast<long long>(q.detail.group_order) != Rational(q.detail.points_prim[i]) &&
        first_bad == 0)
      first_bad = k;
  }
  o.require(first_bad == 0, "two-squares divergence at k = " + std::to_string(first_bad));
  o.note << "two-squares equality for k <= 1e4; |G| = " << q.detail.group_order;
  report(4, "model section exponent on [1e3, 1e5] and two-squares equality", o, q.seconds + seconds_since(t0), 300);
}

struct LipschitzPass {
  CountSeries series;
  double seconds = 0;
};

void criterion5(const LipschitzPass& lp) {
  auto t0 = Clock::now();
  Outcome o;
  const long long top = 10000;
  auto per = four_square_counts(top, FourSquareLattice::lipschitz);
  auto sums = prefix_sums(lp.series.n_all);
  long long cum = 0, first_bad = 0;
  for (long long r = 1; r <= top; ++r) {
    cum += per[static_cast<std::size_t>(r)];
    if (8 * sums[static_cast<std::size_t>(r - 1)] != cum && first_bad == 0) first_bad = r;
  }
  o.require(first_bad == 0, "Jacobi divergence at r = " + std::to_string(first_bad));
  const double target = std::numbers::pi * std::numbers::pi / 16;
  auto fixed = fit_power(lp.series, default_window(static_cast<double>(top)), 2.0);
  auto free = fit_power(lp.series, default_window(static_cast<double>(top)));
  o.note << "8 S(1e4) = " << 8 * sums.back() << " vs Jacobi " << cum << "; c_hat = " << fixed.c_hat << " vs pi^2/16 "
         << target << " (rel err " << rel_err(fixed.c_hat, target) << "); lambda_hat = " << free.lambda_hat;
  o.require(rel_err(fixed.c_hat, target) < 0.02, "constant outside 2%");
  o.require(free.lambda_hat >= 1.95 && free.lambda_hat <= 2.05, "lambda_hat outside [1.95, 2.05]");
  report(5, "Lipschitz order: Jacobi equality, constant and exponent", o, lp.seconds + seconds_since(t0), 300);
}

void criterion6(const LipschitzPass& lp, const QuadricPass& q) {
  auto t0 = Clock::now();
  Outcome o;
  double s_all = 0, s_prim = 0;
  for (std::size_t i = 0; i < lp.series.size(); ++i) {
    s_all += static_cast<double>(lp.series.n_all[i]);
    s_prim += static_cast<double>(lp.series.n_prim[i]);
  }
  double ratio = s_all / s_prim, z4 = zeta_correction(4);
  o.note << "S_all/S_prim = " << ratio << " vs zeta(4) " << z4 << " (rel err " << rel_err(ratio, z4) << "); ";
  o.require(rel_err(ratio, z4) < 0.02, "Lipschitz ratio outside 2% of zeta(4)");

  auto all = prefix_sums(q.detail.series.n_all);
  std::vector<double> normalized;
  for (long long r : {1000LL, 10000LL, 100000LL}) {
    double v = static_cast<double>(all[static_cast<std::size_t>(r - 1)]) / (r * std::log(static_cast<double>(r)));
    normalized.push_back(v);
    o.note << "S_all(" << r << ")/(r log r) = " << v << "; ";
  }
  auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
  double variation = (*hi - *lo) / *lo;
  o.note << "variation " << variation;
  o.require(variation < 0.15, "quadric r log r ratio varies by 15% or more");
  // the quadric all-points series is also the d = 1 aggregate of its primitive series
  auto rebuilt = imprimitive_from_primitive(q.detail.series, 1);
  o.require(rebuilt.n_all == q.detail.series.n_all, "quadric aggregation identity to 1e5");
  report(6, "zeta(4) aggregation and quadric r log r regime", o, lp.seconds + q.seconds + seconds_since(t0), 600);
}

// ------------------------------------------------------------ criterion 7

bool imprimitive_identity(Outcome& o) {
  bool ok = true;
  for (const auto& name : preset_names()) {
    auto s = preset(name, 500);
    auto series = count_series(s);
    auto rebuilt = imprimitive_from_primitive(series, level_scaling_degree(s));
    if (rebuilt.n_all != series.n_all) {
      o.require(false, "aggregation identity on " + name);
      ok = false;
    }
  }
  return ok;
}

bool associated_properties(Outcome& o) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<long long> c(-4, 4);
  bool ok = true;
  for (const auto& order : {gauss_order(), zsqrt2_order(), lipschitz_order(), hurwitz_order()}) {
    auto u = unit_group(order);
    std::vector<AlgebraElement> units = u.torsion;
    for (const auto& f : u.fundamental) units.push_back(f);
    const auto n = order.algebra.dim;
    auto random_elem = [&] {
      AlgebraElement x(IntVec(n, 0));
      while (x.is_zero())
        for (auto& v : x.coords) v = c(rng);
      return x;
    };
    for (int t = 0; t < 200; ++t) {
      auto x = random_elem();
      auto y = alg_mul(units[rng() % units.size()], x, order.algebra);
      auto z = alg_mul(units[rng() % units.size()], y, order.algebra);
      auto w = random_elem();
      bool good = associated(x, x, order) && associated(x, y, order) && associated(y, x, order) &&
                  associated(y, z, order) && associated(x, z, order) &&
                  associated(x, w, order) == associated(w, x, order) &&
                  (!associated(x, w, order) || associated(z, w, order));
      if (!good) {
        o.require(false, "associated relation on " + order.name);
        ok = false;
        break;
      }
    }
  }
  return ok;
}

bool same_partition(const OrderSpec& order, const UnitGroupData& units, const std::vector<IntVec>& shell) {
  if (shell.empty()) return true;
  Canonicalizer canon(order, units);
  std::map<IntVec, std::vector<std::size_t>> by_rep;
  for (std::size_t i = 0; i < shell.size(); ++i) by_rep[canon(shell[i])].push_back(i);
  std::set<std::vector<std::size_t>> a, b;
  for (auto& [rep, idx] : by_rep) a.insert(idx);
  for (auto& cls : pairwise_orbits(shell, order).classes) b.insert(cls);
  return a == b;
}

bool canonical_vs_pairwise(Outcome& o) {
  bool ok = true;
  for (const auto& order : {gauss_order(), lipschitz_order(), hurwitz_order()}) {
    auto units = finite_units(order);
    GramForm form(norm_gram(order));
    for (long long m = 1; m <= 200 && ok; ++m)
      if (!same_partition(order, units, definite_shell(form, Rational(m)))) {
        o.require(false, "canonical vs pairwise on " + order.name + " shell " + std::to_string(m));
        ok = false;
      }
  }
  auto z = zsqrt2_order();
  auto u = unit_group(z);
  auto eta = *to_integral(u.norm_one_fundamental->coords);
  for (long long k = -200; k <= 200 && ok; ++k) {
    if (k == 0) continue;
    if (!same_partition(z, u, quadratic_norm_candidates(2, eta, k, 2))) {
      o.require(false, "canonical vs pairwise on zsqrt2 level " + std::to_string(k));
      ok = false;
    }
  }
  return ok;
}

IntMatrix random_unimodular(std::mt19937_64& rng) {
  IntMatrix u = int_identity(3);
  std::uniform_int_distribution<long long> c(-3, 3);
  for (int step = 0; step < 8; ++step) {
    std::size_t i = rng() % 3, j = rng() % 3;
    if (i == j) continue;
    long long a = c(rng);
    for (std::size_t r = 0; r < 3; ++r) u[r][j] += a * u[r][i];
  }
  if (rng() % 2)
    for (auto& row : u) row[0] = -row[0];
  return u;
}

bool equivariance(Outcome& o) {
  auto s = model_section();
  std::vector<std::pair<long long, Rational>> base;
  for (long long k = 1; k <= 100; ++k) base.push_back(count_quadric_level(s, Rational(k)));
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    auto ts = transform_section(s, random_unimodular(rng));
    SectionEnumerator se(ts);
    auto group = integral_symmetries(ts);
    for (long long k = 1; k <= 100; ++k) {
      auto lv = quadric_level(se, group, Rational(k));
      if (std::make_pair(lv.orbits_prim, lv.weighted) != base[static_cast<std::size_t>(k - 1)]) {
        o.require(false, "transform " + std::to_string(t) + " at level " + std::to_string(k));
        return false;
      }
    }
  }
  return true;
}

void criterion7() {
  auto t0 = Clock::now();
  Outcome o;
  bool a = imprimitive_identity(o);
  bool b = associated_properties(o);
  bool c = canonical_vs_pairwise(o);
  bool d = equivariance(o);
  o.note << "aggregation identity " << (a ? "ok" : "bad") << ", associated relation " << (b ? "ok" : "bad")
         << ", canonical vs pairwise " << (c ? "ok" : "bad") << ", 20 unimodular transforms " << (d ? "ok" : "bad");
  report(7, "identity suite (exact, zero tolerance)", o, seconds_since(t0), 600);
}

}  // namespace

int main() {
  try {
    oracle_equality(1, "gauss", -4, 60);
    oracle_equality(2, "zsqrt2", 8, 120);
    criterion3();

    auto t0 = Clock::now();
    LipschitzPass lp{count_series(preset("lipschitz", 10000)), 0};
    lp.seconds = seconds_since(t0);
    auto q = quadric_pass();
    criterion4(q);
    criterion5(lp);
    criterion6(lp, q);
    criterion7();
    std::printf(
        "EXCLUDED [8] error exponent delta, absolute weighted constant of the quadric count, and equidistribution "
        "rates are not checked\n");
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}

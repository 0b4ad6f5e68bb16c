#pragma once

// Power-law and r log r fits to cumulative series; predicted exponents and
// constants. Floating point is confined to this header.

#include "counting.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace orbitcount {

struct FitReport {
  std::string kind = "power";  // "power" or "rlogr"
  double c_hat = 0;
  double lambda_hat = 0;
  bool lambda_fixed = false;
  double residual_rms = 0;
  double spread = 0;  // (max - min) / mean of the normalized samples
  double r_min = 0, r_max = 0;
  int samples = 0;
  Rational expected_lambda = 0;
  std::optional<double> predicted_c;
  std::string predicted_note;
  std::optional<double> zeta_factor;
  std::optional<double> empirical_delta;
  std::string delta_note = "empirical slope of log|S(r) - c r^lambda|; not the theoretical error exponent";
};

struct FitWindow {
  double r_min = 0, r_max = 0;
  int samples = 16;
};

inline FitWindow default_window(double r_max) { return {r_max / 10, r_max, 16}; }

inline Rational expected_lambda(const ScenarioSpec& s) {
  switch (s.family) {
    case Family::normform: return 1;
    case Family::quadric: return static_cast<long long>(s.section().dim()) - 2;
    default: {
      auto n = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(s.order().algebra.dim))));
      if (n * n != static_cast<long long>(s.order().algebra.dim))
        throw InvalidArgument("expected_lambda: algebra dimension is not a square");
      return n;
    }
  }
}

inline std::vector<double> geometric_grid(const FitWindow& w) {
  if (!(w.r_min > 0) || !(w.r_max > w.r_min)) throw InvalidArgument("fit: window must satisfy 0 < r_min < r_max");
  if (w.samples < 8) throw InvalidArgument("fit: at least 8 sample radii are required");
  std::vector<double> out;
  for (int i = 0; i < w.samples; ++i)
    out.push_back(w.r_min * std::pow(w.r_max / w.r_min, static_cast<double>(i) / (w.samples - 1)));
  out.back() = w.r_max;
  return out;
}

namespace detail {

inline std::optional<double> empirical_delta(const std::vector<double>& r, const std::vector<double>& s, double c,
                                             double lambda) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double diff = std::fabs(s[i] - c * std::pow(r[i], lambda));
    if (diff > 0) {
      x.push_back(std::log(r[i]));
      y.push_back(std::log(diff));
    }
  }
  if (x.size() < 3) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  if (sxx == 0) return std::nullopt;
  double slope = sxy / sxx;
  if (!(slope > 0)) return std::nullopt;
  return slope;
}

}  // namespace detail

/// Fit S(r) ~ c r^lambda on a geometric grid of the window.
inline FitReport fit_power(const std::function<double(double)>& S, const FitWindow& w,
                           std::optional<double> fixed_lambda = std::nullopt) {
  auto r = geometric_grid(w);
  std::vector<double> s;
  for (double ri : r) s.push_back(S(ri));
  for (double v : s)
    if (!(v > 0)) throw InvalidArgument("fit_power: series is zero (or negative) on part of the window");
  FitReport rep;
  rep.r_min = w.r_min;
  rep.r_max = w.r_max;
  rep.samples = w.samples;
  const auto m = static_cast<double>(r.size());
  if (fixed_lambda) {
    rep.lambda_fixed = true;
    rep.lambda_hat = *fixed_lambda;
    double sum = 0;
    for (std::size_t i = 0; i < r.size(); ++i) sum += s[i] / std::pow(r[i], *fixed_lambda);
    rep.c_hat = sum / m;
  } else {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < r.size(); ++i) mx += std::log(r[i]), my += std::log(s[i]);
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      double dx = std::log(r[i]) - mx;
      sxx += dx * dx;
      sxy += dx * (std::log(s[i]) - my);
    }
    rep.lambda_hat = sxy / sxx;
    rep.c_hat = std::exp(my - rep.lambda_hat * mx);
  }
  double ss = 0, lo = INFINITY, hi = -INFINITY, mean = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double e = std::log(s[i]) - std::log(rep.c_hat) - rep.lambda_hat * std::log(r[i]);
    ss += e * e;
    double ratio = s[i] / std::pow(r[i], rep.lambda_hat);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    mean += ratio;
  }
  rep.residual_rms = std::sqrt(ss / m);
  rep.spread = (hi - lo) / (mean / m);
  rep.empirical_delta = detail::empirical_delta(r, s, rep.c_hat, rep.lambda_hat);
  return rep;
}

/// Mean of S(r) / (r log r) over the window.
inline FitReport fit_rlogr(const std::function<double(double)>& S, const FitWindow& w) {
  if (!(w.r_min > 1)) throw InvalidArgument("fit_rlogr: window must lie in r > 1");
  auto r = geometric_grid(w);
  FitReport rep;
  rep.kind = "rlogr";
  rep.lambda_hat = 1;
  rep.lambda_fixed = true;
  rep.r_min = w.r_min;
  rep.r_max = w.r_max;
  rep.samples = w.samples;
  std::vector<double> ratio;
  for (double ri : r) ratio.push_back(S(ri) / (ri * std::log(ri)));
  double mean = 0, lo = INFINITY, hi = -INFINITY;
  for (double v : ratio) mean += v, lo = std::min(lo, v), hi = std::max(hi, v);
  mean /= static_cast<double>(ratio.size());
  rep.c_hat = mean;
  double ss = 0;
  for (double v : ratio) ss += (v - mean) * (v - mean);
  rep.residual_rms = std::sqrt(ss / static_cast<double>(ratio.size()));
  rep.spread = mean != 0 ? (hi - lo) / mean : 0;
  return rep;
}

/// S(r) as a step function of a series column.
inline std::function<double(double)> cumulative_function(const CountSeries& series, bool use_prim) {
  auto prefix = std::make_shared<std::vector<long long>>(prefix_sums(use_prim ? series.n_prim : series.n_all));
  const double e = static_cast<double>(series.scale_e);
  return [prefix, e](double r) {
    auto idx = static_cast<long long>(std::floor(r * e + 1e-9));
    if (idx < 1) return 0.0;
    if (idx > static_cast<long long>(prefix->size()))
      throw InvalidArgument("fit: radius " + std::to_string(r) + " exceeds the series range");
    return static_cast<double>((*prefix)[static_cast<std::size_t>(idx - 1)]);
  };
}

inline FitReport fit_power(const CountSeries& series, const FitWindow& w, std::optional<double> fixed_lambda = {}) {
  return fit_power(cumulative_function(series, &series.counts() == &series.n_prim), w, fixed_lambda);
}

inline FitReport fit_rlogr(const CountSeries& series, const FitWindow& w, bool use_prim = false) {
  return fit_rlogr(cumulative_function(series, use_prim), w);
}

/// 2^r1 (2 pi)^r2 R h / (omega sqrt|D|): density of ideals of a number field.
inline double predicted_constant_ideal(int r1, int r2, double regulator, long long h, long long omega,
                                       long long disc, std::optional<int> degree = std::nullopt) {
  if (r1 < 0 || r2 < 0 || r1 + r2 == 0) throw InvalidArgument("predicted_constant_ideal: invalid signature");
  if (degree && r1 + 2 * r2 != *degree)
    throw InvalidArgument("predicted_constant_ideal: r1 + 2 r2 = " + std::to_string(r1 + 2 * r2) +
                          " differs from the degree " + std::to_string(*degree));
  if (disc == 0) throw InvalidArgument("predicted_constant_ideal: discriminant is zero");
  if ((disc < 0) != (r2 % 2 == 1)) throw InvalidArgument("predicted_constant_ideal: sign of D must be (-1)^r2");
  if (h < 1 || omega < 1) throw InvalidArgument("predicted_constant_ideal: h and omega must be >= 1");
  if (!(regulator > 0)) throw InvalidArgument("predicted_constant_ideal: regulator must be positive");
  return std::pow(2.0, r1) * std::pow(2 * std::numbers::pi, r2) * regulator * static_cast<double>(h) /
         (static_cast<double>(omega) * std::sqrt(std::fabs(static_cast<double>(disc))));
}

/// zeta(d): the limiting ratio S_all / S_prim when levels scale with degree d.
inline double zeta_correction(int d) {
  if (d < 2) throw InvalidArgument("zeta_correction: d = " + std::to_string(d) + " diverges; use fit_rlogr");
  return zeta_value(d).mid();
}

struct FieldInvariants {
  int r1 = 0, r2 = 0;
  double regulator = 1;
  long long h = 1;
  long long omega = 2;
  long long disc = 0;
};

/// Invariants of Q(sqrt d) when Z[sqrt d] is its maximal order and norm-k orbits
/// match principal ideals of norm k; the class number is supplied by the caller.
inline std::optional<FieldInvariants> quadratic_invariants(const OrderSpec& order, const UnitGroupData& units,
                                                           long long class_number) {
  auto d = quadratic_radicand(order.algebra);
  if (!d) return std::nullopt;
  long long disc = 4 * *d;
  if (!is_fundamental_discriminant(disc)) return std::nullopt;
  auto emb = embeddings({BigInt(-*d), BigInt(0), BigInt(1)}, 1e-15L);
  FieldInvariants f;
  f.r1 = emb.r1;
  f.r2 = emb.r2;
  f.h = class_number;
  f.disc = disc;
  f.omega = static_cast<long long>(units.torsion.size());
  if (*d > 0) {
    if (units.fundamental.empty()) return std::nullopt;
    auto pell_sol = pell(*d);
    if (pell_sol.norm_sign != -1) return std::nullopt;  // norm-k orbits are not ideals
    f.regulator = std::log(to_double(pell_sol.x) + to_double(pell_sol.y) * std::sqrt(static_cast<double>(*d)));
  }
  return f;
}

inline double predicted_constant_ideal(const FieldInvariants& f, int degree = 2) {
  return predicted_constant_ideal(f.r1, f.r2, f.regulator, f.h, f.omega, f.disc, degree);
}

}  // namespace orbitcount

// orbitcount: validate scenarios, count orbits per level, fit asymptotics,
// and compare against reference oracles.

#include <orbitcount.hpp>

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace orbitcount;

namespace {

enum Exit { ok = 0, validation_failed = 1, saturation_failed = 2, oracle_mismatch = 3 };

struct Options {
  std::string config_path;
  std::string preset;
  std::optional<std::string> rmax;
  std::optional<std::string> mode;
  bool primitive_only = false;
  bool allow_heuristic = false;
  bool abs_norm = false;
  bool zeta = false;
  std::optional<unsigned> jobs;
  std::optional<std::string> out;
  std::string series_path;
};

RunConfig build_config(const Options& o) {
  RunConfig c;
  if (!o.config_path.empty())
    c = load_config(o.config_path);
  else if (!o.preset.empty())
    c = config_from_preset(o.preset);
  else
    throw InvalidArgument("either --config or --preset is required");
  if (o.rmax) {
    c.scenario.k_max = parse_rational(*o.rmax);
    if (c.scenario.k_max < 0) throw InvalidArgument("--rmax must be >= 0");
  }
  if (o.mode) c.scenario.mode = parse_mode(*o.mode);
  if (o.primitive_only) c.scenario.primitive_only = true;
  if (o.abs_norm) c.scenario.abs_norm = true;
  if (o.allow_heuristic) c.allow_heuristic = true;
  if (o.jobs) c.jobs = std::max(1u, *o.jobs);
  if (o.out) c.out_dir = *o.out;
  return c;
}

std::string scenario_name(const RunConfig& c) {
  if (!c.preset.empty()) return c.preset;
  if (c.scenario.family == Family::quadric) return "quadric";
  return c.scenario.order().name;
}

fs::path output_path(const RunConfig& c, const std::string& suffix) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / (scenario_name(c) + suffix);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

// ------------------------------------------------------------ validate

bool run_validate(const RunConfig& c, Json* sink = nullptr) {
  auto rep = validate(c.scenario);
  Json j = to_json(rep);
  j["config_hash"] = config_hash(c);
  if (sink)
    *sink = j;
  else
    std::cout << j.dump(2) << "\n";
  if (auto f = rep.first_failure())
    std::cerr << "validation failed: " << f->name << ": " << f->detail << "\n";
  return rep.ok();
}

// ------------------------------------------------------------ count

CountSeries compute_series(const RunConfig& c) {
  return count_series(c.scenario, SeriesOptions{c.jobs, c.allow_heuristic});
}

fs::path run_count(const RunConfig& c, CountSeries* keep = nullptr) {
  auto series = compute_series(c);
  std::ostringstream os;
  write_series_csv(os, series, config_hash(c));
  auto path = output_path(c, "_series.csv");
  write_file(path, os.str());
  std::cout << "wrote " << path.string() << " (" << series.size() << " levels, "
            << (series.all_exact() ? "exact" : "heuristic") << ")\n";
  if (keep) *keep = std::move(series);
  return path;
}

CountSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open series '" + path + "'");
  return read_series_csv(in);
}

// ------------------------------------------------------------ fit

Json run_fit(const RunConfig& c, const CountSeries& series, bool zeta) {
  if (series.size() == 0) throw InvalidArgument("fit: series is empty");
  const double r_max = static_cast<double>(series.levels.back()) / static_cast<double>(series.scale_e);
  auto window = default_window(r_max);
  Rational lambda = expected_lambda(c.scenario);
  auto free_fit = fit_power(series, window);
  auto fixed_fit = fit_power(series, window, to_double(lambda));
  free_fit.expected_lambda = fixed_fit.expected_lambda = lambda;

  if (c.scenario.family == Family::normform && !c.scenario.primitive_only && !c.scenario.abs_norm) {
    const auto& order = c.scenario.order();
    try {
      auto units = c.scenario.units ? *c.scenario.units : unit_group(order);
      if (auto inv = quadratic_invariants(order, units, c.class_number)) {
        fixed_fit.predicted_c = predicted_constant_ideal(*inv);
        fixed_fit.predicted_note = "ideal density 2^r1 (2 pi)^r2 R h / (w sqrt|D|), class number asserted by config";
      } else {
        fixed_fit.predicted_note = "no closed-form constant for this order";
      }
    } catch (const Error& e) {
      fixed_fit.predicted_note = std::string("no closed-form constant: ") + e.what();
    }
  } else if (c.scenario.family == Family::algebra_norm && !c.scenario.primitive_only) {
    // vol of the unit 4-ball in the norm metric / |units|
    const auto& order = c.scenario.order();
    auto units = c.scenario.units ? *c.scenario.units : finite_units(order);
    double det = to_double(determinant(norm_gram(order)));
    fixed_fit.predicted_c = std::numbers::pi * std::numbers::pi / 2 / std::sqrt(det) / static_cast<double>(units.torsion.size());
    fixed_fit.predicted_note = "4-ball volume of the norm form divided by the unit count";
  }

  Json j;
  j["config_hash"] = config_hash(c);
  j["exact"] = series.all_exact();
  j["column"] = &series.counts() == &series.n_prim ? "n_prim" : "n_all";
  j["free"] = to_json(free_fit);
  j["fixed"] = to_json(fixed_fit);
  if (zeta) {
    int d = level_scaling_degree(c.scenario);
    auto all = cumulative_function(series, false)(r_max), prim = cumulative_function(series, true)(r_max);
    Json z;
    z["level_scaling_degree"] = d;
    z["observed_ratio"] = prim > 0 ? Json(all / prim) : Json(nullptr);
    Rational dl = lambda * d;
    if (is_integer(dl) && dl >= 2) {
      z["zeta_argument"] = to_ll(dl);
      z["zeta_factor"] = zeta_correction(static_cast<int>(to_ll(dl)));
    } else {
      z["zeta_argument"] = to_string(dl);
      z["zeta_factor"] = nullptr;
      z["rlogr"] = to_json(fit_rlogr(series, window, false));
    }
    j["fixed"]["zeta_factor"] = z["zeta_factor"];
    j["aggregation"] = z;
  }
  return j;
}

// ------------------------------------------------------------ oracle compare

struct OracleDiff {
  std::string oracle;
  std::vector<std::array<long long, 3>> rows;  // level, pipeline, oracle
  std::optional<long long> first_divergence;
};

bool same_algebra(const AlgebraSpec& a, const AlgebraSpec& b) {
  return a.dim == b.dim && a.structure == b.structure && a.unity == b.unity;
}

OracleDiff compare_with_oracle(const RunConfig& c, const CountSeries& s) {
  OracleDiff d;
  const long long top = s.size() ? s.levels.back() : 0;
  std::vector<long long> pipeline, oracle;
  if (c.scenario.family == Family::normform) {
    const auto& order = c.scenario.order();
    auto rad = quadratic_radicand(order.algebra);
    if (!rad) throw Unsupported("oracle-compare: the ideal oracle needs a quadratic order Z[sqrt d]");
    auto units = c.scenario.units ? *c.scenario.units : unit_group(order);
    if (c.class_number != 1 || !quadratic_invariants(order, units, 1))
      throw Unsupported("oracle-compare: the ideal oracle applies to maximal orders of class number 1 only");
    if (c.scenario.primitive_only || c.scenario.abs_norm)
      throw Unsupported("oracle-compare: the ideal oracle compares the all-points N(x) = k series");
    long long disc = 4 * *rad;
    d.oracle = "ideal_count_quadratic(" + std::to_string(disc) + ")";
    auto a = ideal_counts_per_level(disc, top);
    for (std::size_t i = 0; i < s.size(); ++i) {
      pipeline.push_back(s.n_all[i]);
      oracle.push_back(a[static_cast<std::size_t>(s.levels[i])]);
    }
  } else if (c.scenario.family == Family::quadric) {
    const auto& sec = c.scenario.section();
    auto model = model_section();
    if (!(sec.gram.gram == model.gram.gram) || !(sec.ell == model.ell))
      throw Unsupported("oracle-compare: the two-squares oracle applies to the model section only");
    auto group = integral_symmetries(sec);
    d.oracle = "two_squares_primitive";
    if (s.weighted.size() != s.size()) throw InvalidArgument("oracle-compare: quadric series lacks weights");
    for (std::size_t i = 0; i < s.size(); ++i) {
      Rational pts = s.weighted[i] * static_cast<long long>(group.order());
      pipeline.push_back(to_ll(pts));
      oracle.push_back(two_squares_primitive(s.levels[i]));
    }
  } else {
    const auto& order = c.scenario.order();
    FourSquareLattice lat;
    if (same_algebra(order.algebra, quaternion_algebra(-1, -1)))
      lat = FourSquareLattice::lipschitz;
    else if (same_algebra(order.algebra, hurwitz_algebra()))
      lat = FourSquareLattice::hurwitz;
    else
      throw Unsupported("oracle-compare: four-squares oracles cover the Lipschitz and Hurwitz orders only");
    if (c.scenario.primitive_only) throw Unsupported("oracle-compare: the four-squares oracle counts all points");
    auto units = static_cast<long long>(finite_units(order).torsion.size());
    d.oracle = lat == FourSquareLattice::lipschitz ? "jacobi_r4(lipschitz)" : "shell_scan(hurwitz)";
    auto per = four_square_counts(std::max<long long>(top, 1), lat);
    for (std::size_t i = 0; i < s.size(); ++i) {
      pipeline.push_back(s.n_all[i] * units);
      oracle.push_back(per[static_cast<std::size_t>(s.levels[i])]);
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    d.rows.push_back({s.levels[i], pipeline[i], oracle[i]});
    if (pipeline[i] != oracle[i] && !d.first_divergence) d.first_divergence = s.levels[i];
  }
  return d;
}

bool run_oracle_compare(const RunConfig& c, const CountSeries& s, Json* sink = nullptr) {
  auto d = compare_with_oracle(c, s);
  std::ostringstream os;
  os << "# config_hash=" << config_hash(c) << " oracle=" << d.oracle << "\n";
  os << "level,pipeline,oracle,diff\n";
  for (const auto& [lv, p, o] : d.rows) os << lv << ',' << p << ',' << o << ',' << p - o << "\n";
  auto path = output_path(c, "_oracle.csv");
  write_file(path, os.str());
  long long diffs = 0;
  for (const auto& r : d.rows) diffs += r[1] != r[2];
  if (d.first_divergence)
    std::cout << "oracle " << d.oracle << ": " << diffs << " differing levels, first divergence at level "
              << *d.first_divergence << "\n";
  else
    std::cout << "oracle " << d.oracle << ": 0 diffs over " << d.rows.size() << " levels\n";
  if (sink) {
    (*sink)["oracle"] = d.oracle;
    (*sink)["levels"] = d.rows.size();
    (*sink)["differing_levels"] = diffs;
    (*sink)["first_divergence"] = d.first_divergence ? Json(*d.first_divergence) : Json(nullptr);
  }
  return !d.first_divergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbitcount: exact orbit counting for norm forms, quadric sections and quaternion orders"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    auto* cfg = sub->add_option("--config", o.config_path, "JSON scenario config");
    sub->add_option("--preset", o.preset, "built-in scenario")
        ->check(CLI::IsMember(preset_names()))
        ->excludes(cfg);
    sub->add_option("--rmax", o.rmax, "largest level (integer or p/q)");
    sub->add_option("--mode", o.mode, "exact | box:B");
    sub->add_flag("--primitive-only", o.primitive_only, "sum primitive orbits");
    sub->add_flag("--allow-heuristic", o.allow_heuristic, "accept unsaturated box counts");
    sub->add_flag("--abs-norm", o.abs_norm, "count |N| = k instead of N = k");
    sub->add_option("--jobs", o.jobs, "worker threads");
    sub->add_option("--out", o.out, "output directory");
  };
  auto* v = app.add_subcommand("validate", "check the scenario hypotheses");
  auto* cnt = app.add_subcommand("count", "write the per-level CSV series");
  auto* fit = app.add_subcommand("fit", "fit asymptotic laws to a series");
  auto* orc = app.add_subcommand("oracle-compare", "compare a series against its reference oracle");
  auto* rep = app.add_subcommand("report", "validate, count, fit and compare");
  for (auto* s : {v, cnt, fit, orc, rep}) common(s);
  for (auto* s : {fit, orc}) s->add_option("--series", o.series_path, "existing series CSV (default: recompute)");
  for (auto* s : {fit, rep}) s->add_flag("--zeta", o.zeta, "include the primitive/all aggregation comparison");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig c = build_config(o);
    if (v->parsed()) return run_validate(c) ? ok : validation_failed;

    if (cnt->parsed()) {
      Json quiet;
      if (!run_validate(c, &quiet)) return validation_failed;
      run_count(c);
      return ok;
    }
    if (fit->parsed()) {
      CountSeries s = o.series_path.empty() ? compute_series(c) : load_series(o.series_path);
      auto j = run_fit(c, s, o.zeta);
      auto path = output_path(c, "_fit.json");
      write_file(path, j.dump(2) + "\n");
      std::cout << "wrote " << path.string() << "\n";
      return ok;
    }
    if (orc->parsed()) {
      CountSeries s = o.series_path.empty() ? compute_series(c) : load_series(o.series_path);
      return run_oracle_compare(c, s) ? ok : oracle_mismatch;
    }
    // report
    Json summary;
    summary["config_hash"] = config_hash(c);
    summary["config"] = canonical_config(c);
    Json val;
    bool valid = run_validate(c, &val);
    summary["validation"] = val;
    if (!valid) {
      write_file(output_path(c, "_report.json"), summary.dump(2) + "\n");
      return validation_failed;
    }
    CountSeries s;
    run_count(c, &s);
    summary["exact"] = s.all_exact();
    summary["levels"] = s.size();
    if (s.size()) summary["fit"] = run_fit(c, s, o.zeta);
    int code = ok;
    try {
      Json oj;
      if (!run_oracle_compare(c, s, &oj)) code = oracle_mismatch;
      summary["oracle"] = oj;
    } catch (const Unsupported& e) {
      summary["oracle"] = {{"applicable", false}, {"reason", e.what()}};
    }
    auto path = output_path(c, "_report.json");
    write_file(path, summary.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
    return code;
  } catch (const SaturationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return saturation_failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation_failed;
  }
}

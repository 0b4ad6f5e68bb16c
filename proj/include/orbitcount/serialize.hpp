#pragma once

// JSON configs and reports, CSV series. Rationals are written as "p" or "p/q".

#include "presets.hpp"
#include "validate.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace orbitcount {

using Json = nlohmann::ordered_json;

/// Error located at a line of the config text.
struct ConfigError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

// ------------------------------------------------------------ scalars

inline Rational rational_from_json(const Json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw InvalidArgument(what + ": expected an integer or a \"p/q\" string");
}

inline Json rational_to_json(const Rational& r) { return to_string(r); }

inline RVec rvec_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidArgument(what + ": expected an array");
  RVec v;
  for (const auto& x : j) v.push_back(rational_from_json(x, what));
  return v;
}

inline RMatrix rmatrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidArgument(what + ": expected an array of rows");
  RMatrix m;
  for (const auto& row : j) m.push_back(rvec_from_json(row, what));
  for (const auto& row : m)
    if (row.size() != m.size()) throw InvalidArgument(what + ": matrix must be square");
  return m;
}

inline IntVec intvec_from_json(const Json& j, const std::string& what) {
  auto v = to_integral(rvec_from_json(j, what));
  if (!v) throw InvalidArgument(what + ": entries must be integers");
  return *v;
}

inline Json rvec_to_json(const RVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_to_json(x));
  return a;
}

inline Json rmatrix_to_json(const RMatrix& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(rvec_to_json(row));
  return a;
}

inline Json intvec_to_json(const IntVec& v) { return Json(v); }

// ------------------------------------------------------------ algebra, order, units, section

inline Json to_json(const AlgebraSpec& a) {
  Json j;
  j["kind"] = to_string(a.kind);
  j["dim"] = a.dim;
  // structure[i][j] = coordinates of e_i * e_j
  Json s = Json::array();
  for (std::size_t i = 0; i < a.dim; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < a.dim; ++k) {
      RVec prod(a.dim);
      for (std::size_t l = 0; l < a.dim; ++l) prod[l] = a.c(i, k, l);
      row.push_back(rvec_to_json(prod));
    }
    s.push_back(row);
  }
  j["structure"] = s;
  j["unity"] = rvec_to_json(a.unity);
  if (a.involution) j["involution"] = *a.involution;
  return j;
}

inline AlgebraSpec algebra_from_json(const Json& j) {
  AlgebraSpec a;
  if (j.contains("quadratic")) {
    a = quadratic_algebra(j["quadratic"].get<long long>());
  } else if (j.contains("pure_cubic")) {
    a = pure_cubic_algebra(j["pure_cubic"].get<long long>());
  } else if (j.contains("quaternion")) {
    auto ab = j["quaternion"].get<std::vector<long long>>();
    if (ab.size() != 2) throw InvalidArgument("algebra.quaternion: expected [a, b]");
    a = quaternion_algebra(ab[0], ab[1]);
  } else if (j.contains("split_product")) {
    a = split_product_algebra();
  } else {
    std::string kind = j.value("kind", "number-field");
    if (kind == "quaternion")
      a.kind = AlgebraKind::quaternion;
    else if (kind == "number-field")
      a.kind = AlgebraKind::number_field;
    else
      throw InvalidArgument("algebra.kind: expected number-field or quaternion");
    if (!j.contains("structure") || !j.contains("unity"))
      throw InvalidArgument("algebra: needs 'structure' and 'unity' (or a shorthand such as 'quadratic')");
    a.unity = rvec_from_json(j["unity"], "algebra.unity");
    a.dim = a.unity.size();
    const auto& s = j["structure"];
    if (!s.is_array() || s.size() != a.dim) throw InvalidArgument("algebra.structure: expected dim x dim x dim");
    a.structure.assign(a.dim * a.dim * a.dim, Rational(0));
    for (std::size_t i = 0; i < a.dim; ++i) {
      if (!s[i].is_array() || s[i].size() != a.dim) throw InvalidArgument("algebra.structure: expected dim x dim x dim");
      for (std::size_t k = 0; k < a.dim; ++k) {
        auto prod = rvec_from_json(s[i][k], "algebra.structure");
        if (prod.size() != a.dim) throw InvalidArgument("algebra.structure: expected dim x dim x dim");
        for (std::size_t l = 0; l < a.dim; ++l) a.c(i, k, l) = prod[l];
      }
    }
    if (j.contains("involution")) a.involution = j["involution"].get<IntMatrix>();
  }
  // columns of "basis" are the new basis vectors in the old coordinates
  if (j.contains("basis")) a = change_basis(a, rmatrix_from_json(j["basis"], "algebra.basis"));
  return a;
}

inline Json to_json(const OrderSpec& o) {
  Json j;
  j["name"] = o.name;
  j["algebra"] = to_json(o.algebra);
  j["norm_degree"] = o.norm_degree;
  j["unit_rank"] = o.unit_rank;
  return j;
}

inline Json to_json(const UnitGroupData& u) {
  Json j;
  Json t = Json::array(), f = Json::array();
  for (const auto& x : u.torsion) t.push_back(rvec_to_json(x.coords));
  for (const auto& x : u.fundamental) f.push_back(rvec_to_json(x.coords));
  j["torsion"] = t;
  j["fundamental"] = f;
  if (u.norm_one_fundamental) j["norm_one_fundamental"] = rvec_to_json(u.norm_one_fundamental->coords);
  j["complete"] = u.complete;
  j["user_asserted"] = u.user_asserted;
  return j;
}

inline UnitGroupData units_from_json(const Json& j) {
  UnitGroupData u;
  for (const auto& x : j.at("torsion")) u.torsion.emplace_back(rvec_from_json(x, "units.torsion"));
  if (j.contains("fundamental"))
    for (const auto& x : j["fundamental"]) u.fundamental.emplace_back(rvec_from_json(x, "units.fundamental"));
  if (j.contains("norm_one_fundamental"))
    u.norm_one_fundamental = AlgebraElement(rvec_from_json(j["norm_one_fundamental"], "units.norm_one_fundamental"));
  u.complete = true;
  u.user_asserted = true;
  return u;
}

inline Json to_json(const QuadricSectionSpec& s) {
  Json j;
  j["gram"] = rmatrix_to_json(s.gram.gram);
  j["ell"] = rvec_to_json(s.ell);
  j["base_point"] = s.base_point;
  j["scale_e"] = s.scale_e;
  return j;
}

inline QuadricSectionSpec section_from_json(const Json& j) {
  auto gram = rmatrix_from_json(j.at("gram"), "section.gram");
  auto ell = rvec_from_json(j.at("ell"), "section.ell");
  std::optional<IntVec> bp;
  if (j.contains("base_point")) bp = intvec_from_json(j["base_point"], "section.base_point");
  return make_section(std::move(gram), std::move(ell), bp, j.value("search_bound", 6LL));
}

// ------------------------------------------------------------ run config

struct RunConfig {
  ScenarioSpec scenario;
  std::string preset;
  long long class_number = 1;
  unsigned jobs = 1;
  bool allow_heuristic = false;
  std::string out_dir = ".";
  bool oracle = true;
};

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t offset) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(offset, text.size())), '\n'));
}

inline int line_of_key(const std::string& text, const std::string& key) {
  auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

}  // namespace detail

/// Fields of the effective configuration that change the counts.
inline Json canonical_config(const RunConfig& c) {
  Json j;
  j["family"] = to_string(c.scenario.family);
  if (c.scenario.family == Family::quadric) {
    j["section"] = to_json(c.scenario.section());
  } else {
    j["order"] = to_json(c.scenario.order());
    if (c.scenario.units && c.scenario.units->user_asserted) j["units"] = to_json(*c.scenario.units);
  }
  j["k_max"] = rational_to_json(c.scenario.k_max);
  j["mode"] = to_string(c.scenario.mode);
  j["primitive_only"] = c.scenario.primitive_only;
  j["abs_norm"] = c.scenario.abs_norm;
  j["class_number"] = c.class_number;
  return j;
}

/// FNV-1a 64 of the canonical config, excluding parallelism and output paths.
inline std::string config_hash(const RunConfig& c) {
  std::string text = canonical_config(c).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline RunConfig config_from_preset(const std::string& name) {
  RunConfig c;
  auto p = make_preset(name);
  c.preset = name;
  c.scenario = p.scenario;
  c.class_number = p.class_number;
  return c;
}

/// Parses a JSON config; errors carry the line of the offending key.
inline RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("line " + std::to_string(detail::line_of_offset(text, e.byte ? e.byte - 1 : 0)) +
                      ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("line 1: config must be a JSON object");
  std::string current = "";
  try {
    RunConfig c;
    if (j.contains("preset")) {
      current = "preset";
      c = config_from_preset(j["preset"].get<std::string>());
    }
    if (j.contains("family")) {
      current = "family";
      c.scenario.family = parse_family(j["family"].get<std::string>());
    }
    if (c.scenario.family == Family::quadric) {
      if (j.contains("section")) {
        current = "section";
        c.scenario.payload = section_from_json(j["section"]);
      }
      if (!std::holds_alternative<QuadricSectionSpec>(c.scenario.payload))
        throw InvalidArgument("quadric family needs a 'section'");
    } else {
      if (j.contains("algebra")) {
        current = "algebra";
        auto alg = algebra_from_json(j["algebra"]);
        current = "unit_rank";
        int rank = j.value("unit_rank", 0);
        OrderSpec o;
        o.name = j.value("name", std::string("custom"));
        o.norm_degree = alg.kind == AlgebraKind::quaternion ? 2 : static_cast<int>(alg.dim);
        o.algebra = std::move(alg);
        o.unit_rank = rank;
        c.scenario.payload = std::move(o);
      }
      if (!std::holds_alternative<OrderSpec>(c.scenario.payload))
        throw InvalidArgument("family needs an 'algebra'");
      if (j.contains("units")) {
        current = "units";
        c.scenario.units = units_from_json(j["units"]);
      }
    }
    if (j.contains("k_max")) {
      current = "k_max";
      c.scenario.k_max = rational_from_json(j["k_max"], "k_max");
      if (c.scenario.k_max < 0) throw InvalidArgument("k_max must be >= 0");
    }
    if (j.contains("mode")) {
      current = "mode";
      c.scenario.mode = parse_mode(j["mode"].get<std::string>());
    }
    current = "primitive_only";
    c.scenario.primitive_only = j.value("primitive_only", c.scenario.primitive_only);
    current = "abs_norm";
    c.scenario.abs_norm = j.value("abs_norm", c.scenario.abs_norm);
    current = "class_number";
    c.class_number = j.value("class_number", c.class_number);
    current = "jobs";
    c.jobs = j.value("jobs", c.jobs);
    current = "allow_heuristic";
    c.allow_heuristic = j.value("allow_heuristic", c.allow_heuristic);
    current = "out";
    c.out_dir = j.value("out", c.out_dir);
    current = "oracle";
    c.oracle = j.value("oracle", c.oracle);
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    int line = current.empty() ? 1 : detail::line_of_key(text, current);
    throw ConfigError("line " + std::to_string(line == 0 ? 1 : line) + ": " + (current.empty() ? "" : current + ": ") +
                      e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ------------------------------------------------------------ CSV series

inline void write_series_csv(std::ostream& os, const CountSeries& s, const std::string& hash) {
  os << "# config_hash=" << hash << " family=" << to_string(s.family) << " scale_e=" << s.scale_e
     << " primitive_only=" << (s.primitive_only ? 1 : 0) << " exact=" << (s.all_exact() ? 1 : 0) << "\n";
  os << "level,n_prim,n_all,weighted_num,weighted_den,exact_flag\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << to_string(Rational(s.levels[i], s.scale_e)) << ',' << s.n_prim[i] << ',' << s.n_all[i] << ',';
    if (i < s.weighted.size())
      os << to_string(numerator(s.weighted[i])) << ',' << to_string(denominator(s.weighted[i]));
    else
      os << ',';
    os << ',' << (s.exact[i] ? "exact" : "heuristic") << '\n';
  }
}

inline CountSeries read_series_csv(std::istream& is) {
  CountSeries s;
  std::string line;
  int lineno = 0;
  bool header = false;
  auto fail = [&](const std::string& why) {
    throw InvalidArgument("series line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string kv;
      while (meta >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        auto key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "family") s.family = parse_family(val);
        if (key == "scale_e") s.scale_e = std::stoll(val);
        if (key == "primitive_only") s.primitive_only = val == "1";
      }
      continue;
    }
    if (!header) {
      if (line != "level,n_prim,n_all,weighted_num,weighted_den,exact_flag") fail("unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 6) fail("expected 6 columns");
    try {
      Rational lv = parse_rational(f[0]) * s.scale_e;
      if (!is_integer(lv)) fail("level is not a multiple of 1/scale_e");
      s.levels.push_back(to_ll(lv));
      s.n_prim.push_back(std::stoll(f[1]));
      s.n_all.push_back(std::stoll(f[2]));
      if (!f[3].empty()) s.weighted.push_back(Rational(BigInt(f[3])) / Rational(BigInt(f[4])));
      if (f[5] != "exact" && f[5] != "heuristic") fail("exact_flag must be exact or heuristic");
      s.exact.push_back(f[5] == "exact");
    } catch (const InvalidArgument&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (!header) throw InvalidArgument("series: missing header line");
  if (!s.weighted.empty() && s.weighted.size() != s.levels.size()) throw InvalidArgument("series: partial weight column");
  return s;
}

inline void write_orbit_csv(std::ostream& os, const OrbitReport& r) {
  os << "level,representative,orbit_size,stabilizer_order,relative_weight\n";
  for (const auto& o : r.orbits) {
    std::string rep;
    for (std::size_t i = 0; i < o.representative.size(); ++i) rep += (i ? " " : "") + std::to_string(o.representative[i]);
    os << to_string(r.level) << ",\"" << rep << "\"," << o.size << ',' << o.stabilizer_order << ','
       << to_string(o.relative_weight) << '\n';
  }
}

// ------------------------------------------------------------ reports

namespace detail {

/// JSON null for non-finite values.
inline Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace detail

inline Json to_json(const FitReport& f) {
  Json j;
  j["kind"] = f.kind;
  j["c_hat"] = detail::number(f.c_hat);
  j["lambda_hat"] = detail::number(f.lambda_hat);
  j["lambda_fixed"] = f.lambda_fixed;
  j["residual_rms"] = detail::number(f.residual_rms);
  j["spread"] = detail::number(f.spread);
  j["window"] = {detail::number(f.r_min), detail::number(f.r_max)};
  j["samples"] = f.samples;
  j["expected_lambda"] = to_string(f.expected_lambda);
  j["predicted_c"] = f.predicted_c ? detail::number(*f.predicted_c) : Json(nullptr);
  j["predicted_note"] = f.predicted_note;
  j["zeta_factor"] = f.zeta_factor ? detail::number(*f.zeta_factor) : Json(nullptr);
  j["empirical_delta"] = f.empirical_delta ? detail::number(*f.empirical_delta) : Json(nullptr);
  j["delta_note"] = f.delta_note;
  return j;
}

inline Json to_json(const ValidationReport& r) {
  Json j;
  j["ok"] = r.ok();
  Json a = Json::array();
  for (const auto& c : r.checks) a.push_back({{"check", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  j["checks"] = a;
  return j;
}

}  // namespace orbitcount

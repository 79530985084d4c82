#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dshock/dshock.hpp"

namespace dshock::cli {

/// Raised for malformed configuration; maps to exit code 1.
class config_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

/// A raw value with the place it came from, for error messages.
struct Setting {
  std::string value;
  std::string origin;  // "config.txt:12" or "--flag"
};

using Settings = std::map<std::string, Setting>;

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "flux",   "flux_table", "g",      "ul",     "rhol",     "ur",      "rhor",
      "eps",    "eps_list",   "x_min",  "x_max",  "cells",    "cfl",     "t_end",
      "levels", "t",          "seed",   "bumps",  "samples",  "rho_max", "snapshot",
      "perturb", "perturb_factor"};
  return keys;
}

inline bool is_known_key(const std::string& k) {
  for (const auto& s : known_keys()) {
    if (s == k) return true;
  }
  return false;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Flat `key = value` text; `#` starts a comment.
inline Settings parse_config(std::istream& in, const std::string& name) {
  Settings out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(where + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_known_key(key)) throw config_error(where + ": unknown key '" + key + "'");
    if (value.empty()) throw config_error(where + ": empty value for key '" + key + "'");
    if (out.count(key)) throw config_error(where + ": duplicate key '" + key + "'");
    out[key] = {value, where};
  }
  return out;
}

inline Settings load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

enum class FluxKind { brio, quadratic_g, table };

struct Scenario {
  FluxKind flux_kind = FluxKind::brio;
  std::optional<std::string> flux_table;
  GKind g_kind = GKind::linear;
  RiemannData data{State(1.0, 1.0), State(-1.0, 1.0)};
  double eps = 1e-4;
  std::vector<double> eps_list = default_eps_list();
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t cells = 400;
  double cfl = 0.9;
  double t_end = 0.5;
  std::vector<std::size_t> levels{400, 800, 1600};
  double t = 1.0;
  std::uint64_t seed = 20240917;
  std::size_t bumps = 20;
  std::size_t samples = 21;
  double rho_max = 100.0;
  std::optional<std::string> snapshot;
  std::string perturb = "none";
  double perturb_factor = 1.05;

  FluxModel model() const { return model(eps); }
  FluxModel model(double epsilon) const;
  Grid1D grid() const { return Grid1D(x_min, x_max, cells, cfl); }

  std::vector<PressureSample> table_rows;  // flux = table only
};

namespace detail {

inline double to_double(const Setting& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s.value, &used);
    if (used != s.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw config_error(s.origin + ": key '" + key + "' expects a number, got '" + s.value + "'");
  }
}

inline std::size_t to_count(const Setting& s, const std::string& key) {
  const double v = to_double(s, key);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw config_error(s.origin + ": key '" + key + "' expects a non-negative integer, got '" +
                       s.value + "'");
  }
  return static_cast<std::size_t>(v);
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<PressureSample> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open flux table '" + path + "'");
  std::vector<PressureSample> rows;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_list(line);
    if (no == 1 && !cells.empty() && !std::isdigit(static_cast<unsigned char>(cells[0][0])) &&
        cells[0][0] != '-' && cells[0][0] != '.') {
      continue;  // header
    }
    if (cells.size() != 3) {
      throw config_error(path + ":" + std::to_string(no) + ": expected 3 columns rho,f,df");
    }
    double v[3];
    for (int k = 0; k < 3; ++k) {
      v[k] = to_double({cells[k], path + ":" + std::to_string(no)}, "flux_table");
    }
    rows.push_back({v[0], v[1], v[2]});
  }
  return rows;
}

}  // namespace detail

inline FluxModel Scenario::model(double epsilon) const {
  switch (flux_kind) {
    case FluxKind::brio: return FluxModel::brio(epsilon);
    case FluxKind::quadratic_g: return FluxModel::quadratic_g(epsilon);
    case FluxKind::table: return FluxModel(Pressure::table(table_rows), g_kind, epsilon);
  }
  return FluxModel::brio(epsilon);
}

/// Validates every setting before any computation.
inline Scenario build_scenario(const Settings& s) {
  using detail::to_count;
  using detail::to_double;
  Scenario sc;
  auto get = [&](const char* key) -> const Setting* {
    auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };
  for (const auto& [k, v] : s) {
    if (!is_known_key(k)) throw config_error(v.origin + ": unknown key '" + k + "'");
  }
  if (const auto* v = get("flux")) {
    if (v->value == "brio") sc.flux_kind = FluxKind::brio;
    else if (v->value == "quadratic-g") sc.flux_kind = FluxKind::quadratic_g;
    else if (v->value == "table") sc.flux_kind = FluxKind::table;
    else throw config_error(v->origin + ": key 'flux' must be brio, quadratic-g or table, got '" + v->value + "'");
  }
  if (const auto* v = get("g")) {
    if (v->value == "linear") sc.g_kind = GKind::linear;
    else if (v->value == "quadratic") sc.g_kind = GKind::quadratic;
    else throw config_error(v->origin + ": key 'g' must be linear or quadratic, got '" + v->value + "'");
    if (sc.flux_kind != FluxKind::table) {
      throw config_error(v->origin + ": key 'g' only applies to flux = table");
    }
  }
  if (sc.flux_kind == FluxKind::table) {
    const auto* v = get("flux_table");
    if (!v) throw config_error("flux = table needs key 'flux_table'");
    sc.flux_table = v->value;
    try {
      sc.table_rows = detail::read_table(v->value);
      (void)Pressure::table(sc.table_rows);
    } catch (const config_error&) {
      throw;
    } catch (const invalid_input& e) {
      throw config_error(v->origin + ": " + e.what());
    }
  } else if (const auto* v = get("flux_table")) {
    throw config_error(v->origin + ": key 'flux_table' only applies to flux = table");
  }

  double ul = 1.0, rhol = 1.0, ur = -1.0, rhor = 1.0;
  if (const auto* v = get("ul")) ul = to_double(*v, "ul");
  if (const auto* v = get("rhol")) rhol = to_double(*v, "rhol");
  if (const auto* v = get("ur")) ur = to_double(*v, "ur");
  if (const auto* v = get("rhor")) rhor = to_double(*v, "rhor");
  try {
    sc.data = RiemannData{State(ul, rhol), State(ur, rhor)};
  } catch (const invalid_input& e) {
    const auto* v = rhol < 0.0 ? get("rhol") : get("rhor");
    throw config_error(std::string(v ? v->origin + ": " : "") + e.what());
  }

  if (const auto* v = get("eps")) {
    sc.eps = to_double(*v, "eps");
    if (!(sc.eps > 0.0)) throw config_error(v->origin + ": key 'eps' must be > 0");
  }
  if (const auto* v = get("eps_list")) {
    sc.eps_list.clear();
    for (const auto& item : detail::split_list(v->value)) {
      sc.eps_list.push_back(to_double({item, v->origin}, "eps_list"));
    }
    try {
      dshock::detail::check_eps_list(sc.eps_list);
    } catch (const invalid_input& e) {
      throw config_error(v->origin + ": " + e.what());
    }
  }
  if (const auto* v = get("x_min")) sc.x_min = to_double(*v, "x_min");
  if (const auto* v = get("x_max")) sc.x_max = to_double(*v, "x_max");
  if (const auto* v = get("cells")) sc.cells = to_count(*v, "cells");
  if (const auto* v = get("cfl")) sc.cfl = to_double(*v, "cfl");
  try {
    (void)sc.grid();
  } catch (const invalid_input& e) {
    throw config_error(std::string("grid settings: ") + e.what());
  }
  if (const auto* v = get("t_end")) {
    sc.t_end = to_double(*v, "t_end");
    if (!(sc.t_end > 0.0)) throw config_error(v->origin + ": key 't_end' must be > 0");
  }
  if (const auto* v = get("levels")) {
    sc.levels.clear();
    for (const auto& item : detail::split_list(v->value)) {
      const std::size_t n = to_count({item, v->origin}, "levels");
      if (n < 16) throw config_error(v->origin + ": key 'levels' entries must be >= 16");
      sc.levels.push_back(n);
    }
    if (sc.levels.empty()) throw config_error(v->origin + ": key 'levels' is empty");
  }
  if (const auto* v = get("t")) {
    sc.t = to_double(*v, "t");
    if (!(sc.t > 0.0)) throw config_error(v->origin + ": key 't' must be > 0");
  }
  if (const auto* v = get("seed")) sc.seed = to_count(*v, "seed");
  if (const auto* v = get("bumps")) {
    sc.bumps = to_count(*v, "bumps");
    if (sc.bumps == 0) throw config_error(v->origin + ": key 'bumps' must be >= 1");
  }
  if (const auto* v = get("samples")) {
    sc.samples = to_count(*v, "samples");
    if (sc.samples < 3) throw config_error(v->origin + ": key 'samples' must be >= 3");
  }
  if (const auto* v = get("rho_max")) {
    sc.rho_max = to_double(*v, "rho_max");
    if (!(sc.rho_max > 0.0)) throw config_error(v->origin + ": key 'rho_max' must be > 0");
  }
  if (const auto* v = get("snapshot")) sc.snapshot = v->value;
  if (const auto* v = get("perturb")) {
    if (v->value != "none" && v->value != "speed" && v->value != "weight" && v->value != "line") {
      throw config_error(v->origin + ": key 'perturb' must be none, speed, weight or line");
    }
    sc.perturb = v->value;
  }
  if (const auto* v = get("perturb_factor")) sc.perturb_factor = to_double(*v, "perturb_factor");
  return sc;
}

}  // namespace dshock::cli

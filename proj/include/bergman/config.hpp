/*
 * Copyright 2026 The bergman authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"

namespace bergman {

// Flat "key = value" run configuration.  One key per line, '#' comments,
// unknown keys rejected.  Numeric values accept a "pi" suffix (8pi, -0.5pi).
struct RunConfig {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> raw;  // parse order
  std::string config_text;

  ModelConfig model;
  bool has_model = false;
  std::vector<int> p_list;
  int p = 64;             // offdiag power
  int grid_order = 0;     // 0 = automatic
  int points = 5;
  double direction = 0.0;
  std::vector<double> u_list;
  std::vector<std::pair<double, double>> curv_list;  // (rX, rE)
  std::map<std::string, double> tol;
  std::string out_dir = "out";
  bool emit_plots = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& tok_in) {
  std::string tok = trim(tok_in);
  double factor = 1.0;
  if (tok.size() >= 2 && tok.substr(tok.size() - 2) == "pi") {
    factor = kPi;
    tok = trim(tok.substr(0, tok.size() - 2));
    if (tok.empty()) tok = "1";
    if (tok == "-") tok = "-1";
  }
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number: '" + tok_in + "'");
  }
  if (pos != tok.size())
    throw ConfigError("trailing characters in number: '" + tok_in + "'");
  return v * factor;
}

inline int parse_int(const std::string& tok) {
  const double v = parse_number(tok);
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9)
    throw ConfigError("expected an integer, got '" + tok + "'");
  return i;
}

inline bool parse_bool(const std::string& tok_in) {
  std::string tok = trim(tok_in);
  std::transform(tok.begin(), tok.end(), tok.begin(), ::tolower);
  if (tok == "true" || tok == "1" || tok == "on" || tok == "yes") return true;
  if (tok == "false" || tok == "0" || tok == "off" || tok == "no") return false;
  throw ConfigError("expected a boolean, got '" + tok_in + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "fubini_study_cp1") return ModelKind::FubiniStudyCP1;
  if (s == "perturbed_cp1") return ModelKind::PerturbedCP1;
  if (s == "flat_torus") return ModelKind::FlatTorus;
  if (s == "bargmann_fock") return ModelKind::BargmannFock;
  if (s == "cyclic_quotient_cp1") return ModelKind::CyclicQuotientCP1;
  throw ConfigError("unknown model kind: '" + s + "'");
}

inline const std::set<std::string>& allowed_keys(const std::string& sub) {
  static const std::set<std::string> common = {"out_dir", "emit_plots"};
  static const std::set<std::string> model_keys = {
      "model", "perturbation", "tau_re", "tau_im", "twist_degree",
      "quotient_order"};
  static std::map<std::string, std::set<std::string>> table = [] {
    std::map<std::string, std::set<std::string>> t;
    auto with = [&](std::initializer_list<std::string> extra) {
      std::set<std::string> s = common;
      for (auto& k : extra) s.insert(k);
      return s;
    };
    t["diag"] = with({"p_list", "grid_order", "points", "tol_b0", "tol_b1"});
    t["offdiag"] = with({"p", "grid_order", "direction", "tol_near_rel"});
    t["orbifold"] = with(
        {"p_list", "grid_order", "tol_identity", "tol_ratio", "tol_r2"});
    t["model-check"] = with({"u_list", "curv_list", "tol_volterra",
                             "tol_semigroup", "tol_reproducing", "tol_moment",
                             "tol_heat_ratio", "tol_slope"});
    t["heat"] = with({"u_list", "curv_list", "tol_slope"});
    for (auto sub : {"diag", "offdiag", "orbifold"})
      for (auto& k : model_keys) t[sub].insert(k);
    return t;
  }();
  auto it = table.find(sub);
  if (it == table.end()) throw ConfigError("unknown subcommand: " + sub);
  return it->second;
}

inline void default_tolerances(RunConfig& cfg) {
  auto put = [&](const std::string& k, double v) {
    if (!cfg.tol.count(k)) cfg.tol[k] = v;
  };
  if (cfg.subcommand == "diag") {
    put("tol_b0", 1e-4);
    put("tol_b1", 2e-2);
  } else if (cfg.subcommand == "offdiag") {
    put("tol_near_rel", 0.05);
  } else if (cfg.subcommand == "orbifold") {
    put("tol_identity", 1e-8);
    put("tol_ratio", 0.6);
    put("tol_r2", 0.95);
  } else if (cfg.subcommand == "model-check") {
    put("tol_volterra", 1e-6);
    put("tol_semigroup", 1e-7);
    put("tol_reproducing", 1e-7);
    put("tol_moment", 1e-10);
    put("tol_heat_ratio", 0.35);
    put("tol_slope", -2.0 * kPi);
  } else if (cfg.subcommand == "heat") {
    put("tol_slope", -2.0 * kPi);
  }
}

}  // namespace detail

/// Parses a configuration file for the given subcommand.
inline RunConfig parse_config(const std::string& text,
                              const std::string& subcommand) {
  RunConfig cfg;
  cfg.subcommand = subcommand;
  cfg.config_text = text;
  const auto& allowed = detail::allowed_keys(subcommand);

  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed line (expected key = value): " + line);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' for subcommand " +
                        subcommand);
    cfg.raw.emplace_back(key, val);

    if (key == "model") {
      cfg.model.kind = detail::parse_model_kind(val);
      cfg.has_model = true;
    } else if (key == "perturbation") {
      cfg.model.perturbation = detail::parse_number(val);
    } else if (key == "tau_re") {
      cfg.model.tau = Complex(detail::parse_number(val), cfg.model.tau.imag());
    } else if (key == "tau_im") {
      cfg.model.tau = Complex(cfg.model.tau.real(), detail::parse_number(val));
    } else if (key == "twist_degree") {
      cfg.model.twist_degree = detail::parse_int(val);
    } else if (key == "quotient_order") {
      cfg.model.quotient_order = detail::parse_int(val);
    } else if (key == "p_list") {
      cfg.p_list.clear();
      for (auto& tok : detail::split(val, ','))
        cfg.p_list.push_back(detail::parse_int(tok));
      if (cfg.p_list.empty()) throw ConfigError("p_list must be nonempty");
    } else if (key == "p") {
      cfg.p = detail::parse_int(val);
    } else if (key == "grid_order") {
      cfg.grid_order = detail::parse_int(val);
    } else if (key == "points") {
      cfg.points = detail::parse_int(val);
      if (cfg.points < 1) throw ConfigError("points must be positive");
    } else if (key == "direction") {
      cfg.direction = detail::parse_number(val);
    } else if (key == "u_list") {
      cfg.u_list.clear();
      for (auto& tok : detail::split(val, ','))
        cfg.u_list.push_back(detail::parse_number(tok));
    } else if (key == "curv_list") {
      cfg.curv_list.clear();
      for (auto& pair : detail::split(val, ',')) {
        auto parts = detail::split(pair, ':');
        if (parts.size() != 2)
          throw ConfigError("curv_list entries must look like rX:rE");
        cfg.curv_list.emplace_back(detail::parse_number(parts[0]),
                                   detail::parse_number(parts[1]));
      }
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else if (key == "emit_plots") {
      cfg.emit_plots = detail::parse_bool(val);
    } else if (key.rfind("tol_", 0) == 0) {
      cfg.tol[key] = detail::parse_number(val);
    }
  }

  detail::default_tolerances(cfg);
  for (auto& [k, v] : cfg.tol) {
    // tol_slope is a signed bound on a decay rate; all others are positive.
    if (k != "tol_slope" && !(v > 0.0))
      throw ConfigError("tolerance " + k + " must be positive");
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path,
                                   const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), subcommand);
}

}  // namespace bergman

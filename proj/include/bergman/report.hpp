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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/config.hpp"
#include "bergman/errors.hpp"

namespace bergman {

inline constexpr const char* kSchemaVersion = "1";

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

/// One verification line of a report.  `pass` compares measured against
/// target within tolerance relative to max(1, |target|); bound-style checks
/// store the bound in `target` with zero tolerance.
struct Check {
  std::string name;
  double target = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline Check check_value(const std::string& name, double target,
                         double measured, double tol) {
  Check c{name, target, measured, tol, false};
  c.pass = std::abs(measured - target) <=
           tol * std::max(1.0, std::abs(target));
  return c;
}

inline Check check_upper_bound(const std::string& name, double bound,
                               double measured) {
  Check c{name, bound, measured, 0.0, measured <= bound};
  return c;
}

inline Check check_lower_bound(const std::string& name, double bound,
                               double measured) {
  Check c{name, bound, measured, 0.0, measured >= bound};
  return c;
}

inline Check check_flag(const std::string& name, bool ok) {
  Check c{name, 1.0, ok ? 1.0 : 0.0, 0.0, ok};
  return c;
}

/// Tracks files created by a run so partial outputs can be removed when the
/// run aborts.
class OutputTracker {
 public:
  explicit OutputTracker(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }
  std::string path(const std::string& name) {
    std::string p = (std::filesystem::path(dir_) / name).string();
    files_.push_back(p);
    return p;
  }
  void discard_all() {
    for (auto& f : files_) {
      std::error_code ec;
      std::filesystem::remove(f, ec);
    }
    files_.clear();
  }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

inline void write_json_report(
    const std::string& path, const RunConfig& cfg,
    const std::vector<Check>& checks,
    const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["subcommand"] = cfg.subcommand;
  nlohmann::ordered_json conf = nlohmann::ordered_json::object();
  for (auto& [k, v] : cfg.raw) conf[k] = v;
  j["config"] = conf;
  j["config_hash"] = fnv1a_hex(cfg.config_text);
  nlohmann::ordered_json tols = nlohmann::ordered_json::object();
  for (auto& [k, v] : cfg.tol) tols[k] = v;
  j["tolerances"] = tols;
  for (auto& [k, v] : extra.items()) j[k] = v;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"target", c.target},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
    all = all && c.pass;
  }
  j["checks"] = arr;
  j["pass"] = all;
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

/// Minimal CSV writer with the fixed, versioned schema: the first column of
/// every row is schema_version.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    out_ << "schema_version";
    for (auto& c : columns) out_ << "," << c;
    out_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    out_ << kSchemaVersion;
    for (auto& c : cells) out_ << "," << c;
    out_ << "\n";
  }
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static std::string num(int v) { return std::to_string(v); }

 private:
  std::ofstream out_;
};

}  // namespace bergman

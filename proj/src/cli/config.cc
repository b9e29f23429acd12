// Copyright 2026 The KBC Privacy Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbc/cli/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kbc::cli {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

constexpr std::string_view kSweepParameters[] = {"alpha",    "beta",
                                                 "n",        "sigma2_x",
                                                 "sigma2_y", "n_obs"};

double parse_double(std::string_view text) {
  std::string owned(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(owned, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == owned.size() && !owned.empty(),
          "not a number: '" + owned + "'");
  return v;
}

}  // namespace

bool is_sweep_parameter(std::string_view name) {
  return std::find(std::begin(kSweepParameters), std::end(kSweepParameters),
                   name) != std::end(kSweepParameters);
}

std::optional<std::int64_t> parse_population(std::string_view text) {
  if (text == "continuum") return std::nullopt;
  std::int64_t n = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  require(ec == std::errc() && end == text.data() + text.size(),
          "population must be an integer or 'continuum', got '" +
              std::string(text) + "'");
  require(n >= 2, "population size n must be at least 2");
  return n;
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  require(eq != std::string_view::npos,
          "sweep axis must look like name=v1,v2,...");
  SweepAxis axis;
  axis.name = std::string(text.substr(0, eq));
  require(is_sweep_parameter(axis.name),
          "unknown sweep parameter '" + axis.name + "'");
  std::string_view rest = text.substr(eq + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    axis.values.push_back(parse_double(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  require(!axis.values.empty(), "sweep axis '" + axis.name + "' is empty");
  return axis;
}

void ExperimentConfig::validate() const {
  (void)game();
  require(replicates >= 1, "replicates must be >= 1");
  require(sample_size >= 1, "sample_size must be >= 1");
  if (n_obs) {
    require(*n_obs >= 1, "n_obs must be >= 1");
    if (n) require(*n_obs <= *n, "n_obs cannot exceed n in a finite game");
  }
  if (kappa) require(*kappa >= 0.0 && *kappa <= 1.0, "kappa must lie in [0, 1]");
  if (nu) require(std::isfinite(*nu) && *nu >= 0.0, "nu must be >= 0");
  (void)NoiseSpec::Make(noise_family, 1.0, two_point_high, two_point_delta);
  for (const SweepAxis& axis : sweep) {
    require(is_sweep_parameter(axis.name),
            "unknown sweep parameter '" + axis.name + "'");
    require(!axis.values.empty(), "sweep axis '" + axis.name + "' is empty");
  }
}

GameParams ExperimentConfig::game() const {
  const Population population =
      n ? Population::Finite(*n) : Population::Continuum();
  return GameParams(alpha, beta, population, sigma2_x, sigma2_y);
}

std::int64_t ExperimentConfig::aggregator_sample() const {
  if (n_obs) return *n_obs;
  return n ? *n : 100;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["alpha"] = alpha;
  j["beta"] = beta;
  if (n) {
    j["n"] = *n;
  } else {
    j["n"] = "continuum";
  }
  j["sigma2_x"] = sigma2_x;
  j["sigma2_y"] = sigma2_y;
  j["measure"] = std::string(to_string(measure));
  j["formulas"] = std::string(to_string(formulas));
  j["s"] = s;
  j["replicates"] = replicates;
  if (seed) {
    j["seed"] = *seed;
  } else {
    j["seed"] = nullptr;
  }
  j["noise"] = std::string(to_string(noise_family));
  j["two_point_high"] = two_point_high;
  j["two_point_delta"] = two_point_delta;
  j["kappa"] = kappa ? nlohmann::ordered_json(*kappa) : nullptr;
  j["nu"] = nu ? nlohmann::ordered_json(*nu) : nullptr;
  j["sample_size"] = sample_size;
  j["n_obs"] = n_obs ? nlohmann::ordered_json(*n_obs) : nullptr;
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const SweepAxis& axis : sweep) {
    axes.push_back({{"name", axis.name}, {"values", axis.values}});
  }
  j["sweep"] = axes;
  j["format"] = format == OutputFormat::kJson ? "json" : "csv";
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  require(j.is_object(), "config must be a JSON object");
  static const std::set<std::string> known = {
      "alpha",          "beta",        "n",          "sigma2_x",
      "sigma2_y",       "measure",     "formulas",   "s",
      "replicates",     "seed",        "noise",      "two_point_high",
      "two_point_delta", "kappa",      "nu",         "sample_size",
      "n_obs",          "sweep",       "format"};
  for (const auto& [key, _] : j.items()) {
    require(known.contains(key), "unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) c.beta = j.at("beta").get<double>();
    if (j.contains("n")) {
      const auto& n = j.at("n");
      c.n = n.is_string() ? parse_population(n.get<std::string>())
                          : parse_population(std::to_string(n.get<std::int64_t>()));
    }
    if (j.contains("sigma2_x")) c.sigma2_x = j.at("sigma2_x").get<double>();
    if (j.contains("sigma2_y")) c.sigma2_y = j.at("sigma2_y").get<double>();
    if (j.contains("measure")) {
      c.measure = parse_measure(j.at("measure").get<std::string>());
    }
    if (j.contains("formulas")) {
      c.formulas = parse_formula_set(j.at("formulas").get<std::string>());
    }
    if (j.contains("s")) c.s = j.at("s").get<double>();
    if (j.contains("replicates")) {
      c.replicates = j.at("replicates").get<std::int64_t>();
    }
    if (j.contains("seed") && !j.at("seed").is_null()) {
      c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("noise")) {
      c.noise_family = parse_noise_family(j.at("noise").get<std::string>());
    }
    if (j.contains("two_point_high")) {
      c.two_point_high = j.at("two_point_high").get<double>();
    }
    if (j.contains("two_point_delta")) {
      c.two_point_delta = j.at("two_point_delta").get<double>();
    }
    if (j.contains("kappa") && !j.at("kappa").is_null()) {
      c.kappa = j.at("kappa").get<double>();
    }
    if (j.contains("nu") && !j.at("nu").is_null()) {
      c.nu = j.at("nu").get<double>();
    }
    if (j.contains("sample_size")) {
      c.sample_size = j.at("sample_size").get<std::int64_t>();
    }
    if (j.contains("n_obs") && !j.at("n_obs").is_null()) {
      c.n_obs = j.at("n_obs").get<std::int64_t>();
    }
    if (j.contains("sweep")) {
      for (const auto& axis : j.at("sweep")) {
        c.sweep.push_back({axis.at("name").get<std::string>(),
                           axis.at("values").get<std::vector<double>>()});
      }
    }
    if (j.contains("format")) {
      const std::string f = j.at("format").get<std::string>();
      require(f == "json" || f == "csv", "format must be json or csv");
      c.format = f == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (!text.empty() && text.front() == '#') {
    std::istringstream lines(text);
    std::string line;
    const std::string marker = "# config: ";
    while (std::getline(lines, line) && !line.empty() && line.front() == '#') {
      if (line.rfind(marker, 0) == 0) {
        return ExperimentConfig::from_json(
            nlohmann::json::parse(line.substr(marker.size())));
      }
    }
    throw std::invalid_argument("CSV header of '" + path +
                                "' carries no config line");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file '" + path +
                                "' is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("record") && j.contains("config")) {
    return ExperimentConfig::from_json(j.at("config"));
  }
  return ExperimentConfig::from_json(j);
}

}  // namespace kbc::cli

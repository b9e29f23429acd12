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

// Experiment configuration shared by every subcommand. Loaded from JSON (a
// plain config object, a previous JSON output record, or the header of a
// previous CSV output) and overridden by command-line flags.

#ifndef KBC_CLI_CONFIG_H_
#define KBC_CLI_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kbc/core.h"
#include "kbc/equilibrium.h"
#include "kbc/noise.h"

namespace kbc::cli {

enum class OutputFormat { kJson, kCsv };

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

// Names a sweep axis may take.
bool is_sweep_parameter(std::string_view name);

struct ExperimentConfig {
  double alpha = 0.5;
  double beta = 0.5;
  std::optional<std::int64_t> n;  // absent = continuum
  double sigma2_x = 1.0;
  double sigma2_y = 1.0;
  PrivacyMeasure measure = PrivacyMeasure::kPrecision;
  FormulaSet formulas = FormulaSet::kConsistent;
  double s = 0.0;
  std::int64_t replicates = 100000;
  std::optional<std::uint64_t> seed;
  NoiseFamily noise_family = NoiseFamily::kGaussian;
  double two_point_high = 1.0;
  double two_point_delta = 0.5;
  std::optional<double> kappa;  // overrides the equilibrium weight
  std::optional<double> nu;     // overrides the equilibrium noise variance
  std::int64_t sample_size = 1;
  std::optional<std::int64_t> n_obs;
  std::vector<SweepAxis> sweep;
  OutputFormat format = OutputFormat::kJson;

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
  GameParams game() const;
  // n for a finite game, otherwise the configured n_obs or 100.
  std::int64_t aggregator_sample() const;

  nlohmann::ordered_json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// Reads a config file in any of the accepted forms.
ExperimentConfig load_config_file(const std::string& path);

// Accepts "continuum" or an integer >= 2.
std::optional<std::int64_t> parse_population(std::string_view text);

// "name=v1,v2,...".
SweepAxis parse_sweep_axis(std::string_view text);

}  // namespace kbc::cli

#endif  // KBC_CLI_CONFIG_H_

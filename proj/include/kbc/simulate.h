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

// Seeded Monte Carlo estimates of the quantities the closed forms predict.

#ifndef KBC_SIMULATE_H_
#define KBC_SIMULATE_H_

#include <cstdint>

#include "kbc/core.h"
#include "kbc/equilibrium.h"
#include "kbc/monte_carlo.h"

namespace kbc {

struct SimulationOptions {
  PrivacyMeasure measure = PrivacyMeasure::kPrecision;
  int threads = 1;
  // Agents sampled per replicate in a continuum (finite games always
  // simulate all n agents).
  std::int64_t sample_size = 1;
  // Agents the aggregator averages. 0 means all n (finite) or sample_size
  // (continuum).
  std::int64_t aggregator_sample = 0;
};

struct MonteCarloReport {
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  std::int64_t agents_per_replicate = 0;
  std::int64_t aggregator_sample = 0;
  double penalty_coefficient = 0.0;  // c_n
  double rho = 0.0;                  // privacy term of the profile's noise

  // Per-replicate statistics are averaged over the simulated agents.
  Estimate base_utility;         // u(theta~_i, theta~_-i)
  Estimate clean_utility;        // u(theta_i, theta~_-i): own noise removed
  Estimate privacy_utility;      // (1 - beta) u + beta rho
  Estimate separability_gap;     // v - [(1 - beta)(clean - c_n nu) + beta rho]
  Estimate aggregator_sq_error;  // (mean of observed actions - s)^2
  Estimate mean_action;
};

// Simulates the profile at true state s. Finite populations use theta-bar =
// the mean of all n noisy actions; a continuum uses theta-bar =
// s + (1 - kappa) eps_y, the exact population average.
MonteCarloReport run_monte_carlo(const GameParams& params,
                                 const StrategyProfile& profile, double s,
                                 std::int64_t replicates, std::uint64_t seed,
                                 const SimulationOptions& options = {});

// Mean of ((1/n_obs) sum theta~_i - s)^2. For a finite game n_obs may not
// exceed n.
Estimate estimate_aggregator_error(const GameParams& params,
                                   const StrategyProfile& profile, double s,
                                   std::int64_t n_obs, std::int64_t replicates,
                                   std::uint64_t seed, int threads = 1);

}  // namespace kbc

#endif  // KBC_SIMULATE_H_

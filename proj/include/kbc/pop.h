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

// Price of privacy for the agents and for an aggregator that averages
// observed actions to estimate s.

#ifndef KBC_POP_H_
#define KBC_POP_H_

#include <cstdint>

#include "kbc/core.h"
#include "kbc/equilibrium.h"
#include "kbc/monte_carlo.h"

namespace kbc {

// Agents' price of privacy E[u(noisy play)] / E[u(noiseless play)] in the
// equilibrium. kPaper: 1 + nu* / |E[u]|. kConsistent: 1 + d_n nu* / |E[u]|
// with d_n = profile_noise_cost_coefficient (equal to 1 for a continuum, so
// both coincide there). Exactly 1 when beta == 0.
double pop_agents(const GameParams& params, PrivacyMeasure measure,
                  FormulaSet formulas = FormulaSet::kConsistent);

// Mean squared error of the average of n_obs noisy actions about s:
// kappa^2 sigma2_x / n + nu / n + (1 - kappa)^2 sigma2_y.
double aggregator_utility(const GameParams& params, double kappa, double nu,
                          std::int64_t n_obs);

// 1 + nu / (kappa^2 sigma2_x + n (1 - kappa)^2 sigma2_y).
double pop_aggregator(double sigma2_x, double sigma2_y, double kappa,
                      double nu, std::int64_t n_obs);
// Same at the equilibrium kappa and nu* of `params`.
double pop_aggregator(const GameParams& params, PrivacyMeasure measure,
                      FormulaSet formulas, std::int64_t n_obs);

// Monte Carlo ratios with common random numbers: each replicate plays the
// same signals with and without the equilibrium noise.
Estimate pop_agents_monte_carlo(const GameParams& params,
                                PrivacyMeasure measure, FormulaSet formulas,
                                double s, std::int64_t replicates,
                                std::uint64_t seed, int threads = 1,
                                std::int64_t sample_size = 1);
Estimate pop_aggregator_monte_carlo(const GameParams& params,
                                    PrivacyMeasure measure,
                                    FormulaSet formulas, std::int64_t n_obs,
                                    double s, std::int64_t replicates,
                                    std::uint64_t seed, int threads = 1);

}  // namespace kbc

#endif  // KBC_POP_H_

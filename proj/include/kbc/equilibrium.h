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

// Closed-form symmetric linear (noisy) Nash equilibria of the beauty contest.
//
// In equilibrium every agent plays kappa x_i + (1 - kappa) y, optionally plus
// independent mean-zero noise of variance nu. Finite-population results use
// the exact finite-n expressions; continuum results are their n -> infinity
// limits.

#ifndef KBC_EQUILIBRIUM_H_
#define KBC_EQUILIBRIUM_H_

#include <optional>
#include <string_view>

#include "kbc/core.h"
#include "kbc/noise.h"

namespace kbc {

enum class PrivacyMeasure { kPrecision, kEntropy };

// Which closed form to use where the reference expressions are not the
// stationary points of their own objective. kConsistent is the default
// everywhere; kPaper keeps the reference expressions as stated.
enum class FormulaSet { kPaper, kConsistent };

std::string_view to_string(PrivacyMeasure measure);
std::string_view to_string(FormulaSet formulas);
PrivacyMeasure parse_measure(std::string_view name);
FormulaSet parse_formula_set(std::string_view name);

// Symmetric linear strategy, optionally noisy. An absent noise spec is the
// base game.
struct StrategyProfile {
  double kappa = 0.0;
  std::optional<NoiseSpec> noise;

  // Validates 0 <= kappa <= 1.
  static StrategyProfile Make(double kappa,
                              std::optional<NoiseSpec> noise = std::nullopt);

  double noise_variance() const { return noise ? noise->variance() : 0.0; }
};

// alpha n^2 tau_x / (alpha n^2 tau_x + ((n - 1)^2 + alpha (2n - 1)) tau_y).
// Requires a finite population.
double kappa_finite(const GameParams& params);

// alpha tau_x / (alpha tau_x + tau_y). Ignores the population size, so it can
// also be evaluated on finite parameters as the large-n limit.
double kappa_infinite(const GameParams& params);

// kappa_finite or kappa_infinite depending on the population.
double equilibrium_kappa(const GameParams& params);

// Expected base utility of everyone playing kappa, conditional on s.
double expected_utility_finite(const GameParams& params, double kappa);
// Continuum form -alpha (1 - kappa)^2 sigma2_y - kappa^2 sigma2_x; ignores n.
double expected_utility_infinite(const GameParams& params, double kappa);
double expected_utility(const GameParams& params, double kappa);

// c_n = alpha + (1 - alpha)(1 - 1/n)^2, the utility cost per unit of an
// agent's own noise variance; 1 for a continuum.
double variance_penalty_coefficient(const GameParams& params);

// d_n = alpha + (1 - alpha)(n - 1)/n, the cost per unit variance when every
// agent adds independent noise (own noise plus the others' noise leaking in
// through the average); 1 for a continuum.
double profile_noise_cost_coefficient(const GameParams& params);

// Expected base utility when all agents play kappa plus noise of variance nu.
double expected_noisy_utility(const GameParams& params, double kappa,
                              double nu);

// Residual of the best-response condition. For a finite population
// `e_others` is E_i[sum_{j != i} theta_j]; for a continuum it is
// E_i[mean action].
double foc_residual(double theta_i, double e_state, double e_others,
                    const GameParams& params);

// Optimal noise variance nu*. Returns 0 when beta == 0.
//   kPaper:      sqrt(b c_n) (precision), b c_n (entropy),     b = beta/(1-beta)
//   kConsistent: sqrt(b / c_n) (precision), b / (2 c_n) (entropy)
double optimal_noise_variance(const GameParams& params, PrivacyMeasure measure,
                              FormulaSet formulas = FormulaSet::kConsistent);

enum class StaticParameter { kSigma2X, kSigma2Y, kN };
std::string_view to_string(StaticParameter wrt);
StaticParameter parse_static_parameter(std::string_view name);

// The finite-game expected utility evaluated at the continuum weight
// kappa = alpha sigma2_y / (alpha sigma2_y + sigma2_x).
double comparative_statics_utility(double alpha, double sigma2_x,
                                   double sigma2_y, double n);

// Partial derivative of comparative_statics_utility. kConsistent returns the
// exact derivative; kPaper returns the reference expression, whose sigma2_x
// entry does not match the derivative (the other two agree). Requires a
// finite population.
double comparative_static(const GameParams& params, StaticParameter wrt,
                          FormulaSet formulas = FormulaSet::kConsistent);

// Everything cmd_solve reports about one equilibrium.
struct NoisyEquilibrium {
  double kappa;
  double nu;
  double penalty_coefficient;
  double expected_utility;        // base game, no noise
  double expected_noisy_utility;  // base utility under the noisy profile
  StrategyProfile profile() const;
};

NoisyEquilibrium solve_equilibrium(const GameParams& params,
                                   PrivacyMeasure measure,
                                   FormulaSet formulas = FormulaSet::kConsistent);

}  // namespace kbc

#endif  // KBC_EQUILIBRIUM_H_

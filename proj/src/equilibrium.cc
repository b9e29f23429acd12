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

#include "kbc/equilibrium.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kbc {

std::string_view to_string(PrivacyMeasure measure) {
  return measure == PrivacyMeasure::kPrecision ? "precision" : "entropy";
}

std::string_view to_string(FormulaSet formulas) {
  return formulas == FormulaSet::kPaper ? "paper" : "consistent";
}

PrivacyMeasure parse_measure(std::string_view name) {
  if (name == "precision") return PrivacyMeasure::kPrecision;
  if (name == "entropy") return PrivacyMeasure::kEntropy;
  throw std::invalid_argument("unknown privacy measure '" + std::string(name) +
                              "'");
}

FormulaSet parse_formula_set(std::string_view name) {
  if (name == "paper") return FormulaSet::kPaper;
  if (name == "consistent") return FormulaSet::kConsistent;
  throw std::invalid_argument("unknown formula set '" + std::string(name) +
                              "'");
}

StrategyProfile StrategyProfile::Make(double kappa,
                                      std::optional<NoiseSpec> noise) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("kappa must lie in [0, 1]");
  }
  return StrategyProfile{kappa, std::move(noise)};
}

double kappa_finite(const GameParams& params) {
  const double n = static_cast<double>(params.n());
  const double a = params.alpha();
  const double num = a * n * n * params.tau_x();
  if (num == 0.0) return 0.0;
  const double den =
      num + ((n - 1.0) * (n - 1.0) + a * (2.0 * n - 1.0)) * params.tau_y();
  return num / den;
}

double kappa_infinite(const GameParams& params) {
  const double num = params.alpha() * params.tau_x();
  if (num == 0.0) return 0.0;
  return num / (num + params.tau_y());
}

double equilibrium_kappa(const GameParams& params) {
  return params.is_continuum() ? kappa_infinite(params) : kappa_finite(params);
}

double expected_utility_finite(const GameParams& params, double kappa) {
  const double n = static_cast<double>(params.n());
  const double a = params.alpha();
  const double k2 = kappa * kappa;
  const double one_minus = 1.0 - kappa;
  return -a * (k2 * params.sigma2_x() + one_minus * one_minus *
                                            params.sigma2_y()) -
         (1.0 - a) * k2 * (n - 1.0) / n * params.sigma2_x();
}

double expected_utility_infinite(const GameParams& params, double kappa) {
  const double one_minus = 1.0 - kappa;
  return -params.alpha() * one_minus * one_minus * params.sigma2_y() -
         kappa * kappa * params.sigma2_x();
}

double expected_utility(const GameParams& params, double kappa) {
  return params.is_continuum() ? expected_utility_infinite(params, kappa)
                               : expected_utility_finite(params, kappa);
}

double variance_penalty_coefficient(const GameParams& params) {
  if (params.is_continuum()) return 1.0;
  const double a = params.alpha();
  const double share = 1.0 - 1.0 / static_cast<double>(params.n());
  return a + (1.0 - a) * share * share;
}

double profile_noise_cost_coefficient(const GameParams& params) {
  if (params.is_continuum()) return 1.0;
  const double a = params.alpha();
  const double n = static_cast<double>(params.n());
  return a + (1.0 - a) * (n - 1.0) / n;
}

double expected_noisy_utility(const GameParams& params, double kappa,
                              double nu) {
  return expected_utility(params, kappa) -
         profile_noise_cost_coefficient(params) * nu;
}

double foc_residual(double theta_i, double e_state, double e_others,
                    const GameParams& params) {
  const double a = params.alpha();
  if (params.is_continuum()) {
    return theta_i - (a * e_state + (1.0 - a) * e_others);
  }
  const double n = static_cast<double>(params.n());
  const double den = a * (2.0 * n - 1.0) + (n - 1.0) * (n - 1.0);
  return theta_i -
         (a * n * n * e_state + (1.0 - a) * (n - 1.0) * e_others) / den;
}

double optimal_noise_variance(const GameParams& params, PrivacyMeasure measure,
                              FormulaSet formulas) {
  const double beta = params.beta();
  if (beta == 0.0) return 0.0;
  const double odds = beta / (1.0 - beta);
  const double c = variance_penalty_coefficient(params);
  if (formulas == FormulaSet::kPaper) {
    return measure == PrivacyMeasure::kPrecision ? std::sqrt(odds * c)
                                                 : odds * c;
  }
  // Stationary points of -(1 - beta) c nu + beta rho(nu) with
  // rho = -1/nu or 0.5 ln(2 pi e nu).
  return measure == PrivacyMeasure::kPrecision ? std::sqrt(odds / c)
                                               : odds / (2.0 * c);
}

std::string_view to_string(StaticParameter wrt) {
  switch (wrt) {
    case StaticParameter::kSigma2X:
      return "sigma2_x";
    case StaticParameter::kSigma2Y:
      return "sigma2_y";
    case StaticParameter::kN:
      return "n";
  }
  return "unknown";
}

StaticParameter parse_static_parameter(std::string_view name) {
  if (name == "sigma2_x") return StaticParameter::kSigma2X;
  if (name == "sigma2_y") return StaticParameter::kSigma2Y;
  if (name == "n") return StaticParameter::kN;
  throw std::invalid_argument("unknown comparative-statics parameter '" +
                              std::string(name) + "'");
}

double comparative_statics_utility(double alpha, double sigma2_x,
                                   double sigma2_y, double n) {
  const double kappa = alpha * sigma2_y / (alpha * sigma2_y + sigma2_x);
  const double one_minus = 1.0 - kappa;
  return -alpha * (kappa * kappa * sigma2_x + one_minus * one_minus * sigma2_y) -
         (1.0 - alpha) * kappa * kappa * (n - 1.0) / n * sigma2_x;
}

double comparative_static(const GameParams& params, StaticParameter wrt,
                          FormulaSet formulas) {
  if (params.is_continuum()) {
    throw std::invalid_argument("comparative statics need a finite population");
  }
  const double a = params.alpha();
  const double x = params.sigma2_x();
  const double y = params.sigma2_y();
  const double n = static_cast<double>(params.n());
  const double share = (n - 1.0) / n;
  const double base = a * y + x;
  switch (wrt) {
    case StaticParameter::kSigma2X: {
      const double lead = -(a * y) * (a * y) / (base * base * base);
      if (formulas == FormulaSet::kPaper) {
        return lead * ((2.0 - a) * a * a * x * y + y -
                       share * (1.0 - a) * (a * y - x));
      }
      return lead * ((2.0 - a) * x + a * a * y - share * (1.0 - a) * (x - a * y));
    }
    case StaticParameter::kSigma2Y:
      return -a * x * x / (base * base * base) *
             (2.0 * a * a * y - a * y + x + share * 2.0 * a * (1.0 - a) * y);
    case StaticParameter::kN:
      return -(1.0 - a) * a * a * x * y * y / (n * n * base * base);
  }
  throw std::invalid_argument("unknown comparative-statics parameter");
}

StrategyProfile NoisyEquilibrium::profile() const {
  return StrategyProfile::Make(kappa, NoiseSpec::Gaussian(nu));
}

NoisyEquilibrium solve_equilibrium(const GameParams& params,
                                   PrivacyMeasure measure,
                                   FormulaSet formulas) {
  NoisyEquilibrium eq;
  eq.kappa = equilibrium_kappa(params);
  eq.nu = optimal_noise_variance(params, measure, formulas);
  eq.penalty_coefficient = variance_penalty_coefficient(params);
  eq.expected_utility = expected_utility(params, eq.kappa);
  eq.expected_noisy_utility = expected_noisy_utility(params, eq.kappa, eq.nu);
  return eq;
}

}  // namespace kbc

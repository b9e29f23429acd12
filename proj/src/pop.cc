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

#include "kbc/pop.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kbc/random.h"

namespace kbc {

double pop_agents(const GameParams& params, PrivacyMeasure measure,
                  FormulaSet formulas) {
  if (params.beta() == 0.0) return 1.0;
  const double nu = optimal_noise_variance(params, measure, formulas);
  const double eu = std::abs(expected_utility(params, equilibrium_kappa(params)));
  const double weight = formulas == FormulaSet::kPaper
                            ? 1.0
                            : profile_noise_cost_coefficient(params);
  return 1.0 + weight * nu / eu;
}

double aggregator_utility(const GameParams& params, double kappa, double nu,
                          std::int64_t n_obs) {
  if (n_obs < 1) throw std::invalid_argument("n_obs must be >= 1");
  const double n = static_cast<double>(n_obs);
  const double one_minus = 1.0 - kappa;
  return kappa * kappa * params.sigma2_x() / n + nu / n +
         one_minus * one_minus * params.sigma2_y();
}

double pop_aggregator(double sigma2_x, double sigma2_y, double kappa,
                      double nu, std::int64_t n_obs) {
  if (n_obs < 1) throw std::invalid_argument("n_obs must be >= 1");
  if (nu == 0.0) return 1.0;
  const double one_minus = 1.0 - kappa;
  return 1.0 + nu / (kappa * kappa * sigma2_x +
                     static_cast<double>(n_obs) * one_minus * one_minus *
                         sigma2_y);
}

double pop_aggregator(const GameParams& params, PrivacyMeasure measure,
                      FormulaSet formulas, std::int64_t n_obs) {
  return pop_aggregator(params.sigma2_x(), params.sigma2_y(),
                        equilibrium_kappa(params),
                        optimal_noise_variance(params, measure, formulas),
                        n_obs);
}

Estimate pop_agents_monte_carlo(const GameParams& params,
                                PrivacyMeasure measure, FormulaSet formulas,
                                double s, std::int64_t replicates,
                                std::uint64_t seed, int threads,
                                std::int64_t sample_size) {
  const bool continuum = params.is_continuum();
  const std::int64_t agents = continuum ? sample_size : params.n();
  if (agents < 1) throw std::invalid_argument("sample_size must be >= 1");
  const double kappa = equilibrium_kappa(params);
  const double sd = std::sqrt(optimal_noise_variance(params, measure, formulas));
  const double sx = std::sqrt(params.sigma2_x());
  const double sy = std::sqrt(params.sigma2_y());
  const double alpha = params.alpha();
  const double inv = 1.0 / static_cast<double>(agents);

  auto replicate = [&](Rng& rng, std::array<double, 2>& out) {
    thread_local std::vector<double> clean, noisy;
    clean.resize(agents);
    noisy.resize(agents);
    const double eps_y = sy * rng.gaussian();
    const double y = s + eps_y;
    double clean_mean = 0.0, noisy_mean = 0.0;
    for (std::int64_t i = 0; i < agents; ++i) {
      clean[i] = kappa * (s + sx * rng.gaussian()) + (1.0 - kappa) * y;
      noisy[i] = clean[i] + sd * rng.gaussian();
      clean_mean += clean[i];
      noisy_mean += noisy[i];
    }
    if (continuum) {
      clean_mean = noisy_mean = s + (1.0 - kappa) * eps_y;
    } else {
      clean_mean *= inv;
      noisy_mean *= inv;
    }
    double u_noisy = 0.0, u_clean = 0.0;
    for (std::int64_t i = 0; i < agents; ++i) {
      u_noisy += realized_base_utility(noisy[i], noisy_mean, s, alpha);
      u_clean += realized_base_utility(clean[i], clean_mean, s, alpha);
    }
    out[0] = u_noisy * inv;
    out[1] = u_clean * inv;
  };
  return run_replicates<2>(replicates, seed, threads, replicate).ratio(0, 1);
}

Estimate pop_aggregator_monte_carlo(const GameParams& params,
                                    PrivacyMeasure measure,
                                    FormulaSet formulas, std::int64_t n_obs,
                                    double s, std::int64_t replicates,
                                    std::uint64_t seed, int threads) {
  if (n_obs < 1) throw std::invalid_argument("n_obs must be >= 1");
  if (!params.is_continuum() && n_obs > params.n()) {
    throw std::invalid_argument("aggregator cannot observe more than n agents");
  }
  const double kappa = equilibrium_kappa(params);
  const double sd = std::sqrt(optimal_noise_variance(params, measure, formulas));
  const double sx = std::sqrt(params.sigma2_x());
  const double sy = std::sqrt(params.sigma2_y());
  const double inv = 1.0 / static_cast<double>(n_obs);
  auto replicate = [&](Rng& rng, std::array<double, 2>& out) {
    const double y = s + sy * rng.gaussian();
    double clean = 0.0, noise = 0.0;
    for (std::int64_t i = 0; i < n_obs; ++i) {
      clean += kappa * (s + sx * rng.gaussian()) + (1.0 - kappa) * y;
      noise += sd * rng.gaussian();
    }
    const double e_clean = clean * inv - s;
    const double e_noisy = (clean + noise) * inv - s;
    out[0] = e_noisy * e_noisy;
    out[1] = e_clean * e_clean;
  };
  return run_replicates<2>(replicates, seed, threads, replicate).ratio(0, 1);
}

}  // namespace kbc

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

#include "kbc/simulate.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kbc/inference.h"
#include "kbc/noise.h"

namespace kbc {
namespace {

enum Stat : std::size_t {
  kBase,
  kClean,
  kPrivacy,
  kGap,
  kAggregator,
  kMeanAction,
  kStatCount
};

}  // namespace

MonteCarloReport run_monte_carlo(const GameParams& params,
                                 const StrategyProfile& profile, double s,
                                 std::int64_t replicates, std::uint64_t seed,
                                 const SimulationOptions& options) {
  const bool continuum = params.is_continuum();
  if (continuum && options.sample_size < 1) {
    throw std::invalid_argument("sample_size must be >= 1");
  }
  const std::int64_t agents = continuum ? options.sample_size : params.n();
  const std::int64_t observed =
      options.aggregator_sample > 0 ? options.aggregator_sample : agents;
  if (!continuum && observed > agents) {
    throw std::invalid_argument("aggregator cannot observe more than n agents");
  }
  const std::int64_t drawn = std::max(agents, observed);

  const NoiseSpec noise = profile.noise.value_or(NoiseSpec::None());
  const double kappa = profile.kappa;
  const double alpha = params.alpha();
  const double beta = params.beta();
  const double c = variance_penalty_coefficient(params);
  const double nu = noise.variance();
  const double rho = rho_of_noise(noise, options.measure);
  const double inv_agents = 1.0 / static_cast<double>(agents);
  const double n_double = continuum ? 0.0 : static_cast<double>(agents);

  auto replicate = [&](Rng& rng, std::array<double, kStatCount>& out) {
    thread_local std::vector<double> clean;
    thread_local std::vector<double> eta;
    clean.resize(drawn);
    eta.resize(drawn);
    const double eps_y = std::sqrt(params.sigma2_y()) * rng.gaussian();
    const double y = s + eps_y;
    for (std::int64_t j = 0; j < drawn; ++j) {
      const double x = s + std::sqrt(params.sigma2_x()) * rng.gaussian();
      clean[j] = kappa * x + (1.0 - kappa) * y;
      eta[j] = noise.draw(rng);
    }
    double noisy_mean;
    if (continuum) {
      noisy_mean = s + (1.0 - kappa) * eps_y;
    } else {
      noisy_mean = 0.0;
      for (std::int64_t j = 0; j < agents; ++j) noisy_mean += clean[j] + eta[j];
      noisy_mean /= n_double;
    }
    double base = 0.0, clean_u = 0.0, action = 0.0;
    for (std::int64_t i = 0; i < agents; ++i) {
      const double noisy = clean[i] + eta[i];
      const double clean_mean =
          continuum ? noisy_mean : noisy_mean - eta[i] / n_double;
      base += realized_base_utility(noisy, noisy_mean, s, alpha);
      clean_u += realized_base_utility(clean[i], clean_mean, s, alpha);
      action += noisy;
    }
    base *= inv_agents;
    clean_u *= inv_agents;
    const double v = realized_privacy_utility(base, rho, params);
    double gap = v - realized_privacy_utility(clean_u - c * nu, rho, params);
    if (!std::isfinite(gap)) {
      // rho = -inf cancels exactly; compare the finite parts.
      gap = (1.0 - beta) * (base - (clean_u - c * nu));
    }
    double agg = 0.0;
    for (std::int64_t j = 0; j < observed; ++j) agg += clean[j] + eta[j];
    agg = agg / static_cast<double>(observed) - s;

    out[kBase] = base;
    out[kClean] = clean_u;
    out[kPrivacy] = v;
    out[kGap] = gap;
    out[kAggregator] = agg * agg;
    out[kMeanAction] = action * inv_agents;
  };

  const Moments<kStatCount> m =
      run_replicates<kStatCount>(replicates, seed, options.threads, replicate);

  MonteCarloReport report;
  report.replicates = replicates;
  report.seed = seed;
  report.agents_per_replicate = agents;
  report.aggregator_sample = observed;
  report.penalty_coefficient = c;
  report.rho = rho;
  report.base_utility = m.estimate(kBase);
  report.clean_utility = m.estimate(kClean);
  report.privacy_utility = m.estimate(kPrivacy);
  if (std::isinf(rho) && beta > 0.0) report.privacy_utility = {rho, 0.0};
  report.separability_gap = m.estimate(kGap);
  report.aggregator_sq_error = m.estimate(kAggregator);
  report.mean_action = m.estimate(kMeanAction);
  return report;
}

Estimate estimate_aggregator_error(const GameParams& params,
                                   const StrategyProfile& profile, double s,
                                   std::int64_t n_obs, std::int64_t replicates,
                                   std::uint64_t seed, int threads) {
  if (n_obs < 1) throw std::invalid_argument("n_obs must be >= 1");
  if (!params.is_continuum() && n_obs > params.n()) {
    throw std::invalid_argument("aggregator cannot observe more than n agents");
  }
  const NoiseSpec noise = profile.noise.value_or(NoiseSpec::None());
  const double kappa = profile.kappa;
  const double sx = std::sqrt(params.sigma2_x());
  const double sy = std::sqrt(params.sigma2_y());
  const double inv = 1.0 / static_cast<double>(n_obs);
  auto replicate = [&](Rng& rng, std::array<double, 1>& out) {
    const double y = s + sy * rng.gaussian();
    double sum = 0.0;
    for (std::int64_t j = 0; j < n_obs; ++j) {
      const double x = s + sx * rng.gaussian();
      sum += kappa * x + (1.0 - kappa) * y + noise.draw(rng);
    }
    const double err = sum * inv - s;
    out[0] = err * err;
  };
  return run_replicates<1>(replicates, seed, threads, replicate).estimate(0);
}

}  // namespace kbc

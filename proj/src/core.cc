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

#include "kbc/core.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kbc/random.h"

namespace kbc {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Population Population::Finite(std::int64_t n) {
  require(n >= 2, "population size n must be at least 2, got " +
                      std::to_string(n));
  return Population(n);
}

std::int64_t Population::n() const {
  if (!n_) throw std::logic_error("continuum population has no finite n");
  return *n_;
}

GameParams::GameParams(double alpha, double beta, Population population,
                       double sigma2_x, double sigma2_y)
    : alpha_(alpha),
      beta_(beta),
      population_(population),
      sigma2_x_(sigma2_x),
      sigma2_y_(sigma2_y) {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(beta >= 0.0 && beta < 1.0,
          "beta must lie in [0, 1); beta = 1 has no finite optimal noise");
  require(finite_positive(sigma2_x), "sigma2_x must be finite and positive");
  require(finite_positive(sigma2_y), "sigma2_y must be finite and positive");
  require(finite_positive(1.0 / sigma2_x) && finite_positive(1.0 / sigma2_y),
          "signal precisions must be finite and positive");
}

GameParams GameParams::with_alpha(double alpha) const {
  return GameParams(alpha, beta_, population_, sigma2_x_, sigma2_y_);
}
GameParams GameParams::with_beta(double beta) const {
  return GameParams(alpha_, beta, population_, sigma2_x_, sigma2_y_);
}
GameParams GameParams::with_population(Population population) const {
  return GameParams(alpha_, beta_, population, sigma2_x_, sigma2_y_);
}
GameParams GameParams::with_sigma2_x(double sigma2_x) const {
  return GameParams(alpha_, beta_, population_, sigma2_x, sigma2_y_);
}
GameParams GameParams::with_sigma2_y(double sigma2_y) const {
  return GameParams(alpha_, beta_, population_, sigma2_x_, sigma2_y);
}

SignalDraw draw_signals(const GameParams& params, double s, std::size_t count,
                        Rng& rng) {
  SignalDraw draw;
  draw.s = s;
  draw.y = rng.gaussian(s, params.sigma2_y());
  draw.x.resize(count);
  for (double& x : draw.x) x = rng.gaussian(s, params.sigma2_x());
  return draw;
}

ActionProfile ActionProfile::FromActions(std::vector<double> actions) {
  require(!actions.empty(), "action profile must not be empty");
  const double mean = std::accumulate(actions.begin(), actions.end(), 0.0) /
                      static_cast<double>(actions.size());
  return ActionProfile(std::move(actions), mean);
}

ActionProfile ActionProfile::WithMean(std::vector<double> actions,
                                      double mean) {
  return ActionProfile(std::move(actions), mean);
}

double posterior_state_mean(const InformationSet& info) {
  const double tx = info.params.tau_x();
  const double ty = info.params.tau_y();
  return (tx * info.x_i + ty * info.y) / (tx + ty);
}

double realized_base_utility(double theta_i, double mean_action, double s,
                             double alpha) {
  const double coordination = theta_i - mean_action;
  const double guess = theta_i - s;
  return -(1.0 - alpha) * coordination * coordination - alpha * guess * guess;
}

double realized_base_utility(double theta_i, const ActionProfile& profile,
                             double s, const GameParams& params) {
  return realized_base_utility(theta_i, profile.mean_action(), s,
                               params.alpha());
}

double realized_privacy_utility(double base_u, double rho,
                                const GameParams& params) {
  const double beta = params.beta();
  if (beta == 0.0) return base_u;
  return (1.0 - beta) * base_u + beta * rho;
}

}  // namespace kbc

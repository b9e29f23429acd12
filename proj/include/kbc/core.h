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

// Domain types of the (privacy-aware) Keynesian beauty contest and the
// realized-utility evaluation shared by every other module.
//
// All expectations in this library are taken conditional on a fixed true
// state s. Conditioning on s stands in for the common improper uniform prior:
// an agent who observes the public signal y ends up with the same Gaussian
// belief either way.

#ifndef KBC_CORE_H_
#define KBC_CORE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace kbc {

class Rng;

// Population size. A missing value means a continuum of agents on [0, 1].
class Population {
 public:
  static Population Finite(std::int64_t n);
  static Population Continuum() { return Population(std::nullopt); }

  bool is_continuum() const { return !n_.has_value(); }
  // Throws std::logic_error for a continuum.
  std::int64_t n() const;

  bool operator==(const Population&) const = default;

 private:
  explicit Population(std::optional<std::int64_t> n) : n_(n) {}
  std::optional<std::int64_t> n_;
};

// Full parameterization of one game. Immutable; construction validates
// 0 <= alpha <= 1, 0 <= beta < 1, positive finite variances and n >= 2.
class GameParams {
 public:
  GameParams(double alpha, double beta, Population population,
             double sigma2_x, double sigma2_y);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const Population& population() const { return population_; }
  bool is_continuum() const { return population_.is_continuum(); }
  std::int64_t n() const { return population_.n(); }
  double sigma2_x() const { return sigma2_x_; }
  double sigma2_y() const { return sigma2_y_; }
  double tau_x() const { return 1.0 / sigma2_x_; }
  double tau_y() const { return 1.0 / sigma2_y_; }

  GameParams with_alpha(double alpha) const;
  GameParams with_beta(double beta) const;
  GameParams with_population(Population population) const;
  GameParams with_sigma2_x(double sigma2_x) const;
  GameParams with_sigma2_y(double sigma2_y) const;

  bool operator==(const GameParams&) const = default;

 private:
  double alpha_;
  double beta_;
  Population population_;
  double sigma2_x_;
  double sigma2_y_;
};

// One realized world: y = s + eps_y and x_i = s + eps_{x_i}.
struct SignalDraw {
  double s = 0.0;
  double y = 0.0;
  std::vector<double> x;
};

// Draws a public signal and `count` private signals around the state `s`.
SignalDraw draw_signals(const GameParams& params, double s, std::size_t count,
                        Rng& rng);

// What agent i knows: its own private signal and the public one.
struct InformationSet {
  double x_i;
  double y;
  GameParams params;
};

// Realized actions and their average. For a continuum the average is given
// rather than computed from the (sampled) actions.
class ActionProfile {
 public:
  static ActionProfile FromActions(std::vector<double> actions);
  static ActionProfile WithMean(std::vector<double> actions, double mean);

  std::span<const double> actions() const { return actions_; }
  double mean_action() const { return mean_action_; }

 private:
  ActionProfile(std::vector<double> actions, double mean)
      : actions_(std::move(actions)), mean_action_(mean) {}
  std::vector<double> actions_;
  double mean_action_;
};

// Precision-weighted combination (tau_x x_i + tau_y y) / (tau_x + tau_y).
// Equals E_i[s] and also E_i[x_j] for any other agent j.
double posterior_state_mean(const InformationSet& info);

// -(1 - alpha)(theta_i - mean)^2 - alpha (theta_i - s)^2. The profile is
// expected to already include theta_i in its mean.
double realized_base_utility(double theta_i, const ActionProfile& profile,
                             double s, const GameParams& params);
double realized_base_utility(double theta_i, double mean_action, double s,
                             double alpha);

// (1 - beta) u + beta rho. With beta == 0 the privacy term is dropped
// entirely, so a -inf rho cannot poison the base utility.
double realized_privacy_utility(double base_u, double rho,
                                const GameParams& params);

}  // namespace kbc

#endif  // KBC_CORE_H_

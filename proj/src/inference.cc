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

#include "kbc/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace kbc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double gaussian_entropy(double variance) {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

struct GridMoments {
  double log_mass;
  double mean;
  double variance;
  double entropy;
};

// Trapezoid rule on `intervals` equal steps. Log-densities are shifted by
// their maximum before exponentiation.
GridMoments grid_moments(const std::function<double(double)>& log_density,
                         double lo, double hi, int intervals) {
  const double h = (hi - lo) / intervals;
  std::vector<double> logs(intervals + 1);
  double peak = kNegInf;
  for (int i = 0; i <= intervals; ++i) {
    logs[i] = log_density(lo + h * i);
    peak = std::max(peak, logs[i]);
  }
  double mass = 0.0;
  double first = 0.0;
  double neg_plogp = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
    const double f = std::exp(logs[i] - peak);
    mass += w * f;
    first += w * f * (lo + h * i);
    if (f > 0.0) neg_plogp -= w * f * (logs[i] - peak);
  }
  mass *= h;
  first *= h;
  neg_plogp *= h;
  const double mean = first / mass;
  double second = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
    const double d = lo + h * i - mean;
    second += w * std::exp(logs[i] - peak) * d * d;
  }
  second *= h;
  // With p = f / mass: -int p ln p = -int f (ln f) / mass + ln mass.
  return {std::log(mass) + peak, mean, second / mass,
          neg_plogp / mass + std::log(mass)};
}

}  // namespace

std::string_view to_string(BeliefRepresentation representation) {
  switch (representation) {
    case BeliefRepresentation::kGaussian:
      return "gaussian";
    case BeliefRepresentation::kGrid:
      return "grid";
    case BeliefRepresentation::kDiscrete:
      return "discrete";
    case BeliefRepresentation::kDegenerate:
      return "degenerate";
  }
  return "unknown";
}

Belief Belief::Gaussian(double mean, double variance) {
  return Belief{mean, variance, gaussian_entropy(variance),
                BeliefRepresentation::kGaussian};
}

Belief Belief::PointMass(double mean) {
  return Belief{mean, 0.0, kNegInf, BeliefRepresentation::kDegenerate};
}

double invert_action(double theta_tilde, double y, double kappa) {
  if (!(kappa > 0.0)) {
    throw std::domain_error("action carries no private-signal information");
  }
  return (theta_tilde - (1.0 - kappa) * y) / kappa;
}

Belief numeric_posterior(double prior_mean, double prior_variance,
                         const std::function<double(double)>& log_likelihood,
                         double lo, double hi,
                         const QuadratureOptions& options) {
  if (!(hi > lo)) throw std::invalid_argument("empty integration window");
  const auto log_density = [&](double x) {
    const double d = x - prior_mean;
    return -0.5 * d * d / prior_variance + log_likelihood(x);
  };
  int intervals = options.initial_intervals;
  GridMoments prev = grid_moments(log_density, lo, hi, intervals);
  while (intervals < options.max_intervals) {
    intervals *= 2;
    const GridMoments next = grid_moments(log_density, lo, hi, intervals);
    const bool settled =
        std::abs(next.log_mass - prev.log_mass) < options.tolerance &&
        std::abs(next.mean - prev.mean) < options.tolerance &&
        std::abs(next.variance - prev.variance) < options.tolerance &&
        std::abs(next.entropy - prev.entropy) < options.tolerance;
    prev = next;
    if (settled) break;
  }
  return Belief{prev.mean, prev.variance, prev.entropy,
                BeliefRepresentation::kGrid};
}

Belief observer_posterior(double theta_tilde, double y, double kappa,
                          const NoiseSpec& noise, double s,
                          const GameParams& params) {
  const double signal_estimate = invert_action(theta_tilde, y, kappa);
  if (noise.is_degenerate()) return Belief::PointMass(signal_estimate);

  const double prior_var = params.sigma2_x();
  const double residual_base = theta_tilde - (1.0 - kappa) * y;
  switch (noise.family()) {
    case NoiseFamily::kGaussian: {
      const double action_precision = kappa * kappa / noise.variance();
      const double precision = params.tau_x() + action_precision;
      const double mean =
          (params.tau_x() * s + action_precision * signal_estimate) / precision;
      return Belief::Gaussian(mean, 1.0 / precision);
    }
    case NoiseFamily::kUniform: {
      // Likelihood is flat on |residual_base - kappa x| <= a.
      const double reach = noise.half_width() / kappa;
      const double spread =
          10.0 * std::sqrt(prior_var) + std::abs(signal_estimate - s);
      const double lo = std::max(signal_estimate - reach, s - spread);
      const double hi = std::min(signal_estimate + reach, s + spread);
      return numeric_posterior(s, prior_var, [](double) { return 0.0; }, lo,
                               hi);
    }
    case NoiseFamily::kTwoPoint: {
      const double atoms[2] = {(residual_base - noise.high_atom()) / kappa,
                               (residual_base - noise.low_atom()) / kappa};
      const double probs[2] = {noise.delta(), 1.0 - noise.delta()};
      double logw[2];
      for (int k = 0; k < 2; ++k) {
        const double d = atoms[k] - s;
        logw[k] = std::log(probs[k]) - 0.5 * d * d / prior_var;
      }
      const double peak = std::max(logw[0], logw[1]);
      double w[2] = {std::exp(logw[0] - peak), std::exp(logw[1] - peak)};
      const double total = w[0] + w[1];
      w[0] /= total;
      w[1] /= total;
      const double mean = w[0] * atoms[0] + w[1] * atoms[1];
      const double gap = atoms[0] - atoms[1];
      double shannon = 0.0;
      for (double p : w) {
        if (p > 0.0) shannon -= p * std::log(p);
      }
      return Belief{mean, w[0] * w[1] * gap * gap, shannon,
                    BeliefRepresentation::kDiscrete};
    }
  }
  throw std::invalid_argument("unknown noise family");
}

double rho(const Belief& belief, PrivacyMeasure measure) {
  if (belief.representation == BeliefRepresentation::kDegenerate ||
      belief.variance == 0.0) {
    return kNegInf;
  }
  if (measure == PrivacyMeasure::kPrecision) return -1.0 / belief.variance;
  if (belief.representation == BeliefRepresentation::kDiscrete) {
    throw std::domain_error(
        "discrete belief has no differential entropy to use as rho");
  }
  return belief.entropy;
}

double rho_simplified(double nu, PrivacyMeasure measure) {
  if (nu < 0.0) throw std::invalid_argument("noise variance must be >= 0");
  if (nu == 0.0) return kNegInf;
  return measure == PrivacyMeasure::kPrecision ? -1.0 / nu
                                               : gaussian_entropy(nu);
}

double rho_of_noise(const NoiseSpec& noise, PrivacyMeasure measure) {
  if (measure == PrivacyMeasure::kPrecision || noise.is_degenerate()) {
    return rho_simplified(noise.variance(), measure);
  }
  const NoiseEntropy h = entropy(noise);
  if (h.discrete) {
    throw std::domain_error(
        "two-point noise has no differential entropy to use as rho");
  }
  return h.nats;
}

}  // namespace kbc

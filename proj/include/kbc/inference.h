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

// The observer's Bayesian belief about a target agent's private signal after
// seeing the agent's (noisy) action, and the privacy measures built on it.
//
// The observer knows s, y, the target's kappa and its noise distribution. The
// prior on x_i is therefore N(s, sigma2_x), and the action contributes the
// likelihood h(theta~ - kappa x - (1 - kappa) y) with h the noise density.

#ifndef KBC_INFERENCE_H_
#define KBC_INFERENCE_H_

#include <functional>
#include <string_view>

#include "kbc/core.h"
#include "kbc/equilibrium.h"
#include "kbc/noise.h"

namespace kbc {

enum class BeliefRepresentation {
  kGaussian,    // closed form
  kGrid,        // numeric quadrature over a grid
  kDiscrete,    // finitely many atoms; entropy is Shannon, not differential
  kDegenerate,  // point mass; entropy is -inf
};

std::string_view to_string(BeliefRepresentation representation);

struct Belief {
  double mean = 0.0;
  double variance = 0.0;
  double entropy = 0.0;  // nats
  BeliefRepresentation representation = BeliefRepresentation::kGaussian;

  static Belief Gaussian(double mean, double variance);
  static Belief PointMass(double mean);
};

// (theta~ - (1 - kappa) y) / kappa. Throws std::domain_error for kappa <= 0:
// the action then carries no private-signal information.
double invert_action(double theta_tilde, double y, double kappa);

// Full posterior over x_i. Gaussian noise has the closed form with precision
// tau_x + kappa^2 / nu; Uniform noise goes through numeric_posterior;
// TwoPoint noise gives a two-atom posterior; nu = 0 is a point mass at
// invert_action.
Belief observer_posterior(double theta_tilde, double y, double kappa,
                          const NoiseSpec& noise, double s,
                          const GameParams& params);

struct QuadratureOptions {
  int initial_intervals = 4096;
  int max_intervals = 1 << 22;
  double tolerance = 1e-8;
};

// Posterior N(prior_mean, prior_variance) x exp(log_likelihood) on [lo, hi]
// by trapezoid quadrature, doubling the node count until mass, mean,
// variance and entropy all move by less than the tolerance.
Belief numeric_posterior(double prior_mean, double prior_variance,
                         const std::function<double(double)>& log_likelihood,
                         double lo, double hi,
                         const QuadratureOptions& options = {});

// Privacy term as it enters utility (+beta rho): -1 / variance for
// kPrecision, the differential entropy for kEntropy. Degenerate beliefs give
// -inf; kEntropy on a discrete belief throws std::domain_error.
double rho(const Belief& belief, PrivacyMeasure measure);

// -1/nu or 0.5 ln(2 pi e nu): the posterior variance identified with nu, as
// used by the equilibrium conditions. nu == 0 gives -inf for both.
double rho_simplified(double nu, PrivacyMeasure measure);

// rho_simplified for kPrecision; the family's differential entropy for
// kEntropy (Gaussian noise reproduces rho_simplified). TwoPoint noise under
// kEntropy throws std::domain_error.
double rho_of_noise(const NoiseSpec& noise, PrivacyMeasure measure);

}  // namespace kbc

#endif  // KBC_INFERENCE_H_

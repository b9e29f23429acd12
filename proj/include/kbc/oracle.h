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

// Brute-force ground truth for the closed forms: numeric best responses,
// symmetric fixed points, optimal noise variance by direct search, and
// no-profitable-deviation certification.
//
// Expected utilities here never use the closed forms. Every action is
// written as a linear combination of independent zero-mean shocks (the
// public-signal error, each private-signal error, each unit noise draw), and
// E[X^2] is evaluated as mean^2 + sum_k coef_k^2 var_k over explicit
// per-agent coefficient vectors.

#ifndef KBC_ORACLE_H_
#define KBC_ORACLE_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kbc/core.h"
#include "kbc/equilibrium.h"
#include "kbc/monte_carlo.h"
#include "kbc/noise.h"

namespace kbc {

// One agent deviating from a symmetric profile: own weight, noise law and a
// noise mean (which the observer subtracts, so it never buys privacy).
struct DeviationCandidate {
  double kappa = 0.0;
  NoiseSpec noise = NoiseSpec::None();
  double noise_mean = 0.0;
};

// E[u_dev] for an agent playing `candidate` against everyone else playing
// `others`, conditional on s, by the explicit quadratic form. Gaussian or
// not, only the noise variances matter for the base utility.
double deviator_base_utility(const GameParams& params,
                             const StrategyProfile& others,
                             const DeviationCandidate& candidate);

// E[u(a)] - E[u(b)] for two candidates against the same profile, evaluated
// as a difference of quadratic forms (accurate even when a ~ b).
double deviator_base_utility_difference(const GameParams& params,
                                        const StrategyProfile& others,
                                        const DeviationCandidate& a,
                                        const DeviationCandidate& b);

// Best own weight when everyone else plays others_kappa without noise,
// by golden-section search on [0, 1].
double best_response_kappa(const GameParams& params, double others_kappa,
                           double tolerance = 1e-13);

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

struct FixedPointOptions {
  double start = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

// Iterates best_response_kappa until successive weights differ by less than
// the tolerance. Throws ConvergenceError (with the iterate trace) otherwise.
double fixed_point_kappa(const GameParams& params,
                         const FixedPointOptions& options = {});

// argmax over (0, nu_max] of -(1 - beta) c nu + beta rho_simplified(nu).
// Returns 0 when beta == 0.
double best_response_variance(const GameParams& params, PrivacyMeasure measure,
                              double penalty_coefficient, double nu_max = 1e3,
                              double tolerance = 1e-10);

struct DeviationGain {
  double gain = 0.0;
  double standard_error = 0.0;
  bool closed_form = false;
};

// E[v_dev] - E[v_eq] for one agent switching from `equilibrium` to
// `candidate` while everyone else keeps playing `equilibrium`. Gaussian (or
// absent) noise on both sides is evaluated in closed form with zero standard
// error; anything else is a paired Monte Carlo estimate. rho uses
// rho_of_noise: observers know the deviator's announced noise law.
DeviationGain deviation_gain(const GameParams& params, PrivacyMeasure measure,
                             const StrategyProfile& equilibrium,
                             const DeviationCandidate& candidate, double s,
                             std::int64_t replicates, std::uint64_t seed,
                             int threads = 1);

struct CertificationOptions {
  int kappa_points = 21;
  int nu_points = 21;
  double nu_span = 4.0;  // nu grid covers [0, nu_span * nu_eq]
  std::vector<double> noise_means = {-1.0, -0.5, 0.0, 0.5, 1.0};
  double closed_form_tolerance = 1e-9;
  double standard_errors = 3.0;
  std::int64_t replicates = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  double s = 0.0;
};

struct MonteCarloDeviation {
  DeviationCandidate candidate;
  DeviationGain gain;
};

struct CertificationReport {
  double max_closed_form_gain = 0.0;
  DeviationCandidate best_closed_form;
  int grid_points = 0;
  std::vector<MonteCarloDeviation> monte_carlo;
  double max_monte_carlo_gain = 0.0;
  double max_monte_carlo_z = 0.0;  // gain / SE
  bool closed_form_pass = false;
  bool monte_carlo_pass = false;
  bool pass() const { return closed_form_pass && monte_carlo_pass; }
};

// Grid over (kappa, nu, mu) of Gaussian deviations with local golden-section
// refinement of the best point, plus matched-variance deviations to the
// other noise families checked by Monte Carlo (Uniform and TwoPoint under
// precision; Uniform only under entropy).
CertificationReport certify_equilibrium(const GameParams& params,
                                        PrivacyMeasure measure,
                                        const StrategyProfile& equilibrium,
                                        const CertificationOptions& options =
                                            {});

}  // namespace kbc

#endif  // KBC_ORACLE_H_

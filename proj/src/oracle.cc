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

#include "kbc/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kbc/golden_section.h"
#include "kbc/inference.h"
#include "kbc/random.h"

namespace kbc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shock layout: [eps_y, eps_dev, xi_dev, (eps_j, xi_j) for each other agent
// j in a finite game]. xi are unit-variance noise draws.
struct LinearForm {
  double mean = 0.0;
  std::vector<double> coef;
};

std::vector<double> shock_variances(const GameParams& params) {
  std::vector<double> v = {params.sigma2_y(), params.sigma2_x(), 1.0};
  if (!params.is_continuum()) {
    for (std::int64_t j = 1; j < params.n(); ++j) {
      v.push_back(params.sigma2_x());
      v.push_back(1.0);
    }
  }
  return v;
}

// Coefficients of an action kappa x + (1 - kappa) y + eta - s, eta with
// standard deviation `noise_sd` and mean `mu`, for the agent whose private
// error sits at `own` and own noise at `own + 1`.
void add_action(LinearForm& f, double weight, double kappa, double noise_sd,
                double mu, std::size_t own) {
  f.mean += weight * mu;
  f.coef[0] += weight * (1.0 - kappa);
  f.coef[own] += weight * kappa;
  f.coef[own + 1] += weight * noise_sd;
}

struct DeviatorForms {
  LinearForm guess;         // theta~_dev - s
  LinearForm coordination;  // theta~_dev - theta-bar
};

DeviatorForms build_forms(const GameParams& params,
                          const StrategyProfile& others,
                          const DeviationCandidate& cand,
                          std::size_t shock_count) {
  const double dev_sd = std::sqrt(cand.noise.variance());
  const double other_sd = std::sqrt(others.noise_variance());
  DeviatorForms f;
  f.guess.coef.assign(shock_count, 0.0);
  f.coordination.coef.assign(shock_count, 0.0);
  add_action(f.guess, 1.0, cand.kappa, dev_sd, cand.noise_mean, 1);
  if (params.is_continuum()) {
    // theta-bar - s = (1 - kappa) eps_y; the deviator has measure zero.
    add_action(f.coordination, 1.0, cand.kappa, dev_sd, cand.noise_mean, 1);
    f.coordination.coef[0] -= 1.0 - others.kappa;
    return f;
  }
  const double n = static_cast<double>(params.n());
  add_action(f.coordination, 1.0 - 1.0 / n, cand.kappa, dev_sd,
             cand.noise_mean, 1);
  for (std::size_t j = 3; j < shock_count; j += 2) {
    add_action(f.coordination, -1.0 / n, others.kappa, other_sd, 0.0, j);
  }
  return f;
}

double second_moment(const LinearForm& f, const std::vector<double>& var) {
  double total = f.mean * f.mean;
  for (std::size_t k = 0; k < var.size(); ++k) {
    total += f.coef[k] * f.coef[k] * var[k];
  }
  return total;
}

// E[A^2] - E[B^2] from the difference form D = A - B and the sum A + B.
double second_moment_difference(const LinearForm& diff, const LinearForm& sum,
                                const std::vector<double>& var) {
  double total = diff.mean * sum.mean;
  for (std::size_t k = 0; k < var.size(); ++k) {
    total += diff.coef[k] * sum.coef[k] * var[k];
  }
  return total;
}

LinearForm add_forms(const LinearForm& a, const LinearForm& b) {
  LinearForm f{a.mean + b.mean, a.coef};
  for (std::size_t k = 0; k < f.coef.size(); ++k) f.coef[k] += b.coef[k];
  return f;
}

// Deviator forms of candidate a minus those of candidate b, built from the
// parameter differences so that nearby candidates keep full precision.
DeviatorForms difference_forms(const GameParams& params,
                               const DeviationCandidate& a,
                               const DeviationCandidate& b,
                               std::size_t shock_count) {
  const double nu_a = a.noise.variance();
  const double nu_b = b.noise.variance();
  const double sd_sum = std::sqrt(nu_a) + std::sqrt(nu_b);
  const double d_sd = sd_sum > 0.0 ? (nu_a - nu_b) / sd_sum : 0.0;
  const double d_kappa = a.kappa - b.kappa;
  const double d_mu = a.noise_mean - b.noise_mean;
  auto delta = [&](double weight) {
    LinearForm f;
    f.coef.assign(shock_count, 0.0);
    f.mean = weight * d_mu;
    f.coef[0] = -weight * d_kappa;
    f.coef[1] = weight * d_kappa;
    f.coef[2] = weight * d_sd;
    return f;
  };
  const double weight =
      params.is_continuum()
          ? 1.0
          : 1.0 - 1.0 / static_cast<double>(params.n());
  return {delta(1.0), delta(weight)};
}

double utility_difference(const GameParams& params,
                          const StrategyProfile& others,
                          const DeviationCandidate& a,
                          const DeviationCandidate& b,
                          const std::vector<double>& var) {
  const DeviatorForms fa = build_forms(params, others, a, var.size());
  const DeviatorForms fb = build_forms(params, others, b, var.size());
  const DeviatorForms d = difference_forms(params, a, b, var.size());
  const double alpha = params.alpha();
  return -alpha * second_moment_difference(d.guess,
                                           add_forms(fa.guess, fb.guess), var) -
         (1.0 - alpha) *
             second_moment_difference(
                 d.coordination, add_forms(fa.coordination, fb.coordination),
                 var);
}

// rho(a) - rho(b) for Gaussian noise of variances nu_a, nu_b.
double rho_difference(double nu_a, double nu_b, PrivacyMeasure measure) {
  if (nu_a == nu_b) return 0.0;
  if (nu_a == 0.0) return kNegInf;
  if (nu_b == 0.0) return std::numeric_limits<double>::infinity();
  if (measure == PrivacyMeasure::kPrecision) {
    return (nu_a - nu_b) / (nu_a * nu_b);
  }
  return 0.5 * std::log(nu_a / nu_b);
}

bool gaussian_or_none(const NoiseSpec& spec) {
  return spec.is_degenerate() || spec.family() == NoiseFamily::kGaussian;
}

}  // namespace

double deviator_base_utility(const GameParams& params,
                             const StrategyProfile& others,
                             const DeviationCandidate& candidate) {
  const std::vector<double> var = shock_variances(params);
  const DeviatorForms f = build_forms(params, others, candidate, var.size());
  const double a = params.alpha();
  return -a * second_moment(f.guess, var) -
         (1.0 - a) * second_moment(f.coordination, var);
}

double deviator_base_utility_difference(const GameParams& params,
                                        const StrategyProfile& others,
                                        const DeviationCandidate& a,
                                        const DeviationCandidate& b) {
  return utility_difference(params, others, a, b, shock_variances(params));
}

double best_response_kappa(const GameParams& params, double others_kappa,
                           double tolerance) {
  const StrategyProfile others{others_kappa, std::nullopt};
  const std::vector<double> var = shock_variances(params);
  auto better = [&](double ka, double kb) {
    return utility_difference(params, others, {ka, NoiseSpec::None(), 0.0},
                              {kb, NoiseSpec::None(), 0.0}, var) > 0.0;
  };
  return golden_section_maximize_by(better, 0.0, 1.0, tolerance).argmax;
}

double fixed_point_kappa(const GameParams& params,
                         const FixedPointOptions& options) {
  std::vector<double> trace = {options.start};
  double kappa = options.start;
  for (int it = 0; it < options.max_iterations; ++it) {
    const double next = best_response_kappa(params, kappa);
    trace.push_back(next);
    if (std::abs(next - kappa) < options.tolerance) return next;
    kappa = next;
  }
  if (trace.size() > 20) trace.erase(trace.begin(), trace.end() - 20);
  throw ConvergenceError("best-response iteration did not converge", trace);
}

double best_response_variance(const GameParams& params, PrivacyMeasure measure,
                              double penalty_coefficient, double nu_max,
                              double tolerance) {
  const double beta = params.beta();
  if (beta == 0.0) return 0.0;
  const double cost = (1.0 - beta) * penalty_coefficient;
  auto better = [&](double a, double b) {
    return -cost * (a - b) + beta * rho_difference(a, b, measure) > 0.0;
  };
  return golden_section_maximize_by(better, 0.0, nu_max, tolerance).argmax;
}

DeviationGain deviation_gain(const GameParams& params, PrivacyMeasure measure,
                             const StrategyProfile& equilibrium,
                             const DeviationCandidate& candidate, double s,
                             std::int64_t replicates, std::uint64_t seed,
                             int threads) {
  const NoiseSpec eq_noise = equilibrium.noise.value_or(NoiseSpec::None());
  const double beta = params.beta();
  if (gaussian_or_none(candidate.noise) && gaussian_or_none(eq_noise)) {
    const DeviationCandidate stay{equilibrium.kappa, eq_noise, 0.0};
    const double base =
        deviator_base_utility_difference(params, equilibrium, candidate, stay);
    double gain = (1.0 - beta) * base;
    if (beta > 0.0) {
      gain += beta * rho_difference(candidate.noise.variance(),
                                    eq_noise.variance(), measure);
    }
    return {gain, 0.0, true};
  }

  const double rho_dev = rho_of_noise(candidate.noise, measure);
  const double rho_eq = rho_of_noise(eq_noise, measure);
  const double privacy =
      beta == 0.0 || rho_dev == rho_eq ? 0.0 : beta * (rho_dev - rho_eq);
  const bool continuum = params.is_continuum();
  const std::int64_t others = continuum ? 0 : params.n() - 1;
  const double n = continuum ? 0.0 : static_cast<double>(params.n());
  const double sx = std::sqrt(params.sigma2_x());
  const double sy = std::sqrt(params.sigma2_y());
  const double alpha = params.alpha();
  const double k_eq = equilibrium.kappa;

  auto replicate = [&](Rng& rng, std::array<double, 1>& out) {
    const double eps_y = sy * rng.gaussian();
    const double y = s + eps_y;
    const double x_dev = s + sx * rng.gaussian();
    double others_sum = 0.0;
    for (std::int64_t j = 0; j < others; ++j) {
      const double x = s + sx * rng.gaussian();
      others_sum += k_eq * x + (1.0 - k_eq) * y + eq_noise.draw(rng);
    }
    const double act_dev = candidate.kappa * x_dev +
                           (1.0 - candidate.kappa) * y + candidate.noise_mean +
                           candidate.noise.draw(rng);
    const double act_eq =
        k_eq * x_dev + (1.0 - k_eq) * y + eq_noise.draw(rng);
    double mean_dev, mean_eq;
    if (continuum) {
      mean_dev = mean_eq = s + (1.0 - k_eq) * eps_y;
    } else {
      mean_dev = (others_sum + act_dev) / n;
      mean_eq = (others_sum + act_eq) / n;
    }
    const double du = realized_base_utility(act_dev, mean_dev, s, alpha) -
                      realized_base_utility(act_eq, mean_eq, s, alpha);
    out[0] = (1.0 - beta) * du + privacy;
  };
  const Estimate e =
      run_replicates<1>(replicates, seed, threads, replicate).estimate(0);
  return {e.mean, e.standard_error, false};
}

CertificationReport certify_equilibrium(const GameParams& params,
                                        PrivacyMeasure measure,
                                        const StrategyProfile& equilibrium,
                                        const CertificationOptions& options) {
  const double nu_eq = equilibrium.noise_variance();
  const double s = options.s;
  auto closed_gain = [&](const DeviationCandidate& c) {
    return deviation_gain(params, measure, equilibrium, c, s, 1, 0).gain;
  };

  std::vector<double> kappas;
  for (int i = 0; i < options.kappa_points; ++i) {
    kappas.push_back(options.kappa_points == 1
                         ? equilibrium.kappa
                         : static_cast<double>(i) / (options.kappa_points - 1));
  }
  std::vector<double> nus;
  const double nu_hi = options.nu_span * nu_eq;
  if (nu_hi == 0.0) {
    nus.push_back(0.0);
  } else {
    for (int j = 0; j < options.nu_points; ++j) {
      nus.push_back(nu_hi * j / std::max(1, options.nu_points - 1));
    }
  }
  std::vector<double> mus = options.noise_means;
  if (mus.empty()) mus.push_back(0.0);

  CertificationReport report;
  report.max_closed_form_gain = kNegInf;
  for (double k : kappas) {
    for (double nu : nus) {
      for (double mu : mus) {
        const DeviationCandidate c{k, NoiseSpec::Gaussian(nu), mu};
        const double g = closed_gain(c);
        ++report.grid_points;
        if (g > report.max_closed_form_gain) {
          report.max_closed_form_gain = g;
          report.best_closed_form = c;
        }
      }
    }
  }

  // Coordinate-wise refinement within one grid step of the best point.
  DeviationCandidate best = report.best_closed_form;
  const double dk = kappas.size() > 1 ? kappas[1] - kappas[0] : 0.0;
  const double dnu = nus.size() > 1 ? nus[1] - nus[0] : 0.0;
  auto refine = [&](auto set, double centre, double step, double lo_bound,
                    double hi_bound) {
    if (step == 0.0) return;
    const double lo = std::max(lo_bound, centre - step);
    const double hi = std::min(hi_bound, centre + step);
    auto gain_at = [&](double v) {
      DeviationCandidate c = best;
      set(c, v);
      return closed_gain(c);
    };
    const double arg = golden_section_maximize(gain_at, lo, hi, 1e-12).argmax;
    if (gain_at(arg) > closed_gain(best)) set(best, arg);
  };
  refine([](DeviationCandidate& c, double v) { c.kappa = v; }, best.kappa, dk,
         0.0, 1.0);
  refine([](DeviationCandidate& c, double v) {
           c.noise = NoiseSpec::Gaussian(v);
         },
         best.noise.variance(), dnu, 0.0, nu_hi);
  if (mus.size() > 1) {
    const double dmu = (mus.back() - mus.front()) / (mus.size() - 1);
    refine([](DeviationCandidate& c, double v) { c.noise_mean = v; },
           best.noise_mean, std::abs(dmu), mus.front(), mus.back());
  }
  const double refined = closed_gain(best);
  if (refined > report.max_closed_form_gain) {
    report.max_closed_form_gain = refined;
    report.best_closed_form = best;
  }
  report.closed_form_pass =
      report.max_closed_form_gain <= options.closed_form_tolerance;

  // Other noise families at the equilibrium variance.
  report.max_monte_carlo_gain = kNegInf;
  report.max_monte_carlo_z = kNegInf;
  report.monte_carlo_pass = true;
  if (nu_eq > 0.0) {
    std::vector<NoiseFamily> families = {NoiseFamily::kUniform};
    if (measure == PrivacyMeasure::kPrecision) {
      families.push_back(NoiseFamily::kTwoPoint);
    }
    std::vector<double> mc_kappas = {equilibrium.kappa};
    for (double shift : {-0.1, 0.1}) {
      const double k = std::clamp(equilibrium.kappa + shift, 0.0, 1.0);
      if (std::find(mc_kappas.begin(), mc_kappas.end(), k) == mc_kappas.end()) {
        mc_kappas.push_back(k);
      }
    }
    std::uint64_t stream = 0;
    for (NoiseFamily family : families) {
      for (double k : mc_kappas) {
        const DeviationCandidate c{
            k, NoiseSpec::Make(family, nu_eq, /*high=*/1.0, /*delta=*/0.1),
            0.0};
        const DeviationGain g = deviation_gain(
            params, measure, equilibrium, c, s, options.replicates,
            derive_seed(options.seed, stream++), options.threads);
        report.monte_carlo.push_back({c, g});
        report.max_monte_carlo_gain = std::max(report.max_monte_carlo_gain,
                                               g.gain);
        if (g.standard_error > 0.0) {
          report.max_monte_carlo_z =
              std::max(report.max_monte_carlo_z, g.gain / g.standard_error);
        }
        if (g.gain > options.standard_errors * g.standard_error) {
          report.monte_carlo_pass = false;
        }
      }
    }
  }
  return report;
}

}  // namespace kbc

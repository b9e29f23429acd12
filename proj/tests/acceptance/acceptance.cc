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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kbc/cli/commands.h"
#include "kbc/core.h"
#include "kbc/equilibrium.h"
#include "kbc/inference.h"
#include "kbc/noise.h"
#include "kbc/oracle.h"
#include "kbc/pop.h"
#include "kbc/simulate.h"

namespace kbc {
namespace {

using Clock = std::chrono::steady_clock;

int Workers() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

// 1. Closed-form versus fixed-point kappa.
Outcome KappaAgreement() {
  Outcome o;
  std::mt19937_64 gen(20261018);
  std::uniform_real_distribution<double> alpha(0.0, 1.0), logvar(-2.3, 2.3);
  std::uniform_int_distribution<std::int64_t> n(2, 200);
  double worst_finite = 0, worst_continuum = 0;
  for (int i = 0; i < 200; ++i) {
    const double a = alpha(gen);
    const double sx = std::exp(logvar(gen)), sy = std::exp(logvar(gen));
    const GameParams f(a, 0.5, Population::Finite(n(gen)), sx, sy);
    const GameParams c = f.with_population(Population::Continuum());
    worst_finite =
        std::max(worst_finite, std::abs(kappa_finite(f) - fixed_point_kappa(f)));
    worst_continuum = std::max(
        worst_continuum, std::abs(kappa_infinite(c) - fixed_point_kappa(c)));
  }
  o.check(worst_finite < 1e-8, "finite residual too large");
  o.check(worst_continuum < 1e-8, "continuum residual too large");
  o.detail += Fmt("200 draws, max |finite| %.2e, max |continuum| %.2e",
                  worst_finite, worst_continuum);
  return o;
}

// 2. Optimal noise variance against the numeric best response.
Outcome NoiseVarianceAgreement() {
  Outcome o;
  std::mt19937_64 gen(20261018);
  std::uniform_real_distribution<double> alpha(0.0, 1.0), beta(0.01, 0.95),
      logvar(-2.3, 2.3);
  std::uniform_int_distribution<std::int64_t> n(2, 200);
  double worst = 0, worst_variants = 0;
  for (int i = 0; i < 200; ++i) {
    const double a = alpha(gen), b = beta(gen);
    const double sx = std::exp(logvar(gen)), sy = std::exp(logvar(gen));
    const GameParams f(a, b, Population::Finite(n(gen)), sx, sy);
    for (const GameParams& p : {f, f.with_population(Population::Continuum())}) {
      const double c = variance_penalty_coefficient(p);
      for (PrivacyMeasure m :
           {PrivacyMeasure::kPrecision, PrivacyMeasure::kEntropy}) {
        worst = std::max(worst, std::abs(optimal_noise_variance(p, m) -
                                         best_response_variance(p, m, c)));
      }
      if (p.is_continuum()) {
        worst_variants = std::max(
            worst_variants,
            std::abs(optimal_noise_variance(p, PrivacyMeasure::kPrecision,
                                            FormulaSet::kPaper) -
                     optimal_noise_variance(p, PrivacyMeasure::kPrecision,
                                            FormulaSet::kConsistent)));
      }
    }
  }
  o.check(worst < 1e-6, "consistent nu* differs from best response");
  o.check(worst_variants < 1e-12, "paper and consistent precision differ");
  o.detail += Fmt("800 solves, max |nu* - BR| %.2e, continuum precision "
                  "paper vs consistent %.2e",
                  worst, worst_variants);
  return o;
}

// 3. Expected-utility closed forms against simulation.
Outcome ExpectedUtility() {
  Outcome o;
  struct Case {
    GameParams params;
    double kappa;
  };
  const GameParams named(0.5, 0.0, Population::Finite(2), 1, 1);
  const GameParams five(0.3, 0.0, Population::Finite(5), 2, 0.5);
  const GameParams ten(0.8, 0.0, Population::Finite(10), 1, 3);
  const GameParams guess(1.0, 0.0, Population::Continuum(), 1, 1);
  const GameParams cont(0.4, 0.0, Population::Continuum(), 1.5, 0.7);
  const Case cases[] = {{named, 4.0 / 9.0},
                        {five, kappa_finite(five)},
                        {ten, 0.2},
                        {guess, 0.5},
                        {cont, kappa_infinite(cont)}};
  double worst_z = 0;
  std::uint64_t seed = 3;
  for (const Case& c : cases) {
    SimulationOptions opts;
    opts.threads = Workers();
    const MonteCarloReport r = run_monte_carlo(
        c.params, StrategyProfile::Make(c.kappa), 0.0, 1000000, seed++, opts);
    const double z = std::abs(r.base_utility.mean -
                              expected_utility(c.params, c.kappa)) /
                     r.base_utility.standard_error;
    worst_z = std::max(worst_z, z);
  }
  o.check(std::abs(expected_utility(named, 4.0 / 9.0) + 0.302469) < 1e-6,
          "named value off");
  o.check(worst_z <= 3.0, "simulation outside 3 SE");
  o.detail += Fmt("5 configs x 1e6 replicates, max |z| %.2f, E[u](n=2) = %.6f",
                  worst_z, expected_utility(named, 4.0 / 9.0));
  return o;
}

// 4. Separability of the privacy-aware utility.
Outcome Separability() {
  Outcome o;
  double worst_z = 0;
  int checks = 0;
  std::uint64_t seed = 11;
  for (double beta : {0.25, 0.5, 0.9}) {
    for (const Population& pop :
         {Population::Finite(3), Population::Continuum()}) {
      for (PrivacyMeasure m :
           {PrivacyMeasure::kPrecision, PrivacyMeasure::kEntropy}) {
        const GameParams p(0.5, beta, pop, 1, 1);
        const NoisyEquilibrium eq = solve_equilibrium(p, m);
        SimulationOptions opts;
        opts.measure = m;
        opts.threads = Workers();
        const MonteCarloReport r =
            run_monte_carlo(p, eq.profile(), 0.0, 1000000, seed++, opts);
        const double predicted =
            (1 - beta) * (r.clean_utility.mean - eq.penalty_coefficient * eq.nu) +
            beta * rho_simplified(eq.nu, m);
        const double se = std::hypot(r.privacy_utility.standard_error,
                                     (1 - beta) * r.clean_utility.standard_error);
        worst_z = std::max(worst_z,
                           std::abs(r.privacy_utility.mean - predicted) / se);
        ++checks;
      }
    }
  }
  o.check(worst_z <= 3.0, "separability outside 3 combined SE");
  o.detail += Fmt("%.0f configs x 1e6 replicates, max |z| %.2f", checks,
                  worst_z);
  return o;
}

// 5. No profitable deviation at the solved equilibrium.
Outcome NoDeviation() {
  Outcome o;
  double worst_gain = -1, worst_z = -1e9;
  int runs = 0;
  for (PrivacyMeasure m : {PrivacyMeasure::kPrecision, PrivacyMeasure::kEntropy}) {
    for (double beta : {0.25, 0.75}) {
      for (const Population& pop : {Population::Finite(2), Population::Finite(5),
                                    Population::Continuum()}) {
        const GameParams p(0.5, beta, pop, 1, 1);
        const NoisyEquilibrium eq = solve_equilibrium(p, m);
        CertificationOptions opts;
        opts.threads = Workers();
        opts.seed = 100 + runs;
        const CertificationReport r =
            certify_equilibrium(p, m, eq.profile(), opts);
        worst_gain = std::max(worst_gain, r.max_closed_form_gain);
        worst_z = std::max(worst_z, r.max_monte_carlo_z);
        o.check(r.closed_form_pass, "closed-form gain above 1e-9");
        o.check(r.monte_carlo_pass, "Monte Carlo gain above 3 SE");
        ++runs;
      }
    }
  }
  o.detail += Fmt("%.0f equilibria, 21x21x5 grid, max closed-form gain %.2e, "
                  "max MC z %.2f",
                  runs, worst_gain, worst_z);
  return o;
}

// Finite-game utility with the continuum weight substituted, evaluated
// independently of the library.
double ComposedUtility(double a, double x, double y, double n) {
  const double k = a * y / (a * y + x);
  return -a * (k * k * x + (1 - k) * (1 - k) * y) -
         (1 - a) * k * k * (n - 1) / n * x;
}

double Extrapolated(const std::function<double(double)>& f, double v) {
  const double h = 1e-3 * std::max(1.0, std::abs(v));
  auto d = [&](double s) { return (f(v + s) - f(v - s)) / (2 * s); };
  const double r1 = (4 * d(h / 2) - d(h)) / 3;
  const double r2 = (4 * d(h / 4) - d(h / 2)) / 3;
  return (16 * r2 - r1) / 15;
}

// 6. Comparative statics.
Outcome ComparativeStatics() {
  Outcome o;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> alpha(0.05, 0.95), logvar(-1.6, 1.6);
  std::uniform_int_distribution<std::int64_t> n(2, 100);
  double worst = 0;
  int reference_mismatch = 0;
  bool signs = true;
  for (int i = 0; i < 100; ++i) {
    const double a = alpha(gen), x = std::exp(logvar(gen)),
                 y = std::exp(logvar(gen));
    const std::int64_t m = n(gen);
    const GameParams p(a, 0.5, Population::Finite(m), x, y);
    const double fd[] = {
        Extrapolated([&](double v) { return ComposedUtility(a, v, y, m); }, x),
        Extrapolated([&](double v) { return ComposedUtility(a, x, v, m); }, y),
        Extrapolated([&](double v) { return ComposedUtility(a, x, y, v); },
                     static_cast<double>(m))};
    const StaticParameter wrt[] = {StaticParameter::kSigma2X,
                                   StaticParameter::kSigma2Y,
                                   StaticParameter::kN};
    for (int k = 0; k < 3; ++k) {
      const double cf = comparative_static(p, wrt[k]);
      worst = std::max(worst, std::abs(cf - fd[k]) / std::abs(fd[k]));
      signs = signs && cf < 0;
    }
    const double reference =
        comparative_static(p, StaticParameter::kSigma2X, FormulaSet::kPaper);
    if (std::abs(reference - fd[0]) / std::abs(fd[0]) > 1e-6) ++reference_mismatch;
  }
  o.check(worst < 1e-6, "derivative disagrees with finite differences");
  o.check(signs, "a derivative is not negative");
  o.detail += Fmt("100 points, max relative error %.2e, all signs negative; "
                  "info: reference d/dsigma2_x form misses %.0f/100",
                  worst, reference_mismatch);
  return o;
}

// 7. Price of privacy.
Outcome PriceOfPrivacy() {
  Outcome o;
  const int w = Workers();
  double worst_z = 0;
  const GameParams worked(1.0, 0.5, Population::Continuum(), 1, 1);
  const GameParams agg_worked(1.0, 0.5, Population::Finite(4), 1, 1);
  struct AgentsCase {
    GameParams p;
    PrivacyMeasure m;
  };
  const AgentsCase agents[] = {
      {worked, PrivacyMeasure::kPrecision},
      {GameParams(0.5, 0.5, Population::Finite(3), 1, 1),
       PrivacyMeasure::kPrecision},
      {GameParams(0.3, 0.25, Population::Finite(5), 2, 0.5),
       PrivacyMeasure::kEntropy}};
  std::uint64_t seed = 31;
  for (const AgentsCase& c : agents) {
    const Estimate e = pop_agents_monte_carlo(
        c.p, c.m, FormulaSet::kConsistent, 0.0, 1000000, seed++, w);
    worst_z = std::max(worst_z, std::abs(e.mean - pop_agents(c.p, c.m)) /
                                    e.standard_error);
  }
  struct AggCase {
    GameParams p;
    std::int64_t n_obs;
  };
  const AggCase aggs[] = {{agg_worked, 4},
                          {GameParams(0.5, 0.75, Population::Finite(10), 1, 2),
                           10}};
  for (const AggCase& c : aggs) {
    const Estimate e = pop_aggregator_monte_carlo(
        c.p, PrivacyMeasure::kPrecision, FormulaSet::kConsistent, c.n_obs, 0.0,
        1000000, seed++, w);
    const double cf = pop_aggregator(c.p, PrivacyMeasure::kPrecision,
                                     FormulaSet::kConsistent, c.n_obs);
    worst_z = std::max(worst_z, std::abs(e.mean - cf) / e.standard_error);
  }
  const double pa = pop_agents(worked, PrivacyMeasure::kPrecision);
  const double pg = pop_aggregator(agg_worked, PrivacyMeasure::kPrecision,
                                   FormulaSet::kConsistent, 4);
  const double large = pop_aggregator(1, 1, 0.5, 1, 10000) - 1;
  o.check(std::abs(pa - 3.0) < 1e-12, "agents worked value");
  o.check(std::abs(pg - 1.8) < 1e-12, "aggregator worked value");
  o.check(large < 2e-3, "aggregator price at n=1e4");
  o.check(worst_z <= 3.0, "ratio outside 3 SE");
  o.detail += Fmt("agents %.6f, aggregator %.6f, n=1e4 excess %.2e", pa, pg,
                  large);
  o.detail += Fmt(", 5 configs max |z| %.2f", worst_z);
  return o;
}

// 8. Observer inference.
Outcome Inference() {
  Outcome o;
  double worst = 0;
  int points = 0;
  const double s = 0.2, sx = 1.3, y = -0.4;
  const GameParams p(0.5, 0.5, Population::Continuum(), sx, 1.0);
  for (double z : {-2.0, -0.5, 0.7, 1.5, 3.0}) {
    for (double kappa : {0.25, 0.75}) {
      for (double nu : {0.05, 0.3, 1.0, 4.0, 20.0}) {
        const Belief b =
            observer_posterior(z, y, kappa, NoiseSpec::Gaussian(nu), s, p);
        // Simpson quadrature of prior times likelihood.
        const double lo = s - 14 * std::sqrt(sx), hi = s + 14 * std::sqrt(sx);
        const int n = 40000;
        const double h = (hi - lo) / n;
        double m0 = 0, m1 = 0, m2 = 0;
        for (int k = 0; k <= n; ++k) {
          const double x = lo + k * h;
          const double r = z - kappa * x - (1 - kappa) * y;
          const double f = std::exp(-0.5 * (x - s) * (x - s) / sx -
                                    0.5 * r * r / nu);
          const double wgt = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
          m0 += wgt * f;
          m1 += wgt * f * x;
          m2 += wgt * f * x * x;
        }
        const double mean = m1 / m0;
        const double var = m2 / m0 - mean * mean;
        worst = std::max({worst, std::abs(b.mean - mean),
                          std::abs(b.variance - var)});
        ++points;
      }
    }
  }
  o.check(worst < 1e-6, "closed form differs from quadrature");
  const Belief exact =
      observer_posterior(2.0, 1.0, 0.5, NoiseSpec::Gaussian(0.0), s, p);
  o.check(exact.mean == 3.0 && exact.variance == 0.0, "nu=0 inversion");
  bool ordered = true;
  for (double nu : {1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 1e4}) {
    ordered = ordered && entropy(NoiseSpec::Gaussian(nu)).nats >
                             entropy(NoiseSpec::Uniform(nu)).nats;
  }
  o.check(ordered, "Gaussian entropy not above uniform");
  o.detail += Fmt("%.0f points, max |closed - quadrature| %.2e; nu=0 "
                  "inverts exactly; Gaussian > uniform entropy at 8 variances",
                  points, worst);
  return o;
}

// 9. Determinism across worker counts.
Outcome Determinism() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "--n", "3", "--seed", "42", "--replicates", "50000"},
      {"simulate", "--seed", "42", "--replicates", "50000", "--noise",
       "uniform", "--sample-size", "3", "--format", "csv"},
      {"deviate", "--n", "2", "--seed", "42", "--replicates", "20000"},
      {"pop", "--n", "4", "--seed", "42", "--replicates", "50000"},
      {"sweep", "--sweep", "alpha=0.2,0.5,0.8", "--sweep", "n=2,5"}};
  int identical = 0;
  for (const auto& cmd : commands) {
    std::string baseline;
    bool same = true;
    for (int threads : {1, 2, 7}) {
      auto args = cmd;
      args.push_back("--threads");
      args.push_back(std::to_string(threads));
      std::ostringstream out, err;
      if (cli::run_cli(args, out, err) != 0) {
        o.check(false, cmd.front() + " failed: " + err.str());
        same = false;
        break;
      }
      if (threads == 1) {
        baseline = out.str();
      } else if (out.str() != baseline) {
        same = false;
      }
    }
    if (same) ++identical;
    o.check(same, cmd.front() + " output depends on worker count");
  }
  o.detail += Fmt("%.0f/%.0f commands byte-identical at 1, 2 and 7 workers",
                  identical, static_cast<double>(commands.size()));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  Outcome (*run)();
};

}  // namespace
}  // namespace kbc

int main() {
  using namespace kbc;
  const Criterion criteria[] = {
      {1, "kappa closed form vs fixed point", 10, KappaAgreement},
      {2, "nu* vs numeric best response", 5, NoiseVarianceAgreement},
      {3, "expected utility vs Monte Carlo", 60, ExpectedUtility},
      {4, "separability", 60, Separability},
      {5, "no profitable deviation", 120, NoDeviation},
      {6, "comparative statics", 5, ComparativeStatics},
      {7, "price of privacy", 60, PriceOfPrivacy},
      {8, "observer inference", 10, Inference},
      {9, "determinism across workers", 0, Determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += Fmt("; runtime %.1fs over %.0fs limit", secs, c.limit_seconds);
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", c.id,
                c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}

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

#include "kbc/cli/commands.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "kbc/equilibrium.h"
#include "kbc/inference.h"
#include "kbc/oracle.h"
#include "kbc/pop.h"
#include "kbc/random.h"
#include "kbc/simulate.h"

#ifndef KBC_VERSION
#define KBC_VERSION "dev"
#endif

namespace kbc::cli {
namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::uint64_t require_seed(const ExperimentConfig& config,
                           std::string_view command) {
  if (!config.seed) {
    throw std::invalid_argument(std::string(command) +
                                " is stochastic and requires a seed");
  }
  return *config.seed;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  return format_number(v.get<double>());
}

std::string render(std::string_view record, const ExperimentConfig& config,
                   const std::vector<std::string>& columns,
                   const std::vector<Json>& rows, bool single) {
  if (config.format == OutputFormat::kCsv) {
    std::ostringstream out;
    out << "# kbc " << artifact_version() << " " << record << "\n";
    out << "# config: " << config.to_json().dump() << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << columns[c];
    }
    out << "\n";
    for (const Json& row : rows) {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << csv_cell(row.at(columns[c]));
      }
      out << "\n";
    }
    return out.str();
  }
  Json doc;
  doc["record"] = record;
  doc["version"] = artifact_version();
  doc["config"] = config.to_json();
  if (single) {
    doc["result"] = rows.front();
  } else {
    doc["result"] = {{"columns", columns}, {"rows", rows}};
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> keys_of(const Json& row) {
  std::vector<std::string> keys;
  for (const auto& [key, _] : row.items()) keys.push_back(key);
  return keys;
}

std::string render_single(std::string_view record,
                          const ExperimentConfig& config, const Json& result) {
  return render(record, config, keys_of(result), {result}, true);
}

Json population_value(const ExperimentConfig& config) {
  if (config.n) return *config.n;
  return "continuum";
}

StrategyProfile configured_profile(const ExperimentConfig& config,
                                   const GameParams& params, bool gaussian) {
  const double kappa = config.kappa ? *config.kappa : equilibrium_kappa(params);
  const double nu =
      config.nu ? *config.nu
                : optimal_noise_variance(params, config.measure,
                                         config.formulas);
  const NoiseFamily family =
      gaussian ? NoiseFamily::kGaussian : config.noise_family;
  return StrategyProfile::Make(
      kappa, NoiseSpec::Make(family, nu, config.two_point_high,
                             config.two_point_delta));
}

Json solve_result(const ExperimentConfig& config) {
  const GameParams params = config.game();
  const double kappa = equilibrium_kappa(params);
  const double kappa_oracle = fixed_point_kappa(params);
  const double c = variance_penalty_coefficient(params);
  const double nu_paper =
      optimal_noise_variance(params, config.measure, FormulaSet::kPaper);
  const double nu_consistent =
      optimal_noise_variance(params, config.measure, FormulaSet::kConsistent);
  const double nu_oracle = best_response_variance(params, config.measure, c);
  const double nu =
      config.formulas == FormulaSet::kPaper ? nu_paper : nu_consistent;

  // Best-response condition at a representative information set.
  const double x_i = config.s + 1.0;
  const double y = config.s;
  const double e_state = posterior_state_mean({x_i, y, params});
  const double e_other_action = kappa * e_state + (1.0 - kappa) * y;
  const double e_others =
      params.is_continuum()
          ? e_other_action
          : static_cast<double>(params.n() - 1) * e_other_action;
  const double theta = kappa * x_i + (1.0 - kappa) * y;

  const std::int64_t n_obs = config.aggregator_sample();
  Json r;
  r["population"] = population_value(config);
  r["measure"] = std::string(to_string(config.measure));
  r["formulas"] = std::string(to_string(config.formulas));
  r["kappa"] = number(kappa);
  r["kappa_oracle"] = number(kappa_oracle);
  r["kappa_oracle_residual"] = number(std::abs(kappa - kappa_oracle));
  r["best_response_residual"] =
      number(std::abs(best_response_kappa(params, kappa) - kappa));
  r["foc_residual"] = number(foc_residual(theta, e_state, e_others, params));
  r["c_n"] = number(c);
  r["nu"] = number(nu);
  r["nu_paper"] = number(nu_paper);
  r["nu_consistent"] = number(nu_consistent);
  r["nu_oracle"] = number(nu_oracle);
  r["nu_oracle_residual"] = number(std::abs(nu_consistent - nu_oracle));
  r["nu_variants_agree"] = std::abs(nu_paper - nu_consistent) <= 1e-12;
  r["expected_utility"] = number(expected_utility(params, kappa));
  r["expected_noisy_utility"] =
      number(expected_noisy_utility(params, kappa, nu));
  r["rho_simplified"] = number(rho_simplified(nu, config.measure));
  r["pop_agents"] = number(pop_agents(params, config.measure, config.formulas));
  r["pop_agents_paper"] =
      number(pop_agents(params, config.measure, FormulaSet::kPaper));
  r["pop_agents_consistent"] =
      number(pop_agents(params, config.measure, FormulaSet::kConsistent));
  r["n_obs"] = n_obs;
  r["pop_aggregator"] =
      number(pop_aggregator(params, config.measure, config.formulas, n_obs));
  r["formula_note"] =
      "nu_paper is not the stationary point of the stated objective unless "
      "c_n = 1 under precision; nu_consistent is";
  return r;
}

void add_estimate(Json& r, const std::string& name, const Estimate& e) {
  r[name + "_mean"] = number(e.mean);
  r[name + "_se"] = number(e.standard_error);
}

Json sweep_row(const ExperimentConfig& config) {
  const GameParams params = config.game();
  const double kappa = equilibrium_kappa(params);
  const double nu_paper =
      optimal_noise_variance(params, config.measure, FormulaSet::kPaper);
  const double nu_consistent =
      optimal_noise_variance(params, config.measure, FormulaSet::kConsistent);
  const double nu =
      config.formulas == FormulaSet::kPaper ? nu_paper : nu_consistent;
  const std::int64_t n_obs = config.aggregator_sample();
  Json r;
  r["alpha"] = number(config.alpha);
  r["beta"] = number(config.beta);
  r["n"] = population_value(config);
  r["sigma2_x"] = number(config.sigma2_x);
  r["sigma2_y"] = number(config.sigma2_y);
  r["measure"] = std::string(to_string(config.measure));
  r["formulas"] = std::string(to_string(config.formulas));
  r["n_obs"] = n_obs;
  r["kappa"] = number(kappa);
  r["nu_paper"] = number(nu_paper);
  r["nu_consistent"] = number(nu_consistent);
  r["eu"] = number(expected_utility(params, kappa));
  r["pop_agents"] = number(pop_agents(params, config.measure, config.formulas));
  r["pop_aggregator"] =
      number(pop_aggregator(params, config.measure, config.formulas, n_obs));
  r["U_agg"] = number(aggregator_utility(params, kappa, nu, n_obs));
  return r;
}

std::int64_t integral(double v, const std::string& name) {
  if (v != std::floor(v) || !std::isfinite(v)) {
    throw std::invalid_argument("sweep values of '" + name +
                                "' must be integers");
  }
  return static_cast<std::int64_t>(v);
}

void apply_axis(ExperimentConfig& c, const std::string& name, double v) {
  if (name == "alpha") {
    c.alpha = v;
  } else if (name == "beta") {
    c.beta = v;
  } else if (name == "n") {
    c.n = parse_population(std::to_string(integral(v, name)));
  } else if (name == "sigma2_x") {
    c.sigma2_x = v;
  } else if (name == "sigma2_y") {
    c.sigma2_y = v;
  } else if (name == "n_obs") {
    c.n_obs = integral(v, name);
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + name + "'");
  }
}

}  // namespace

std::string_view artifact_version() { return KBC_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns = {
      "alpha",    "beta",          "n",     "sigma2_x",   "sigma2_y",
      "measure",  "formulas",      "n_obs", "kappa",      "nu_paper",
      "nu_consistent", "eu",       "pop_agents", "pop_aggregator", "U_agg"};
  return columns;
}

std::string cmd_solve(const ExperimentConfig& config) {
  config.validate();
  return render_single("solve", config, solve_result(config));
}

std::string cmd_simulate(const ExperimentConfig& config, int threads) {
  config.validate();
  const std::uint64_t seed = require_seed(config, "simulate");
  const GameParams params = config.game();
  const StrategyProfile profile = configured_profile(config, params, false);
  SimulationOptions options;
  options.measure = config.measure;
  options.threads = threads;
  options.sample_size = config.sample_size;
  options.aggregator_sample = config.aggregator_sample();
  const MonteCarloReport report = run_monte_carlo(
      params, profile, config.s, config.replicates, seed, options);
  const double nu = profile.noise_variance();

  Json r;
  r["replicates"] = report.replicates;
  r["seed"] = report.seed;
  r["agents_per_replicate"] = report.agents_per_replicate;
  r["aggregator_sample"] = report.aggregator_sample;
  r["kappa"] = number(profile.kappa);
  r["nu"] = number(nu);
  r["noise"] = std::string(to_string(profile.noise->family()));
  r["penalty_coefficient"] = number(report.penalty_coefficient);
  r["rho"] = number(report.rho);
  add_estimate(r, "base_utility", report.base_utility);
  add_estimate(r, "clean_utility", report.clean_utility);
  add_estimate(r, "privacy_utility", report.privacy_utility);
  add_estimate(r, "separability_gap", report.separability_gap);
  add_estimate(r, "aggregator_sq_error", report.aggregator_sq_error);
  add_estimate(r, "mean_action", report.mean_action);
  r["base_utility_closed_form"] =
      number(expected_noisy_utility(params, profile.kappa, nu));
  r["aggregator_sq_error_closed_form"] = number(
      aggregator_utility(params, profile.kappa, nu, report.aggregator_sample));
  return render_single("simulate", config, r);
}

std::string cmd_deviate(const ExperimentConfig& config, int threads) {
  config.validate();
  const std::uint64_t seed = require_seed(config, "deviate");
  if (config.noise_family != NoiseFamily::kGaussian) {
    throw std::invalid_argument(
        "deviate certifies Gaussian-noise profiles; other noise families are "
        "tried as deviations");
  }
  const GameParams params = config.game();
  const StrategyProfile profile = configured_profile(config, params, true);
  CertificationOptions options;
  options.replicates = config.replicates;
  options.seed = seed;
  options.threads = threads;
  options.s = config.s;
  const CertificationReport report =
      certify_equilibrium(params, config.measure, profile, options);

  double worst_se = 0.0;
  double worst_gain = -std::numeric_limits<double>::infinity();
  for (const MonteCarloDeviation& d : report.monte_carlo) {
    if (d.gain.gain > worst_gain) {
      worst_gain = d.gain.gain;
      worst_se = d.gain.standard_error;
    }
  }
  Json r;
  r["kappa"] = number(profile.kappa);
  r["nu"] = number(profile.noise_variance());
  r["grid_points"] = report.grid_points;
  r["max_closed_form_gain"] = number(report.max_closed_form_gain);
  r["best_kappa"] = number(report.best_closed_form.kappa);
  r["best_nu"] = number(report.best_closed_form.noise.variance());
  r["best_mu"] = number(report.best_closed_form.noise_mean);
  r["closed_form_tolerance"] = number(options.closed_form_tolerance);
  r["mc_candidates"] = static_cast<std::int64_t>(report.monte_carlo.size());
  r["max_mc_gain"] = number(worst_gain);
  r["max_mc_gain_se"] = number(worst_se);
  r["max_mc_z"] = number(report.max_monte_carlo_z);
  r["se_threshold"] = number(options.standard_errors);
  r["closed_form_pass"] = report.closed_form_pass;
  r["monte_carlo_pass"] = report.monte_carlo_pass;
  r["status"] = report.pass() ? "PASS" : "FAIL";
  return render_single("deviate", config, r);
}

std::string cmd_pop(const ExperimentConfig& config, int threads) {
  config.validate();
  const GameParams params = config.game();
  const double kappa = equilibrium_kappa(params);
  const double nu =
      optimal_noise_variance(params, config.measure, config.formulas);
  const std::int64_t n_obs = config.aggregator_sample();
  Json r;
  r["kappa"] = number(kappa);
  r["nu"] = number(nu);
  r["expected_utility"] = number(expected_utility(params, kappa));
  r["expected_noisy_utility"] =
      number(expected_noisy_utility(params, kappa, nu));
  r["pop_agents"] = number(pop_agents(params, config.measure, config.formulas));
  r["pop_agents_paper"] =
      number(pop_agents(params, config.measure, FormulaSet::kPaper));
  r["pop_agents_consistent"] =
      number(pop_agents(params, config.measure, FormulaSet::kConsistent));
  r["n_obs"] = n_obs;
  r["aggregator_utility"] = number(aggregator_utility(params, kappa, nu, n_obs));
  r["aggregator_utility_no_noise"] =
      number(aggregator_utility(params, kappa, 0.0, n_obs));
  r["pop_aggregator"] =
      number(pop_aggregator(params, config.measure, config.formulas, n_obs));
  if (config.seed) {
    const Estimate agents = pop_agents_monte_carlo(
        params, config.measure, config.formulas, config.s, config.replicates,
        derive_seed(*config.seed, 0), threads, config.sample_size);
    const Estimate agg = pop_aggregator_monte_carlo(
        params, config.measure, config.formulas, n_obs, config.s,
        config.replicates, derive_seed(*config.seed, 1), threads);
    r["pop_agents_mc"] = number(agents.mean);
    r["pop_agents_mc_se"] = number(agents.standard_error);
    r["pop_aggregator_mc"] = number(agg.mean);
    r["pop_aggregator_mc_se"] = number(agg.standard_error);
  }
  return render_single("pop", config, r);
}

std::string cmd_sweep(const ExperimentConfig& config, int threads) {
  config.validate();
  std::vector<ExperimentConfig> points = {config};
  for (const SweepAxis& axis : config.sweep) {
    std::vector<ExperimentConfig> next;
    for (const ExperimentConfig& p : points) {
      for (double v : axis.values) {
        ExperimentConfig q = p;
        apply_axis(q, axis.name, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (ExperimentConfig& p : points) {
    p.sweep.clear();
    p.validate();
  }

  std::vector<Json> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < points.size();
         i = next.fetch_add(1)) {
      rows[i] = sweep_row(points[i]);
    }
  };
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  return render("sweep", config, sweep_columns(), rows, false);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Privacy-aware Keynesian beauty contest laboratory", "kbc"};
  app.require_subcommand(1, 1);

  std::string config_path, out_path, format, population, measure, formulas,
      noise;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::optional<double> alpha, beta, sigma2_x, sigma2_y, s, two_point_high,
      two_point_delta, kappa, nu;
  std::optional<std::int64_t> replicates, sample_size, n_obs;
  std::vector<std::string> sweep;

  app.add_option("--config", config_path,
                 "JSON config, or a previous JSON/CSV output to re-run");
  app.add_option("--seed", seed, "Root seed for stochastic commands");
  app.add_option("--threads", threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Write output here instead of stdout");
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--alpha", alpha);
  app.add_option("--beta", beta);
  app.add_option("--n", population, "Integer >= 2 or 'continuum'");
  app.add_option("--sigma2-x", sigma2_x);
  app.add_option("--sigma2-y", sigma2_y);
  app.add_option("--measure", measure, "precision or entropy");
  app.add_option("--formulas", formulas, "consistent or paper");
  app.add_option("--s", s, "True state");
  app.add_option("--replicates", replicates);
  app.add_option("--noise", noise, "gaussian, uniform or two_point");
  app.add_option("--two-point-high", two_point_high);
  app.add_option("--two-point-delta", two_point_delta);
  app.add_option("--kappa", kappa, "Override the equilibrium weight");
  app.add_option("--nu", nu, "Override the equilibrium noise variance");
  app.add_option("--sample-size", sample_size,
                 "Agents per replicate in a continuum");
  app.add_option("--n-obs", n_obs, "Agents the aggregator observes");
  app.add_option("--sweep", sweep, "Sweep axis name=v1,v2,... (repeatable)");

  const char* names[] = {"solve", "simulate", "deviate", "pop", "sweep"};
  for (const char* name : names) app.add_subcommand(name)->fallthrough();

  std::vector<std::string> argv_store = {"kbc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "kbc: " << e.what() << "\n";
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::string document;
  try {
    ExperimentConfig c =
        config_path.empty() ? ExperimentConfig{} : load_config_file(config_path);
    if (seed) c.seed = seed;
    if (alpha) c.alpha = *alpha;
    if (beta) c.beta = *beta;
    if (!population.empty()) c.n = parse_population(population);
    if (sigma2_x) c.sigma2_x = *sigma2_x;
    if (sigma2_y) c.sigma2_y = *sigma2_y;
    if (!measure.empty()) c.measure = parse_measure(measure);
    if (!formulas.empty()) c.formulas = parse_formula_set(formulas);
    if (s) c.s = *s;
    if (replicates) c.replicates = *replicates;
    if (!noise.empty()) c.noise_family = parse_noise_family(noise);
    if (two_point_high) c.two_point_high = *two_point_high;
    if (two_point_delta) c.two_point_delta = *two_point_delta;
    if (kappa) c.kappa = kappa;
    if (nu) c.nu = nu;
    if (sample_size) c.sample_size = *sample_size;
    if (n_obs) c.n_obs = n_obs;
    if (!sweep.empty()) {
      c.sweep.clear();
      for (const std::string& axis : sweep) {
        c.sweep.push_back(parse_sweep_axis(axis));
      }
    }
    if (!format.empty()) {
      c.format = format == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
    } else if (config_path.empty() && command == "sweep") {
      c.format = OutputFormat::kCsv;
    }
    c.validate();

    if (command == "solve") {
      document = cmd_solve(c);
    } else if (command == "simulate") {
      document = cmd_simulate(c, threads);
    } else if (command == "deviate") {
      document = cmd_deviate(c, threads);
    } else if (command == "pop") {
      document = cmd_pop(c, threads);
    } else {
      document = cmd_sweep(c, threads);
    }
  } catch (const std::invalid_argument& e) {
    err << "kbc " << command << ": invalid configuration: " << e.what()
        << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "kbc " << command << ": " << e.what() << "\n";
    return 1;
  }

  if (out_path.empty()) {
    out << document;
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "kbc: cannot write '" << out_path << "'\n";
      return 1;
    }
    file << document;
  }
  return 0;
}

}  // namespace kbc::cli

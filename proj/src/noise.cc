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

#include "kbc/noise.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kbc/random.h"

namespace kbc {

std::string_view to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kGaussian:
      return "gaussian";
    case NoiseFamily::kUniform:
      return "uniform";
    case NoiseFamily::kTwoPoint:
      return "two_point";
  }
  return "unknown";
}

NoiseFamily parse_noise_family(std::string_view name) {
  if (name == "gaussian") return NoiseFamily::kGaussian;
  if (name == "uniform") return NoiseFamily::kUniform;
  if (name == "two_point") return NoiseFamily::kTwoPoint;
  throw std::invalid_argument("unknown noise family '" + std::string(name) +
                              "'");
}

namespace {

void check_variance(double nu) {
  if (!(std::isfinite(nu) && nu >= 0.0)) {
    throw std::invalid_argument("noise variance must be finite and >= 0");
  }
}

}  // namespace

NoiseSpec NoiseSpec::Gaussian(double nu) {
  check_variance(nu);
  return NoiseSpec(NoiseFamily::kGaussian, nu);
}

NoiseSpec NoiseSpec::Uniform(double nu) {
  check_variance(nu);
  return NoiseSpec(NoiseFamily::kUniform, nu);
}

NoiseSpec NoiseSpec::TwoPoint(double nu, double high, double delta) {
  check_variance(nu);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("two-point delta must lie in (0, 1)");
  }
  if (!std::isfinite(high)) {
    throw std::invalid_argument("two-point high value must be finite");
  }
  NoiseSpec spec(NoiseFamily::kTwoPoint, nu);
  spec.raw_high_ = high;
  spec.delta_ = delta;
  // Variance of a two-atom law is delta (1 - delta) (high - low)^2.
  const double gap = std::sqrt(nu / (delta * (1.0 - delta)));
  const double raw_low = high - gap;
  const double raw_mean = delta * high + (1.0 - delta) * raw_low;
  spec.high_atom_ = high - raw_mean;
  spec.low_atom_ = raw_low - raw_mean;
  return spec;
}

NoiseSpec NoiseSpec::Make(NoiseFamily family, double nu, double high,
                          double delta) {
  switch (family) {
    case NoiseFamily::kGaussian:
      return Gaussian(nu);
    case NoiseFamily::kUniform:
      return Uniform(nu);
    case NoiseFamily::kTwoPoint:
      return TwoPoint(nu, high, delta);
  }
  throw std::invalid_argument("unknown noise family");
}

NoiseSpec NoiseSpec::with_variance(double nu) const {
  return Make(family_, nu, raw_high_ == 0.0 ? 1.0 : raw_high_,
              delta_ == 0.0 ? 0.5 : delta_);
}

double NoiseSpec::half_width() const { return std::sqrt(3.0 * nu_); }

double NoiseSpec::density(double eta) const {
  if (is_degenerate() || !is_continuous()) {
    throw std::domain_error("density requires a continuous, non-degenerate "
                            "noise distribution");
  }
  if (family_ == NoiseFamily::kGaussian) {
    return std::exp(-0.5 * eta * eta / nu_) /
           std::sqrt(2.0 * std::numbers::pi * nu_);
  }
  const double a = half_width();
  return std::abs(eta) <= a ? 0.5 / a : 0.0;
}

double NoiseSpec::draw(Rng& rng) const {
  if (is_degenerate()) return 0.0;
  switch (family_) {
    case NoiseFamily::kGaussian:
      return std::sqrt(nu_) * rng.gaussian();
    case NoiseFamily::kUniform:
      return half_width() * (2.0 * rng.uniform() - 1.0);
    case NoiseFamily::kTwoPoint:
      return rng.uniform() < delta_ ? high_atom_ : low_atom_;
  }
  return 0.0;
}

NoiseEntropy entropy(const NoiseSpec& spec) {
  if (spec.is_degenerate()) {
    throw std::domain_error(
        "degenerate distribution has no differential entropy");
  }
  switch (spec.family()) {
    case NoiseFamily::kGaussian:
      return {0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e *
                             spec.variance()),
              false};
    case NoiseFamily::kUniform:
      return {std::log(2.0 * spec.half_width()), false};
    case NoiseFamily::kTwoPoint: {
      const double d = spec.delta();
      return {-d * std::log(d) - (1.0 - d) * std::log1p(-d), true};
    }
  }
  throw std::domain_error("unknown noise family");
}

std::vector<double> sample(const NoiseSpec& spec, std::uint64_t seed,
                           std::size_t count) {
  Rng rng(derive_seed(seed, 0));
  std::vector<double> out(count);
  for (double& v : out) v = spec.draw(rng);
  return out;
}

}  // namespace kbc

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

// Mean-zero noise-generating distributions for noisy strategies.

#ifndef KBC_NOISE_H_
#define KBC_NOISE_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace kbc {

class Rng;

enum class NoiseFamily { kGaussian, kUniform, kTwoPoint };

std::string_view to_string(NoiseFamily family);
// Accepts "gaussian", "uniform", "two_point". Throws std::invalid_argument.
NoiseFamily parse_noise_family(std::string_view name);

// A noise distribution with mean exactly 0 and variance nu (nu = 0 is the
// degenerate no-noise distribution).
//
// TwoPoint starts from a raw pair of atoms, `high` with probability `delta`
// and a low atom placed so the spread matches nu, then shifts both atoms by
// the raw mean. The result has mean 0 and variance nu, and after centering
// it no longer depends on `high`; the raw value is kept for reporting.
class NoiseSpec {
 public:
  static NoiseSpec None() { return Gaussian(0.0); }
  static NoiseSpec Gaussian(double nu);
  static NoiseSpec Uniform(double nu);
  static NoiseSpec TwoPoint(double nu, double high, double delta);
  static NoiseSpec Make(NoiseFamily family, double nu, double high = 1.0,
                        double delta = 0.5);

  NoiseFamily family() const { return family_; }
  double variance() const { return nu_; }
  double mean() const { return 0.0; }
  bool is_degenerate() const { return nu_ == 0.0; }
  bool is_continuous() const { return family_ != NoiseFamily::kTwoPoint; }

  // Uniform on [-a, a] with a = sqrt(3 nu).
  double half_width() const;

  // TwoPoint atoms after centering.
  double high_atom() const { return high_atom_; }
  double low_atom() const { return low_atom_; }
  double delta() const { return delta_; }
  double raw_high() const { return raw_high_; }

  // Density of a continuous, non-degenerate family.
  double density(double eta) const;

  double draw(Rng& rng) const;

  // Same family, new variance.
  NoiseSpec with_variance(double nu) const;

  bool operator==(const NoiseSpec&) const = default;

 private:
  NoiseSpec(NoiseFamily family, double nu) : family_(family), nu_(nu) {}

  NoiseFamily family_;
  double nu_;
  double raw_high_ = 0.0;
  double delta_ = 0.0;
  double high_atom_ = 0.0;
  double low_atom_ = 0.0;
};

struct NoiseEntropy {
  double nats;
  // True for TwoPoint: Shannon entropy of the atoms, not comparable with the
  // differential entropy of a continuous family.
  bool discrete;
};

// Gaussian: 0.5 ln(2 pi e nu). Uniform: ln(2a). TwoPoint: Shannon entropy of
// (delta, 1 - delta). Throws std::domain_error when nu == 0.
NoiseEntropy entropy(const NoiseSpec& spec);

// Reproducible stream of `count` draws.
std::vector<double> sample(const NoiseSpec& spec, std::uint64_t seed,
                           std::size_t count);

}  // namespace kbc

#endif  // KBC_NOISE_H_

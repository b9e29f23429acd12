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

// Seeded random streams. Every stochastic routine takes a root seed and
// derives independent sub-streams with a fixed splitting function, so the
// numbers a replicate sees never depend on how work is spread over threads.

#ifndef KBC_RANDOM_H_
#define KBC_RANDOM_H_

#include <cstdint>
#include <random>

namespace kbc {

// SplitMix64 finalizer applied to (root, stream). Deterministic everywhere.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// std::mt19937_64 has a fully specified output sequence; the transforms to
// uniform and Gaussian variates are done here rather than through
// std::*_distribution, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Standard normal (Box-Muller, second variate cached).
  double gaussian();
  double gaussian(double mean, double variance);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace kbc

#endif  // KBC_RANDOM_H_

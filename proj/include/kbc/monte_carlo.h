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

// Deterministic parallel Monte Carlo accumulation.
//
// Replicates are cut into fixed blocks of kBlockSize. Block b draws from
// Rng(derive_seed(seed, b)) no matter which worker runs it, and the per-block
// moments are merged in a fixed pairwise tree. The result is therefore
// bit-identical for any number of worker threads.

#ifndef KBC_MONTE_CARLO_H_
#define KBC_MONTE_CARLO_H_

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kbc/random.h"

namespace kbc {

inline constexpr std::int64_t kBlockSize = 1024;

// A Monte Carlo estimate of an expectation.
struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Running means and co-moments of K statistics (Chan et al. merge).
template <std::size_t K>
class Moments {
 public:
  void add(const std::array<double, K>& v) {
    ++count_;
    const double inv = 1.0 / static_cast<double>(count_);
    std::array<double, K> before;
    for (std::size_t i = 0; i < K; ++i) {
      before[i] = v[i] - mean_[i];
      mean_[i] += before[i] * inv;
    }
    for (std::size_t i = 0; i < K; ++i) {
      const double after = v[i] - mean_[i];
      for (std::size_t j = 0; j < K; ++j) comoment_[i][j] += after * before[j];
    }
  }

  void merge(const Moments& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    std::array<double, K> delta;
    for (std::size_t i = 0; i < K; ++i) delta[i] = other.mean_[i] - mean_[i];
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) {
        comoment_[i][j] +=
            other.comoment_[i][j] + delta[i] * delta[j] * na * nb / n;
      }
    }
    for (std::size_t i = 0; i < K; ++i) mean_[i] += delta[i] * nb / n;
    count_ += other.count_;
  }

  std::int64_t count() const { return count_; }
  double mean(std::size_t i) const { return mean_[i]; }
  double covariance(std::size_t i, std::size_t j) const {
    return count_ > 1 ? comoment_[i][j] / static_cast<double>(count_ - 1)
                      : 0.0;
  }

  Estimate estimate(std::size_t i) const {
    return {mean_[i], std::sqrt(covariance(i, i) / count_)};
  }

  // E[a] / E[b] with a delta-method standard error.
  Estimate ratio(std::size_t a, std::size_t b) const {
    const double r = mean_[a] / mean_[b];
    const double var = covariance(a, a) - 2.0 * r * covariance(a, b) +
                       r * r * covariance(b, b);
    return {r, std::sqrt(std::max(var, 0.0) / count_) / std::abs(mean_[b])};
  }

 private:
  std::int64_t count_ = 0;
  std::array<double, K> mean_{};
  std::array<std::array<double, K>, K> comoment_{};
};

namespace internal {

template <std::size_t K>
Moments<K> merge_range(std::vector<Moments<K>>& blocks, std::size_t lo,
                       std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  Moments<K> left = merge_range(blocks, lo, mid);
  left.merge(merge_range(blocks, mid, hi));
  return left;
}

}  // namespace internal

// Runs `replicate(rng, out)` `replicates` times and returns the merged
// moments of the K statistics it writes into `out`.
template <std::size_t K, typename ReplicateFn>
Moments<K> run_replicates(std::int64_t replicates, std::uint64_t seed,
                          int threads, ReplicateFn replicate) {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const std::int64_t block_count = (replicates + kBlockSize - 1) / kBlockSize;
  std::vector<Moments<K>> blocks(static_cast<std::size_t>(block_count));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    std::array<double, K> out;
    for (std::int64_t b = next.fetch_add(1); b < block_count;
         b = next.fetch_add(1)) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
      const std::int64_t end = std::min(replicates, (b + 1) * kBlockSize);
      Moments<K>& acc = blocks[static_cast<std::size_t>(b)];
      for (std::int64_t r = b * kBlockSize; r < end; ++r) {
        replicate(rng, out);
        acc.add(out);
      }
    }
  };
  const int workers = static_cast<int>(
      std::clamp<std::int64_t>(threads, 1, block_count));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  return internal::merge_range(blocks, 0, blocks.size());
}

}  // namespace kbc

#endif  // KBC_MONTE_CARLO_H_

// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDSIM_RNG_HPP
#define QDSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace qdsim {

/// SplitMix64 finalizer. Used to expand a master seed into per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for trial `index` of a campaign started from `master`.
///
/// derive_seed(m, i) = splitmix64(m + 0x9E3779B97F4A7C15 * (i + 1)), computed
/// in wrapping 64-bit arithmetic. Independent of platform and thread count.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// Seeded generator. The mapping from raw 64-bit words to doubles and bounded
/// integers is fixed here (std distributions are implementation-defined), so a
/// seed reproduces the same transcript on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Unbiased (rejection sampling).
    std::uint64_t below(std::uint64_t n);

    int bit() { return static_cast<int>(engine_() >> 63); }

    /// Fisher-Yates draw of `k` distinct indices from [0, n), returned sorted.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  private:
    std::mt19937_64 engine_;
};

}  // namespace qdsim

#endif  // QDSIM_RNG_HPP

// Copyright 2026 AQEC Contributors
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

#ifndef AQEC_RNG_HPP
#define AQEC_RNG_HPP

#include <cstdint>

namespace aqec::rng {

// Counter-based generator built on the SplitMix64 finalizer. Every draw is a
// pure function of (seed, counter), so simulations are reproducible across
// platforms and insensitive to evaluation order.

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

/// Derive a child seed from a parent seed and a word (stream id, trial
/// index, ...). Chain calls to build hierarchical seed trees.
inline uint64_t derive_seed(uint64_t seed, uint64_t word) {
    return mix64(seed + kGolden * (word + 1));
}

/// Uniform double in [0, 1) for the given (seed, counter) pair.
inline double uniform01(uint64_t seed, uint64_t counter) {
    return static_cast<double>(derive_seed(seed, counter) >> 11) * 0x1.0p-53;
}

/// Bernoulli draw with success probability p in [0, 1].
inline bool bernoulli(uint64_t seed, uint64_t counter, double p) {
    return uniform01(seed, counter) < p;
}

// Fixed stream tags used by the harness when deriving seeds from the master
// seed. Values are part of the reproducibility contract.
enum Stream : uint64_t {
    kStreamTrain = 1,
    kStreamTest = 2,
    kStreamOracle = 3,
    kStreamStage = 4,
};

}  // namespace aqec::rng

#endif

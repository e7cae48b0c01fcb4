// Copyright 2026 The qrb Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace qrb {

// Stream derivation (part of the output-format contract, see README):
//
//   mix64(z)       = splitmix64 finalizer
//   derive(s, k..) : h = mix64(s ^ G); for the i-th key (1-based)
//                    h = mix64(h ^ mix64(k_i + i * G))
//   stream draw n  = mix64(key + n * G), n = 1, 2, ...
//
// with G = 0x9e3779b97f4a7c15. Every random quantity in a run is drawn from
// a stream whose key is derive(master_seed, tag, ids...), so results do not
// depend on the order in which jobs are evaluated.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// Role tags for derive_seed. Values are frozen.
enum class StreamTag : std::uint64_t {
  kCgSequence = 1,
  kPrSequence = 2,
  kRecovery = 3,
  kAtom = 4,
  kPulseNoise = 5,
  kShots = 6,
  kBootstrap = 7,
};

/// derive(seed, {tag, ids...}).
std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> ids = {});

/// Counter-based generator: the n-th draw is a pure function of (key, n).
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

  /// [0, 1)
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes two draws.
  double normal();

  bool coin() { return ((*this)() >> 63) != 0; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qrb

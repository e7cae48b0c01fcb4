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

#include "qrb/random.hpp"

#include <cmath>
#include <numbers>

namespace qrb {

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed ^ kGolden);
  std::uint64_t i = 0;
  for (std::uint64_t k : keys) {
    ++i;
    h = mix64(h ^ mix64(k + i * kGolden));
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = mix64(seed ^ kGolden);
  h = mix64(h ^ mix64(static_cast<std::uint64_t>(tag) + kGolden));
  std::uint64_t i = 1;
  for (std::uint64_t k : ids) {
    ++i;
    h = mix64(h ^ mix64(k + i * kGolden));
  }
  return h;
}

double RandomStream::normal() {
  const double u1 = static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qrb

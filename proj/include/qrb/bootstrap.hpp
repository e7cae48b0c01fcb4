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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrb/analysis.hpp"

namespace qrb {

/// Per-sequence RB curves: fidelities[s][k] is sequence s at lengths[k].
struct SequenceCurves {
  std::vector<double> lengths;
  std::vector<std::vector<double>> fidelities;
};

/// Mean and standard error over the selected sequences at each length.
/// An empty selection uses every sequence once.
std::vector<DecayPoint> average_curves(const SequenceCurves& curves, std::span<const std::size_t> picks = {});

struct Interval {
  double estimate = 0.0;  ///< fit to the original data
  double lower = 0.0;
  double upper = 0.0;
  double std_dev = 0.0;   ///< spread of the resampled estimates
};

struct RbBootstrap {
  Interval d_if;
  Interval d;
  Interval e_g;
  int n_resamples = 0;
  int n_failed = 0;
  double level = 0.95;
};

/// Resamples whole sequences with replacement and refits. Resample r draws
/// from derive(seed, Bootstrap, {r}). Throws for n_resamples < 100.
RbBootstrap bootstrap_rb(const SequenceCurves& curves, int n_resamples, std::uint64_t seed, double level = 0.95,
                         int workers = 0);

struct SweepBootstrap {
  std::vector<std::string> names;
  std::vector<Interval> intervals;
  int n_resamples = 0;
  int n_failed = 0;
  double level = 0.95;
};

/// Resamples data points with replacement and refits.
SweepBootstrap bootstrap_sweep(std::span<const DataPoint> points, SweepModel model, Envelope envelope,
                               int n_resamples, std::uint64_t seed, double level = 0.95, int workers = 0);

}  // namespace qrb

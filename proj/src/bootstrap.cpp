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

#include "qrb/bootstrap.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "qrb/random.hpp"

namespace qrb {

namespace {

std::size_t draw_index(RandomStream& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
}

double quantile(std::vector<double> sorted, double q) {
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval summarize(double estimate, const std::vector<double>& samples, double level) {
  Interval out;
  out.estimate = estimate;
  if (samples.empty()) {
    out.lower = out.upper = out.std_dev = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double tail = 0.5 * (1.0 - level);
  out.lower = quantile(samples, tail);
  out.upper = quantile(samples, 1.0 - tail);
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  out.std_dev = samples.size() > 1 ? std::sqrt(ss / static_cast<double>(samples.size() - 1)) : 0.0;
  return out;
}

void check_arguments(int n_resamples, double level) {
  if (n_resamples < 100) throw std::invalid_argument("bootstrap: n_resamples must be >= 100");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap: level must be in (0, 1)");
}

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

}  // namespace

std::vector<DecayPoint> average_curves(const SequenceCurves& curves, std::span<const std::size_t> picks) {
  std::vector<std::size_t> all;
  if (picks.empty()) {
    for (std::size_t s = 0; s < curves.fidelities.size(); ++s) all.push_back(s);
    picks = all;
  }
  if (picks.empty()) throw std::invalid_argument("average_curves: no sequences");
  const double n = static_cast<double>(picks.size());
  std::vector<DecayPoint> out;
  for (std::size_t k = 0; k < curves.lengths.size(); ++k) {
    double sum = 0.0;
    for (std::size_t s : picks) sum += curves.fidelities.at(s).at(k);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t s : picks) ss += (curves.fidelities[s][k] - mean) * (curves.fidelities[s][k] - mean);
    const double sem = picks.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    out.push_back({curves.lengths[k], mean, sem});
  }
  return out;
}

RbBootstrap bootstrap_rb(const SequenceCurves& curves, int n_resamples, std::uint64_t seed, double level,
                         int workers) {
  check_arguments(n_resamples, level);
  const std::size_t n_seq = curves.fidelities.size();
  const DecayFit base = fit_rb_decay(average_curves(curves));

  std::vector<std::optional<DecayFit>> fits(static_cast<std::size_t>(n_resamples));
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
  for (int r = 0; r < n_resamples; ++r) {
    RandomStream rng(derive_seed(seed, StreamTag::kBootstrap, {static_cast<std::uint64_t>(r)}));
    std::vector<std::size_t> picks(n_seq);
    for (auto& p : picks) p = draw_index(rng, n_seq);
    try {
      fits[static_cast<std::size_t>(r)] = fit_rb_decay(average_curves(curves, picks));
    } catch (const std::exception&) {
    }
  }

  std::vector<double> d_if, d, e_g;
  RbBootstrap out;
  for (const auto& f : fits) {
    if (!f || !f->converged) {
      ++out.n_failed;
      continue;
    }
    d_if.push_back(f->d_if);
    d.push_back(f->d);
    e_g.push_back(f->e_g);
  }
  out.d_if = summarize(base.d_if, d_if, level);
  out.d = summarize(base.d, d, level);
  out.e_g = summarize(base.e_g, e_g, level);
  out.n_resamples = n_resamples;
  out.level = level;
  return out;
}

SweepBootstrap bootstrap_sweep(std::span<const DataPoint> points, SweepModel model, Envelope envelope,
                               int n_resamples, std::uint64_t seed, double level, int workers) {
  check_arguments(n_resamples, level);
  const SweepFit base = fit_sweep(points, model, envelope);
  const std::size_t n = points.size();

  std::vector<std::optional<SweepFit>> fits(static_cast<std::size_t>(n_resamples));
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
  for (int r = 0; r < n_resamples; ++r) {
    RandomStream rng(derive_seed(seed, StreamTag::kBootstrap, {static_cast<std::uint64_t>(r)}));
    std::vector<DataPoint> sample(n);
    for (auto& p : sample) p = points[draw_index(rng, n)];
    try {
      fits[static_cast<std::size_t>(r)] = fit_sweep(sample, model, envelope);
    } catch (const std::exception&) {
    }
  }

  SweepBootstrap out;
  out.names = base.names;
  std::vector<std::vector<double>> samples(base.names.size());
  for (const auto& f : fits) {
    if (!f || !f->ok()) {
      ++out.n_failed;
      continue;
    }
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].push_back(f->values[i]);
  }
  for (std::size_t i = 0; i < samples.size(); ++i) out.intervals.push_back(summarize(base.values[i], samples[i], level));
  out.n_resamples = n_resamples;
  out.level = level;
  return out;
}

}  // namespace qrb

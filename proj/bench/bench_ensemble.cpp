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

#include <benchmark/benchmark.h>

#include <vector>

#include "qrb/experiments.hpp"
#include "qrb/simulation.hpp"

namespace {

using namespace qrb;

struct Workload {
  std::vector<CompiledSchedule> schedules;
  std::vector<std::uint64_t> keys;
  std::vector<AtomInstance> atoms;
  SimulationSettings settings;

  Workload() {
    settings.noise.t2 = 0.28;
    settings.noise.static_detuning_sigma = 40.0;
    settings.noise.amplitude_noise_sigma = 1e-3;
    const RbSequenceSet set = build_sequence_set(4, 8, {1, 8, 55, 145}, 1);
    for (const RbJob& job : set.jobs()) {
      schedules.push_back(compile_job(set, job, settings.timing));
      keys.push_back(job_key(job.cg_id, job.pr_id, job.truncation));
    }
    atoms = sample_ensemble(settings.noise, 1, 32);
  }

  EnsembleInput input() const { return {schedules, keys, atoms}; }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_fidelities_serial(w.input(), w.settings));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.schedules.size() * w.atoms.size()));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const Workload& w = workload();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_fidelities(w.input(), w.settings, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.schedules.size() * w.atoms.size()));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

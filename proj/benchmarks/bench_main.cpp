// Copyright 2026 The reachcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the hot paths: matrix exponentials, controlled
// propagation, certification reports, synthesis and pulse gradients.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "reachcert/criteria.hpp"
#include "reachcert/dynamics.hpp"
#include "reachcert/linalg.hpp"
#include "reachcert/models.hpp"
#include "reachcert/search.hpp"
#include "reachcert/synth.hpp"

using namespace reachcert;

namespace {

SuperOpMatrix generator_of(const LindbladData& data) {
  return lindbladian(data, cached_basis(data.dim()));
}

ControlSequence make_controls(int d, double total_time, int n_segments,
                              double strength, std::uint64_t seed) {
  const std::vector<SuperOpMatrix> su = su_control_basis(cached_basis(d));
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  ControlSequence controls;
  const double h = total_time / n_segments;
  double used = 0.0;
  for (int s = 0; s < n_segments; ++s) {
    ControlSegment seg;
    seg.duration = (s + 1 == n_segments) ? total_time - used : h;
    used += seg.duration;
    seg.hamiltonian = su.front();
    seg.hamiltonian.mat.setZero();
    for (const auto& k : su) {
      seg.hamiltonian.mat += strength * normal(gen) * k.mat;
    }
    controls.push_back(std::move(seg));
  }
  return controls;
}

void BM_expm_qutrit(benchmark::State& state) {
  SuperOpMatrix g = generator_of(lambda_system(10.0, 1.0));
  RealMatrix a = g.mat * 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm(a));
  }
}
BENCHMARK(BM_expm_qutrit);

void BM_propagate_controlled(benchmark::State& state) {
  const double T = 1.0;
  GeneratorSpec spec = single_segment(generator_of(lambda_system(10.0, 1.0)), T);
  ControlSequence controls = make_controls(3, T, 5, 2.0, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(spec, &controls, T / 48.0));
  }
}
BENCHMARK(BM_propagate_controlled);

void BM_full_report_qubit(benchmark::State& state) {
  GeneratorSpec drift = single_segment(generator_of(gad(1.0, 0.75)), 1.0);
  MarkovianSample sample = random_markovian_channel(2, 2, 11);
  // Warm the bound cache so the loop measures the per-target cost.
  full_report(sample.channel, drift);
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_report(sample.channel, drift));
  }
}
BENCHMARK(BM_full_report_qubit);

void BM_synthesize_unital_qubit(benchmark::State& state) {
  SuperOpMatrix l0 = generator_of(dephasing(1.0));
  SuperOpMatrix target = generator_of(depolarizing(0.4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_unital_qubit(l0, target, 1.0));
  }
}
BENCHMARK(BM_synthesize_unital_qubit);

void BM_pulse_gradient(benchmark::State& state) {
  PulseProblem prob;
  prob.drift = single_segment(generator_of(gad(1.0, 0.8)), 0.8);
  prob.total_time = 0.8;
  prob.n_slices = static_cast<int>(state.range(0));
  prob.control_basis = su_control_basis(cached_basis(2));
  prob.target.d = 2;
  prob.target.kind = MapKind::channel;
  prob.target.mat = expm(RealMatrix(prob.drift.segments[0].generator.mat * 0.8));
  RealMatrix u = RealMatrix::Constant(prob.n_slices, 3, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pulse_gradient(prob, u));
  }
}
BENCHMARK(BM_pulse_gradient)->Arg(16)->Arg(64);

void BM_channel_distance_qutrit(benchmark::State& state) {
  MarkovianSample a = random_markovian_channel(3, 2, 3);
  MarkovianSample b = random_markovian_channel(3, 2, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(channel_distance(a.channel, b.channel));
  }
}
BENCHMARK(BM_channel_distance_qutrit);

}  // namespace

BENCHMARK_MAIN();

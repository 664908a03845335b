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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "reachcert/criteria.hpp"

namespace reachcert {

// Distance at which a pulse search counts as having reached the target.
inline constexpr double kPulseSuccessDistance = 1e-3;

// Piecewise-constant pulse optimization toward a target channel.
// Amplitudes live on a uniform grid of n_slices over [0, total_time]; the
// map per slice is exp((G + sum_c a_c B_c) h) with exact gradients through
// the exponential (block-augmented technique).
struct PulseProblem {
  GeneratorSpec drift;
  SuperOpMatrix target;
  double total_time = 0.0;
  int n_slices = 64;
  std::vector<SuperOpMatrix> control_basis;
  std::optional<double> amplitude_bound;
  // Extra starting point for the search, n_slices x n_controls (the layout
  // of PulseSolution::amplitudes, so one solve can seed a neighboring one).
  std::optional<RealMatrix> warm_start;
};

struct PulseSolution {
  RealMatrix amplitudes;           // n_slices x n_controls
  double achieved_distance = 0.0;  // channel_distance lower bound
  int iterations = 0;
  bool converged = false;
};

// Frobenius loss 0.5 * ||M(u) - T||_F^2 of a pulse table and its exact
// gradient (same n_slices x n_controls layout as PulseSolution::amplitudes).
double pulse_loss(const PulseProblem& problem, const RealMatrix& amplitudes);
RealMatrix pulse_gradient(const PulseProblem& problem,
                          const RealMatrix& amplitudes);

// Deterministic under fixed seed.  Runs `restarts` independent starts
// (first start is the zero pulse) of momentum gradient descent with a
// backtracking line search; accepted steps never increase the loss.
PulseSolution optimize(const PulseProblem& problem, std::uint64_t seed,
                       int max_iters = 300, int restarts = 4);

// Hamiltonian control generators spanning su(d): the commutator
// superoperators of the traceless basis elements.
std::vector<SuperOpMatrix> su_control_basis(const HermitianBasis& basis);

// Monte-Carlo reachability scan: random Markovian target channels against
// a fixed drift, each classified by the certification report, with the
// pulse search attempted on a capped subset of the non-excluded ones.
struct ExperimentOptions {
  int min_segments = 1;
  int max_segments = 3;
  int optimizer_cap = 50;      // at most this many pulse searches
  int n_slices = 64;
  int max_iters = 150;
  int restarts = 4;
  int jobs = 1;
  BoundOptions bound_options;
};

struct SampleRecord {
  std::uint64_t seed = 0;
  bool det_pass = false;
  bool anisotropy_pass = false;        // full-spectrum test
  bool unital_anisotropy_pass = false; // unital-block test
  std::vector<MomentCheck> moments;
  bool excluded = false;
  bool optimize_attempted = false;
  double optimized_distance = -1.0;  // negative when not attempted
};

struct EnsembleRecord {
  std::vector<SampleRecord> samples;

  double fraction_excluded() const;
  double fraction_failing_anisotropy() const;
  double fraction_failing_unital_anisotropy() const;
  double fraction_failing_nonunitality() const;
  double fraction_failing_det() const;
};

EnsembleRecord reachability_experiment(const GeneratorSpec& drift,
                                       int sample_count, std::uint64_t seed,
                                       const ExperimentOptions& options = {});

// CSV framing for ensemble records (RFC 4180, '\n' line ends, header
// mandatory).  Rows are byte-stable for a fixed seed.
std::string ensemble_csv_header(int d);
std::string ensemble_csv_row(const SampleRecord& r, int index);

}  // namespace reachcert

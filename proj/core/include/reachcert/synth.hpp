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

#include <array>

#include "reachcert/criteria.hpp"
#include "reachcert/errors.hpp"

namespace reachcert {

// Exact bang-bang synthesis for unital qubit targets.  Given unital,
// trace-preserving qubit generators l0 (drift) and l_prime (target family,
// symmetric dissipative block; drift Hamiltonians are cancellable by the
// controls and must be absent) and a time t > 0, produces a schedule of
// instantaneous rotations and free-evolution stretches whose product equals
// exp(l_prime~ t) on the unital block.
//
// Feasibility is the trace-normalized spectral majorization of the unital
// blocks; infeasible targets raise not_reachable_error.  The free times are
// the weights of a convex decomposition over the six axis permutations of
// the drift decay rates, found by enumerating basic feasible solutions of
// the 3x6 system (fewest active permutations preferred, duplicate columns
// from degenerate spectra collapsed onto their first representative).
struct SynthesisResult {
  ControlSchedule schedule;
  std::array<double, 6> weights{};  // per permutation, lexicographic order
  double residual = 0.0;            // distance of executed schedule from target
};

SynthesisResult synthesize_unital_qubit(const SuperOpMatrix& l0,
                                        const SuperOpMatrix& l_prime,
                                        double t);

// Distance (Choi trace-norm lower bound) between the executed schedule and
// exp(l_prime t).
double verify_schedule(const ControlSchedule& schedule,
                       const SuperOpMatrix& l0, const SuperOpMatrix& l_prime,
                       double t);

}  // namespace reachcert

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

#include <vector>

#include "reachcert/models.hpp"

namespace reachcert {

// Piecewise-constant control Hamiltonians in superoperator form
// (antisymmetric generators).  Total duration must match the drift spec.
struct ControlSegment {
  double duration = 0.0;
  SuperOpMatrix hamiltonian;
};

using ControlSequence = std::vector<ControlSegment>;

// Time-ordered propagator of drift plus optional controls.  Within each
// stretch where both are constant the step is a symmetric (Strang) split
//   exp(K h/2) exp(G h) exp(K h/2),  h <= dt_max,
// which is second-order accurate in h.  Without controls the segment
// exponentials are exact and dt_max is not used for subdivision.
SuperOpMatrix propagate(const GeneratorSpec& spec,
                        const ControlSequence* controls, double dt_max);

// A bang-bang schedule: instantaneous rotations (orthogonal channels fixing
// the trace coordinate, det +1 on the traceless block) alternating with
// free-evolution stretches under a drift supplied at execution time.
struct ScheduleStep {
  bool is_rotation = false;
  SuperOpMatrix rotation;  // valid when is_rotation
  double duration = 0.0;   // valid when !is_rotation
};

struct ControlSchedule {
  int d = 0;
  std::vector<ScheduleStep> steps;

  double total_free_time() const;
};

SuperOpMatrix execute_schedule(const SuperOpMatrix& drift,
                               const ControlSchedule& schedule);

// Choi operator of a channel, normalized so the identity channel maps to
// the (unnormalized) maximally entangled projector with trace d.
// Complete positivity is positivity of this matrix; trace preservation is
// partial trace over the output factor equal to the identity.
struct ChoiMatrix {
  int d = 0;
  ComplexMatrix mat;  // d^2 x d^2 Hermitian
};

ChoiMatrix choi(const SuperOpMatrix& s);

bool is_completely_positive(const ChoiMatrix& j, double tol = 1e-9);
bool is_trace_preserving(const ChoiMatrix& j, double tol = 1e-9);

// Distance between channels via the trace norm t of the Choi difference:
// lower = t/d and upper = t*d bracket the worst-case (diamond) distance.
struct DistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
};

DistanceBounds channel_distance(const SuperOpMatrix& a, const SuperOpMatrix& b);

}  // namespace reachcert

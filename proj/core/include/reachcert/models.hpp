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
#include <utility>
#include <vector>

#include "reachcert/bloch.hpp"

namespace reachcert {

// Master-equation data: Hamiltonian H plus jump operators L_i with
// nonnegative rates g_i, generating
//   drho/dt = -i[H, rho] + sum_i g_i (L_i rho L_i^+ - {L_i^+ L_i, rho}/2).
struct Jump {
  ComplexMatrix op;
  double rate = 0.0;
};

struct LindbladData {
  ComplexMatrix hamiltonian;
  std::vector<Jump> jumps;

  int dim() const { return static_cast<int>(hamiltonian.rows()); }
};

// Piecewise-constant generator in superoperator form.  Durations are
// strictly positive; for time-independent dynamics use a single segment.
struct Segment {
  double duration = 0.0;
  SuperOpMatrix generator;
};

struct GeneratorSpec {
  std::vector<Segment> segments;

  int dim() const { return segments.empty() ? 0 : segments.front().generator.d; }
  double total_time() const;
};

GeneratorSpec single_segment(const SuperOpMatrix& generator, double duration);

// Superoperator matrix of the master equation above.  Validates dimensions,
// Hermiticity of H and nonnegativity of the rates.
SuperOpMatrix lindbladian(const LindbladData& data, const HermitianBasis& basis);

// Generalized amplitude damping on a qubit, parametrized by total rate
// gamma = g_down + g_up and the purity p in [1/2, 1] of the steady state.
// p = 1/2 is the unital (infinite-temperature) point, p = 1 plain decay.
LindbladData gad(double gamma, double p);

// Pure dephasing (jump sz at rate gamma).  Unital block diag(-2g, -2g, 0).
LindbladData dephasing(double gamma);

// Isotropic depolarizing: jumps sx, sy, sz each at rate gamma.
LindbladData depolarizing(double gamma);

// Three-level system with two decay channels out of the highest level:
// jumps |0><2| at rate g1 and |1><2| at rate g2 (both positive).
LindbladData lambda_system(double g1, double g2);

// Random Lindbladian: Gaussian Hamiltonian plus one Gaussian complex jump
// operator, with the rate rescaled so the spectral radius of the Hermitian
// part of the dissipative superoperator equals `scale`.  A single jump
// keeps the dissipator anisotropic; sums over many random jumps average
// toward featureless isotropic noise.
LindbladData random_lindbladian(int d, double scale, std::uint64_t seed);

// A random time-dependent Markovian evolution: n_segments random
// Lindbladians with durations uniform in [0.1, 1].  Returns the spec and
// the resulting channel (ordered product of segment exponentials).
struct MarkovianSample {
  GeneratorSpec spec;
  SuperOpMatrix channel;
};

MarkovianSample random_markovian_channel(int d, int n_segments,
                                         std::uint64_t seed);

// Deterministic stream-splitting helper so ensembles can derive
// per-sample seeds independent of evaluation order.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace reachcert

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
#include <vector>

#include "reachcert/dynamics.hpp"

namespace reachcert {

namespace tol {
inline constexpr double majorization = 1e-8;
inline constexpr double nonunitality = 1e-6;
}  // namespace tol

// Multiset of real numbers compared by majorization.
struct RealSpectrum {
  std::vector<double> values;

  std::vector<double> sorted_desc() const;
  double sum() const;
};

// Divides by |sum|; throws when the sum is (numerically) zero.
RealSpectrum normalized(const RealSpectrum& s);

// Tests whether b majorizes a: with both sorted descending, every partial
// sum of b dominates that of a and the totals agree.  slacks[k] holds
// sum(b, 0..k) - sum(a, 0..k); the verdict requires slacks[k] >= -tol for
// k < n-1 and |slacks[n-1]| <= tol.
struct MajorizationResult {
  bool verdict = false;
  std::vector<double> slacks;
};

MajorizationResult majorizes(const RealSpectrum& b, const RealSpectrum& a,
                             double tolerance = tol::majorization);

// Decay rates of a generator: eigenvalues of (mat + mat^T)/2, descending.
RealSpectrum decay_rates(const SuperOpMatrix& g);

// Same restricted to the unital block.
RealSpectrum unital_decay_rates(const SuperOpMatrix& g);

// All T >= 0 at which the accumulated trace of the drift matches
// log det(target).  The last drift segment is treated as persisting beyond
// the declared total time.  Empty when det(target) <= 0 or no crossing
// exists.  For a single-segment drift with negative trace there is at most
// one solution.
std::vector<double> required_time(const SuperOpMatrix& target,
                                  const GeneratorSpec& drift);

// Spectral anisotropy test at evolution time T: the time integral of the
// drift decay rates (segmentwise sorted sums) must majorize the log
// singular values of the target.  `boundary` marks the degenerate case of
// a singular target together with a diverging drift integral.
// `det_time_consistent` checks T against the determinant relation; an
// inconsistent T still produces a verdict but the flag is cleared.
struct AnisotropyResult {
  bool verdict = false;
  bool evaluated = false;
  bool boundary = false;
  bool det_time_consistent = true;
  std::vector<double> slacks;
};

AnisotropyResult check_anisotropy(const SuperOpMatrix& target,
                                  const GeneratorSpec& drift, double T,
                                  double tolerance = tol::majorization);

// Anisotropy test on the unital blocks.
AnisotropyResult check_unital_anisotropy(const SuperOpMatrix& target,
                                         const GeneratorSpec& drift, double T,
                                         double tolerance = tol::majorization);

// Largest n-th moment Tr[rho^n] attainable at a stationary point of the
// moment flow: sup over states with Tr[rho^(n-1) G(rho)] = 0 for some
// segment generator G.  Solved by multi-start projected gradient ascent on
// a Cholesky-like state parametrization.  When the solver fails to
// converge the best value found is returned with converged = false, and
// downstream verdicts treat it permissively ("inconclusive", never
// "excluded").
struct BoundResult {
  double value = 0.0;
  bool converged = false;
};

struct BoundOptions {
  int starts = 32;
  int max_iters = 400;
  std::uint64_t seed = 12345;
};

BoundResult nonunitality_bound(const GeneratorSpec& drift, int n,
                               const BoundOptions& options = {});

// Exhaustive direction-grid oracle for d = 2 (n = 2): scans the Bloch ball,
// solving the stationarity constraint exactly along each ray.
double nonunitality_bound_grid(const GeneratorSpec& drift);

// Moments of the target's image of the maximally mixed state against the
// drift bounds, for n = 2..d.
struct MomentCheck {
  int n = 0;
  double moment = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool inconclusive = false;
};

std::vector<MomentCheck> check_nonunitality(
    const SuperOpMatrix& target, const GeneratorSpec& drift,
    const BoundOptions& options = {}, double tolerance = tol::nonunitality);

// Can the drift g0 mimic the time-local action of g_prime?  Tests
// majorization of the Hermitian-part spectra, either directly (exact_time)
// or after dividing each side by twice its trace (rescaled; requires both
// traces nonzero).  `unital` restricts to the unital blocks.
enum class SimulationMode { exact_time, rescaled };
enum class GeneratorBlock { full, unital };

MajorizationResult check_generator_simulation(
    const SuperOpMatrix& g_prime, const SuperOpMatrix& g0, SimulationMode mode,
    GeneratorBlock block = GeneratorBlock::full,
    double tolerance = tol::majorization);

// Lower bound on the instantaneous entropy production rate of a unital
// generator at state rho: half the smallest decay-rate magnitude times the
// squared Frobenius distance from the maximally mixed state.
double entropy_rate_bound(const SuperOpMatrix& l, const ComplexMatrix& rho);

// Aggregate reachability report: determinant/required-time gate, then both
// anisotropy tests and the non-unitality moments at the matched time.
struct DetTimeResult {
  std::vector<double> times;
  double det_target = 0.0;
  double det_predicted = 0.0;
  bool pass = false;
};

struct CriterionReport {
  DetTimeResult det_time;
  double evaluated_time = 0.0;
  AnisotropyResult anisotropy;
  AnisotropyResult unital_anisotropy;
  std::vector<MomentCheck> non_unitality;
  bool overall = false;
};

CriterionReport full_report(const SuperOpMatrix& target,
                            const GeneratorSpec& drift,
                            const BoundOptions& bound_options = {},
                            double tolerance = tol::majorization);

}  // namespace reachcert

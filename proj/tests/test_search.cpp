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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace reachcert;

namespace {

PulseProblem qubit_problem(double total_time, int n_slices) {
  PulseProblem prob;
  prob.drift = single_segment(testutil::generator_of(gad(1.0, 0.8)), total_time);
  prob.total_time = total_time;
  prob.n_slices = n_slices;
  prob.control_basis = su_control_basis(cached_basis(2));
  prob.target = testutil::channel_of(prob.drift.segments[0].generator, total_time);
  return prob;
}

// Product of slice exponentials for a given amplitude table, the contract
// behind pulse_loss; reimplemented here as an independent oracle.
RealMatrix slice_product(const PulseProblem& prob, const RealMatrix& u) {
  const double h = prob.total_time / prob.n_slices;
  RealMatrix m = RealMatrix::Identity(prob.target.mat.rows(),
                                      prob.target.mat.cols());
  for (int s = 0; s < prob.n_slices; ++s) {
    RealMatrix g = prob.drift.segments[0].generator.mat;
    for (std::size_t c = 0; c < prob.control_basis.size(); ++c) {
      g += u(s, static_cast<Eigen::Index>(c)) * prob.control_basis[c].mat;
    }
    m = expm(RealMatrix(g * h)) * m;
  }
  return m;
}

}  // namespace

TEST_CASE("su_control_basis: d^2-1 antisymmetric commutator generators") {
  for (int d : {2, 3}) {
    CAPTURE(d);
    std::vector<SuperOpMatrix> su = su_control_basis(cached_basis(d));
    REQUIRE(su.size() == static_cast<std::size_t>(d * d - 1));
    for (const SuperOpMatrix& k : su) {
      CHECK(k.kind == MapKind::generator);
      CHECK((k.mat + k.mat.transpose()).norm() < 1e-12);
      CHECK(k.mat.row(0).norm() < 1e-12);
      CHECK(k.mat.col(0).norm() < 1e-12);
      CHECK(k.mat.norm() > 1e-6);
    }
  }
}

TEST_CASE("pulse_loss: matches the slice-product oracle") {
  PulseProblem prob = qubit_problem(0.7, 5);
  std::mt19937_64 gen(606);
  std::normal_distribution<double> normal;
  RealMatrix u(5, 3);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 3; ++c) u(r, c) = normal(gen);
  }
  const double loss = pulse_loss(prob, u);
  const double oracle =
      0.5 * (slice_product(prob, u) - prob.target.mat).squaredNorm();
  CHECK(loss == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(pulse_loss(prob, RealMatrix::Zero(5, 3)) ==
        doctest::Approx(0.0).epsilon(1e-20));
  CHECK_THROWS_AS(pulse_loss(prob, RealMatrix::Zero(3, 5)),
                  std::invalid_argument);
}

TEST_CASE("pulse_gradient: central finite differences to relative 1e-5") {
  PulseProblem prob = qubit_problem(0.9, 4);
  // Make the target off the free path so the gradient is generic.
  std::mt19937_64 gen(707);
  std::normal_distribution<double> normal;
  RealMatrix ustar(4, 3);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) ustar(r, c) = 0.8 * normal(gen);
  }
  prob.target.mat = slice_product(prob, ustar);

  RealMatrix u(4, 3);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) u(r, c) = normal(gen);
  }
  RealMatrix grad = pulse_gradient(prob, u);
  REQUIRE(grad.rows() == 4);
  REQUIRE(grad.cols() == 3);
  RealMatrix fd(4, 3);
  const double delta = 1e-5;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) {
      RealMatrix up = u, dn = u;
      up(r, c) += delta;
      dn(r, c) -= delta;
      fd(r, c) = (pulse_loss(prob, up) - pulse_loss(prob, dn)) / (2.0 * delta);
    }
  }
  CHECK((grad - fd).norm() / fd.norm() < 1e-5);
  CHECK_THROWS_AS(pulse_gradient(prob, RealMatrix::Zero(3, 4)),
                  std::invalid_argument);
}

TEST_CASE("optimize: free-evolution target converges at the zero pulse") {
  PulseProblem prob = qubit_problem(0.8, 8);
  PulseSolution sol = optimize(prob, 1, 50, 1);
  CHECK(sol.converged);
  CHECK(sol.achieved_distance <= 1e-6);
  CHECK(sol.amplitudes.rows() == 8);
  CHECK(sol.amplitudes.cols() == 3);
  CHECK(sol.amplitudes.norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("optimize: recovers a pulse-reachable target") {
  PulseProblem prob = qubit_problem(0.8, 12);
  std::mt19937_64 gen(808);
  std::normal_distribution<double> normal;
  RealMatrix ustar(12, 3);
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 3; ++c) ustar(r, c) = 0.7 * normal(gen);
  }
  prob.target.mat = slice_product(prob, ustar);
  PulseSolution sol = optimize(prob, 99, 250, 3);
  CHECK(sol.converged);
  CHECK(sol.achieved_distance <= kPulseSuccessDistance);
}

TEST_CASE("optimize: warm start short-circuits the search") {
  PulseProblem prob = qubit_problem(0.8, 10);
  std::mt19937_64 gen(909);
  std::normal_distribution<double> normal;
  RealMatrix ustar(10, 3);
  for (int r = 0; r < 10; ++r) {
    for (int c = 0; c < 3; ++c) ustar(r, c) = 0.9 * normal(gen);
  }
  prob.target.mat = slice_product(prob, ustar);
  prob.warm_start = ustar;
  // Two starts: the zero pulse, then the warm start, which is exact.
  PulseSolution sol = optimize(prob, 3, 5, 2);
  CHECK(sol.converged);
  CHECK(sol.achieved_distance <= 1e-7);

  prob.warm_start = RealMatrix::Zero(3, 10);
  CHECK_THROWS_AS(optimize(prob, 3, 5, 2), std::invalid_argument);
}

TEST_CASE("optimize: amplitude bound is enforced") {
  PulseProblem prob = qubit_problem(0.6, 6);
  std::mt19937_64 gen(111);
  std::normal_distribution<double> normal;
  RealMatrix ustar(6, 3);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 3; ++c) ustar(r, c) = 2.0 * normal(gen);
  }
  prob.target.mat = slice_product(prob, ustar);
  prob.amplitude_bound = 0.4;
  PulseSolution sol = optimize(prob, 5, 60, 3);
  CHECK(sol.amplitudes.cwiseAbs().maxCoeff() <= 0.4 + 1e-12);
}

TEST_CASE("optimize: validation errors") {
  PulseProblem prob = qubit_problem(0.8, 8);
  PulseProblem bad = prob;
  bad.n_slices = 0;
  CHECK_THROWS_AS(optimize(bad, 1, 10, 1), std::invalid_argument);
  bad = prob;
  bad.total_time = 0.0;
  CHECK_THROWS_AS(optimize(bad, 1, 10, 1), std::invalid_argument);
  bad = prob;
  bad.control_basis.clear();
  CHECK_THROWS_AS(optimize(bad, 1, 10, 1), std::invalid_argument);
  bad = prob;
  bad.control_basis = su_control_basis(cached_basis(3));
  CHECK_THROWS_AS(optimize(bad, 1, 10, 1), std::invalid_argument);
}

TEST_CASE("optimize: deterministic under a fixed seed") {
  PulseProblem prob = qubit_problem(0.7, 8);
  std::mt19937_64 gen(222);
  std::normal_distribution<double> normal;
  RealMatrix ustar(8, 3);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 3; ++c) ustar(r, c) = 0.6 * normal(gen);
  }
  prob.target.mat = slice_product(prob, ustar);
  PulseSolution a = optimize(prob, 42, 40, 2);
  PulseSolution b = optimize(prob, 42, 40, 2);
  CHECK(a.achieved_distance == b.achieved_distance);
  CHECK(a.iterations == b.iterations);
  CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);
}

TEST_CASE("reachability_experiment: structure, budget and determinism") {
  GeneratorSpec drift =
      single_segment(testutil::generator_of(gad(1.0, 0.75)), 1.0);
  ExperimentOptions opts;
  opts.optimizer_cap = 3;
  opts.n_slices = 12;
  opts.max_iters = 25;
  opts.restarts = 2;
  const std::uint64_t seed = 4242;
  EnsembleRecord rec = reachability_experiment(drift, 30, seed, opts);
  REQUIRE(rec.samples.size() == 30);

  int attempted = 0;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const SampleRecord& s = rec.samples[i];
    CHECK(s.seed == split_seed(seed, static_cast<std::uint64_t>(i)));
    if (s.excluded) CHECK_FALSE(s.optimize_attempted);
    if (s.optimize_attempted) {
      ++attempted;
      CHECK(s.optimized_distance >= 0.0);
    } else {
      CHECK(s.optimized_distance < 0.0);
    }
    // Exclusion is the disjunction of the individual gates.
    bool moments_ok = true;
    for (const MomentCheck& m : s.moments) moments_ok = moments_ok && m.pass;
    const bool any_fail = !s.det_pass || !s.anisotropy_pass ||
                          !s.unital_anisotropy_pass || !moments_ok;
    CHECK(s.excluded == any_fail);
  }
  CHECK(attempted <= opts.optimizer_cap);

  for (double f :
       {rec.fraction_excluded(), rec.fraction_failing_det(),
        rec.fraction_failing_anisotropy(),
        rec.fraction_failing_unital_anisotropy(),
        rec.fraction_failing_nonunitality()}) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }

  EnsembleRecord rerun = reachability_experiment(drift, 30, seed, opts);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    CHECK(ensemble_csv_row(rec.samples[i], static_cast<int>(i)) ==
          ensemble_csv_row(rerun.samples[i], static_cast<int>(i)));
  }

  // The worker count must not change results or the attempted subset.
  ExperimentOptions par = opts;
  par.jobs = 2;
  EnsembleRecord parallel = reachability_experiment(drift, 30, seed, par);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    CHECK(ensemble_csv_row(rec.samples[i], static_cast<int>(i)) ==
          ensemble_csv_row(parallel.samples[i], static_cast<int>(i)));
  }
}

TEST_CASE("ensemble CSV: header and row fields line up") {
  const std::string header = ensemble_csv_header(2);
  CHECK(header.substr(0, 10) == "index,seed");
  GeneratorSpec drift =
      single_segment(testutil::generator_of(gad(1.0, 0.75)), 1.0);
  ExperimentOptions opts;
  opts.optimizer_cap = 0;
  EnsembleRecord rec = reachability_experiment(drift, 3, 17, opts);
  auto count_fields = [](const std::string& line) {
    return 1 + std::count(line.begin(), line.end(), ',');
  };
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    CHECK(count_fields(ensemble_csv_row(rec.samples[i], static_cast<int>(i))) ==
          count_fields(header));
  }
}

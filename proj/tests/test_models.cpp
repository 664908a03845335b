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
#include <complex>

#include "doctest.h"
#include "support.hpp"

using namespace reachcert;

namespace {

ComplexMatrix steady_state(const SuperOpMatrix& g, double horizon) {
  ComplexMatrix mixed =
      ComplexMatrix::Identity(g.d, g.d) / static_cast<double>(g.d);
  return testutil::apply_channel(testutil::channel_of(g, horizon), mixed);
}

}  // namespace

TEST_CASE("gad: steady-state purity equals p across the family") {
  for (double p : {0.5, 0.66, 0.75, 0.875, 1.0}) {
    CAPTURE(p);
    SuperOpMatrix g = testutil::generator_of(gad(1.3, p));
    ComplexMatrix rho = steady_state(g, 60.0);
    CHECK(testutil::purity_moment(rho, 2) == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("gad: p=1/2 is unital, p=1 relaxes to a pure state") {
  CHECK(unital_decompose(testutil::generator_of(gad(1.0, 0.5))).v.norm() <
        1e-13);
  ComplexMatrix rho = steady_state(testutil::generator_of(gad(1.0, 1.0)), 40.0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gad: purity outside [1/2, 1] is rejected") {
  CHECK_THROWS_AS(gad(1.0, 0.49), std::invalid_argument);
  CHECK_THROWS_AS(gad(1.0, 1.01), std::invalid_argument);
}

TEST_CASE("dephasing: unital block diag(-2g, -2g, 0), no translation") {
  UnitalDecomposition dec =
      unital_decompose(testutil::generator_of(dephasing(0.7)));
  RealMatrix want = RealMatrix::Zero(3, 3);
  want(0, 0) = -1.4;
  want(1, 1) = -1.4;
  CHECK((dec.tilde - want).norm() < 1e-12);
  CHECK(dec.v.norm() < 1e-13);
}

TEST_CASE("depolarizing: isotropic unital block diag(-4g, -4g, -4g)") {
  UnitalDecomposition dec =
      unital_decompose(testutil::generator_of(depolarizing(0.3)));
  CHECK((dec.tilde + 1.2 * RealMatrix::Identity(3, 3)).norm() < 1e-12);
  CHECK(dec.v.norm() < 1e-13);
}

TEST_CASE("amplitude damping: frozen decay rates, one positive") {
  // Sorting the symmetric part of the affine z-block [[0, g/2], [g/2, -g]]
  // gives g(-1 +- sqrt(2))/2; the transverse directions sit at -g/2.
  const double g = 0.8;
  SuperOpMatrix ad = testutil::generator_of(gad(g, 1.0));
  std::vector<double> rates = decay_rates(ad).sorted_desc();
  REQUIRE(rates.size() == 4);
  const double s2 = std::sqrt(2.0);
  CHECK(rates[0] == doctest::Approx(g * (s2 - 1.0) / 2.0).epsilon(1e-12));
  CHECK(rates[1] == doctest::Approx(-g / 2.0).epsilon(1e-12));
  CHECK(rates[2] == doctest::Approx(-g / 2.0).epsilon(1e-12));
  CHECK(rates[3] == doctest::Approx(-g * (s2 + 1.0) / 2.0).epsilon(1e-12));
  int positive = 0;
  for (double r : rates) {
    if (r > 0.0) ++positive;
  }
  CHECK(positive == 1);
  // The Bloch trace is -2g, so free evolution has det e^{-2gT}.
  CHECK(ad.mat.trace() == doctest::Approx(-2.0 * g).epsilon(1e-13));
}

TEST_CASE("lambda system: rate-swap symmetry of the decay spectrum") {
  std::vector<double> a =
      decay_rates(testutil::generator_of(lambda_system(2.0, 0.5))).sorted_desc();
  std::vector<double> b =
      decay_rates(testutil::generator_of(lambda_system(0.5, 2.0))).sorted_desc();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-11));
  }
}

TEST_CASE("lambda system: top-level occupation decays at g1+g2") {
  const double g1 = 2.2, g2 = 0.7;
  SuperOpMatrix g = testutil::generator_of(lambda_system(g1, g2));
  ComplexMatrix top = ComplexMatrix::Zero(3, 3);
  top(2, 2) = 1.0;
  for (double t : {0.3, 1.0, 2.5}) {
    ComplexMatrix rho = testutil::apply_channel(testutil::channel_of(g, t), top);
    CHECK(rho(2, 2).real() ==
          doctest::Approx(std::exp(-(g1 + g2) * t)).epsilon(1e-10));
  }
}

TEST_CASE("lambda system: asymptotic state from the maximally mixed input") {
  const double g1 = 2.2, g2 = 0.7;
  SuperOpMatrix g = testutil::generator_of(lambda_system(g1, g2));
  ComplexMatrix rho = steady_state(g, 80.0);
  const double s = g1 + g2;
  CHECK(rho(0, 0).real() ==
        doctest::Approx(1.0 / 3.0 + g1 / (3.0 * s)).epsilon(1e-10));
  CHECK(rho(1, 1).real() ==
        doctest::Approx(1.0 / 3.0 + g2 / (3.0 * s)).epsilon(1e-10));
  CHECK(std::abs(rho(2, 2).real()) < 1e-10);
}

TEST_CASE("lambda system: ground-subspace coherences never decay") {
  SuperOpMatrix g = testutil::generator_of(lambda_system(3.0, 1.0));
  ComplexMatrix psi = ComplexMatrix::Zero(3, 3);
  // Equal superposition of the two ground levels.
  psi(0, 0) = 0.5;
  psi(0, 1) = 0.5;
  psi(1, 0) = 0.5;
  psi(1, 1) = 0.5;
  ComplexMatrix rho = testutil::apply_channel(testutil::channel_of(g, 5.0), psi);
  CHECK((rho - psi).norm() < 1e-11);
}

TEST_CASE("lambda system: trace and validation") {
  const double g1 = 1.5, g2 = 0.25;
  CHECK(testutil::generator_of(lambda_system(g1, g2)).mat.trace() ==
        doctest::Approx(-3.0 * (g1 + g2)).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_system(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(lambda_system(1.0, -0.2), std::invalid_argument);
}

TEST_CASE("lindbladian: input validation") {
  const HermitianBasis& b = cached_basis(2);
  LindbladData data;
  data.hamiltonian = ComplexMatrix::Zero(2, 2);
  data.hamiltonian(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(lindbladian(data, b), std::invalid_argument);

  data.hamiltonian = ComplexMatrix::Zero(2, 2);
  Jump bad;
  bad.op = ComplexMatrix::Identity(2, 2);
  bad.rate = -0.5;
  data.jumps.push_back(bad);
  CHECK_THROWS_AS(lindbladian(data, b), std::invalid_argument);

  data.jumps.clear();
  bad.op = ComplexMatrix::Identity(3, 3);
  bad.rate = 0.5;
  data.jumps.push_back(bad);
  CHECK_THROWS_AS(lindbladian(data, b), std::invalid_argument);
}

TEST_CASE("random_lindbladian: deterministic, normalized, GKS-valid") {
  LindbladData a = random_lindbladian(3, 0.8, 42);
  LindbladData b = random_lindbladian(3, 0.8, 42);
  CHECK((a.hamiltonian - b.hamiltonian).norm() == 0.0);
  REQUIRE(a.jumps.size() == b.jumps.size());
  for (std::size_t i = 0; i < a.jumps.size(); ++i) {
    CHECK((a.jumps[i].op - b.jumps[i].op).norm() == 0.0);
    CHECK(a.jumps[i].rate == b.jumps[i].rate);
  }
  LindbladData c = random_lindbladian(3, 0.8, 43);
  CHECK((a.hamiltonian - c.hamiltonian).norm() > 1e-6);

  // Hamiltonian normalized to the requested scale; dissipator spectral
  // radius likewise (checked through the drift-only decay rates).
  CHECK(a.hamiltonian.norm() == doctest::Approx(0.8).epsilon(1e-10));
  LindbladData diss_only = a;
  diss_only.hamiltonian = ComplexMatrix::Zero(3, 3);
  std::vector<double> rates =
      decay_rates(testutil::generator_of(diss_only)).sorted_desc();
  double radius = 0.0;
  for (double r : rates) radius = std::max(radius, std::abs(r));
  CHECK(radius == doctest::Approx(0.8).epsilon(1e-9));

  // The semigroup it generates is a channel at any time.
  SuperOpMatrix g = testutil::generator_of(a);
  for (double t : {0.4, 1.7}) {
    ChoiMatrix j = choi(testutil::channel_of(g, t));
    CHECK(is_completely_positive(j));
    CHECK(is_trace_preserving(j));
  }
}

TEST_CASE("random_markovian_channel: reproducible product of segments") {
  MarkovianSample mk = random_markovian_channel(2, 3, 7);
  MarkovianSample mk2 = random_markovian_channel(2, 3, 7);
  CHECK((mk.channel.mat - mk2.channel.mat).norm() == 0.0);
  REQUIRE(mk.spec.segments.size() == 3);
  RealMatrix prod = RealMatrix::Identity(4, 4);
  for (const Segment& seg : mk.spec.segments) {
    CHECK(seg.duration >= 0.1);
    CHECK(seg.duration <= 1.0);
    prod = expm(RealMatrix(seg.generator.mat * seg.duration)) * prod;
  }
  CHECK((prod - mk.channel.mat).norm() < 1e-12);
  ChoiMatrix j = choi(mk.channel);
  CHECK(is_completely_positive(j));
  CHECK(is_trace_preserving(j));
}

TEST_CASE("split_seed: deterministic and index-sensitive") {
  CHECK(split_seed(123, 0) == split_seed(123, 0));
  CHECK(split_seed(123, 0) != split_seed(123, 1));
  CHECK(split_seed(123, 0) != split_seed(124, 0));
  CHECK(split_seed(123, 5) != 123);
}

TEST_CASE("GeneratorSpec: total time over segments") {
  SuperOpMatrix g = testutil::generator_of(dephasing(1.0));
  GeneratorSpec spec = single_segment(g, 0.75);
  CHECK(spec.total_time() == doctest::Approx(0.75));
  CHECK(spec.dim() == 2);
  Segment extra;
  extra.duration = 0.5;
  extra.generator = g;
  spec.segments.push_back(extra);
  CHECK(spec.total_time() == doctest::Approx(1.25));
}

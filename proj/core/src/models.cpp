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

#include "reachcert/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "reachcert/linalg.hpp"

namespace reachcert {

namespace {

using namespace std::complex_literals;

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, -1i, 1i, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix ketbra(int d, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

double GeneratorSpec::total_time() const {
  double t = 0.0;
  for (const auto& seg : segments) t += seg.duration;
  return t;
}

GeneratorSpec single_segment(const SuperOpMatrix& generator, double duration) {
  if (duration <= 0.0) {
    throw std::invalid_argument("single_segment: duration must be positive");
  }
  if (generator.kind != MapKind::generator) {
    throw std::invalid_argument("single_segment: expected a generator");
  }
  GeneratorSpec spec;
  spec.segments.push_back({duration, generator});
  return spec;
}

SuperOpMatrix lindbladian(const LindbladData& data, const HermitianBasis& basis) {
  const int d = basis.d;
  if (data.hamiltonian.rows() != d || data.hamiltonian.cols() != d) {
    throw std::invalid_argument("lindbladian: Hamiltonian dimension mismatch");
  }
  if ((data.hamiltonian - data.hamiltonian.adjoint()).cwiseAbs().maxCoeff() >
      tol::hermiticity) {
    throw std::invalid_argument("lindbladian: Hamiltonian is not Hermitian");
  }
  std::vector<ComplexMatrix> ldl;  // L^+ L per jump
  ldl.reserve(data.jumps.size());
  for (const auto& jump : data.jumps) {
    if (jump.op.rows() != d || jump.op.cols() != d) {
      throw std::invalid_argument("lindbladian: jump dimension mismatch");
    }
    if (jump.rate < 0.0) {
      throw std::invalid_argument("lindbladian: negative jump rate");
    }
    ldl.push_back(jump.op.adjoint() * jump.op);
  }

  auto action = [&](const ComplexMatrix& x) -> ComplexMatrix {
    ComplexMatrix out =
        -1i * (data.hamiltonian * x - x * data.hamiltonian);
    for (std::size_t k = 0; k < data.jumps.size(); ++k) {
      const auto& l = data.jumps[k].op;
      const double g = data.jumps[k].rate;
      out += g * (l * x * l.adjoint() - 0.5 * (ldl[k] * x + x * ldl[k]));
    }
    return out;
  };
  return superop_of_map(action, basis, MapKind::generator);
}

LindbladData gad(double gamma, double p) {
  if (gamma < 0.0) throw std::invalid_argument("gad: negative rate");
  if (p < 0.5 || p > 1.0) {
    throw std::invalid_argument("gad: steady-state purity must lie in [1/2, 1]");
  }
  // Steady state on the z axis at height z* with purity (1 + z*^2)/2.
  const double z_star = std::sqrt(2.0 * p - 1.0);
  LindbladData data;
  data.hamiltonian = ComplexMatrix::Zero(2, 2);
  data.jumps.push_back({ketbra(2, 0, 1), gamma * (1.0 + z_star) / 2.0});
  data.jumps.push_back({ketbra(2, 1, 0), gamma * (1.0 - z_star) / 2.0});
  return data;
}

LindbladData dephasing(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("dephasing: negative rate");
  LindbladData data;
  data.hamiltonian = ComplexMatrix::Zero(2, 2);
  data.jumps.push_back({pauli_z(), gamma});
  return data;
}

LindbladData depolarizing(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("depolarizing: negative rate");
  LindbladData data;
  data.hamiltonian = ComplexMatrix::Zero(2, 2);
  data.jumps.push_back({pauli_x(), gamma});
  data.jumps.push_back({pauli_y(), gamma});
  data.jumps.push_back({pauli_z(), gamma});
  return data;
}

LindbladData lambda_system(double g1, double g2) {
  if (g1 <= 0.0 || g2 <= 0.0) {
    throw std::invalid_argument("lambda_system: rates must be positive");
  }
  LindbladData data;
  data.hamiltonian = ComplexMatrix::Zero(3, 3);
  data.jumps.push_back({ketbra(3, 0, 2), g1});
  data.jumps.push_back({ketbra(3, 1, 2), g2});
  return data;
}

LindbladData random_lindbladian(int d, double scale, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("random_lindbladian: dimension < 2");
  if (scale <= 0.0) {
    throw std::invalid_argument("random_lindbladian: scale must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = gauss(rng) + 1i * gauss(rng);
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  h -= (h.trace() / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  double hnorm = h.norm();
  if (hnorm > 1e-14) h *= scale / hnorm;

  LindbladData data;
  data.hamiltonian = ComplexMatrix::Zero(d, d);
  // A single jump operator: one decay channel keeps the dissipator
  // anisotropic, while sums over many random jumps average toward
  // featureless isotropic noise.
  const int n_jumps = 1;
  const double amp = 1.0 / std::sqrt(2.0 * d);
  for (int k = 0; k < n_jumps; ++k) {
    ComplexMatrix l(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) l(i, j) = amp * (gauss(rng) + 1i * gauss(rng));
    data.jumps.push_back({l, 1.0});
  }

  // Rescale the dissipative rates so the Hermitian part of the dissipator
  // has spectral radius `scale`; the Hamiltonian only contributes to the
  // antisymmetric part and is normalized separately above.
  SuperOpMatrix dissipator = lindbladian(data, cached_basis(d));
  std::vector<double> spectrum = symmetric_part_spectrum(dissipator.mat);
  double radius = 0.0;
  for (double v : spectrum) radius = std::max(radius, std::abs(v));
  if (radius > 1e-14) {
    for (auto& jump : data.jumps) jump.rate = scale / radius;
  }
  data.hamiltonian = h;
  return data;
}

MarkovianSample random_markovian_channel(int d, int n_segments,
                                         std::uint64_t seed) {
  if (n_segments < 1) {
    throw std::invalid_argument("random_markovian_channel: need >= 1 segment");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> duration(0.1, 1.0);

  MarkovianSample sample;
  const HermitianBasis& basis = cached_basis(d);
  RealMatrix channel = RealMatrix::Identity(d * d, d * d);
  for (int k = 0; k < n_segments; ++k) {
    LindbladData data =
        random_lindbladian(d, 1.0, split_seed(seed, static_cast<std::uint64_t>(k) + 1));
    SuperOpMatrix g = lindbladian(data, basis);
    double tau = duration(rng);
    sample.spec.segments.push_back({tau, g});
    channel = expm(g.mat * tau) * channel;
  }
  sample.channel.d = d;
  sample.channel.kind = MapKind::channel;
  sample.channel.mat = channel;
  return sample;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined stream position.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace reachcert

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

// Shared helpers for the test binaries: deterministic random model
// factories, state utilities and a small harness for driving the CLI.

#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>

#include "reachcert/criteria.hpp"
#include "reachcert/dynamics.hpp"
#include "reachcert/json_io.hpp"
#include "reachcert/models.hpp"
#include "reachcert/search.hpp"
#include "reachcert/synth.hpp"

namespace testutil {

using namespace reachcert;

inline ComplexMatrix random_ginibre(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      a(r, c) = std::complex<double>(normal(gen), normal(gen));
    }
  }
  return a;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& gen, int d) {
  ComplexMatrix a = random_ginibre(gen, d);
  ComplexMatrix h = (a + a.adjoint().eval()) / 2.0;
  return h;
}

// Haar-ish unitary: QR of a Ginibre matrix with the phase ambiguity fixed.
inline ComplexMatrix random_unitary(std::mt19937_64& gen, int d) {
  ComplexMatrix a = random_ginibre(gen, d);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const std::complex<double> piv = r(j, j);
    if (std::abs(piv) > 0.0) q.col(j) *= piv / std::abs(piv);
  }
  return q;
}

// Full-rank density matrix; eigenvalues bounded away from 0 and 1 so
// entropy derivatives stay finite.
inline ComplexMatrix random_density(std::mt19937_64& gen, int d,
                                    double floor = 0.1) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd w(d);
  for (int i = 0; i < d; ++i) w(i) = floor + uni(gen);
  w /= w.sum();
  ComplexMatrix u = random_unitary(gen, d);
  return u * w.asDiagonal() * u.adjoint();
}

inline RealMatrix random_rotation(std::mt19937_64& gen, int n) {
  std::normal_distribution<double> normal;
  RealMatrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = normal(gen);
  }
  Eigen::HouseholderQR<RealMatrix> qr(a);
  RealMatrix q = qr.householderQ();
  RealMatrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

// Unital qubit master-equation data: Hermitian jumps along random Bloch
// axes (rotated Pauli noise).  Optional Hamiltonian part stays unital.
inline LindbladData random_unital_qubit(std::mt19937_64& gen, int n_jumps = 3,
                                        bool with_hamiltonian = false,
                                        double rate_scale = 1.0) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  sz << 1, 0, 0, -1;
  LindbladData data;
  data.hamiltonian = ComplexMatrix::Zero(2, 2);
  if (with_hamiltonian) {
    data.hamiltonian = rate_scale * random_hermitian(gen, 2);
  }
  for (int j = 0; j < n_jumps; ++j) {
    Eigen::Vector3d axis(normal(gen), normal(gen), normal(gen));
    axis.normalize();
    Jump jump;
    jump.op = axis(0) * sx + axis(1) * sy + axis(2) * sz;
    jump.rate = rate_scale * uni(gen);
    data.jumps.push_back(jump);
  }
  return data;
}

inline SuperOpMatrix generator_of(const LindbladData& data) {
  return lindbladian(data, cached_basis(data.dim()));
}

inline SuperOpMatrix channel_of(const SuperOpMatrix& g, double t) {
  SuperOpMatrix ch;
  ch.d = g.d;
  ch.kind = MapKind::channel;
  ch.mat = expm(RealMatrix(g.mat * t));
  return ch;
}

// Piecewise-constant random control Hamiltonians spanning [0, total_time].
inline ControlSequence random_controls(std::mt19937_64& gen, int d,
                                       double total_time, int n_segments,
                                       double strength) {
  const std::vector<SuperOpMatrix> su = su_control_basis(cached_basis(d));
  std::normal_distribution<double> normal;
  ControlSequence seq;
  const double h = total_time / n_segments;
  for (int s = 0; s < n_segments; ++s) {
    RealMatrix k = RealMatrix::Zero(d * d, d * d);
    for (const auto& b : su) k += strength * normal(gen) * b.mat;
    ControlSegment seg;
    // Durations sum to total_time exactly despite rounding.
    seg.duration = (s + 1 == n_segments) ? total_time - s * h : h;
    seg.hamiltonian = SuperOpMatrix{d, MapKind::generator, k};
    seq.push_back(seg);
  }
  return seq;
}

inline ComplexMatrix apply_channel(const SuperOpMatrix& m,
                                   const ComplexMatrix& rho) {
  return apply(m, rho, cached_basis(m.d));
}

inline double vn_entropy(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (w > 1e-14) s -= w * std::log(w);
  }
  return s;
}

inline double purity_moment(const ComplexMatrix& rho, int n) {
  ComplexMatrix p = rho;
  for (int k = 1; k < n; ++k) p = ComplexMatrix(p * rho);
  return p.trace().real();
}

// Feasible unital qubit target: spectrum of the drift's unital block mixed
// by a random convex combination of the six axis permutations, then
// conjugated by a random rotation.  Exactly the reachable family, so
// synthesis must succeed on it.
inline SuperOpMatrix mixed_permutation_target(std::mt19937_64& gen,
                                              const SuperOpMatrix& drift) {
  UnitalDecomposition dec = unital_decompose(drift);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(
      Eigen::Matrix3d(dec.tilde));
  Eigen::Vector3d lambda = es.eigenvalues();
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double w[6], wsum = 0.0;
  for (int k = 0; k < 6; ++k) {
    w[k] = uni(gen);
    wsum += w[k];
  }
  Eigen::Vector3d mixed = Eigen::Vector3d::Zero();
  for (int k = 0; k < 6; ++k) {
    for (int i = 0; i < 3; ++i) {
      mixed(i) += (w[k] / wsum) * lambda(perms[k][i]);
    }
  }
  RealMatrix r = random_rotation(gen, 3);
  RealMatrix tilde = r * mixed.asDiagonal() * r.transpose();
  return assemble(2, MapKind::generator, tilde, RealVector::Zero(3));
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("reachcert_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

#ifdef REACHCERT_CLI_PATH
// Runs the CLI with stdout/stderr captured into workdir; returns the exit
// code (-1 when the process did not exit normally).
inline int run_cli(const std::string& args,
                   const std::filesystem::path& workdir,
                   std::string* stdout_text = nullptr,
                   std::string* stderr_text = nullptr) {
  const std::filesystem::path out = workdir / "stdout.txt";
  const std::filesystem::path err = workdir / "stderr.txt";
  const std::string cmd = std::string(REACHCERT_CLI_PATH) + " " + args +
                          " > " + out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  if (stdout_text) *stdout_text = slurp(out);
  if (stderr_text) *stderr_text = slurp(err);
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
#endif

}  // namespace testutil

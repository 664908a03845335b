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

#include "reachcert/linalg.hpp"

#include <algorithm>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace reachcert {

RealMatrix expm(const RealMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("expm: matrix must be square");
  }
  if (!a.allFinite()) {
    throw std::runtime_error("expm: non-finite entries");
  }
  return a.exp();
}

std::vector<double> symmetric_part_spectrum(const RealMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("symmetric_part_spectrum: matrix must be square");
  }
  RealMatrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sym);
  RealVector ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

RealMatrix matrix_power(const RealMatrix& a, long n) {
  if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
  RealMatrix result = RealMatrix::Identity(a.rows(), a.cols());
  RealMatrix base = a;
  while (n > 0) {
    if (n & 1) result = base * result;
    base = base * base;
    n >>= 1;
  }
  return result;
}

}  // namespace reachcert

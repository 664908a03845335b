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

#include <Eigen/Dense>
#include <vector>

namespace reachcert {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Matrix exponential of a real square matrix (scaling-and-squaring with a
// Pade approximant, accurate to ~1e-13 in the spectral range used here).
RealMatrix expm(const RealMatrix& a);

// Eigenvalues of the symmetric part (a + a^T)/2, sorted descending.
std::vector<double> symmetric_part_spectrum(const RealMatrix& a);

// Integer matrix power by repeated squaring.
RealMatrix matrix_power(const RealMatrix& a, long n);

}  // namespace reachcert

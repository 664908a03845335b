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

#include <functional>
#include <vector>

#include "reachcert/linalg.hpp"

namespace reachcert {

// Orthonormal Hermitian operator basis for a d-level system under the
// Hilbert-Schmidt inner product: Tr[s_i s_j] = delta_ij.  Element 0 is
// 1/sqrt(d); the remaining d^2-1 elements are traceless (generalized
// Gell-Mann matrices ordered as symmetric, antisymmetric, diagonal).
// For d = 2 this is {1, sx, sy, sz}/sqrt(2) with sz last.
struct HermitianBasis {
  int d = 0;
  std::vector<ComplexMatrix> elements;
};

HermitianBasis make_basis(int d);

// Shared per-dimension basis cache.  Thread safe; returned reference lives
// for the program duration.
const HermitianBasis& cached_basis(int d);

// Real coordinate vector of a Hermitian operator: coords[i] = Tr[s_i a].
struct BlochVector {
  int d = 0;
  RealVector coords;
};

// A linear, Hermiticity-preserving map on operators, stored as the real
// d^2 x d^2 matrix of its action in a Hermitian basis.  `channel` marks a
// finite-time map, `generator` the derivative of a one-parameter family.
// Trace preservation shows up as first row (1, 0, ..., 0) for channels and
// an all-zero first row for generators.
enum class MapKind { channel, generator };

struct SuperOpMatrix {
  int d = 0;
  MapKind kind = MapKind::channel;
  RealMatrix mat;  // (d^2) x (d^2), row-major semantics in serialization
};

// Unital block ("tilde" part) and translation of a trace-preserving map:
// mat = [[c, 0], [v, tilde]] with c = 1 (channel) or 0 (generator).
// v == 0 exactly when the map is unital.
struct UnitalDecomposition {
  RealMatrix tilde;  // (d^2-1) x (d^2-1)
  RealVector v;      // d^2-1
};

BlochVector to_bloch(const ComplexMatrix& a, const HermitianBasis& basis);
ComplexMatrix from_bloch(const BlochVector& x, const HermitianBasis& basis);

// Builds the superoperator matrix of `action` by applying it to every basis
// element.  Throws if the action fails to preserve Hermiticity (complex
// residue above 1e-10 in any matrix entry).
SuperOpMatrix superop_of_map(
    const std::function<ComplexMatrix(const ComplexMatrix&)>& action,
    const HermitianBasis& basis, MapKind kind);

UnitalDecomposition unital_decompose(const SuperOpMatrix& s);

// Inverse of unital_decompose.
SuperOpMatrix assemble(int d, MapKind kind, const RealMatrix& tilde,
                       const RealVector& v);

// Adjoint with respect to the Hilbert-Schmidt inner product (transpose).
SuperOpMatrix dual(const SuperOpMatrix& s);

// Applies a superoperator to a Hermitian operator via its Bloch coordinates.
ComplexMatrix apply(const SuperOpMatrix& s, const ComplexMatrix& a,
                    const HermitianBasis& basis);

namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double first_row = 1e-9;
}  // namespace tol

}  // namespace reachcert

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

#include "reachcert/bloch.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace reachcert {

namespace {

using namespace std::complex_literals;

void require_square_dim(const ComplexMatrix& a, int d, const char* who) {
  if (a.rows() != d || a.cols() != d) {
    throw std::invalid_argument(std::string(who) + ": operator dimension mismatch");
  }
}

void require_hermitian(const ComplexMatrix& a, const char* who) {
  double residue = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (residue > tol::hermiticity) {
    throw std::invalid_argument(std::string(who) + ": operator is not Hermitian");
  }
}

// Tr[s a] for Hermitian s without forming the product.
std::complex<double> trace_with(const ComplexMatrix& s, const ComplexMatrix& a) {
  return (s.transpose().cwiseProduct(a)).sum();
}

}  // namespace

HermitianBasis make_basis(int d) {
  if (d < 2) {
    throw std::invalid_argument("make_basis: dimension must be at least 2");
  }
  HermitianBasis basis;
  basis.d = d;
  basis.elements.reserve(static_cast<std::size_t>(d) * d);

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  basis.elements.push_back(inv_sqrt_d * ComplexMatrix::Identity(d, d));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = inv_sqrt2;
      m(k, j) = inv_sqrt2;
      basis.elements.push_back(m);
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = -1i * inv_sqrt2;
      m(k, j) = 1i * inv_sqrt2;
      basis.elements.push_back(m);
    }
  }
  // Diagonal family last; for d = 2 this puts sz/sqrt(2) at index 3.
  for (int l = 1; l < d; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -static_cast<double>(l) * norm;
    basis.elements.push_back(m);
  }
  return basis;
}

const HermitianBasis& cached_basis(int d) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<HermitianBasis>> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(d);
  if (it == cache.end()) {
    it = cache.emplace(d, std::make_unique<HermitianBasis>(make_basis(d))).first;
  }
  return *it->second;
}

BlochVector to_bloch(const ComplexMatrix& a, const HermitianBasis& basis) {
  require_square_dim(a, basis.d, "to_bloch");
  require_hermitian(a, "to_bloch");
  BlochVector x;
  x.d = basis.d;
  x.coords.resize(static_cast<int>(basis.elements.size()));
  for (std::size_t i = 0; i < basis.elements.size(); ++i) {
    x.coords[static_cast<int>(i)] = trace_with(basis.elements[i], a).real();
  }
  return x;
}

ComplexMatrix from_bloch(const BlochVector& x, const HermitianBasis& basis) {
  if (x.d != basis.d ||
      x.coords.size() != static_cast<int>(basis.elements.size())) {
    throw std::invalid_argument("from_bloch: coordinate dimension mismatch");
  }
  ComplexMatrix a = ComplexMatrix::Zero(basis.d, basis.d);
  for (std::size_t i = 0; i < basis.elements.size(); ++i) {
    a += x.coords[static_cast<int>(i)] * basis.elements[i];
  }
  return a;
}

SuperOpMatrix superop_of_map(
    const std::function<ComplexMatrix(const ComplexMatrix&)>& action,
    const HermitianBasis& basis, MapKind kind) {
  const int n = static_cast<int>(basis.elements.size());
  SuperOpMatrix s;
  s.d = basis.d;
  s.kind = kind;
  s.mat.resize(n, n);
  for (int j = 0; j < n; ++j) {
    ComplexMatrix image = action(basis.elements[static_cast<std::size_t>(j)]);
    require_square_dim(image, basis.d, "superop_of_map");
    for (int i = 0; i < n; ++i) {
      std::complex<double> z =
          trace_with(basis.elements[static_cast<std::size_t>(i)], image);
      if (std::abs(z.imag()) > tol::hermiticity) {
        throw std::invalid_argument(
            "superop_of_map: action does not preserve Hermiticity");
      }
      s.mat(i, j) = z.real();
    }
  }
  return s;
}

UnitalDecomposition unital_decompose(const SuperOpMatrix& s) {
  const int n = static_cast<int>(s.mat.rows());
  if (n != s.d * s.d || s.mat.cols() != n) {
    throw std::invalid_argument("unital_decompose: malformed superoperator");
  }
  const double head = s.kind == MapKind::channel ? 1.0 : 0.0;
  if (std::abs(s.mat(0, 0) - head) > tol::first_row ||
      (n > 1 && s.mat.row(0).tail(n - 1).cwiseAbs().maxCoeff() > tol::first_row)) {
    throw std::invalid_argument(
        "unital_decompose: first-row invariant violated (map is not "
        "trace-preserving)");
  }
  UnitalDecomposition out;
  out.tilde = s.mat.block(1, 1, n - 1, n - 1);
  out.v = s.mat.block(1, 0, n - 1, 1);
  return out;
}

SuperOpMatrix assemble(int d, MapKind kind, const RealMatrix& tilde,
                       const RealVector& v) {
  const int n = d * d;
  if (tilde.rows() != n - 1 || tilde.cols() != n - 1 || v.size() != n - 1) {
    throw std::invalid_argument("assemble: block dimension mismatch");
  }
  SuperOpMatrix s;
  s.d = d;
  s.kind = kind;
  s.mat = RealMatrix::Zero(n, n);
  s.mat(0, 0) = kind == MapKind::channel ? 1.0 : 0.0;
  s.mat.block(1, 1, n - 1, n - 1) = tilde;
  s.mat.block(1, 0, n - 1, 1) = v;
  return s;
}

SuperOpMatrix dual(const SuperOpMatrix& s) {
  SuperOpMatrix out = s;
  out.mat = s.mat.transpose();
  return out;
}

ComplexMatrix apply(const SuperOpMatrix& s, const ComplexMatrix& a,
                    const HermitianBasis& basis) {
  if (s.d != basis.d) {
    throw std::invalid_argument("apply: basis dimension mismatch");
  }
  BlochVector x = to_bloch(a, basis);
  BlochVector y;
  y.d = s.d;
  y.coords = s.mat * x.coords;
  return from_bloch(y, basis);
}

}  // namespace reachcert

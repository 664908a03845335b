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

#include "reachcert/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "reachcert/linalg.hpp"

namespace reachcert {

namespace {

constexpr double kGridTol = 1e-9;
constexpr double kRotationTol = 1e-10;
constexpr double kAntisymTol = 1e-8;

void validate_spec(const GeneratorSpec& spec, const char* who) {
  if (spec.segments.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty generator spec");
  }
  const int d = spec.segments.front().generator.d;
  for (const auto& seg : spec.segments) {
    if (seg.duration <= 0.0) {
      throw std::invalid_argument(std::string(who) +
                                  ": segment durations must be positive");
    }
    if (seg.generator.kind != MapKind::generator || seg.generator.d != d ||
        seg.generator.mat.rows() != d * d || seg.generator.mat.cols() != d * d) {
      throw std::invalid_argument(std::string(who) +
                                  ": malformed segment generator");
    }
    if (!seg.generator.mat.allFinite()) {
      throw std::runtime_error(std::string(who) +
                               ": non-finite generator entries");
    }
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

double ControlSchedule::total_free_time() const {
  double t = 0.0;
  for (const auto& step : steps)
    if (!step.is_rotation) t += step.duration;
  return t;
}

SuperOpMatrix propagate(const GeneratorSpec& spec,
                        const ControlSequence* controls, double dt_max) {
  validate_spec(spec, "propagate");
  if (dt_max <= 0.0) {
    throw std::invalid_argument("propagate: dt_max must be positive");
  }
  const int d = spec.dim();
  const int n = d * d;
  RealMatrix u = RealMatrix::Identity(n, n);

  if (controls == nullptr || controls->empty()) {
    for (const auto& seg : spec.segments) {
      u = expm(seg.generator.mat * seg.duration) * u;
    }
  } else {
    const double total = spec.total_time();
    double ctl_total = 0.0;
    for (const auto& c : *controls) {
      if (c.duration <= 0.0) {
        throw std::invalid_argument("propagate: control durations must be positive");
      }
      if (c.hamiltonian.kind != MapKind::generator || c.hamiltonian.d != d) {
        throw std::invalid_argument("propagate: malformed control generator");
      }
      if ((c.hamiltonian.mat + c.hamiltonian.mat.transpose())
              .cwiseAbs()
              .maxCoeff() > kAntisymTol) {
        throw std::invalid_argument(
            "propagate: control generators must be antisymmetric (Hamiltonian)");
      }
      ctl_total += c.duration;
    }
    if (std::abs(ctl_total - total) > kGridTol * std::max(1.0, total)) {
      throw std::invalid_argument(
          "propagate: control grid misaligned with drift spec");
    }

    // Merge both piecewise-constant grids, then Strang-split each piece.
    const double snap = 1e-12 * std::max(1.0, total);
    std::size_t i = 0, j = 0;
    double rem_i = spec.segments[0].duration;
    double rem_j = (*controls)[0].duration;
    while (i < spec.segments.size() && j < controls->size()) {
      const double tau = std::min(rem_i, rem_j);
      if (tau > snap) {
        const RealMatrix& g = spec.segments[i].generator.mat;
        const RealMatrix& k = (*controls)[j].hamiltonian.mat;
        const long steps = static_cast<long>(std::ceil(tau / dt_max - 1e-12));
        const double h = tau / static_cast<double>(steps);
        RealMatrix ek2 = expm(k * (0.5 * h));
        RealMatrix eg = expm(g * h);
        RealMatrix step = ek2 * eg * ek2;
        u = matrix_power(step, steps) * u;
      }
      rem_i -= tau;
      rem_j -= tau;
      if (rem_i <= snap) {
        ++i;
        if (i < spec.segments.size()) rem_i = spec.segments[i].duration;
      }
      if (rem_j <= snap) {
        ++j;
        if (j < controls->size()) rem_j = (*controls)[j].duration;
      }
    }
  }

  if (!u.allFinite()) {
    throw std::runtime_error("propagate: numeric overflow in propagator");
  }
  SuperOpMatrix out;
  out.d = d;
  out.kind = MapKind::channel;
  out.mat = u;
  return out;
}

SuperOpMatrix execute_schedule(const SuperOpMatrix& drift,
                               const ControlSchedule& schedule) {
  if (drift.kind != MapKind::generator) {
    throw std::invalid_argument("execute_schedule: drift must be a generator");
  }
  const int d = drift.d;
  const int n = d * d;
  if (schedule.d != 0 && schedule.d != d) {
    throw std::invalid_argument("execute_schedule: dimension mismatch");
  }
  RealMatrix u = RealMatrix::Identity(n, n);
  for (const auto& step : schedule.steps) {
    if (step.is_rotation) {
      const RealMatrix& r = step.rotation.mat;
      if (step.rotation.d != d || r.rows() != n || r.cols() != n) {
        throw std::invalid_argument("execute_schedule: malformed rotation");
      }
      const bool fixes_trace =
          std::abs(r(0, 0) - 1.0) <= kRotationTol &&
          r.row(0).tail(n - 1).cwiseAbs().maxCoeff() <= kRotationTol &&
          r.col(0).tail(n - 1).cwiseAbs().maxCoeff() <= kRotationTol;
      const bool orthogonal =
          (r.transpose() * r - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <=
          100 * kRotationTol;
      if (!fixes_trace || !orthogonal ||
          std::abs(r.determinant() - 1.0) > 1e-8) {
        throw std::invalid_argument(
            "execute_schedule: rotation is not a proper orthogonal channel");
      }
      u = r * u;
    } else {
      if (step.duration < 0.0) {
        throw std::invalid_argument("execute_schedule: negative free time");
      }
      if (step.duration > 0.0) {
        u = expm(drift.mat * step.duration) * u;
      }
    }
  }
  SuperOpMatrix out;
  out.d = d;
  out.kind = MapKind::channel;
  out.mat = u;
  return out;
}

ChoiMatrix choi(const SuperOpMatrix& s) {
  if (s.kind != MapKind::channel) {
    throw std::invalid_argument("choi: expects a channel");
  }
  const int d = s.d;
  const int n = d * d;
  if (s.mat.rows() != n || s.mat.cols() != n) {
    throw std::invalid_argument("choi: malformed superoperator");
  }
  const HermitianBasis& basis = cached_basis(d);
  ChoiMatrix j;
  j.d = d;
  j.mat = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const double w = s.mat(k, l);
      if (w == 0.0) continue;
      j.mat += w * kron(basis.elements[static_cast<std::size_t>(k)],
                        basis.elements[static_cast<std::size_t>(l)].transpose());
    }
  }
  return j;
}

bool is_completely_positive(const ChoiMatrix& j, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(j.mat);
  return solver.eigenvalues().minCoeff() >= -tol;
}

bool is_trace_preserving(const ChoiMatrix& j, double tol) {
  const int d = j.d;
  ComplexMatrix partial = ComplexMatrix::Zero(d, d);
  for (int b = 0; b < d; ++b)
    for (int e = 0; e < d; ++e)
      for (int a = 0; a < d; ++a) partial(b, e) += j.mat(a * d + b, a * d + e);
  return (partial - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

DistanceBounds channel_distance(const SuperOpMatrix& a, const SuperOpMatrix& b) {
  if (a.d != b.d) {
    throw std::invalid_argument("channel_distance: dimension mismatch");
  }
  ChoiMatrix ja = choi(a);
  ChoiMatrix jb = choi(b);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(ja.mat - jb.mat);
  const double trace_norm = solver.eigenvalues().cwiseAbs().sum();
  DistanceBounds bounds;
  bounds.lower = trace_norm / a.d;
  bounds.upper = trace_norm * a.d;
  return bounds;
}

}  // namespace reachcert

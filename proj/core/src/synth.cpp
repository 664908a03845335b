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

#include "reachcert/synth.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "reachcert/criteria.hpp"
#include "reachcert/errors.hpp"
#include "reachcert/linalg.hpp"

namespace reachcert {

namespace {

constexpr std::array<std::array<int, 3>, 6> kPermutations = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

RealMatrix validate_unital_qubit(const SuperOpMatrix& l, const char* name) {
  if (l.kind != MapKind::generator || l.d != 2) {
    throw std::invalid_argument(std::string("synthesize_unital_qubit: ") + name +
                                " must be a qubit generator");
  }
  UnitalDecomposition dec = unital_decompose(l);
  if (dec.v.cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument(std::string("synthesize_unital_qubit: ") + name +
                                " must be unital");
  }
  if ((dec.tilde - dec.tilde.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument(std::string("synthesize_unital_qubit: ") + name +
                                " must have no Hamiltonian part");
  }
  return 0.5 * (dec.tilde + dec.tilde.transpose());
}

// Orthonormal eigenbasis with determinant +1.
void make_special(RealMatrix& basis) {
  if (basis.determinant() < 0.0) basis.col(0) *= -1.0;
}

SuperOpMatrix embed_rotation(const RealMatrix& r) {
  SuperOpMatrix op;
  op.d = 2;
  op.kind = MapKind::channel;
  op.mat = RealMatrix::Identity(4, 4);
  op.mat.block(1, 1, 3, 3) = r;
  return op;
}

// Signed permutation with unit determinant; conjugating a diagonal matrix by
// it permutes the diagonal and ignores the signs.
RealMatrix signed_permutation(const std::array<int, 3>& p) {
  RealMatrix m = RealMatrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) m(k, p[static_cast<std::size_t>(k)]) = 1.0;
  if (m.determinant() < 0.0) m.row(0) *= -1.0;
  return m;
}

}  // namespace

SynthesisResult synthesize_unital_qubit(const SuperOpMatrix& l0,
                                        const SuperOpMatrix& l_prime,
                                        double t) {
  RealMatrix s0 = validate_unital_qubit(l0, "drift");
  RealMatrix sp = validate_unital_qubit(l_prime, "target");
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("synthesize_unital_qubit: time must be positive");
  }

  // Feasibility precondition: time-rescaled decay rates of the target must be
  // majorized by those of the drift.  (Traceless drift or target degenerate
  // to the zero generator; feasibility then falls out of the linear solve.)
  std::vector<double> precondition_slacks;
  try {
    MajorizationResult pre = check_generator_simulation(
        l_prime, l0, SimulationMode::rescaled, GeneratorBlock::unital);
    precondition_slacks = pre.slacks;
    if (!pre.verdict) {
      throw not_reachable_error(
          "synthesize_unital_qubit: rescaled decay rates of the target are "
          "not majorized by the drift",
          pre.slacks);
    }
  } catch (const std::invalid_argument&) {
    // traceless edge case: handled by the exact solve below
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> es0(s0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> esp(sp);
  RealMatrix w = es0.eigenvectors();
  RealMatrix u = esp.eigenvectors();
  make_special(w);
  make_special(u);
  Eigen::Vector3d lambda0 = es0.eigenvalues();
  Eigen::Vector3d target_rhs = t * esp.eigenvalues();

  // Columns: the distinct permutations of the drift rates.
  std::vector<Eigen::Vector3d> columns;
  std::vector<int> column_perm;  // representative permutation index
  const double scale = std::max(1.0, lambda0.cwiseAbs().maxCoeff());
  for (int p = 0; p < 6; ++p) {
    Eigen::Vector3d c;
    for (int k = 0; k < 3; ++k) {
      c[k] = lambda0[kPermutations[static_cast<std::size_t>(p)]
                                  [static_cast<std::size_t>(k)]];
    }
    bool duplicate = false;
    for (const auto& existing : columns) {
      if ((existing - c).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      columns.push_back(c);
      column_perm.push_back(p);
    }
  }

  // Any consistent system with 3 equality constraints admits a solution
  // supported on at most 3 columns; search supports smallest-first.
  const int m = static_cast<int>(columns.size());
  const double rhs_scale =
      std::max(1.0, target_rhs.cwiseAbs().maxCoeff() + t * scale);
  std::vector<int> best_support;
  Eigen::VectorXd best_tau;
  bool found = false;
  std::vector<int> subset;
  auto try_subset = [&](const std::vector<int>& idx) {
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd a(3, k);
    for (int j = 0; j < k; ++j) a.col(j) = columns[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    Eigen::VectorXd tau =
        a.completeOrthogonalDecomposition().solve(target_rhs);
    if ((a * tau - target_rhs).cwiseAbs().maxCoeff() > 1e-9 * rhs_scale) {
      return false;
    }
    for (int j = 0; j < k; ++j) {
      if (tau[j] < -1e-9 * rhs_scale) return false;
    }
    best_support = idx;
    best_tau = tau.cwiseMax(0.0);
    return true;
  };
  std::function<bool(int, int)> enumerate = [&](int next, int remaining) {
    if (remaining == 0) return try_subset(subset);
    for (int j = next; j <= m - remaining; ++j) {
      subset.push_back(j);
      if (enumerate(j + 1, remaining - 1)) return true;
      subset.pop_back();
    }
    return false;
  };
  for (int size = 1; size <= std::min(3, m) && !found; ++size) {
    found = enumerate(0, size);
  }
  if (!found) {
    throw not_reachable_error(
        "synthesize_unital_qubit: no nonnegative dwell times reproduce the "
        "target rates",
        precondition_slacks);
  }

  SynthesisResult result;
  result.weights.fill(0.0);
  std::vector<RealMatrix> hats;
  std::vector<double> taus;
  for (std::size_t j = 0; j < best_support.size(); ++j) {
    const double tau = best_tau[static_cast<Eigen::Index>(j)];
    if (tau <= 0.0) continue;
    const int perm = column_perm[static_cast<std::size_t>(
        best_support[j])];
    result.weights[static_cast<std::size_t>(perm)] = tau;
    hats.push_back(signed_permutation(kPermutations[static_cast<std::size_t>(perm)]));
    taus.push_back(tau);
  }

  ControlSchedule schedule;
  schedule.d = 2;
  if (taus.empty()) {
    // Zero target over the window: no free evolution, identity rotation.
    schedule.steps.push_back(
        {true, embed_rotation(RealMatrix::Identity(3, 3)), 0.0});
  } else {
    const std::size_t count = taus.size();
    schedule.steps.push_back(
        {true, embed_rotation(w * hats[0].transpose() * u.transpose()), 0.0});
    for (std::size_t j = 0; j < count; ++j) {
      schedule.steps.push_back({false, SuperOpMatrix{}, taus[j]});
      if (j + 1 < count) {
        schedule.steps.push_back(
            {true,
             embed_rotation(w * hats[j + 1].transpose() * hats[j] *
                            w.transpose()),
             0.0});
      }
    }
    schedule.steps.push_back(
        {true, embed_rotation(u * hats[count - 1] * w.transpose()), 0.0});
  }

  result.schedule = schedule;
  result.residual = verify_schedule(schedule, l0, l_prime, t);
  return result;
}

double verify_schedule(const ControlSchedule& schedule, const SuperOpMatrix& l0,
                       const SuperOpMatrix& l_prime, double t) {
  if (l0.kind != MapKind::generator || l_prime.kind != MapKind::generator ||
      l0.d != l_prime.d) {
    throw std::invalid_argument("verify_schedule: generator mismatch");
  }
  SuperOpMatrix achieved = execute_schedule(l0, schedule);
  SuperOpMatrix wanted;
  wanted.d = l_prime.d;
  wanted.kind = MapKind::channel;
  wanted.mat = expm(RealMatrix(l_prime.mat * t));
  return channel_distance(achieved, wanted).lower;
}

}  // namespace reachcert

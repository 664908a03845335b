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

#include "reachcert/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

#include "reachcert/linalg.hpp"

namespace reachcert {

namespace {

// log of singular values below this floor is treated as divergent.
constexpr double kSigmaFloor = 1e-280;
constexpr double kLogClamp = -650.0;

void check_target(const SuperOpMatrix& target, int d, const char* who) {
  if (target.kind != MapKind::channel) {
    throw std::invalid_argument(std::string(who) + ": target must be a channel");
  }
  if (target.d != d || target.mat.rows() != d * d || target.mat.cols() != d * d) {
    throw std::invalid_argument(std::string(who) + ": target dimension mismatch");
  }
}

void check_spec(const GeneratorSpec& spec, const char* who) {
  if (spec.segments.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty generator spec");
  }
  const int d = spec.dim();
  for (const auto& seg : spec.segments) {
    if (seg.duration <= 0.0) {
      throw std::invalid_argument(std::string(who) +
                                  ": segment durations must be positive");
    }
    if (seg.generator.kind != MapKind::generator || seg.generator.d != d) {
      throw std::invalid_argument(std::string(who) +
                                  ": malformed segment generator");
    }
  }
}

std::vector<double> log_singular_values(const RealMatrix& m, bool* divergent) {
  Eigen::JacobiSVD<RealMatrix> svd(m);
  RealVector sigma = svd.singularValues();
  std::vector<double> out(static_cast<std::size_t>(sigma.size()));
  *divergent = false;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < kSigmaFloor) {
      *divergent = true;
      out[static_cast<std::size_t>(i)] = kLogClamp;
    } else {
      out[static_cast<std::size_t>(i)] = std::log(sigma[i]);
    }
  }
  return out;
}

// Elementwise-sorted time integral of the decay rates over [0, T]; the
// final segment persists beyond the declared total time.
std::vector<double> integrated_decay(const GeneratorSpec& spec, double T,
                                     bool unital_block) {
  const int d = spec.dim();
  const std::size_t size =
      unital_block ? static_cast<std::size_t>(d * d - 1)
                   : static_cast<std::size_t>(d * d);
  std::vector<double> acc(size, 0.0);
  auto add_segment = [&](const SuperOpMatrix& g, double weight) {
    std::vector<double> rates;
    if (unital_block) {
      rates = symmetric_part_spectrum(unital_decompose(g).tilde);
    } else {
      rates = symmetric_part_spectrum(g.mat);
    }
    for (std::size_t i = 0; i < size; ++i) acc[i] += weight * rates[i];
  };
  double cursor = 0.0;
  for (const auto& seg : spec.segments) {
    const double overlap =
        std::max(0.0, std::min(seg.duration, T - cursor));
    if (overlap > 0.0) add_segment(seg.generator, overlap);
    cursor += seg.duration;
  }
  if (T > cursor) add_segment(spec.segments.back().generator, T - cursor);
  return acc;
}

double integrated_trace(const GeneratorSpec& spec, double T) {
  double acc = 0.0;
  double cursor = 0.0;
  for (const auto& seg : spec.segments) {
    const double overlap = std::max(0.0, std::min(seg.duration, T - cursor));
    acc += overlap * seg.generator.mat.trace();
    cursor += seg.duration;
  }
  if (T > cursor) acc += (T - cursor) * spec.segments.back().generator.mat.trace();
  return acc;
}

AnisotropyResult anisotropy_impl(const SuperOpMatrix& target,
                                 const GeneratorSpec& drift, double T,
                                 double tolerance, bool unital_block,
                                 const char* who) {
  check_target(target, drift.dim(), who);
  check_spec(drift, who);
  if (T < 0.0 || !std::isfinite(T)) {
    throw std::invalid_argument(std::string(who) + ": invalid evolution time");
  }
  AnisotropyResult result;
  result.evaluated = true;

  bool divergent = false;
  std::vector<double> lhs;
  if (unital_block) {
    lhs = log_singular_values(unital_decompose(target).tilde, &divergent);
  } else {
    lhs = log_singular_values(target.mat, &divergent);
  }
  std::vector<double> rhs = integrated_decay(drift, T, unital_block);

  MajorizationResult maj =
      majorizes(RealSpectrum{rhs}, RealSpectrum{lhs}, tolerance);
  result.slacks = maj.slacks;
  // A singular target needs an infinite contraction budget; any finite
  // integral fails it outright (the drift integral is finite for finite T).
  result.verdict = divergent ? false : maj.verdict;
  result.boundary = false;

  const double lhs_sum = std::accumulate(lhs.begin(), lhs.end(), 0.0);
  const double rhs_sum = std::accumulate(rhs.begin(), rhs.end(), 0.0);
  result.det_time_consistent =
      !divergent &&
      std::abs(lhs_sum - rhs_sum) <= 1e-6 * std::max(1.0, std::abs(rhs_sum));
  return result;
}

// ---------------------------------------------------------------------------
// Non-unitality bound solver: maximize Tr[rho^n] subject to stationarity of
// the n-th moment, over rho = A A^+ / Tr[A A^+].

struct MomentProblem {
  int d = 0;
  int n = 2;
  RealMatrix g;  // Bloch matrix, Frobenius-normalized
  const HermitianBasis* basis = nullptr;

  ComplexMatrix apply_g(const ComplexMatrix& x, bool transpose) const {
    BlochVector bx = to_bloch(x, *basis);
    BlochVector by;
    by.d = d;
    by.coords = transpose ? RealVector(g.transpose() * bx.coords)
                          : RealVector(g * bx.coords);
    return from_bloch(by, *basis);
  }
};

struct MomentEval {
  double f = 0.0;
  double c = 0.0;
  ComplexMatrix grad_f;  // in A-space
  ComplexMatrix grad_c;
};

ComplexMatrix hermitize(const ComplexMatrix& x) { return 0.5 * (x + x.adjoint()); }

MomentEval evaluate(const MomentProblem& prob, const ComplexMatrix& a,
                    bool with_gradients) {
  const int d = prob.d;
  const int n = prob.n;
  ComplexMatrix m = a * a.adjoint();
  const double t = m.trace().real();
  ComplexMatrix rho = m / t;

  std::vector<ComplexMatrix> powers(static_cast<std::size_t>(n));
  powers[0] = ComplexMatrix::Identity(d, d);
  for (int k = 1; k < n; ++k) powers[static_cast<std::size_t>(k)] =
      powers[static_cast<std::size_t>(k - 1)] * rho;
  ComplexMatrix rho_nm1 = powers[static_cast<std::size_t>(n - 1)];

  ComplexMatrix g_rho = prob.apply_g(rho, false);

  MomentEval ev;
  ev.f = (rho_nm1 * rho).trace().real();
  ev.c = (rho_nm1 * g_rho).trace().real();
  if (!with_gradients) return ev;

  ComplexMatrix pf = static_cast<double>(n) * rho_nm1;
  ComplexMatrix c0 = ComplexMatrix::Zero(d, d);
  for (int j = 0; j <= n - 2; ++j) {
    c0 += powers[static_cast<std::size_t>(n - 2 - j)] * g_rho *
          powers[static_cast<std::size_t>(j)];
  }
  c0 += prob.apply_g(rho_nm1, true);
  ComplexMatrix pc = hermitize(c0);

  auto to_a_space = [&](const ComplexMatrix& p) -> ComplexMatrix {
    const double mean = (p * rho).trace().real();
    return ((p - mean * ComplexMatrix::Identity(d, d)) * a) / t;
  };
  ev.grad_f = to_a_space(pf);
  ev.grad_c = to_a_space(pc);
  return ev;
}

double inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum().real();
}

// Newton steps in A-space driving the constraint to zero.  Returns false
// when restoration stalls.
bool restore(const MomentProblem& prob, ComplexMatrix& a) {
  for (int it = 0; it < 80; ++it) {
    MomentEval ev = evaluate(prob, a, true);
    if (std::abs(ev.c) <= 1e-13) return true;
    const double gnorm2 = inner(ev.grad_c, ev.grad_c);
    if (gnorm2 < 1e-24) return false;
    a -= (ev.c / (2.0 * gnorm2)) * ev.grad_c;
    a /= a.norm();
  }
  MomentEval ev = evaluate(prob, a, false);
  return std::abs(ev.c) <= 1e-10;
}

struct StartOutcome {
  double value = -1.0;
  bool stationary = false;
  bool feasible = false;
};

StartOutcome run_start(const MomentProblem& prob, ComplexMatrix a,
                       int max_iters) {
  StartOutcome out;
  a /= a.norm();
  if (!restore(prob, a)) return out;

  double eta = 0.2;
  MomentEval ev = evaluate(prob, a, true);
  for (int iter = 0; iter < max_iters; ++iter) {
    const double cg2 = inner(ev.grad_c, ev.grad_c);
    ComplexMatrix dir = ev.grad_f;
    if (cg2 > 1e-24) dir -= (inner(ev.grad_f, ev.grad_c) / cg2) * ev.grad_c;
    const double dn = std::sqrt(inner(dir, dir));
    if (dn < 1e-11) {
      out.stationary = true;
      break;
    }
    bool accepted = false;
    while (eta > 1e-13) {
      ComplexMatrix trial = a + (eta / dn) * dir;
      trial /= trial.norm();
      if (restore(prob, trial)) {
        MomentEval trial_ev = evaluate(prob, trial, true);
        if (trial_ev.f > ev.f + 1e-15) {
          a = trial;
          ev = trial_ev;
          eta = std::min(eta * 1.3, 1.0);
          accepted = true;
          break;
        }
      }
      eta *= 0.5;
    }
    if (!accepted) {
      out.stationary = std::sqrt(inner(dir, dir)) < 1e-6 * (1.0 + std::abs(ev.f));
      break;
    }
  }
  out.value = ev.f;
  out.feasible = std::abs(ev.c) <= 1e-10;
  return out;
}

BoundResult solve_segment_bound(const SuperOpMatrix& g, int n,
                                const BoundOptions& options) {
  MomentProblem prob;
  prob.d = g.d;
  prob.n = n;
  prob.basis = &cached_basis(g.d);
  const double gnorm = g.mat.norm();
  prob.g = gnorm > 1e-300 ? RealMatrix(g.mat / gnorm) : g.mat;

  BoundResult best;
  best.value = 1.0 / g.d;  // the maximally mixed state is always stationary
  best.converged = false;

  bool any_stationary = false;
  for (int start = 0; start < options.starts; ++start) {
    ComplexMatrix a(g.d, g.d);
    if (start == 0) {
      a = ComplexMatrix::Identity(g.d, g.d);
    } else {
      std::mt19937_64 rng(split_seed(options.seed, static_cast<std::uint64_t>(
                                                       start * 977 + n)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int i = 0; i < g.d; ++i)
        for (int j = 0; j < g.d; ++j)
          a(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    }
    StartOutcome outcome = run_start(prob, a, options.max_iters);
    if (!outcome.feasible) continue;
    if (outcome.value > best.value) best.value = outcome.value;
    if (outcome.stationary && outcome.value >= best.value - 1e-9) {
      any_stationary = true;
    }
  }
  best.converged = any_stationary;
  return best;
}

// Bounds depend only on the drift and n; memoize across reports.
struct BoundKey {
  std::vector<double> entries;
  int n;
  int starts;
  std::uint64_t seed;

  bool operator<(const BoundKey& other) const {
    if (n != other.n) return n < other.n;
    if (starts != other.starts) return starts < other.starts;
    if (seed != other.seed) return seed < other.seed;
    return entries < other.entries;
  }
};

BoundResult cached_segment_bound(const SuperOpMatrix& g, int n,
                                 const BoundOptions& options) {
  static std::mutex mutex;
  static std::map<BoundKey, BoundResult> cache;
  BoundKey key;
  key.entries.assign(g.mat.data(), g.mat.data() + g.mat.size());
  key.n = n;
  key.starts = options.starts;
  key.seed = options.seed;
  {
    std::scoped_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  BoundResult result = solve_segment_bound(g, n, options);
  std::scoped_lock lock(mutex);
  cache.emplace(std::move(key), result);
  return result;
}

}  // namespace

std::vector<double> RealSpectrum::sorted_desc() const {
  std::vector<double> out = values;
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double RealSpectrum::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

RealSpectrum normalized(const RealSpectrum& s) {
  const double total = s.sum();
  double scale = 0.0;
  for (double v : s.values) scale = std::max(scale, std::abs(v));
  if (std::abs(total) <= 1e-12 * std::max(1.0, scale)) {
    throw std::invalid_argument("normalized: spectrum has (numerically) zero sum");
  }
  RealSpectrum out;
  out.values.reserve(s.values.size());
  for (double v : s.values) out.values.push_back(v / std::abs(total));
  return out;
}

MajorizationResult majorizes(const RealSpectrum& b, const RealSpectrum& a,
                             double tolerance) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("majorizes: spectra must have equal size");
  }
  if (a.values.empty()) {
    throw std::invalid_argument("majorizes: empty spectra");
  }
  std::vector<double> ad = a.sorted_desc();
  std::vector<double> bd = b.sorted_desc();
  MajorizationResult result;
  result.slacks.resize(ad.size());
  double pa = 0.0, pb = 0.0;
  result.verdict = true;
  for (std::size_t k = 0; k < ad.size(); ++k) {
    pa += ad[k];
    pb += bd[k];
    result.slacks[k] = pb - pa;
    if (k + 1 < ad.size()) {
      if (result.slacks[k] < -tolerance) result.verdict = false;
    } else {
      if (std::abs(result.slacks[k]) > tolerance) result.verdict = false;
    }
  }
  return result;
}

RealSpectrum decay_rates(const SuperOpMatrix& g) {
  return RealSpectrum{symmetric_part_spectrum(g.mat)};
}

RealSpectrum unital_decay_rates(const SuperOpMatrix& g) {
  return RealSpectrum{symmetric_part_spectrum(unital_decompose(g).tilde)};
}

std::vector<double> required_time(const SuperOpMatrix& target,
                                  const GeneratorSpec& drift) {
  check_spec(drift, "required_time");
  check_target(target, drift.dim(), "required_time");

  const double det = target.mat.determinant();
  if (!(det > 0.0)) return {};
  const double level = std::log(det);

  std::vector<double> times;
  auto push_unique = [&](double t) {
    for (double existing : times) {
      if (std::abs(existing - t) <= 1e-10 * (1.0 + std::abs(t))) return;
    }
    times.push_back(t);
  };

  const double flat_tol = 1e-12 * (1.0 + std::abs(level));
  double cursor = 0.0;
  double acc = 0.0;
  const std::size_t count = drift.segments.size();
  for (std::size_t k = 0; k <= count; ++k) {
    const bool extension = k == count;
    const SuperOpMatrix& g =
        extension ? drift.segments.back().generator : drift.segments[k].generator;
    const double slope = g.mat.trace();
    const double duration =
        extension ? std::numeric_limits<double>::infinity()
                  : drift.segments[k].duration;
    if (std::abs(slope) <= 1e-300) {
      if (std::abs(acc - level) <= flat_tol) push_unique(cursor);
    } else {
      const double dt = (level - acc) / slope;
      if (dt >= -1e-12 && dt <= duration * (1.0 + 1e-12)) {
        push_unique(cursor + std::clamp(dt, 0.0, duration));
      }
    }
    if (!extension) {
      acc += slope * duration;
      cursor += duration;
    }
  }
  std::sort(times.begin(), times.end());
  return times;
}

AnisotropyResult check_anisotropy(const SuperOpMatrix& target,
                                  const GeneratorSpec& drift, double T,
                                  double tolerance) {
  return anisotropy_impl(target, drift, T, tolerance, false, "check_anisotropy");
}

AnisotropyResult check_unital_anisotropy(const SuperOpMatrix& target,
                                         const GeneratorSpec& drift, double T,
                                         double tolerance) {
  return anisotropy_impl(target, drift, T, tolerance, true,
                         "check_unital_anisotropy");
}

BoundResult nonunitality_bound(const GeneratorSpec& drift, int n,
                               const BoundOptions& options) {
  check_spec(drift, "nonunitality_bound");
  const int d = drift.dim();
  if (n < 2 || n > d) {
    throw std::invalid_argument("nonunitality_bound: need 2 <= n <= d");
  }
  // The constraint is existential over segments: take the largest value.
  BoundResult best;
  best.value = -1.0;
  bool all_converged = true;
  for (const auto& seg : drift.segments) {
    BoundResult r = cached_segment_bound(seg.generator, n, options);
    if (r.value > best.value) best.value = r.value;
    all_converged = all_converged && r.converged;
  }
  best.converged = all_converged;
  return best;
}

double nonunitality_bound_grid(const GeneratorSpec& drift) {
  check_spec(drift, "nonunitality_bound_grid");
  if (drift.dim() != 2) {
    throw std::invalid_argument("nonunitality_bound_grid: qubit drifts only");
  }
  const double x0 = 1.0 / std::sqrt(2.0);
  const double rmax = x0;

  double best = 0.5;
  auto scan_segment = [&](const SuperOpMatrix& g) {
    UnitalDecomposition dec = unital_decompose(g);
    RealMatrix s = 0.5 * (dec.tilde + dec.tilde.transpose());
    RealVector v = dec.v;
    const double eps_q = 1e-13 * std::max(1.0, s.cwiseAbs().maxCoeff());
    const double eps_b = 1e-13 * std::max(1.0, v.cwiseAbs().maxCoeff());

    auto eval_direction = [&](double theta, double phi) {
      Eigen::Vector3d w(std::sin(theta) * std::cos(phi),
                        std::sin(theta) * std::sin(phi), std::cos(theta));
      const double q = w.dot(s * w);
      const double b = x0 * v.dot(w);
      double purity = 0.5;
      if (std::abs(q) <= eps_q) {
        if (std::abs(b) <= eps_b) purity = 0.5 + rmax * rmax;  // whole ray
      } else {
        const double r = -b / q;
        if (r > 0.0 && r <= rmax * (1.0 + 1e-12)) {
          const double rc = std::min(r, rmax);
          purity = 0.5 + rc * rc;
        }
      }
      return purity;
    };

    // Coarse scan (poles included exactly), then local refinement.
    const int n_theta = 181, n_phi = 360;
    double best_theta = 0.0, best_phi = 0.0, local = 0.5;
    for (int it = 0; it <= n_theta; ++it) {
      const double theta = M_PI * it / n_theta;
      for (int ip = 0; ip < n_phi; ++ip) {
        const double phi = 2.0 * M_PI * ip / n_phi;
        const double p = eval_direction(theta, phi);
        if (p > local) {
          local = p;
          best_theta = theta;
          best_phi = phi;
        }
      }
    }
    // Symmetry axes of the constraint quadric are candidate optima.
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d axis = es.eigenvectors().col(k);
      const double theta = std::acos(std::clamp(axis.z(), -1.0, 1.0));
      const double phi = std::atan2(axis.y(), axis.x());
      for (double sign : {1.0, -1.0}) {
        const double th = sign > 0 ? theta : M_PI - theta;
        const double ph = sign > 0 ? phi : phi + M_PI;
        const double p = eval_direction(th, ph);
        if (p > local) {
          local = p;
          best_theta = th;
          best_phi = ph;
        }
      }
    }
    double window = 2.0 * M_PI / n_phi;
    for (int round = 0; round < 8; ++round) {
      const int steps = 24;
      double next_theta = best_theta, next_phi = best_phi;
      for (int it = -steps; it <= steps; ++it) {
        for (int ip = -steps; ip <= steps; ++ip) {
          const double theta =
              std::clamp(best_theta + window * it / steps, 0.0, M_PI);
          const double phi = best_phi + window * ip / steps;
          const double p = eval_direction(theta, phi);
          if (p > local) {
            local = p;
            next_theta = theta;
            next_phi = phi;
          }
        }
      }
      best_theta = next_theta;
      best_phi = next_phi;
      window *= 0.15;
    }
    best = std::max(best, local);
  };
  for (const auto& seg : drift.segments) scan_segment(seg.generator);
  return best;
}

std::vector<MomentCheck> check_nonunitality(const SuperOpMatrix& target,
                                            const GeneratorSpec& drift,
                                            const BoundOptions& options,
                                            double tolerance) {
  check_spec(drift, "check_nonunitality");
  const int d = drift.dim();
  check_target(target, d, "check_nonunitality");

  // Image of the maximally mixed state under the target.
  const HermitianBasis& basis = cached_basis(d);
  BlochVector image;
  image.d = d;
  image.coords = target.mat.col(0) / std::sqrt(static_cast<double>(d));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(from_bloch(image, basis));
  RealVector lambda = es.eigenvalues();

  std::vector<MomentCheck> checks;
  for (int n = 2; n <= d; ++n) {
    MomentCheck check;
    check.n = n;
    check.moment = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      check.moment += std::pow(lambda[i], n);
    }
    BoundResult bound = nonunitality_bound(drift, n, options);
    check.bound = bound.value;
    check.pass = check.moment <= bound.value + tolerance;
    if (!check.pass && !bound.converged) {
      // The solver only certifies a lower estimate of the supremum; without
      // convergence an excess moment cannot justify exclusion.
      check.pass = true;
      check.inconclusive = true;
    }
    checks.push_back(check);
  }
  return checks;
}

MajorizationResult check_generator_simulation(const SuperOpMatrix& g_prime,
                                              const SuperOpMatrix& g0,
                                              SimulationMode mode,
                                              GeneratorBlock block,
                                              double tolerance) {
  if (g_prime.d != g0.d) {
    throw std::invalid_argument("check_generator_simulation: dimension mismatch");
  }
  RealSpectrum a, b;
  if (block == GeneratorBlock::unital) {
    a = unital_decay_rates(g_prime);
    b = unital_decay_rates(g0);
  } else {
    a = decay_rates(g_prime);
    b = decay_rates(g0);
  }
  // Hermitian-part eigenvalues sum to the trace, so the spectra above sum to
  // Tr[g] on each side.
  if (mode == SimulationMode::rescaled) {
    auto rescale = [&](RealSpectrum& s, const char* side) {
      const double trace = s.sum();
      double scale = 0.0;
      for (double v : s.values) scale = std::max(scale, std::abs(v));
      if (std::abs(trace) <= 1e-12 * std::max(1.0, scale)) {
        throw std::invalid_argument(
            std::string("check_generator_simulation: rescaled mode undefined "
                        "for traceless ") +
            side);
      }
      for (double& v : s.values) v /= 2.0 * trace;
    };
    rescale(a, "g_prime");
    rescale(b, "g0");
  }
  return majorizes(b, a, tolerance);
}

double entropy_rate_bound(const SuperOpMatrix& l, const ComplexMatrix& rho) {
  if (l.kind != MapKind::generator) {
    throw std::invalid_argument("entropy_rate_bound: expects a generator");
  }
  UnitalDecomposition dec = unital_decompose(l);
  if (dec.v.size() > 0 && dec.v.cwiseAbs().maxCoeff() > tol::first_row) {
    throw std::invalid_argument("entropy_rate_bound: generator must be unital");
  }
  const int d = l.d;
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("entropy_rate_bound: state dimension mismatch");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol::hermiticity) {
    throw std::invalid_argument("entropy_rate_bound: state is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho.trace().imag()) > 1e-8) {
    throw std::invalid_argument("entropy_rate_bound: state trace must be 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw std::invalid_argument("entropy_rate_bound: state is not positive");
  }

  std::vector<double> rates = symmetric_part_spectrum(dec.tilde);
  double lambda1 = std::numeric_limits<double>::infinity();
  for (double r : rates) lambda1 = std::min(lambda1, std::abs(r));

  ComplexMatrix centered =
      rho - ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return 0.5 * lambda1 * centered.squaredNorm();
}

CriterionReport full_report(const SuperOpMatrix& target,
                            const GeneratorSpec& drift,
                            const BoundOptions& bound_options,
                            double tolerance) {
  check_spec(drift, "full_report");
  check_target(target, drift.dim(), "full_report");

  CriterionReport report;
  report.det_time.times = required_time(target, drift);
  report.det_time.det_target = target.mat.determinant();
  report.det_time.pass = !report.det_time.times.empty();
  report.det_time.det_predicted = std::numeric_limits<double>::quiet_NaN();

  if (!report.det_time.pass) {
    report.overall = false;
    return report;
  }

  report.non_unitality =
      check_nonunitality(target, drift, bound_options, tol::nonunitality);
  bool moments_pass = true;
  for (const auto& check : report.non_unitality) {
    moments_pass = moments_pass && check.pass;
  }

  // Evaluate the spectral tests at each determinant-compatible time and keep
  // the most favorable one: reachability at any admissible time suffices.
  constexpr std::size_t kMaxCandidates = 8;
  bool chosen = false;
  for (std::size_t i = 0;
       i < report.det_time.times.size() && i < kMaxCandidates; ++i) {
    const double T = report.det_time.times[i];
    AnisotropyResult a5 = check_anisotropy(target, drift, T, tolerance);
    AnisotropyResult a6 = check_unital_anisotropy(target, drift, T, tolerance);
    const bool ok = a5.verdict && a6.verdict;
    if (!chosen || ok) {
      report.evaluated_time = T;
      report.anisotropy = a5;
      report.unital_anisotropy = a6;
      report.det_time.det_predicted = std::exp(integrated_trace(drift, T));
      chosen = true;
    }
    if (ok) break;
  }
  report.overall = report.det_time.pass && report.anisotropy.verdict &&
                   report.unital_anisotropy.verdict && moments_pass;
  return report;
}

}  // namespace reachcert

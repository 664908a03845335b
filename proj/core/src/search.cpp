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

#include "reachcert/search.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "reachcert/linalg.hpp"
#include "reachcert/parallel.hpp"

namespace reachcert {

namespace {

void validate_problem(const PulseProblem& problem) {
  if (problem.drift.segments.empty()) {
    throw std::invalid_argument("optimize: empty drift spec");
  }
  const int d = problem.drift.dim();
  if (problem.target.kind != MapKind::channel || problem.target.d != d) {
    throw std::invalid_argument("optimize: target must be a channel of matching dimension");
  }
  if (!(problem.total_time > 0.0) || !std::isfinite(problem.total_time)) {
    throw std::invalid_argument("optimize: total time must be positive");
  }
  if (problem.n_slices < 1) {
    throw std::invalid_argument("optimize: need at least one slice");
  }
  if (problem.control_basis.empty()) {
    throw std::invalid_argument("optimize: empty control basis");
  }
  for (const auto& k : problem.control_basis) {
    if (k.kind != MapKind::generator || k.d != d) {
      throw std::invalid_argument("optimize: malformed control generator");
    }
    if ((k.mat + k.mat.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
      throw std::invalid_argument("optimize: control generators must be antisymmetric");
    }
  }
  if (problem.amplitude_bound && !(*problem.amplitude_bound > 0.0)) {
    throw std::invalid_argument("optimize: amplitude bound must be positive");
  }
  if (problem.warm_start) {
    if (problem.warm_start->rows() != problem.n_slices ||
        problem.warm_start->cols() !=
            static_cast<Eigen::Index>(problem.control_basis.size()) ||
        !problem.warm_start->allFinite()) {
      throw std::invalid_argument(
          "optimize: warm start must be finite with shape n_slices x "
          "n_controls");
    }
  }
}

// Drift generator on each slice, sampled at the slice midpoint; the final
// declared segment persists beyond the spec's total duration.
std::vector<RealMatrix> slice_drifts(const GeneratorSpec& spec, double total_time,
                                     int n_slices) {
  std::vector<RealMatrix> out;
  out.reserve(static_cast<std::size_t>(n_slices));
  const double h = total_time / n_slices;
  for (int s = 0; s < n_slices; ++s) {
    const double mid = (s + 0.5) * h;
    double cursor = 0.0;
    const RealMatrix* chosen = &spec.segments.back().generator.mat;
    for (const auto& seg : spec.segments) {
      if (mid < cursor + seg.duration) {
        chosen = &seg.generator.mat;
        break;
      }
      cursor += seg.duration;
    }
    out.push_back(*chosen);
  }
  return out;
}

struct Propagation {
  std::vector<RealMatrix> props;  // per-slice propagators
  RealMatrix total;
  double loss = 0.0;  // 0.5 * ||M - T||_F^2
};

Propagation forward(const PulseProblem& problem,
                    const std::vector<RealMatrix>& drifts,
                    const RealMatrix& amplitudes) {
  const int n = problem.n_slices;
  const int nc = static_cast<int>(problem.control_basis.size());
  const double h = problem.total_time / n;
  const int dim = static_cast<int>(drifts.front().rows());
  Propagation run;
  run.props.reserve(static_cast<std::size_t>(n));
  run.total = RealMatrix::Identity(dim, dim);
  for (int s = 0; s < n; ++s) {
    RealMatrix g = drifts[static_cast<std::size_t>(s)];
    for (int c = 0; c < nc; ++c) {
      g += amplitudes(c, s) * problem.control_basis[static_cast<std::size_t>(c)].mat;
    }
    RealMatrix p = expm(RealMatrix(g * h));
    run.total = p * run.total;
    run.props.push_back(std::move(p));
  }
  if (run.total.allFinite()) {
    run.loss = 0.5 * (run.total - problem.target.mat).squaredNorm();
  } else {
    run.loss = std::numeric_limits<double>::infinity();
  }
  return run;
}

double channel_lower_distance(const PulseProblem& problem,
                              const RealMatrix& total) {
  SuperOpMatrix achieved;
  achieved.d = problem.target.d;
  achieved.kind = MapKind::channel;
  achieved.mat = total;
  return channel_distance(achieved, problem.target).lower;
}

// Exact gradient of the loss via the block-triangular exponential identity:
// the top-right block of exp([[Gh, Kh], [0, Gh]]) is the derivative of
// exp(Gh) along K.
RealMatrix gradient(const PulseProblem& problem,
                    const std::vector<RealMatrix>& drifts,
                    const RealMatrix& amplitudes, const Propagation& run) {
  const int n = problem.n_slices;
  const int nc = static_cast<int>(problem.control_basis.size());
  const double h = problem.total_time / n;
  const int dim = static_cast<int>(drifts.front().rows());

  std::vector<RealMatrix> prefix(static_cast<std::size_t>(n + 1));
  std::vector<RealMatrix> suffix(static_cast<std::size_t>(n + 1));
  prefix[0] = RealMatrix::Identity(dim, dim);
  suffix[static_cast<std::size_t>(n)] = RealMatrix::Identity(dim, dim);
  for (int s = 0; s < n; ++s) {
    prefix[static_cast<std::size_t>(s + 1)] =
        run.props[static_cast<std::size_t>(s)] * prefix[static_cast<std::size_t>(s)];
  }
  for (int s = n - 1; s >= 0; --s) {
    suffix[static_cast<std::size_t>(s)] =
        suffix[static_cast<std::size_t>(s + 1)] * run.props[static_cast<std::size_t>(s)];
  }

  RealMatrix error = run.total - problem.target.mat;
  RealMatrix grad(nc, n);
  RealMatrix block(2 * dim, 2 * dim);
  for (int s = 0; s < n; ++s) {
    RealMatrix g = drifts[static_cast<std::size_t>(s)];
    for (int c = 0; c < nc; ++c) {
      g += amplitudes(c, s) * problem.control_basis[static_cast<std::size_t>(c)].mat;
    }
    // W_s pairs the error with the derivative of slice s alone.
    RealMatrix w = suffix[static_cast<std::size_t>(s + 1)].transpose() * error *
                   prefix[static_cast<std::size_t>(s)].transpose();
    for (int c = 0; c < nc; ++c) {
      block.setZero();
      block.topLeftCorner(dim, dim) = g * h;
      block.bottomRightCorner(dim, dim) = g * h;
      block.topRightCorner(dim, dim) =
          problem.control_basis[static_cast<std::size_t>(c)].mat * h;
      RealMatrix big = expm(block);
      grad(c, s) = (w.cwiseProduct(big.topRightCorner(dim, dim))).sum();
    }
  }
  return grad;
}

void clamp_amplitudes(RealMatrix& u, const std::optional<double>& bound) {
  if (!bound) return;
  u = u.cwiseMax(-*bound).cwiseMin(*bound);
}

// Smallest angle at which e^{K phi} acts as the identity, from the
// eigenfrequencies of the antisymmetric generator K. Returns 0 when the
// frequencies never close (within 64 turns of the fastest one).
double closure_angle(const RealMatrix& k) {
  Eigen::EigenSolver<RealMatrix> es(k);
  double wmax = 0.0;
  std::vector<double> omega;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    const double w = std::abs(es.eigenvalues()[i].imag());
    if (w > 1e-9) {
      omega.push_back(w);
      wmax = std::max(wmax, w);
    }
  }
  if (omega.empty()) return 0.0;
  for (int m = 1; m <= 64; ++m) {
    bool closed = true;
    for (double w : omega) {
      const double turns = m * w / wmax;
      if (std::abs(turns - std::round(turns)) > 1e-7 * m) {
        closed = false;
        break;
      }
    }
    if (closed) return 2.0 * M_PI * m / wmax;
  }
  return 0.0;
}

// Best train of closed rotation bursts: each burst spins one control axis
// through a full closure angle (so the frame returns to identity), and the
// burst count sets the fraction of the window spent averaging the drift.
// Rate-mixing optima live near such trains, far from both the zero pulse
// and unit-scale random starts.
RealMatrix burst_dictionary_start(const PulseProblem& problem,
                                  const std::vector<RealMatrix>& drifts) {
  const int n = problem.n_slices;
  const int nc = static_cast<int>(problem.control_basis.size());
  const double h = problem.total_time / n;
  RealMatrix best = RealMatrix::Zero(nc, n);
  double best_loss = forward(problem, drifts, best).loss;
  for (int c = 0; c < nc; ++c) {
    const double phi = closure_angle(problem.control_basis[static_cast<std::size_t>(c)].mat);
    if (phi <= 0.0) continue;
    for (int m : {2, 3, 4, 6, 8}) {
      if (m > n) continue;
      const double theta = phi / m;
      if (theta > 4.8 || theta < 0.3) continue;
      std::vector<int> burst_counts;
      for (int b = 1; b <= n / m; b = (b < 6 ? b + 1 : 2 * b)) burst_counts.push_back(b);
      if (burst_counts.back() != n / m) burst_counts.push_back(n / m);  // full duty
      for (double sign : {1.0, -1.0}) {
        for (int bursts : burst_counts) {
          RealMatrix u = RealMatrix::Zero(nc, n);
          for (int j = 0; j < bursts; ++j) {
            const int start = static_cast<int>(std::floor(1.0 * j * n / bursts));
            for (int s = start; s < start + m && s < n; ++s) {
              u(c, s) = sign * theta / h;
            }
          }
          clamp_amplitudes(u, problem.amplitude_bound);
          const double loss = forward(problem, drifts, u).loss;
          if (loss < best_loss) {
            best_loss = loss;
            best = std::move(u);
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

std::vector<SuperOpMatrix> su_control_basis(const HermitianBasis& basis) {
  std::vector<SuperOpMatrix> out;
  const int d = basis.d;
  out.reserve(static_cast<std::size_t>(d * d - 1));
  for (int i = 1; i < d * d; ++i) {
    const ComplexMatrix& h = basis.elements[static_cast<std::size_t>(i)];
    auto action = [&h](const ComplexMatrix& x) -> ComplexMatrix {
      return std::complex<double>(0.0, -1.0) * (h * x - x * h);
    };
    out.push_back(superop_of_map(action, basis, MapKind::generator));
  }
  return out;
}

double pulse_loss(const PulseProblem& problem, const RealMatrix& amplitudes) {
  validate_problem(problem);
  if (amplitudes.rows() != problem.n_slices ||
      amplitudes.cols() != static_cast<Eigen::Index>(problem.control_basis.size())) {
    throw std::invalid_argument(
        "pulse_loss: amplitudes must be n_slices x n_controls");
  }
  std::vector<RealMatrix> drifts =
      slice_drifts(problem.drift, problem.total_time, problem.n_slices);
  return forward(problem, drifts, amplitudes.transpose()).loss;
}

RealMatrix pulse_gradient(const PulseProblem& problem,
                          const RealMatrix& amplitudes) {
  validate_problem(problem);
  if (amplitudes.rows() != problem.n_slices ||
      amplitudes.cols() != static_cast<Eigen::Index>(problem.control_basis.size())) {
    throw std::invalid_argument(
        "pulse_gradient: amplitudes must be n_slices x n_controls");
  }
  std::vector<RealMatrix> drifts =
      slice_drifts(problem.drift, problem.total_time, problem.n_slices);
  RealMatrix u = amplitudes.transpose();
  Propagation run = forward(problem, drifts, u);
  return gradient(problem, drifts, u, run).transpose();
}

PulseSolution optimize(const PulseProblem& problem, std::uint64_t seed,
                       int max_iters, int restarts) {
  validate_problem(problem);
  const int n = problem.n_slices;
  const int nc = static_cast<int>(problem.control_basis.size());
  std::vector<RealMatrix> drifts =
      slice_drifts(problem.drift, problem.total_time, n);

  const double h = problem.total_time / n;

  PulseSolution best;
  best.amplitudes = RealMatrix::Zero(nc, n);
  best.achieved_distance = std::numeric_limits<double>::infinity();
  best.iterations = 0;
  best.converged = false;

  // Start schedule: zero pulse, the warm start when given, the best
  // resonant constant pulse, then randomized kicks of growing angle.
  const int warm_offset = problem.warm_start ? 1 : 0;
  for (int restart = 0; restart < restarts; ++restart) {
    RealMatrix u = RealMatrix::Zero(nc, n);
    if (warm_offset == 1 && restart == 1) {
      u = problem.warm_start->transpose();
      clamp_amplitudes(u, problem.amplitude_bound);
    } else if (restart == 1 + warm_offset) {
      u = burst_dictionary_start(problem, drifts);
    } else if (restart > 1 + warm_offset) {
      // Useful pulses rotate by O(1) radians per slice, so the start scale
      // must track 1/h; unit-variance starts are invisible next to fast
      // drift rates.
      static const double kKickAngles[] = {0.05, 0.3, 0.9};
      const double angle = kKickAngles[(restart - 2 - warm_offset) % 3];
      std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(restart)));
      std::normal_distribution<double> gauss(0.0, angle / h);
      for (int c = 0; c < nc; ++c)
        for (int s = 0; s < n; ++s) u(c, s) = gauss(rng);
      clamp_amplitudes(u, problem.amplitude_bound);
    }

    Propagation run = forward(problem, drifts, u);
    if (!std::isfinite(run.loss)) {
      if (restart == 0) {
        throw std::runtime_error(
            "optimize: diverged, free propagation is non-finite (check the "
            "drift spec and total time)");
      }
      continue;  // pathological random start; other restarts still count
    }

    // Descent along the normalized momentum direction with an adaptive step
    // measured in amplitude units. Loss and gradient magnitudes vary over
    // many orders across problems, so raw gradient steps are unusable.
    // The descent lowers the Frobenius loss; the reported metric is the
    // Choi trace-norm bound, so the best iterate is tracked in that metric.
    RealMatrix velocity = RealMatrix::Zero(nc, n);
    double step = std::max(0.1, 0.01 / h);
    const double step_max = 1e6;
    int iters_used = 0;
    double restart_best = channel_lower_distance(problem, run.total);
    RealMatrix restart_best_u = u;
    for (int iter = 0; iter < max_iters; ++iter) {
      iters_used = iter + 1;
      // Frobenius distance dominates the reported channel distance, so this
      // early exit is conservative.
      if (std::sqrt(2.0 * run.loss) <= 0.5 * kPulseSuccessDistance) break;

      RealMatrix grad = gradient(problem, drifts, u, run);
      const double gnorm = grad.norm();
      if (gnorm <= 1e-14 * (1.0 + run.loss)) break;  // stationary (zero start sits on a symmetry saddle)
      velocity = 0.9 * velocity + grad;
      bool accepted = false;
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        RealMatrix dir = velocity / velocity.norm();
        while (step >= 1e-12) {
          RealMatrix u_try = u - step * dir;
          clamp_amplitudes(u_try, problem.amplitude_bound);
          Propagation trial = forward(problem, drifts, u_try);
          if (trial.loss < run.loss) {
            u = std::move(u_try);
            run = std::move(trial);
            step = std::min(step * 1.5, step_max);
            accepted = true;
            break;
          }
          step *= 0.5;
        }
        if (!accepted) {
          // momentum may point uphill; retry along the raw gradient
          velocity = grad;
          step = std::max(1e-3, 1e-4 / h);
        }
      }
      if (!accepted) break;
      const double distance = channel_lower_distance(problem, run.total);
      if (distance < restart_best) {
        restart_best = distance;
        restart_best_u = u;
      }
    }

    if (restart_best < best.achieved_distance) {
      best.achieved_distance = restart_best;
      best.amplitudes = restart_best_u.transpose();  // n_slices x n_controls
      best.iterations = iters_used;
    }
    if (best.achieved_distance <= 0.25 * kPulseSuccessDistance) break;
  }
  best.converged = best.achieved_distance <= kPulseSuccessDistance;
  return best;
}

EnsembleRecord reachability_experiment(const GeneratorSpec& drift,
                                       int sample_count, std::uint64_t seed,
                                       const ExperimentOptions& options) {
  if (sample_count < 0) {
    throw std::invalid_argument("reachability_experiment: negative sample count");
  }
  if (options.min_segments < 1 || options.max_segments < options.min_segments) {
    throw std::invalid_argument("reachability_experiment: bad segment range");
  }
  const int d = drift.dim();
  const HermitianBasis& basis = cached_basis(d);
  std::vector<SuperOpMatrix> controls = su_control_basis(basis);

  EnsembleRecord record;
  record.samples.resize(static_cast<std::size_t>(sample_count));
  std::vector<SuperOpMatrix> channels(static_cast<std::size_t>(sample_count));
  std::vector<double> eval_times(static_cast<std::size_t>(sample_count), 0.0);

  // Classification pass over every sample.
  parallel_for(sample_count, options.jobs, [&](int i) {
    const std::uint64_t sample_seed = split_seed(seed, static_cast<std::uint64_t>(i));
    SampleRecord& out = record.samples[static_cast<std::size_t>(i)];
    out.seed = sample_seed;

    std::mt19937_64 rng(split_seed(sample_seed, 0x5eedULL));
    std::uniform_int_distribution<int> seg_count(options.min_segments,
                                                 options.max_segments);
    MarkovianSample sample = random_markovian_channel(
        d, seg_count(rng), split_seed(sample_seed, 0xabcdULL));

    CriterionReport report =
        full_report(sample.channel, drift, options.bound_options);
    out.det_pass = report.det_time.pass;
    out.anisotropy_pass = !report.anisotropy.evaluated || report.anisotropy.verdict;
    out.unital_anisotropy_pass =
        !report.unital_anisotropy.evaluated || report.unital_anisotropy.verdict;
    out.moments = report.non_unitality;
    out.excluded = !report.overall;
    out.optimize_attempted = false;
    out.optimized_distance = -1.0;
    channels[static_cast<std::size_t>(i)] = std::move(sample.channel);
    eval_times[static_cast<std::size_t>(i)] = report.evaluated_time;
  });

  // Pulse-search pass: the budget goes to the lowest-indexed non-excluded
  // samples so the subset does not depend on scheduling.
  std::vector<int> attempt_order;
  for (int i = 0; i < sample_count &&
                  static_cast<int>(attempt_order.size()) < options.optimizer_cap;
       ++i) {
    if (!record.samples[static_cast<std::size_t>(i)].excluded &&
        eval_times[static_cast<std::size_t>(i)] > 1e-12) {
      attempt_order.push_back(i);
    }
  }
  parallel_for(static_cast<int>(attempt_order.size()), options.jobs, [&](int k) {
    const int i = attempt_order[static_cast<std::size_t>(k)];
    SampleRecord& out = record.samples[static_cast<std::size_t>(i)];
    PulseProblem problem;
    problem.drift = drift;
    problem.target = channels[static_cast<std::size_t>(i)];
    problem.total_time = eval_times[static_cast<std::size_t>(i)];
    problem.n_slices = options.n_slices;
    problem.control_basis = controls;
    PulseSolution solution = optimize(problem, split_seed(out.seed, 0xa11ceULL),
                                      options.max_iters, options.restarts);
    out.optimize_attempted = true;
    out.optimized_distance = solution.achieved_distance;
  });
  return record;
}

double EnsembleRecord::fraction_excluded() const {
  if (samples.empty()) return 0.0;
  int count = 0;
  for (const auto& s : samples) count += s.excluded ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

double EnsembleRecord::fraction_failing_det() const {
  if (samples.empty()) return 0.0;
  int count = 0;
  for (const auto& s : samples) count += s.det_pass ? 0 : 1;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

double EnsembleRecord::fraction_failing_anisotropy() const {
  if (samples.empty()) return 0.0;
  int count = 0;
  for (const auto& s : samples) count += s.anisotropy_pass ? 0 : 1;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

double EnsembleRecord::fraction_failing_unital_anisotropy() const {
  if (samples.empty()) return 0.0;
  int count = 0;
  for (const auto& s : samples) count += s.unital_anisotropy_pass ? 0 : 1;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

double EnsembleRecord::fraction_failing_nonunitality() const {
  if (samples.empty()) return 0.0;
  int count = 0;
  for (const auto& s : samples) {
    bool fail = false;
    for (const auto& m : s.moments) fail = fail || !m.pass;
    count += fail ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ensemble_csv_header(int d) {
  std::string line = "index,seed,det_pass,anisotropy_pass,unital_anisotropy_pass";
  for (int n = 2; n <= d; ++n) {
    const std::string tag = std::to_string(n);
    line += ",moment" + tag + ",bound" + tag + ",moment" + tag + "_pass";
  }
  line += ",excluded,optimize_attempted,optimized_distance";
  return line;
}

std::string ensemble_csv_row(const SampleRecord& sample, int index) {
  char head[64];
  std::snprintf(head, sizeof head, "%d,%" PRIu64, index,
                static_cast<std::uint64_t>(sample.seed));
  std::string line = head;
  auto flag = [](bool b) { return b ? ",1" : ",0"; };
  line += flag(sample.det_pass);
  line += flag(sample.anisotropy_pass);
  line += flag(sample.unital_anisotropy_pass);
  for (const auto& m : sample.moments) {
    line += "," + format_double(m.moment);
    line += "," + format_double(m.bound);
    line += flag(m.pass);
  }
  line += flag(sample.excluded);
  line += flag(sample.optimize_attempted);
  line += "," + format_double(sample.optimized_distance);
  return line;
}

}  // namespace reachcert

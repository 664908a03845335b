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
//
// Command-line front end: certification checks, bang-bang synthesis, free
// propagation, and the two canned experiments.  Exit codes: 0 success /
// not excluded, 2 excluded or not reachable, 1 input or usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reachcert/dynamics.hpp"
#include "reachcert/errors.hpp"
#include "reachcert/json_io.hpp"
#include "reachcert/linalg.hpp"
#include "reachcert/models.hpp"
#include "reachcert/search.hpp"
#include "reachcert/synth.hpp"

namespace fs = std::filesystem;
using namespace reachcert;

namespace {

// ---------------------------------------------------------------------------
// Logging (REACH_CERT_LOG = debug|info|warn|error; default warn)

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3 };

LogLevel g_log_level = LogLevel::warn;

void init_log_level() {
  const char* env = std::getenv("REACH_CERT_LOG");
  if (!env) return;
  const std::string v = env;
  if (v == "debug") g_log_level = LogLevel::debug;
  else if (v == "info") g_log_level = LogLevel::info;
  else if (v == "warn") g_log_level = LogLevel::warn;
  else if (v == "error") g_log_level = LogLevel::error;
}

void log_msg(LogLevel level, const std::string& msg) {
  static const char* names[] = {"debug", "info", "warn", "error"};
  if (level >= g_log_level) {
    std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
  }
}

// ---------------------------------------------------------------------------
// Input parsing: a --drift/--target argument is either a JSON file path or a
// compact descriptor "family:key=val,key=val".

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Descriptor {
  std::string family;
  std::map<std::string, std::string> params;
};

Descriptor parse_descriptor(const std::string& arg) {
  Descriptor d;
  const auto colon = arg.find(':');
  d.family = arg.substr(0, colon);
  if (colon == std::string::npos) return d;
  std::stringstream rest(arg.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("descriptor parameter '" + item +
                                  "' is not key=value");
    }
    d.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return d;
}

double take_param(Descriptor& d, const std::string& key, double fallback) {
  auto it = d.params.find(key);
  if (it == d.params.end()) return fallback;
  const double v = std::stod(it->second);
  d.params.erase(it);
  return v;
}

// Remaining parameters go to the model factory verbatim.
LindbladData model_from_descriptor(const Descriptor& d) {
  nlohmann::json j;
  j["family"] = d.family;
  for (const auto& [key, value] : d.params) {
    if (key == "seed") {
      j[key] = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "d") {
      j[key] = std::stoi(value);
    } else {
      j[key] = std::stod(value);
    }
  }
  return model_from_json(j.dump());
}

SuperOpMatrix generator_of(const LindbladData& data) {
  return lindbladian(data, cached_basis(data.dim()));
}

// Drift argument -> piecewise-constant generator spec.
GeneratorSpec drift_from_arg(const std::string& arg) {
  if (fs::exists(arg)) {
    const std::string text = read_file(arg);
    const auto j = nlohmann::json::parse(text);
    if (j.contains("segments")) return spec_from_json(text);
    SuperOpMatrix g = superop_from_json(text);
    if (g.kind != MapKind::generator) {
      throw std::invalid_argument("drift file must hold a generator or a spec");
    }
    return single_segment(g, 1.0);
  }
  Descriptor d = parse_descriptor(arg);
  const double duration = take_param(d, "duration", 1.0);
  GeneratorSpec spec = single_segment(generator_of(model_from_descriptor(d)),
                                      duration);
  log_msg(LogLevel::info, "drift: " + d.family + " (d=" +
                              std::to_string(spec.dim()) + ")");
  return spec;
}

// Target argument -> channel.  Generators (file or descriptor) are
// exponentiated over `time` (a descriptor's own time=... wins).
SuperOpMatrix target_from_arg(const std::string& arg, double time) {
  SuperOpMatrix g;
  double t = time;
  if (fs::exists(arg)) {
    g = superop_from_json(read_file(arg));
    if (g.kind == MapKind::channel) return g;
  } else {
    Descriptor d = parse_descriptor(arg);
    t = take_param(d, "time", time);
    g = generator_of(model_from_descriptor(d));
  }
  SuperOpMatrix channel;
  channel.d = g.d;
  channel.kind = MapKind::channel;
  channel.mat = expm(RealMatrix(g.mat * t));
  return channel;
}

// Synthesis wants bare generators on both sides.
SuperOpMatrix generator_from_arg(const std::string& arg) {
  if (fs::exists(arg)) {
    const std::string text = read_file(arg);
    const auto j = nlohmann::json::parse(text);
    if (j.contains("segments")) {
      GeneratorSpec spec = spec_from_json(text);
      if (spec.segments.size() != 1) {
        throw std::invalid_argument(
            "synthesis needs a time-independent generator");
      }
      return spec.segments.front().generator;
    }
    SuperOpMatrix g = superop_from_json(text);
    if (g.kind != MapKind::generator) {
      throw std::invalid_argument("expected a generator, got a channel");
    }
    return g;
  }
  return generator_of(model_from_descriptor(parse_descriptor(arg)));
}

// ---------------------------------------------------------------------------
// Output plumbing

void ensure_outdir(const std::string& dir) {
  fs::create_directories(dir);
  const fs::path probe = fs::path(dir) / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) {
      throw std::invalid_argument("output directory not writable: " + dir);
    }
  }
  fs::remove(probe);
}

void emit(const std::string& text, const std::string& outdir,
          const std::string& filename) {
  if (outdir.empty()) {
    std::cout << text << "\n";
    return;
  }
  const fs::path path = fs::path(outdir) / filename;
  std::ofstream out(path);
  out << text << "\n";
  if (!out) throw std::runtime_error("failed writing " + path.string());
  log_msg(LogLevel::info, "wrote " + path.string());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Append-only CSV writer: existing rows are preserved and trusted, new rows
// are flushed one at a time so partial files stay valid.
class CsvAppender {
 public:
  CsvAppender(const fs::path& path, const std::string& header) : path_(path) {
    if (fs::exists(path)) {
      std::ifstream in(path);
      std::string line;
      bool first = true;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
          first = false;
          if (line != header) {
            throw std::invalid_argument("existing CSV header mismatch in " +
                                        path.string());
          }
          continue;
        }
        ++existing_;
      }
    }
    out_.open(path, std::ios::app);
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    if (existing_ == 0 && fs::file_size(path) == 0) {
      out_ << header << "\n";
      out_.flush();
    }
  }

  long existing_rows() const { return existing_; }

  void append(const std::string& row) {
    out_ << row << "\n";
    out_.flush();
  }

 private:
  fs::path path_;
  std::ofstream out_;
  long existing_ = 0;
};

// ---------------------------------------------------------------------------
// Commands

struct CheckConfig {
  std::string drift;
  std::string target;
  double time = 1.0;
  double tol = tol::majorization;
  std::uint64_t seed = 12345;
  std::string out;
};

int cmd_check(const CheckConfig& cfg) {
  if (!cfg.out.empty()) ensure_outdir(cfg.out);
  GeneratorSpec drift = drift_from_arg(cfg.drift);
  SuperOpMatrix target = target_from_arg(cfg.target, cfg.time);
  BoundOptions bounds;
  bounds.seed = cfg.seed;
  CriterionReport report = full_report(target, drift, bounds, cfg.tol);
  emit(report_to_json(report), cfg.out, "report.json");
  if (!report.overall) {
    log_msg(LogLevel::info,
            report.det_time.pass
                ? "target excluded by the spectral/moment tests"
                : "target excluded at the determinant/required-time stage");
  }
  return report.overall ? 0 : 2;
}

struct SynthConfig {
  std::string drift;
  std::string target;
  double time = 1.0;
  std::string out;
};

int cmd_synth(const SynthConfig& cfg) {
  if (!cfg.out.empty()) ensure_outdir(cfg.out);
  SuperOpMatrix l0 = generator_from_arg(cfg.drift);
  SuperOpMatrix lp = generator_from_arg(cfg.target);
  SynthesisResult result = synthesize_unital_qubit(l0, lp, cfg.time);
  emit(schedule_to_json(result), cfg.out, "schedule.json");
  return 0;
}

struct SimulateConfig {
  std::string drift;
  double time = 1.0;
  std::string out;
};

// Clip or extend the spec so its total duration is exactly T.
GeneratorSpec spec_at_time(const GeneratorSpec& spec, double T) {
  GeneratorSpec out;
  double cursor = 0.0;
  for (const auto& seg : spec.segments) {
    const double remain = T - cursor;
    if (remain <= 0.0) break;
    Segment clipped = seg;
    clipped.duration = std::min(seg.duration, remain);
    out.segments.push_back(clipped);
    cursor += clipped.duration;
  }
  if (cursor < T) {
    if (out.segments.empty()) {
      Segment extended = spec.segments.back();
      extended.duration = T;
      out.segments.push_back(extended);
    } else if ((out.segments.back().generator.mat -
                spec.segments.back().generator.mat)
                   .cwiseAbs()
                   .maxCoeff() == 0.0) {
      out.segments.back().duration += T - cursor;
    } else {
      Segment extended = spec.segments.back();
      extended.duration = T - cursor;
      out.segments.push_back(extended);
    }
  }
  return out;
}

int cmd_simulate(const SimulateConfig& cfg) {
  if (!cfg.out.empty()) ensure_outdir(cfg.out);
  if (!(cfg.time > 0.0)) {
    throw std::invalid_argument("simulate: time must be positive");
  }
  GeneratorSpec drift = spec_at_time(drift_from_arg(cfg.drift), cfg.time);
  SuperOpMatrix channel = propagate(drift, nullptr, 1e-2);
  emit(superop_to_json(channel), cfg.out, "channel.json");
  return 0;
}

struct ExperimentConfig {
  std::string family;
  std::string out;
  int samples = 500;
  std::uint64_t seed = 20260818;
  int jobs = 1;
  int optimizer_cap = 50;
  int n_slices = 64;
  int max_iters = 150;
  int restarts = 4;
};

// GAD ensembles across steady-state purities: one per-sample CSV per purity
// plus a summary with the per-criterion exclusion fractions.
int cmd_experiment_gad(const ExperimentConfig& cfg) {
  const std::vector<double> purities = {0.5, 0.625, 0.75, 0.875, 1.0};
  std::vector<std::string> summary_rows;
  for (const double p : purities) {
    GeneratorSpec drift =
        single_segment(generator_of(gad(1.0, p)), 1.0);
    ExperimentOptions options;
    options.jobs = cfg.jobs;
    options.optimizer_cap = cfg.optimizer_cap;
    options.n_slices = cfg.n_slices;
    options.max_iters = cfg.max_iters;
    options.restarts = cfg.restarts;
    options.bound_options.seed = split_seed(cfg.seed, 0xb0b0ULL);
    log_msg(LogLevel::info, "gad-sweep: purity " + fmt(p));
    EnsembleRecord record = reachability_experiment(
        drift, cfg.samples, split_seed(cfg.seed, static_cast<std::uint64_t>(p * 1000)),
        options);

    char name[64];
    std::snprintf(name, sizeof name, "samples_gad_p%.3f.csv", p);
    CsvAppender csv(fs::path(cfg.out) / name, ensemble_csv_header(2));
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
      if (static_cast<long>(i) < csv.existing_rows()) continue;
      csv.append(ensemble_csv_row(record.samples[i], static_cast<int>(i)));
    }

    int attempted = 0, reached = 0;
    for (const auto& s : record.samples) {
      if (!s.optimize_attempted) continue;
      ++attempted;
      if (s.optimized_distance >= 0.0 &&
          s.optimized_distance <= kPulseSuccessDistance) {
        ++reached;
      }
    }
    const double reach_fraction =
        attempted > 0 ? static_cast<double>(reached) / attempted : 0.0;
    summary_rows.push_back(
        fmt(p) + "," + std::to_string(cfg.samples) + "," +
        fmt(record.fraction_excluded()) + "," + fmt(record.fraction_failing_det()) +
        "," + fmt(record.fraction_failing_anisotropy()) + "," +
        fmt(record.fraction_failing_unital_anisotropy()) + "," +
        fmt(record.fraction_failing_nonunitality()) + "," +
        std::to_string(attempted) + "," + fmt(reach_fraction));
  }
  std::ofstream summary(fs::path(cfg.out) / "summary_gad.csv");
  summary << "purity,samples,fraction_excluded,fraction_failing_det,"
             "fraction_failing_anisotropy,fraction_failing_unital_anisotropy,"
             "fraction_failing_nonunitality,optimizer_attempted,"
             "optimizer_reach_fraction\n";
  for (const auto& row : summary_rows) summary << row << "\n";
  return 0;
}

// Lambda-system skew scan: per-skew feasibility and best pulse distance,
// plus the majorization boundary located by bisection.
struct SkewOutcome {
  double required_time = 0.0;
  bool anisotropy_pass = false;
  bool unital_pass = false;
  double distance = -1.0;
};

GeneratorSpec lambda_skew_drift(double skew, double rate_sum, double window) {
  const double g1 = rate_sum * skew / (skew + 1.0);
  const double g2 = rate_sum / (skew + 1.0);
  return single_segment(generator_of(lambda_system(g1, g2)), window);
}

int cmd_experiment_lambda(const ExperimentConfig& cfg) {
  const double drift_skew = 10.0;
  const double rate_sum = 11.0;  // equal traces across skews: required T = window
  // Short window: the map-level anisotropy boundary approaches the
  // generator-level one as the window shrinks, and drifts upward with it.
  const double window = 0.03;
  GeneratorSpec drift = lambda_skew_drift(drift_skew, rate_sum, window);
  const HermitianBasis& basis = cached_basis(3);
  std::vector<SuperOpMatrix> controls = su_control_basis(basis);

  auto target_for = [&](double skew) {
    GeneratorSpec g = lambda_skew_drift(skew, rate_sum, window);
    SuperOpMatrix channel;
    channel.d = 3;
    channel.kind = MapKind::channel;
    channel.mat = expm(RealMatrix(g.segments.front().generator.mat * window));
    return channel;
  };

  auto spectral_pass = [&](double skew) {
    SuperOpMatrix target = target_for(skew);
    std::vector<double> times = required_time(target, drift);
    if (times.empty()) return false;
    const double T = times.front();
    return check_anisotropy(target, drift, T).verdict &&
           check_unital_anisotropy(target, drift, T).verdict;
  };

  // Majorization boundary: bracket on a unit grid, then bisect.
  double lo = 1.0, hi = 20.0;
  if (!spectral_pass(lo)) {
    throw std::runtime_error("lambda-skew: expected skew 1 to be feasible");
  }
  for (double s = 2.0; s <= 20.0; s += 1.0) {
    if (spectral_pass(s)) {
      lo = s;
    } else {
      hi = s;
      break;
    }
  }
  for (int iter = 0; iter < 60 && hi - lo > 1e-9; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (spectral_pass(mid)) lo = mid;
    else hi = mid;
  }
  const double boundary = 0.5 * (lo + hi);
  {
    std::ofstream out(fs::path(cfg.out) / "lambda_boundary.csv");
    out << "drift_skew,boundary_skew\n";
    out << fmt(drift_skew) << "," << fmt(boundary) << "\n";
  }
  log_msg(LogLevel::info, "lambda-skew boundary: " + fmt(boundary));

  CsvAppender csv(fs::path(cfg.out) / "lambda_skew.csv",
                  "skew,required_time,anisotropy_pass,unital_anisotropy_pass,"
                  "spectral_feasible,optimized_distance");
  int index = 0;
  for (int skew = 1; skew <= 20; ++skew, ++index) {
    if (index < csv.existing_rows()) continue;
    SuperOpMatrix target = target_for(skew);
    std::vector<double> times = required_time(target, drift);
    SkewOutcome row;
    if (!times.empty()) {
      row.required_time = times.front();
      row.anisotropy_pass =
          check_anisotropy(target, drift, row.required_time).verdict;
      row.unital_pass =
          check_unital_anisotropy(target, drift, row.required_time).verdict;
      PulseProblem problem;
      problem.drift = drift;
      problem.target = target;
      problem.total_time = row.required_time;
      problem.n_slices = cfg.n_slices;
      problem.control_basis = controls;
      PulseSolution solution =
          optimize(problem, split_seed(cfg.seed, static_cast<std::uint64_t>(skew)),
                   cfg.max_iters, cfg.restarts);
      row.distance = solution.achieved_distance;
    }
    log_msg(LogLevel::info, "lambda-skew " + std::to_string(skew) +
                                ": distance " + fmt(row.distance));
    csv.append(std::to_string(skew) + "," + fmt(row.required_time) + "," +
               (row.anisotropy_pass ? "1" : "0") + "," +
               (row.unital_pass ? "1" : "0") + "," +
               (row.anisotropy_pass && row.unital_pass ? "1" : "0") + "," +
               fmt(row.distance));
  }
  return 0;
}

int cmd_experiment(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.out);
  if (cfg.family == "gad-sweep") return cmd_experiment_gad(cfg);
  if (cfg.family == "lambda-skew") return cmd_experiment_lambda(cfg);
  throw std::invalid_argument("unknown experiment family: " + cfg.family +
                              " (expected gad-sweep or lambda-skew)");
}

}  // namespace

int main(int argc, char** argv) {
  init_log_level();
  CLI::App app{"Reachability certification and control synthesis for "
               "dissipative quantum dynamics"};
  app.require_subcommand(1);

  CheckConfig check_cfg;
  auto* check = app.add_subcommand(
      "check", "Run the reachability criteria on a target channel");
  check->add_option("--drift", check_cfg.drift,
                    "drift: JSON file or family:key=val,...")->required();
  check->add_option("--target", check_cfg.target,
                    "target: JSON file or family descriptor")->required();
  check->add_option("--time", check_cfg.time,
                    "evolution time for generator targets");
  check->add_option("--tol", check_cfg.tol, "majorization tolerance")
      ->check(CLI::PositiveNumber);
  check->add_option("--seed", check_cfg.seed, "bound-solver seed");
  check->add_option("--out", check_cfg.out, "output directory");

  SynthConfig synth_cfg;
  auto* synth = app.add_subcommand(
      "synth", "Bang-bang synthesis between unital qubit generators");
  synth->add_option("--drift", synth_cfg.drift, "drift generator")->required();
  synth->add_option("--target", synth_cfg.target, "target generator")->required();
  synth->add_option("--time", synth_cfg.time, "window length")
      ->check(CLI::PositiveNumber);
  synth->add_option("--out", synth_cfg.out, "output directory");

  SimulateConfig sim_cfg;
  auto* simulate = app.add_subcommand(
      "simulate", "Free evolution of a drift spec into a channel");
  simulate->add_option("--drift", sim_cfg.drift, "drift spec")->required();
  simulate->add_option("--time", sim_cfg.time, "total time")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim_cfg.out, "output directory");

  ExperimentConfig exp_cfg;
  auto* experiment = app.add_subcommand(
      "experiment", "Canned ensembles: gad-sweep or lambda-skew");
  experiment->add_option("--family", exp_cfg.family, "gad-sweep | lambda-skew")
      ->required();
  experiment->add_option("--out", exp_cfg.out, "output directory")->required();
  experiment->add_option("--samples", exp_cfg.samples, "samples per setting")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--seed", exp_cfg.seed, "master seed");
  experiment->add_option("--jobs", exp_cfg.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--optimizer-cap", exp_cfg.optimizer_cap,
                         "max pulse searches per ensemble");
  experiment->add_option("--slices", exp_cfg.n_slices, "pulse grid size")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--max-iters", exp_cfg.max_iters,
                         "optimizer iterations per restart")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--restarts", exp_cfg.restarts, "optimizer restarts")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(check_cfg);
    if (synth->parsed()) return cmd_synth(synth_cfg);
    if (simulate->parsed()) return cmd_simulate(sim_cfg);
    if (experiment->parsed()) return cmd_experiment(exp_cfg);
  } catch (const not_reachable_error& e) {
    log_msg(LogLevel::error, e.what());
    std::cout << "not reachable: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log_msg(LogLevel::error, e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

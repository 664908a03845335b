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

#include "reachcert/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace reachcert {

namespace {

using nlohmann::json;

// All parse entry points surface malformed input as std::invalid_argument,
// including parser and missing-key errors from the JSON layer.
template <typename F>
auto guarded(const char* who, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(who) + ": " + e.what());
  }
}

void check_schema(const json& j, const char* who) {
  if (j.contains("schema") && j.at("schema").get<int>() != kSchemaVersion) {
    throw std::invalid_argument(std::string(who) + ": unsupported schema version");
  }
}

json superop_to_obj(const SuperOpMatrix& s) {
  json j;
  j["schema"] = kSchemaVersion;
  j["d"] = s.d;
  j["kind"] = s.kind == MapKind::channel ? "channel" : "generator";
  json mat = json::array();
  for (Eigen::Index r = 0; r < s.mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.mat.cols(); ++c) mat.push_back(s.mat(r, c));
  }
  j["mat"] = mat;
  return j;
}

SuperOpMatrix superop_from_obj(const json& j) {
  check_schema(j, "superop_from_json");
  SuperOpMatrix s;
  s.d = j.at("d").get<int>();
  if (s.d < 2) {
    throw std::invalid_argument("superop_from_json: d must be at least 2");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "channel") {
    s.kind = MapKind::channel;
  } else if (kind == "generator") {
    s.kind = MapKind::generator;
  } else {
    throw std::invalid_argument("superop_from_json: unknown kind '" + kind + "'");
  }
  const auto& mat = j.at("mat");
  const Eigen::Index n = static_cast<Eigen::Index>(s.d) * s.d;
  if (!mat.is_array() || static_cast<Eigen::Index>(mat.size()) != n * n) {
    throw std::invalid_argument("superop_from_json: mat must hold d^4 numbers");
  }
  s.mat.resize(n, n);
  Eigen::Index idx = 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double v = mat.at(static_cast<std::size_t>(idx++)).get<double>();
      if (!std::isfinite(v)) {
        throw std::invalid_argument("superop_from_json: non-finite entry");
      }
      s.mat(r, c) = v;
    }
  }
  return s;
}

json spec_to_obj(const GeneratorSpec& spec) {
  json j;
  j["schema"] = kSchemaVersion;
  json segments = json::array();
  for (const auto& seg : spec.segments) {
    json s;
    s["duration"] = seg.duration;
    s["generator"] = superop_to_obj(seg.generator);
    segments.push_back(std::move(s));
  }
  j["segments"] = segments;
  return j;
}

GeneratorSpec spec_from_obj(const json& j) {
  check_schema(j, "spec_from_json");
  const auto& segments = j.at("segments");
  if (!segments.is_array() || segments.empty()) {
    throw std::invalid_argument("spec_from_json: needs a nonempty segment list");
  }
  GeneratorSpec spec;
  for (const auto& s : segments) {
    Segment seg;
    seg.duration = s.at("duration").get<double>();
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
      throw std::invalid_argument("spec_from_json: durations must be positive");
    }
    seg.generator = superop_from_obj(s.at("generator"));
    if (seg.generator.kind != MapKind::generator) {
      throw std::invalid_argument("spec_from_json: segments must hold generators");
    }
    spec.segments.push_back(std::move(seg));
  }
  const int d = spec.dim();
  for (const auto& seg : spec.segments) {
    if (seg.generator.d != d) {
      throw std::invalid_argument("spec_from_json: mixed dimensions");
    }
  }
  return spec;
}

json anisotropy_to_obj(const AnisotropyResult& a) {
  json j;
  j["verdict"] = a.verdict;
  j["evaluated"] = a.evaluated;
  j["boundary"] = a.boundary;
  j["det_time_consistent"] = a.det_time_consistent;
  j["slacks"] = a.slacks;
  return j;
}

json rotation_to_obj(const RealMatrix& r) {
  // axis-angle of a 3x3 rotation; the near-pi branch reads the axis off the
  // symmetric part since the skew part degenerates there.
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(c);
  Eigen::Vector3d axis(0.0, 0.0, 1.0);
  if (angle > 1e-12 && M_PI - angle > 1e-6) {
    axis = Eigen::Vector3d(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0),
                           r(1, 0) - r(0, 1)) /
           (2.0 * std::sin(angle));
  } else if (M_PI - angle <= 1e-6) {
    RealMatrix b = 0.5 * (r + RealMatrix::Identity(3, 3));
    Eigen::Index best = 0;
    b.diagonal().maxCoeff(&best);
    axis = b.col(best).normalized();
  }
  json j;
  j["rotation_axis"] = {axis.x(), axis.y(), axis.z()};
  j["angle"] = angle;
  return j;
}

RealMatrix rotation_from_axis_angle(const Eigen::Vector3d& axis_in,
                                    double angle) {
  const double n = axis_in.norm();
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(angle)) {
    throw std::invalid_argument("schedule_from_json: bad rotation axis/angle");
  }
  Eigen::Vector3d axis = axis_in / n;
  RealMatrix k(3, 3);
  k << 0.0, -axis.z(), axis.y(), axis.z(), 0.0, -axis.x(), -axis.y(), axis.x(),
      0.0;
  return RealMatrix::Identity(3, 3) + std::sin(angle) * k +
         (1.0 - std::cos(angle)) * (k * k);
}

}  // namespace

std::string superop_to_json(const SuperOpMatrix& s) {
  return superop_to_obj(s).dump(2);
}

SuperOpMatrix superop_from_json(const std::string& text) {
  return guarded("superop_from_json",
                 [&] { return superop_from_obj(json::parse(text)); });
}

LindbladData model_from_json(const std::string& text) {
  return guarded("model_from_json", [&] {
    const json j = json::parse(text);
    check_schema(j, "model_from_json");
    const std::string family = j.at("family").get<std::string>();
    if (family == "gad") {
      return gad(j.at("gamma").get<double>(), j.at("p").get<double>());
    }
    if (family == "dephasing") {
      return dephasing(j.at("gamma").get<double>());
    }
    if (family == "depolarizing") {
      return depolarizing(j.at("gamma").get<double>());
    }
    if (family == "lambda") {
      return lambda_system(j.at("g1").get<double>(), j.at("g2").get<double>());
    }
    if (family == "random") {
      return random_lindbladian(j.at("d").get<int>(),
                                j.at("scale").get<double>(),
                                j.at("seed").get<std::uint64_t>());
    }
    throw std::invalid_argument("model_from_json: unknown family '" + family +
                                "'");
  });
}

std::string spec_to_json(const GeneratorSpec& spec) {
  return spec_to_obj(spec).dump(2);
}

GeneratorSpec spec_from_json(const std::string& text) {
  return guarded("spec_from_json",
                 [&] { return spec_from_obj(json::parse(text)); });
}

std::string report_to_json(const CriterionReport& report) {
  json j;
  j["schema"] = kSchemaVersion;
  json det;
  det["times"] = report.det_time.times;
  det["det_target"] = report.det_time.det_target;
  if (std::isfinite(report.det_time.det_predicted)) {
    det["det_predicted"] = report.det_time.det_predicted;
  } else {
    det["det_predicted"] = nullptr;
  }
  det["pass"] = report.det_time.pass;
  j["det_time"] = det;
  j["evaluated_time"] = report.evaluated_time;
  j["anisotropy"] = anisotropy_to_obj(report.anisotropy);
  j["unital_anisotropy"] = anisotropy_to_obj(report.unital_anisotropy);
  json moments = json::array();
  for (const auto& m : report.non_unitality) {
    json mj;
    mj["n"] = m.n;
    mj["moment"] = m.moment;
    mj["bound"] = m.bound;
    mj["pass"] = m.pass;
    mj["inconclusive"] = m.inconclusive;
    moments.push_back(std::move(mj));
  }
  j["non_unitality"] = moments;
  j["overall"] = report.overall;
  return j.dump(2);
}

std::string schedule_to_json(const SynthesisResult& result) {
  json j;
  j["schema"] = kSchemaVersion;
  j["d"] = result.schedule.d;
  j["weights"] = result.weights;
  j["residual"] = result.residual;
  json steps = json::array();
  for (const auto& step : result.schedule.steps) {
    if (step.is_rotation) {
      if (result.schedule.d != 2) {
        throw std::invalid_argument(
            "schedule_to_json: axis-angle export needs a qubit schedule");
      }
      steps.push_back(rotation_to_obj(step.rotation.mat.block(1, 1, 3, 3)));
    } else {
      json s;
      s["free_time"] = step.duration;
      steps.push_back(std::move(s));
    }
  }
  j["steps"] = steps;
  return j.dump(2);
}

ControlSchedule schedule_from_json(const std::string& text) {
  return guarded("schedule_from_json", [&] {
    const json j = json::parse(text);
    check_schema(j, "schedule_from_json");
    ControlSchedule schedule;
    schedule.d = j.at("d").get<int>();
    if (schedule.d != 2) {
      throw std::invalid_argument("schedule_from_json: only qubit schedules");
    }
    for (const auto& s : j.at("steps")) {
      ScheduleStep step;
      if (s.contains("free_time")) {
        step.is_rotation = false;
        step.duration = s.at("free_time").get<double>();
        if (step.duration < 0.0 || !std::isfinite(step.duration)) {
          throw std::invalid_argument("schedule_from_json: bad free time");
        }
      } else {
        step.is_rotation = true;
        step.duration = 0.0;
        const auto& axis = s.at("rotation_axis");
        if (!axis.is_array() || axis.size() != 3) {
          throw std::invalid_argument(
              "schedule_from_json: axis must have 3 entries");
        }
        Eigen::Vector3d a(axis.at(0).get<double>(), axis.at(1).get<double>(),
                          axis.at(2).get<double>());
        RealMatrix r = rotation_from_axis_angle(a, s.at("angle").get<double>());
        step.rotation.d = 2;
        step.rotation.kind = MapKind::channel;
        step.rotation.mat = RealMatrix::Identity(4, 4);
        step.rotation.mat.block(1, 1, 3, 3) = r;
      }
      schedule.steps.push_back(std::move(step));
    }
    return schedule;
  });
}

}  // namespace reachcert

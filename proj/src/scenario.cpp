// Copyright 2026 The privkf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "privkf/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "privkf/coins.hpp"
#include "privkf/errors.hpp"

namespace privkf {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "must be finite");
  return d;
}

Vector read_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(v[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

Matrix read_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) fail(path + "[0]", "expected a non-empty row");
  Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != cols) fail(row_path, "ragged matrix row");
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          number(v[i][j], row_path + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

json write_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json write_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

template <class T>
T optional_field(const json& obj, const std::string& key, T fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(path + "." + key, "has the wrong type");
  }
}

void require_spd(const Matrix& m, const std::string& path) {
  if (!matlib::is_spd(m)) fail(path, "must be symmetric positive-definite");
}

}  // namespace

void Scenario::validate() const {
  if (model.F.rows() == 0 || model.F.rows() != model.F.cols()) fail("$.F", "must be square");
  const Eigen::Index n = model.F.rows();
  if (model.Q.rows() != n || model.Q.cols() != n) fail("$.Q", "must be n x n");
  require_spd(model.Q, "$.Q");
  if (model.sensors.empty()) fail("$.sensors", "at least one sensor is required");
  const Eigen::Index p = model.sensors.front().H.rows();
  for (std::size_t i = 0; i < model.sensors.size(); ++i) {
    const std::string path = "$.sensors[" + std::to_string(i) + "]";
    const auto& s = model.sensors[i];
    if (s.H.cols() != n) fail(path + ".H", "must have n columns");
    if (s.H.rows() != p) fail(path + ".H", "measurement size differs from sensor 0");
    if (s.R.rows() != p || s.R.cols() != p) fail(path + ".R", "must be p x p");
    require_spd(s.R, path + ".R");
  }
  if (x0.size() != n) fail("$.x0", "must have length n");
  if (x_hat0.size() != n) fail("$.x_hat0", "must have length n");
  if (P0.rows() != n || P0.cols() != n) fail("$.P0", "must be n x n");
  require_spd(P0, "$.P0");
  if (steps < 1) fail("$.steps", "must be at least 1");
  if (key_bits < 8) fail("$.key_bits", "must be at least 8");
  if (frac_bits == 0 || frac_bits >= key_bits) fail("$.frac_bits", "out of range");
  if (!groups.empty()) {
    std::set<int> seen;
    for (std::size_t j = 0; j < groups.size(); ++j) {
      const std::string path = "$.groups[" + std::to_string(j) + "]";
      if (groups[j].empty()) fail(path, "a group needs at least one sensor");
      for (int i : groups[j]) {
        if (i < 0 || i >= model.sensor_count()) fail(path, "unknown sensor " + std::to_string(i));
        if (!seen.insert(i).second) fail(path, "sensor " + std::to_string(i) + " is in two groups");
      }
    }
    if (static_cast<int>(seen.size()) != model.sensor_count()) {
      fail("$.groups", "every sensor must belong to exactly one group");
    }
  }
  if (source == DataSource::kCsv && csv_path.empty()) fail("$.data.path", "missing CSV path");
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail("$", "expected an object");
  Scenario s;
  const int version = optional_field<int>(doc, "version", kScenarioVersion, "$");
  if (version != kScenarioVersion) fail("$.version", "unsupported version " + std::to_string(version));
  s.name = optional_field<std::string>(doc, "name", s.name, "$");
  s.model.F = read_matrix(field(doc, "F", "$"), "$.F");
  s.model.Q = read_matrix(field(doc, "Q", "$"), "$.Q");
  const json& sensors = field(doc, "sensors", "$");
  if (!sensors.is_array() || sensors.empty()) fail("$.sensors", "expected a non-empty array");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const std::string path = "$.sensors[" + std::to_string(i) + "]";
    s.model.sensors.push_back(kalman::SensorModel{
        read_matrix(field(sensors[i], "H", path), path + ".H"),
        read_matrix(field(sensors[i], "R", path), path + ".R")});
  }
  if (doc.contains("groups")) {
    const json& g = doc.at("groups");
    if (!g.is_array()) fail("$.groups", "expected an array of index arrays");
    for (std::size_t j = 0; j < g.size(); ++j) {
      const std::string path = "$.groups[" + std::to_string(j) + "]";
      if (!g[j].is_array()) fail(path, "expected an array of sensor indices");
      std::vector<int> members;
      for (const auto& v : g[j]) {
        if (!v.is_number_integer()) fail(path, "sensor indices must be integers");
        members.push_back(v.get<int>());
      }
      s.groups.push_back(std::move(members));
    }
  }
  s.x0 = read_vector(field(doc, "x0", "$"), "$.x0");
  s.P0 = read_matrix(field(doc, "P0", "$"), "$.P0");
  s.x_hat0 = doc.contains("x_hat0") ? read_vector(doc.at("x_hat0"), "$.x_hat0") : s.x0;
  s.steps = optional_field<int>(doc, "steps", s.steps, "$");
  s.key_bits = optional_field<unsigned>(doc, "key_bits", s.key_bits, "$");
  s.frac_bits = optional_field<unsigned>(doc, "frac_bits", s.frac_bits, "$");
  s.private_HR = optional_field<bool>(doc, "private_HR", false, "$");
  s.private_FQ = optional_field<bool>(doc, "private_FQ", false, "$");
  s.refresh = optional_field<bool>(doc, "refresh", true, "$");
  s.plant_noise = optional_field<bool>(doc, "plant_noise", true, "$");
  if (doc.contains("seeds")) {
    const json& seeds = doc.at("seeds");
    if (!seeds.is_object()) fail("$.seeds", "expected an object");
    s.seeds.plant = optional_field<std::uint64_t>(seeds, "plant", s.seeds.plant, "$.seeds");
    s.seeds.crypto = optional_field<std::uint64_t>(seeds, "crypto", s.seeds.crypto, "$.seeds");
    s.seeds.simulator =
        optional_field<std::uint64_t>(seeds, "simulator", s.seeds.simulator, "$.seeds");
  }
  if (doc.contains("data")) {
    const json& data = doc.at("data");
    const auto src = optional_field<std::string>(data, "source", "synthetic", "$.data");
    if (src == "synthetic") {
      s.source = DataSource::kSynthetic;
    } else if (src == "csv") {
      s.source = DataSource::kCsv;
      const auto p = optional_field<std::string>(data, "path", "", "$.data");
      if (p.empty()) fail("$.data.path", "missing CSV path");
      s.csv_path = std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base_dir / p;
    } else {
      fail("$.data.source", "must be \"synthetic\" or \"csv\"");
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

json to_json(const Scenario& s) {
  json doc;
  doc["version"] = kScenarioVersion;
  doc["name"] = s.name;
  doc["F"] = write_matrix(s.model.F);
  doc["Q"] = write_matrix(s.model.Q);
  doc["sensors"] = json::array();
  for (const auto& sensor : s.model.sensors) {
    doc["sensors"].push_back({{"H", write_matrix(sensor.H)}, {"R", write_matrix(sensor.R)}});
  }
  if (!s.groups.empty()) doc["groups"] = s.groups;
  doc["x0"] = write_vector(s.x0);
  doc["P0"] = write_matrix(s.P0);
  doc["x_hat0"] = write_vector(s.x_hat0);
  doc["steps"] = s.steps;
  doc["key_bits"] = s.key_bits;
  doc["frac_bits"] = s.frac_bits;
  doc["private_HR"] = s.private_HR;
  doc["private_FQ"] = s.private_FQ;
  doc["refresh"] = s.refresh;
  doc["plant_noise"] = s.plant_noise;
  doc["seeds"] = {{"plant", s.seeds.plant}, {"crypto", s.seeds.crypto},
                  {"simulator", s.seeds.simulator}};
  if (s.source == DataSource::kCsv) {
    doc["data"] = {{"source", "csv"}, {"path", s.csv_path.string()}};
  } else {
    doc["data"] = {{"source", "synthetic"}};
  }
  return doc;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << to_json(scenario).dump(2) << '\n';
}

Scenario constant_velocity_scenario(int sensors, double dt, double process_noise,
                                    const std::vector<double>& sensor_noise) {
  Scenario s;
  s.name = "constant_velocity_3d";
  const int n = 6;
  s.model.F = Matrix::Identity(n, n);
  s.model.F.topRightCorner(3, 3) = dt * Matrix::Identity(3, 3);
  // Discretized white-acceleration noise.
  Matrix q(n, n);
  q.setZero();
  const double dt2 = dt * dt, dt3 = dt2 * dt;
  q.topLeftCorner(3, 3) = dt3 / 3.0 * Matrix::Identity(3, 3);
  q.topRightCorner(3, 3) = dt2 / 2.0 * Matrix::Identity(3, 3);
  q.bottomLeftCorner(3, 3) = dt2 / 2.0 * Matrix::Identity(3, 3);
  q.bottomRightCorner(3, 3) = dt * Matrix::Identity(3, 3);
  s.model.Q = process_noise * q;
  Matrix h = Matrix::Zero(3, n);
  h.leftCols(3) = Matrix::Identity(3, 3);
  for (int i = 0; i < sensors; ++i) {
    const double r = sensor_noise.empty() ? 0.01 : sensor_noise[static_cast<std::size_t>(i) % sensor_noise.size()];
    s.model.sensors.push_back(kalman::SensorModel{h, r * Matrix::Identity(3, 3)});
  }
  s.x0 = Vector::Zero(n);
  s.x0 << 0.0, 0.0, 1.0, 0.5, -0.3, 0.1;
  s.P0 = Matrix::Identity(n, n);
  s.x_hat0 = s.x0;
  return s;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const std::string t = trim(cell);
  if (t.empty()) {
    throw CsvError("gap at row " + std::to_string(row) + ", column " + std::to_string(col));
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size() || !std::isfinite(v)) {
    throw CsvError("bad number '" + t + "' at row " + std::to_string(row));
  }
  return v;
}

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TrajectoryCsv ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw CsvError(path.string() + ": empty file");
  std::vector<std::string> header = split_csv(trim(line));
  for (auto& h : header) h = trim(h);
  if (header.empty() || header[0] != "t") throw CsvError("first column must be 't'");

  const bool single_body =
      header.size() == 4 && header[1] == "x" && header[2] == "y" && header[3] == "z";
  std::vector<std::size_t> truth_cols;
  std::vector<std::vector<std::size_t>> sensor_cols;  // [sensor][component]
  if (!single_body) {
    for (std::size_t c = 1; c < header.size(); ++c) {
      const std::string& h = header[c];
      int a = -1, b = -1;
      char tail = 0;
      if (std::sscanf(h.c_str(), "true_%d%c", &a, &tail) == 1 && a >= 0) {
        if (static_cast<std::size_t>(a) != truth_cols.size()) {
          throw CsvError("truth columns out of order at '" + h + "'");
        }
        truth_cols.push_back(c);
      } else if (std::sscanf(h.c_str(), "s%d_%d%c", &a, &b, &tail) == 2 && a >= 0 && b >= 0) {
        if (static_cast<std::size_t>(a) == sensor_cols.size()) sensor_cols.emplace_back();
        if (static_cast<std::size_t>(a) + 1 != sensor_cols.size() ||
            static_cast<std::size_t>(b) != sensor_cols.back().size()) {
          throw CsvError("sensor columns out of order at '" + h + "'");
        }
        sensor_cols.back().push_back(c);
      } else {
        throw CsvError("unrecognized column '" + h + "'");
      }
    }
    if (sensor_cols.empty()) throw CsvError("no sensor columns");
    for (const auto& s : sensor_cols) {
      if (s.size() != sensor_cols.front().size()) throw CsvError("sensors differ in size");
    }
  }

  TrajectoryCsv out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw CsvError("ragged row " + std::to_string(row) + ": expected " +
                     std::to_string(header.size()) + " cells, got " +
                     std::to_string(cells.size()));
    }
    const double t = parse_cell(cells[0], row, 0);
    if (!out.times.empty() && t <= out.times.back()) {
      throw CsvError("time is not strictly increasing at row " + std::to_string(row));
    }
    out.times.push_back(t);
    if (single_body) {
      Vector pos(3);
      for (int i = 0; i < 3; ++i) pos(i) = parse_cell(cells[static_cast<std::size_t>(i) + 1], row, static_cast<std::size_t>(i) + 1);
      out.truth.push_back(pos);
      continue;
    }
    if (!truth_cols.empty()) {
      Vector x(static_cast<Eigen::Index>(truth_cols.size()));
      for (std::size_t i = 0; i < truth_cols.size(); ++i) {
        x(static_cast<Eigen::Index>(i)) = parse_cell(cells[truth_cols[i]], row, truth_cols[i]);
      }
      out.truth.push_back(std::move(x));
    }
    std::vector<Vector> ys;
    for (const auto& cols : sensor_cols) {
      Vector y(static_cast<Eigen::Index>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j) {
        y(static_cast<Eigen::Index>(j)) = parse_cell(cells[cols[j]], row, cols[j]);
      }
      ys.push_back(std::move(y));
    }
    out.measurements.push_back(std::move(ys));
  }
  if (out.times.empty()) throw CsvError(path.string() + ": no data rows");
  return out;
}

void export_trajectory_csv(const std::filesystem::path& path, const TrajectoryCsv& data) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write " + path.string());
  const std::size_t truth_size = data.truth.empty() ? 0 : static_cast<std::size_t>(data.truth.front().size());
  out << 't';
  for (std::size_t i = 0; i < truth_size; ++i) out << ",true_" << i;
  if (!data.measurements.empty()) {
    for (std::size_t s = 0; s < data.measurements.front().size(); ++s) {
      for (Eigen::Index j = 0; j < data.measurements.front()[s].size(); ++j) {
        out << ",s" << s << '_' << j;
      }
    }
  }
  out << '\n';
  for (std::size_t k = 0; k < data.times.size(); ++k) {
    out << real17(data.times[k]);
    if (truth_size > 0) {
      for (Eigen::Index i = 0; i < data.truth[k].size(); ++i) out << ',' << real17(data.truth[k](i));
    }
    if (!data.measurements.empty()) {
      for (const auto& y : data.measurements[k]) {
        for (Eigen::Index j = 0; j < y.size(); ++j) out << ',' << real17(y(j));
      }
    }
    out << '\n';
  }
  if (!out) throw CsvError("write failed for " + path.string());
}

RunData prepare_run_data(const Scenario& scenario, int steps, int extra_truth) {
  RunData out;
  if (scenario.source == DataSource::kSynthetic) {
    kalman::SystemModel plant = scenario.model;
    if (!scenario.plant_noise) {
      plant.Q.setZero();
      for (auto& s : plant.sensors) s.R.setZero();
    }
    CoinStream coins(scenario.seeds.plant, CoinPurpose::kNoise);
    auto trace = kalman::simulate_plant(plant, scenario.x0, steps + extra_truth, coins);
    out.truth = std::move(trace.states);
    trace.measurements.resize(static_cast<std::size_t>(steps));
    out.measurements = std::move(trace.measurements);
    return out;
  }
  const TrajectoryCsv csv = ingest_csv(scenario.csv_path);
  if (static_cast<int>(csv.times.size()) < steps) {
    throw CsvError(scenario.csv_path.string() + " has " + std::to_string(csv.times.size()) +
                   " rows, run needs " + std::to_string(steps));
  }
  out.truth = csv.truth;
  if (static_cast<int>(out.truth.size()) > steps + extra_truth) {
    out.truth.resize(static_cast<std::size_t>(steps + extra_truth));
  }
  if (!csv.measurements.empty()) {
    if (csv.measurements.front().size() != scenario.model.sensors.size()) {
      throw CsvError("CSV sensor count does not match the scenario");
    }
    for (int k = 0; k < steps; ++k) {
      for (std::size_t i = 0; i < scenario.model.sensors.size(); ++i) {
        if (csv.measurements[static_cast<std::size_t>(k)][i].size() != scenario.p()) {
          throw CsvError("CSV measurement size does not match the scenario");
        }
      }
      out.measurements.push_back(csv.measurements[static_cast<std::size_t>(k)]);
    }
    return out;
  }
  // One rigid body: every sensor observes the position with its own noise.
  if (scenario.p() != 3) throw CsvError("t,x,y,z data needs 3-dimensional measurements");
  CoinStream coins(scenario.seeds.plant, CoinPurpose::kNoise);
  std::vector<Matrix> factors;
  for (const auto& s : scenario.model.sensors) factors.push_back(matlib::cholesky(s.R));
  for (int k = 0; k < steps; ++k) {
    std::vector<Vector> ys;
    for (const auto& l : factors) {
      Vector y = csv.truth[static_cast<std::size_t>(k)];
      if (scenario.plant_noise) {
        Vector z(3);
        for (int i = 0; i < 3; ++i) z(i) = coins.standard_normal();
        y += l * z;
      }
      ys.push_back(std::move(y));
    }
    out.measurements.push_back(std::move(ys));
  }
  return out;
}

}  // namespace privkf

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
#include "privkf/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "privkf/errors.hpp"

namespace privkf::report {

using nlohmann::json;

namespace {

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw ValidationError("write failed for " + path.string());
}

json vec(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Vector to_vec(const json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

Matrix to_mat(const json& a) {
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  Matrix m(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != cols) throw ValidationError("ragged matrix in run artifact");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j].get<double>();
    }
  }
  return m;
}

template <class T, class F>
json list(const std::vector<T>& items, F f) {
  json a = json::array();
  for (const auto& item : items) a.push_back(f(item));
  return a;
}

json party(PartyId id) { return {{"role", to_string(id.role)}, {"index", id.index}}; }

PartyId party_from(const json& j) {
  const auto role = j.at("role").get<std::string>();
  const int index = j.at("index").get<int>();
  if (role == "query") return PartyId::query();
  if (role == "aggregator") return PartyId::aggregator();
  if (role == "sensor") return PartyId::sensor(index);
  if (role == "group") return PartyId::group(index);
  throw ValidationError("unknown role '" + role + "' in run artifact");
}

}  // namespace

ReferenceTimes reference_times(Protocol protocol) {
  return protocol == Protocol::kSensorFusion ? ReferenceTimes{7.75, 4.6, 1.77}
                                             : ReferenceTimes{23.67, 2.31, 1.77};
}

RunMetrics compute_metrics(const RunResult& run) {
  RunMetrics m;
  for (std::size_t k = 0; k < run.estimates.size() && k < run.truth.size(); ++k) {
    const Eigen::Index dims = std::min(run.truth[k].size(), run.estimates[k].size());
    m.errors.push_back(run.estimates[k].head(dims) - run.truth[k].head(dims));
  }
  if (!m.errors.empty()) {
    m.rms = Vector::Zero(m.errors.front().size());
    for (const auto& e : m.errors) m.rms += e.cwiseAbs2();
    m.rms = (m.rms / static_cast<double>(m.errors.size())).cwiseSqrt();
  }
  m.mean_ms = mean_step_ms(run);
  m.messages = run.deliveries.size();
  m.bytes = run.total_bytes();
  m.max_reference_deviation = run.max_reference_deviation();
  return m;
}

std::string timing_report(const RunResult& run, const RunMetrics& metrics) {
  if (run.steps == 0 || metrics.mean_ms.empty()) return {};
  const ReferenceTimes ref = reference_times(run.protocol);
  const Role side = run.protocol == Protocol::kSensorFusion ? Role::kSensor : Role::kGroup;
  std::ostringstream out;
  out << "protocol: " << to_string(run.protocol) << '\n'
      << "steps: " << run.steps << '\n'
      << "key bits: " << run.keys.pk.bits() << '\n'
      << '\n'
      << "mean step time (ms)\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-12s %12s %20s\n", "role", "measured", "published reference");
  out << line;
  auto row = [&](Role role, double reference) {
    const auto it = metrics.mean_ms.find(role);
    const std::string measured = it == metrics.mean_ms.end() ? "-" : fmt12(it->second);
    std::snprintf(line, sizeof(line), "%-12s %12s %20s\n", to_string(role).c_str(),
                  measured.c_str(), fmt12(reference).c_str());
    out << line;
  };
  row(side, ref.sensor_side);
  row(Role::kAggregator, ref.aggregator);
  row(Role::kQuery, ref.query);
  out << '\n'
      << "published reference (ms, hardware-specific, context only):\n"
      << "  sensor fusion:   sensor 7.75, aggregator 4.6, query 1.77\n"
      << "  group diffusion: group 23.67, aggregator 2.31, query 1.77\n"
      << '\n'
      << "messages: " << metrics.messages << '\n'
      << "bytes: " << metrics.bytes << '\n'
      << "max exponent: " << run.max_exponent << '\n'
      << "max deviation from plaintext filter: " << fmt12(metrics.max_reference_deviation)
      << '\n';
  if (metrics.rms.size() > 0) {
    out << "rms error per axis:";
    for (Eigen::Index i = 0; i < metrics.rms.size(); ++i) out << ' ' << fmt12(metrics.rms(i));
    out << '\n';
  }
  return out.str();
}

void emit_reports(const RunResult& run, const RunMetrics& metrics,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Eigen::Index n = run.scenario.n();
  const Eigen::Index truth_dims = run.truth.empty() ? 0 : run.truth.front().size();
  {
    const auto path = out_dir / "estimates.csv";
    auto out = open_out(path);
    out << "step";
    for (Eigen::Index i = 0; i < truth_dims; ++i) out << ",true_" << i;
    for (Eigen::Index i = 0; i < n; ++i) out << ",est_" << i;
    out << '\n';
    for (std::size_t k = 0; k < run.estimates.size(); ++k) {
      out << k + 1;
      for (Eigen::Index i = 0; i < truth_dims; ++i) {
        out << ',' << (k < run.truth.size() ? fmt12(run.truth[k](i)) : "");
      }
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << fmt12(run.estimates[k](i));
      out << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "error.csv";
    auto out = open_out(path);
    out << "step";
    const Eigen::Index dims = metrics.errors.empty() ? 0 : metrics.errors.front().size();
    for (Eigen::Index i = 0; i < dims; ++i) out << ",err_" << i;
    out << ",norm\n";
    for (std::size_t k = 0; k < metrics.errors.size(); ++k) {
      out << k + 1;
      for (Eigen::Index i = 0; i < dims; ++i) out << ',' << fmt12(metrics.errors[k](i));
      out << ',' << fmt12(metrics.errors[k].norm()) << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "timing.txt";
    auto out = open_out(path);
    out << timing_report(run, metrics);
    finish(out, path);
  }
}

void write_transcripts(const RunResult& run, const std::filesystem::path& out_dir) {
  const auto dir = out_dir / "transcripts";
  std::filesystem::create_directories(dir);
  for (const auto& [id, t] : run.transcripts) {
    std::string name = to_string(id);
    for (char& c : name) {
      if (c == '[' || c == ']') c = '_';
    }
    if (!name.empty() && name.back() == '_') name.pop_back();
    const auto path = dir / (name + ".txt");
    auto out = open_out(path);
    out << t.serialize();
    finish(out, path);
  }
}

json run_to_json(const RunResult& run) {
  json doc;
  doc["format"] = "privkf-run";
  doc["version"] = 1;
  doc["protocol"] = static_cast<int>(run.protocol);
  doc["scenario"] = to_json(run.scenario);
  doc["steps"] = run.steps;
  doc["public_key"] = phe::to_hex(run.keys.pk.n());
  doc["private_key"] = {{"p", phe::to_hex(run.keys.sk.p())}, {"q", phe::to_hex(run.keys.sk.q())}};
  doc["estimates"] = list(run.estimates, vec);
  doc["covariances"] = list(run.covariances, mat);
  doc["reference"] = list(run.reference, vec);
  doc["truth"] = list(run.truth, vec);
  doc["measurements"] = list(run.measurements, [](const auto& s) { return list(s, vec); });
  doc["group_priors"] = list(run.group_priors, [](const auto& s) { return list(s, vec); });
  doc["group_prior_covariances"] =
      list(run.group_prior_covariances, [](const auto& s) { return list(s, mat); });
  doc["max_exponent"] = run.max_exponent;
  doc["deliveries"] = list(run.deliveries, [](const DeliveryRecord& d) {
    return json{{"from", party(d.from)}, {"to", party(d.to)}, {"step", d.step},
                {"kind", d.kind}, {"bytes", d.bytes}};
  });
  return doc;
}

RunResult run_from_json(const json& doc) {
  try {
    if (doc.at("format") != "privkf-run" || doc.at("version") != 1) {
      throw ValidationError("not a version-1 run artifact");
    }
    RunResult run;
    const int protocol = doc.at("protocol").get<int>();
    if (protocol != 1 && protocol != 2) throw ValidationError("unknown protocol in run artifact");
    run.protocol = static_cast<Protocol>(protocol);
    run.scenario = parse_scenario(doc.at("scenario"));
    run.steps = doc.at("steps").get<int>();
    const mpz_class p(doc.at("private_key").at("p").get<std::string>(), 16);
    const mpz_class q(doc.at("private_key").at("q").get<std::string>(), 16);
    run.keys.sk = phe::PrivateKey(p, q);
    run.keys.pk = run.keys.sk.public_key();
    if (phe::to_hex(run.keys.pk.n()) != doc.at("public_key").get<std::string>()) {
      throw ValidationError("run artifact keys do not match");
    }
    for (const auto& v : doc.at("estimates")) run.estimates.push_back(to_vec(v));
    for (const auto& m : doc.at("covariances")) run.covariances.push_back(to_mat(m));
    for (const auto& v : doc.at("reference")) run.reference.push_back(to_vec(v));
    for (const auto& v : doc.at("truth")) run.truth.push_back(to_vec(v));
    for (const auto& step : doc.at("measurements")) {
      auto& row = run.measurements.emplace_back();
      for (const auto& v : step) row.push_back(to_vec(v));
    }
    for (const auto& step : doc.at("group_priors")) {
      auto& row = run.group_priors.emplace_back();
      for (const auto& v : step) row.push_back(to_vec(v));
    }
    for (const auto& step : doc.at("group_prior_covariances")) {
      auto& row = run.group_prior_covariances.emplace_back();
      for (const auto& m : step) row.push_back(to_mat(m));
    }
    run.max_exponent = doc.at("max_exponent").get<unsigned>();
    for (const auto& d : doc.at("deliveries")) {
      run.deliveries.push_back(DeliveryRecord{party_from(d.at("from")), party_from(d.at("to")),
                                              d.at("step").get<int>(),
                                              d.at("kind").get<std::string>(),
                                              d.at("bytes").get<std::size_t>()});
    }
    const auto k = static_cast<std::size_t>(run.steps);
    if (run.estimates.size() != k || run.covariances.size() != k || run.measurements.size() != k) {
      throw ValidationError("run artifact has inconsistent step counts");
    }
    return run;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run artifact: ") + e.what());
  }
}

void save_run(const RunResult& run, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << run_to_json(run).dump(1) << '\n';
  finish(out, path);
}

RunResult load_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open run artifact " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return run_from_json(doc);
}

}  // namespace privkf::report

// Copyright 2026 The rmtbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmtbench/report.hpp"

#include <fstream>
#include <sstream>

#include "rmtbench/errors.hpp"
#include "rmtbench/json_io.hpp"
#include "rmtbench/rmt_stats.hpp"
#include "text_util.hpp"

#ifndef RMTBENCH_VERSION
#define RMTBENCH_VERSION "0.0.0"
#endif

namespace rmtbench {
namespace {

constexpr const char* kReportFormat = "rmtbench.report/1";

using nlohmann::json;

json stats_to_json(const SummaryStatistics& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"variance", s.variance}, {"kurtosis", s.kurtosis}};
}

SummaryStatistics stats_from_json(const json& doc) {
  return {require_field(doc, "count").get<std::size_t>(), require_field(doc, "mean").get<double>(),
          require_field(doc, "variance").get<double>(), require_field(doc, "kurtosis").get<double>()};
}

json member_to_json(const MemberResult& m) {
  json doc;
  doc["index"] = m.index;
  doc["stream"] = m.stream;
  doc["ok"] = m.ok;
  if (!m.ok) {
    doc["error"] = m.error;
    return doc;
  }
  doc["kraus_rank"] = m.kraus_rank;
  doc["repetitions"] = m.repetitions;
  doc["gap"] = m.gap;
  doc["second_modulus"] = m.second_modulus;
  auto& spectrum = doc["spectrum"] = json::array();
  for (const auto& z : m.spectrum) spectrum.push_back({z.real(), z.imag()});
  doc["steady_eigenvalues"] = m.steady_eigenvalues;
  doc["probabilities"] = m.probabilities;
  if (m.histogram) doc["histogram"] = *m.histogram;
  return doc;
}

MemberResult member_from_json(const json& doc) {
  MemberResult m;
  m.index = require_field(doc, "index").get<std::size_t>();
  m.stream = require_field(doc, "stream").get<std::uint64_t>();
  m.ok = require_field(doc, "ok").get<bool>();
  if (!m.ok) {
    m.error = doc.value("error", std::string{});
    return m;
  }
  m.kraus_rank = require_field(doc, "kraus_rank").get<std::size_t>();
  m.repetitions = require_field(doc, "repetitions").get<std::size_t>();
  m.gap = require_field(doc, "gap").get<double>();
  m.second_modulus = require_field(doc, "second_modulus").get<double>();
  for (const auto& z : require_field(doc, "spectrum")) m.spectrum.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  m.steady_eigenvalues = require_field(doc, "steady_eigenvalues").get<std::vector<double>>();
  m.probabilities = require_field(doc, "probabilities").get<std::vector<double>>();
  if (auto it = doc.find("histogram"); it != doc.end()) m.histogram = it->get<Histogram>();
  return m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string num(double x) { return detail::format_double(x); }

}  // namespace

std::string_view library_version() noexcept { return RMTBENCH_VERSION; }

std::size_t BenchmarkReport::n_bits() const noexcept {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < reference.N) ++n;
  return n;
}

std::vector<double> BenchmarkReport::pooled_outputs() const {
  std::vector<double> out;
  for (const auto& m : members)
    if (m.ok) out.insert(out.end(), m.probabilities.begin(), m.probabilities.end());
  return out;
}

std::vector<double> BenchmarkReport::pooled_steady_eigenvalues() const {
  std::vector<double> out;
  for (const auto& m : members)
    if (m.ok) out.insert(out.end(), m.steady_eigenvalues.begin(), m.steady_eigenvalues.end());
  return out;
}

json report_to_json(const BenchmarkReport& report) {
  json doc;
  doc["format"] = kReportFormat;
  doc["source"] = report.source;
  doc["config"] = report.config;
  doc["config_hash"] = report.config_hash;
  doc["reference"] = {{"N", report.reference.N},
                      {"r", report.reference.r},
                      {"seed", report.reference.seed},
                      {"samples", report.reference.samples}};
  auto& members = doc["members"] = json::array();
  for (const auto& m : report.members) members.push_back(member_to_json(m));
  const auto& a = report.aggregates;
  json agg;
  agg["members_ok"] = a.members_ok;
  agg["members_failed"] = a.members_failed;
  agg["outputs"] = stats_to_json(a.outputs);
  agg["steady_eigenvalues"] = stats_to_json(a.steady_eigenvalues);
  agg["ks"] = a.ks;
  agg["mean_gap"] = a.mean_gap;
  agg["mean_second_modulus"] = a.mean_second_modulus;
  auto& rq = agg["reference_quantiles"] = json::array();
  for (const auto& q : a.reference_quantiles) rq.push_back({q.probability, q.reference, q.sample});
  doc["aggregates"] = std::move(agg);
  json provenance{{"version", report.version}};
  if (report.timestamp) provenance["timestamp"] = *report.timestamp;
  doc["provenance"] = std::move(provenance);
  return doc;
}

BenchmarkReport report_from_json(const json& doc) {
  BenchmarkReport report;
  try {
    if (require_field(doc, "format").get<std::string>() != kReportFormat)
      throw Error(ErrorCode::kMalformedInput, "unsupported report format");
    report.source = require_field(doc, "source").get<std::string>();
    report.config = require_field(doc, "config");
    report.config_hash = require_field(doc, "config_hash").get<std::string>();
    const auto& ref = require_field(doc, "reference");
    report.reference = {require_field(ref, "N").get<std::size_t>(), require_field(ref, "r").get<std::size_t>(),
                        require_field(ref, "seed").get<std::uint64_t>(), require_field(ref, "samples").get<std::size_t>()};
    for (const auto& m : require_field(doc, "members")) report.members.push_back(member_from_json(m));
    const auto& agg = require_field(doc, "aggregates");
    auto& a = report.aggregates;
    a.members_ok = require_field(agg, "members_ok").get<std::size_t>();
    a.members_failed = require_field(agg, "members_failed").get<std::size_t>();
    a.outputs = stats_from_json(require_field(agg, "outputs"));
    a.steady_eigenvalues = stats_from_json(require_field(agg, "steady_eigenvalues"));
    a.ks = require_field(agg, "ks").get<double>();
    a.mean_gap = require_field(agg, "mean_gap").get<double>();
    a.mean_second_modulus = require_field(agg, "mean_second_modulus").get<double>();
    for (const auto& q : require_field(agg, "reference_quantiles"))
      a.reference_quantiles.push_back({q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>()});
    const auto& prov = require_field(doc, "provenance");
    report.version = require_field(prov, "version").get<std::string>();
    if (auto it = prov.find("timestamp"); it != prov.end()) report.timestamp = it->get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("report: ") + e.what());
  }
  return report;
}

std::string serialize_report(const BenchmarkReport& report) { return report_to_json(report).dump(2) + "\n"; }

void save_report(const BenchmarkReport& report, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + directory.string() + ": " + ec.message());
  write_text(directory / "report.json", serialize_report(report));

  const std::size_t n_bits = report.n_bits();
  std::ostringstream eig, probs, spectrum;
  eig << "member,index,value\n";
  probs << "member,outcome,probability\n";
  spectrum << "channel,re,im\n";
  for (const auto& m : report.members) {
    if (!m.ok) continue;
    for (std::size_t k = 0; k < m.steady_eigenvalues.size(); ++k)
      eig << m.index << ',' << k << ',' << num(m.steady_eigenvalues[k]) << '\n';
    for (std::size_t k = 0; k < m.probabilities.size(); ++k)
      probs << m.index << ',' << bitstring(k, n_bits) << ',' << num(m.probabilities[k]) << '\n';
    for (const auto& z : m.spectrum) spectrum << m.index << ',' << num(z.real()) << ',' << num(z.imag()) << '\n';
  }
  write_text(directory / "steady_eigenvalues.csv", eig.str());
  write_text(directory / "probabilities.csv", probs.str());
  write_text(directory / "spectrum.csv", spectrum.str());

  std::ostringstream cdf, quantiles, ref;
  ref << "probability,reference,sample\n";
  for (const auto& q : report.aggregates.reference_quantiles)
    ref << num(q.probability) << ',' << num(q.reference) << ',' << num(q.sample) << '\n';
  const auto pooled = report.pooled_outputs();
  if (!pooled.empty()) {
    const EmpiricalDistribution d(pooled);
    write_cdf_csv(cdf, empirical_cdf(d));
  } else {
    cdf << "value,cumulative\n";
  }
  // The normal probability plot needs at least 10 points; smaller runs get a header only.
  if (pooled.size() >= 10) {
    write_quantiles_csv(quantiles, normal_probability_points(EmpiricalDistribution(pooled)));
  } else {
    quantiles << "theoretical,sample\n";
  }
  write_text(directory / "cdf.csv", cdf.str());
  write_text(directory / "quantiles.csv", quantiles.str());
  write_text(directory / "reference_quantiles.csv", ref.str());
}

BenchmarkReport load_report(const std::filesystem::path& path) {
  const auto file = std::filesystem::is_directory(path) ? path / "report.json" : path;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, file.string() + ": " + e.what());
  }
  return report_from_json(doc);
}

}  // namespace rmtbench

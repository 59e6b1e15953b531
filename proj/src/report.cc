// Copyright 2026 The Robusta Authors
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

#include "robusta/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "robusta/error.h"
#include "robusta/tree.h"

namespace robusta {
namespace fs = std::filesystem;
namespace {

nlohmann::json Opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json CellJson(const SliceCell& c) {
  return {{"n_found", c.n_found},
          {"n_censored", c.n_censored},
          {"R_o", Opt(c.r_o)},
          {"R_star", Opt(c.r_star)},
          {"accuracy_ratio", Opt(c.accuracy_ratio)},
          {"reliable", c.reliable}};
}

nlohmann::json StatsJson(const SummaryStats& s) {
  return {{"count", s.count}, {"mean", s.mean},     {"min", s.min},
          {"max", s.max},     {"stddev", s.stddev}, {"q1", s.q1},
          {"median", s.median}, {"q3", s.q3}};
}

std::optional<double> CellPearson(const std::map<std::string, SliceCell>& cells,
                                  std::optional<double> SliceCell::*field) {
  std::vector<double> xs, ys;
  for (const auto& [label, cell] : cells) {
    if (!(cell.*field)) continue;
    xs.push_back(std::stod(label));
    ys.push_back(*(cell.*field));
  }
  try {
    return Pearson(xs, ys);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
}

std::string Num(const std::optional<double>& v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<AnalysisEntry> Analyze(const std::vector<RunRecord>& runs,
                                   const std::vector<SeedTask>& dataset,
                                   std::size_t min_slice_size) {
  std::map<std::string, std::string> references;
  for (const auto& s : dataset) {
    if (s.reference_solution) references[s.id] = *s.reference_solution;
  }
  const TreeBuilder builder = [](std::string_view code) {
    return BracketTree(code).tree;
  };

  std::vector<AnalysisEntry> entries;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& run : runs) {
    const std::string metric_name(MetricName(run.config.metric));
    if (!seen.emplace(run.config.model_id, metric_name).second) {
      throw PreconditionError("analyze: more than one run for model '" +
                              run.config.model_id + "' and metric '" +
                              metric_name + "'");
    }
    // Seed-id order keeps floating-point sums independent of completion order.
    std::vector<TippingPoint> points = run.points;
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.seed_id < b.seed_id; });

    AnalysisEntry e;
    e.model_id = run.config.model_id;
    e.metric = run.config.metric;
    e.n_points = points.size();
    double queries = 0.0;
    DistanceFamilies families;
    for (const auto& p : points) {
      queries += p.queries_used;
      if (p.status == TipStatus::kCensoredNoFailure) ++e.n_censored_no_failure;
      if (p.status == TipStatus::kCensoredByError) ++e.n_censored_by_error;
      if (p.status == TipStatus::kFound && p.ff &&
          p.ls.proximity_key > p.ff->proximity_key) {
        ++e.key_order_violations;
      }
      if (!p.family_raw.empty()) families[p.seed_id] = p.family_raw;
    }
    if (!points.empty()) e.mean_queries = queries / static_cast<double>(points.size());
    try {
      e.robustness = Robustness(points);
      e.accuracy_ratio = AccuracyRatio(e.robustness->r_o, e.robustness->r_star);
    } catch (const PreconditionError&) {
      e.robustness.reset();
    }
    e.by_topic = SliceBy(points, dataset, SliceKey::kTopic, min_slice_size);
    e.by_complexity = SliceBy(points, dataset, SliceKey::kComplexity, min_slice_size);
    e.complexity_r_o_pearson = CellPearson(e.by_complexity, &SliceCell::r_o);
    e.complexity_r_star_pearson = CellPearson(e.by_complexity, &SliceCell::r_star);
    e.nk = ComputeNkStats(points);
    e.tipping_diff = ComputeTippingDiff(points, references, builder);
    if (!families.empty()) e.distinguishability = Distinguishability(e.metric, families);
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::pair(a.model_id, MetricName(a.metric)) <
           std::pair(b.model_id, MetricName(b.metric));
  });
  return entries;
}

nlohmann::json ReportJson(const std::vector<AnalysisEntry>& entries) {
  nlohmann::json list = nlohmann::json::array();
  nlohmann::json table = nlohmann::json::object();
  for (const auto& e : entries) {
    const std::string metric(MetricName(e.metric));
    nlohmann::json j;
    j["model_id"] = e.model_id;
    j["metric_id"] = metric;
    j["n_seeds"] = e.n_points;
    j["n_found"] = e.robustness ? e.robustness->n_found : 0;
    j["n_censored_no_failure"] = e.n_censored_no_failure;
    j["n_censored_by_error"] = e.n_censored_by_error;
    j["R_o"] = e.robustness ? nlohmann::json(e.robustness->r_o) : nlohmann::json(nullptr);
    j["R_star"] =
        e.robustness ? nlohmann::json(e.robustness->r_star) : nlohmann::json(nullptr);
    j["accuracy_ratio"] = Opt(e.accuracy_ratio);
    j["key_order_violations"] = e.key_order_violations;
    j["mean_queries"] = e.mean_queries;
    nlohmann::json slices = nlohmann::json::object();
    for (const auto& [label, cell] : e.by_topic) slices["topic"][label] = CellJson(cell);
    for (const auto& [label, cell] : e.by_complexity) {
      slices["complexity"][label] = CellJson(cell);
    }
    j["slices"] = slices;
    j["correlation"] = {{"complexity_vs_R_o", Opt(e.complexity_r_o_pearson)},
                        {"complexity_vs_R_star", Opt(e.complexity_r_star_pearson)}};
    j["nk_stats"] = {{"count", e.nk.count}, {"mean_n", e.nk.mean_n}, {"mean_k", e.nk.mean_k}};
    nlohmann::json diffs = nlohmann::json::array();
    for (const auto& d : e.tipping_diff.diffs) {
      diffs.push_back({{"seed_id", d.seed_id},
                       {"dist_ls", d.dist_ls},
                       {"dist_ff", d.dist_ff},
                       {"diff", d.diff}});
    }
    j["tipping_diff"] = {
        {"diffs", diffs},
        {"summary", e.tipping_diff.summary ? StatsJson(*e.tipping_diff.summary)
                                           : nlohmann::json(nullptr)},
        {"skipped", e.tipping_diff.skipped}};
    if (e.distinguishability) {
      j["distinguishability"] = {{"uniqueness_pct", e.distinguishability->uniqueness_pct},
                                 {"distinctness", e.distinguishability->distinctness},
                                 {"differentness", e.distinguishability->differentness}};
    } else {
      j["distinguishability"] = nullptr;
    }
    list.push_back(std::move(j));
    table[metric][e.model_id] = {
        {"R_o", e.robustness ? nlohmann::json(e.robustness->r_o) : nlohmann::json(nullptr)},
        {"R_star",
         e.robustness ? nlohmann::json(e.robustness->r_star) : nlohmann::json(nullptr)}};
  }
  return {{"entries", list}, {"table", table}};
}

std::string ReportJsonText(const std::vector<AnalysisEntry>& entries) {
  return ReportJson(entries).dump(2) + "\n";
}

std::string ReportCsv(const std::vector<AnalysisEntry>& entries) {
  std::ostringstream out;
  out << "model_id,metric_id,slice_key,slice_label,n_found,n_censored,r_o,r_star,"
         "accuracy_ratio,reliable\n";
  auto row = [&](const AnalysisEntry& e, const std::string& key,
                 const std::string& label, const SliceCell& c) {
    out << CsvField(e.model_id) << ',' << MetricName(e.metric) << ',' << key << ','
        << CsvField(label) << ',' << c.n_found << ',' << c.n_censored << ','
        << Num(c.r_o) << ',' << Num(c.r_star) << ',' << Num(c.accuracy_ratio) << ','
        << (c.reliable ? "true" : "false") << '\n';
  };
  for (const auto& e : entries) {
    SliceCell global;
    global.n_censored = e.n_censored_no_failure + e.n_censored_by_error;
    if (e.robustness) {
      global.n_found = e.robustness->n_found;
      global.r_o = e.robustness->r_o;
      global.r_star = e.robustness->r_star;
      global.accuracy_ratio = e.accuracy_ratio;
      global.reliable = true;
    }
    row(e, "all", "all", global);
    for (const auto& [label, cell] : e.by_topic) row(e, "topic", label, cell);
    for (const auto& [label, cell] : e.by_complexity) row(e, "complexity", label, cell);
  }
  return out.str();
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "both") return ReportFormat::kBoth;
  throw PreconditionError("unknown report format '" + std::string(name) + "'");
}

std::vector<fs::path> EmitReport(const std::vector<AnalysisEntry>& entries,
                                 const fs::path& out_dir, ReportFormat format) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  auto write = [&](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error("cannot write " + path.string());
    written.push_back(path);
  };
  if (format != ReportFormat::kCsv) write(out_dir / "report.json", ReportJsonText(entries));
  if (format != ReportFormat::kJson) write(out_dir / "report.csv", ReportCsv(entries));
  return written;
}

}  // namespace robusta

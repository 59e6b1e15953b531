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

// Per model x metric analysis of stored runs and canonical JSON/CSV output.

#ifndef ROBUSTA_REPORT_H_
#define ROBUSTA_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "robusta/analysis.h"
#include "robusta/harness.h"

namespace robusta {

struct AnalysisEntry {
  std::string model_id;
  MetricId metric = MetricId::kLevWord;
  std::size_t n_points = 0;
  std::size_t n_censored_no_failure = 0;
  std::size_t n_censored_by_error = 0;
  std::optional<RobustnessSummary> robustness;  // unset when nothing was found
  std::optional<double> accuracy_ratio;
  // Found points with key(LS) > key(FF). Always zero for a correct explorer.
  std::size_t key_order_violations = 0;
  std::map<std::string, SliceCell> by_topic;
  std::map<std::string, SliceCell> by_complexity;
  // Correlation of complexity level with per-cell R_o / R_star.
  std::optional<double> complexity_r_o_pearson;
  std::optional<double> complexity_r_star_pearson;
  NkStats nk;
  TippingDiffResult tipping_diff;
  std::optional<DistinguishabilityReport> distinguishability;
  double mean_queries = 0.0;
};

// One entry per run, ordered by (model, metric). Two runs sharing a model and
// metric, or points naming seeds absent from `dataset`, throw
// PreconditionError.
std::vector<AnalysisEntry> Analyze(const std::vector<RunRecord>& runs,
                                   const std::vector<SeedTask>& dataset,
                                   std::size_t min_slice_size = kDefaultMinSliceSize);

// Canonical form: sorted keys, stable numeric formatting.
nlohmann::json ReportJson(const std::vector<AnalysisEntry>& entries);
std::string ReportJsonText(const std::vector<AnalysisEntry>& entries);
// Header plus one row per entry x (global + every topic and complexity cell).
std::string ReportCsv(const std::vector<AnalysisEntry>& entries);

enum class ReportFormat { kJson, kCsv, kBoth };
ReportFormat ParseReportFormat(std::string_view name);

// Writes report.json and/or report.csv into `out_dir`; returns the paths.
std::vector<std::filesystem::path> EmitReport(
    const std::vector<AnalysisEntry>& entries,
    const std::filesystem::path& out_dir, ReportFormat format);

}  // namespace robusta

#endif  // ROBUSTA_REPORT_H_

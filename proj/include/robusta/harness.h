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

// Dataset ingestion, configuration and resumable campaign orchestration.

#ifndef ROBUSTA_HARNESS_H_
#define ROBUSTA_HARNESS_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "robusta/explorer.h"
#include "robusta/seed_task.h"

namespace robusta {

// JSONL with required "id" and "prompt"; optional "topic", "complexity",
// "reference" and "language". Throws ParseError naming the line.
std::vector<SeedTask> LoadDataset(const std::filesystem::path& path);
std::vector<SeedTask> ParseDataset(std::istream& in, const std::string& source);

// `key = value` lines; '#' starts a comment outside quotes; values may be
// double-quoted with \" and \\ escapes. Throws ParseError naming the line.
std::map<std::string, std::string> ParseConfig(std::istream& in,
                                               const std::string& source);
std::map<std::string, std::string> LoadConfigFile(const std::filesystem::path& path);

struct CampaignConfig {
  std::string model_id;
  MetricId metric = MetricId::kLevWord;
  OracleSpec oracle;
  ExplorationParams params;
};

nlohmann::json CanonicalConfig(const CampaignConfig& config);
// SHA-256 over the canonical config; changes with any result-affecting field.
std::string ConfigDigest(const CampaignConfig& config);

struct RunRecord {
  std::string run_id;
  CampaignConfig config;
  std::string config_digest;
  std::string started_at;
  std::string finished_at;
  bool complete = false;
  // Dataset order.
  std::vector<TippingPoint> points;
};

struct CampaignOptions {
  std::size_t parallelism = 1;
  // Run directory holding run.json and points.jsonl. Reused for resume.
  std::filesystem::path out_dir;
  // Called after each seed is persisted; returning true stops the campaign
  // before any further seed starts.
  std::function<bool(const TippingPoint&)> after_seed;
};

// Explores every seed that has no stored point yet. Seeds whose exploration
// hit an error are recorded as censored_by_error and the campaign continues.
RunRecord RunCampaign(const std::vector<SeedTask>& dataset,
                      const ModelHandle& model, const MetricScorer& metric,
                      const OracleSpec& oracle, const EmbeddingStore& store,
                      const ExplorationParams& params,
                      const CampaignOptions& options);

// Reads a run directory written by RunCampaign.
RunRecord LoadRun(const std::filesystem::path& dir);

}  // namespace robusta

#endif  // ROBUSTA_HARNESS_H_

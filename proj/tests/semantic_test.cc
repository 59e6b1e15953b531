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

#include <atomic>

#include <gtest/gtest.h>

#include "json.hpp"
#include "robusta/error.h"
#include "robusta/metrics.h"
#include "robusta/semantic_scorer.h"
#include "stub_server.h"

namespace robusta {
namespace {

SemanticScorerOptions Options(const std::string& url) {
  SemanticScorerOptions o;
  o.endpoint = url;
  o.timeout = std::chrono::milliseconds(2000);
  o.retries = 2;
  o.initial_backoff = std::chrono::milliseconds(5);
  return o;
}

TEST(SemanticScorerTest, SendsPairAndParsesScore) {
  testing::StubServer server([](const httplib::Request& req, httplib::Response& res) {
    const auto j = nlohmann::json::parse(req.body);
    const double s = j["text_a"] == j["text_b"] ? 1.25 : 0.5;
    res.set_content(nlohmann::json{{"score", s}}.dump(), "application/json");
  });
  SemanticScorer scorer(Options(server.url("/score")));
  EXPECT_EQ(scorer.Score("a", "a"), 1.25);
  EXPECT_EQ(scorer.Score("a", "b"), 0.5);
  const MetricScorer metric(MetricId::kSemantic, nullptr,
                            std::make_shared<SemanticScorer>(Options(server.url())));
  EXPECT_EQ(metric.Raw("x", "y"), 0.5);
  EXPECT_EQ(metric.Key(0.5), -0.5);
}

TEST(SemanticScorerTest, NonNumericScoreIsRetriedThenUnavailable) {
  testing::StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"score":"x"})", "application/json");
  });
  SemanticScorer scorer(Options(server.url()));
  try {
    scorer.Score("a", "b");
    FAIL();
  } catch (const MetricUnavailableError& e) {
    EXPECT_TRUE(e.retriable());
  }
  EXPECT_EQ(server.requests(), 3);
}

TEST(SemanticScorerTest, ClientErrorFailsFast) {
  testing::StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 422;
  });
  SemanticScorer scorer(Options(server.url()));
  try {
    scorer.Score("a", "b");
    FAIL();
  } catch (const MetricUnavailableError& e) {
    EXPECT_FALSE(e.retriable());
  }
  EXPECT_EQ(server.requests(), 1);
}

TEST(SemanticScorerTest, RecoversFromTransientServerError) {
  std::atomic<int> n{0};
  testing::StubServer server([&](const httplib::Request&, httplib::Response& res) {
    if (n++ == 0) {
      res.status = 500;
      return;
    }
    res.set_content(R"({"score":0.9})", "application/json");
  });
  SemanticScorer scorer(Options(server.url()));
  EXPECT_EQ(scorer.Score("a", "b"), 0.9);
  EXPECT_EQ(server.requests(), 2);
}

TEST(SemanticScorerTest, TimeoutIsTransportFailure) {
  testing::StubServer server([](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(R"({"score":0.9})", "application/json");
  });
  auto opts = Options(server.url());
  opts.timeout = std::chrono::milliseconds(100);
  opts.retries = 0;
  SemanticScorer scorer(opts);
  EXPECT_THROW(scorer.Score("a", "b"), MetricUnavailableError);
}

TEST(SemanticScorerTest, BadEndpoint) {
  EXPECT_THROW(SemanticScorer(Options("not a url")), ParseError);
}

}  // namespace
}  // namespace robusta

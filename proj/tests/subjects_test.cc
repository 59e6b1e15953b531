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

#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "json.hpp"
#include "robusta/error.h"
#include "robusta/hashing.h"
#include "robusta/log.h"
#include "robusta/subjects.h"
#include "stub_server.h"
#include "test_support.h"

namespace robusta {
namespace {

using testing::TempDir;

class EchoModel : public Model {
 public:
  explicit EchoModel(std::string id = "echo") : id_(std::move(id)) {}
  const std::string& id() const override { return id_; }
  ModelKind kind() const override { return ModelKind::kMock; }
  ModelResponse Generate(std::string_view prompt) override {
    ++calls;
    return {"out:" + std::string(prompt), 5, false};
  }
  int calls = 0;

 private:
  std::string id_;
};

// Captures warnings for the lifetime of the object.
class LogCapture {
 public:
  LogCapture() {
    old_ = SetLogSink([this](LogLevel, std::string_view msg) {
      std::lock_guard lock(mu_);
      lines_.emplace_back(msg);
    });
  }
  ~LogCapture() { SetLogSink(old_); }
  std::size_t count() {
    std::lock_guard lock(mu_);
    return lines_.size();
  }

 private:
  LogSink old_;
  std::mutex mu_;
  std::vector<std::string> lines_;
};

TEST(HashingTest, Sha256KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(ResponseCacheTest, DigestSeparatesFields) {
  EXPECT_NE(ResponseCache::Digest("ab", "c"), ResponseCache::Digest("a", "bc"));
  EXPECT_EQ(ResponseCache::Digest("m", "p"), Sha256Hex(std::string("m\0p", 3)));
}

TEST(ResponseCacheTest, RoundTripAndLayout) {
  TempDir dir;
  const ResponseCache cache(dir.path());
  const std::string d = ResponseCache::Digest("m", "hello");
  EXPECT_FALSE(cache.Get(d));
  cache.Put(d, {"m", d, "world", 12, "2026-01-01T00:00:00Z"});
  const auto e = cache.Get(d);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->output_text, "world");
  EXPECT_EQ(e->latency_ms, 12);
  EXPECT_EQ(cache.PathFor(d), dir.path() / d.substr(0, 2) / (d + ".json"));
  EXPECT_TRUE(std::filesystem::exists(cache.PathFor(d)));
}

TEST(ResponseCacheTest, CorruptEntryIsMissAndLogged) {
  TempDir dir;
  const ResponseCache cache(dir.path());
  const std::string d = ResponseCache::Digest("m", "x");
  cache.Put(d, {"m", d, "y", 0, "t"});
  std::ofstream(cache.PathFor(d), std::ios::trunc) << "{not json";
  LogCapture logs;
  EXPECT_FALSE(cache.Get(d));
  EXPECT_GE(logs.count(), 1u);
}

TEST(ResponseCacheTest, TenThousandDistinctKeys) {
  TempDir dir;
  const ResponseCache cache(dir.path());
  std::set<std::string> digests;
  for (int i = 0; i < 10000; ++i) {
    const std::string model = "m" + std::to_string(i % 7);
    const std::string prompt = "prompt " + std::to_string(i);
    const std::string d = ResponseCache::Digest(model, prompt);
    ASSERT_TRUE(digests.insert(d).second);
    cache.Put(d, {model, d, "o" + std::to_string(i), 0, "t"});
  }
  for (int i = 0; i < 10000; i += 37) {
    const std::string model = "m" + std::to_string(i % 7);
    const auto e = cache.Get(ResponseCache::Digest(model, "prompt " + std::to_string(i)));
    ASSERT_TRUE(e);
    EXPECT_EQ(e->output_text, "o" + std::to_string(i));
  }
  const auto stats = cache.Inspect();
  EXPECT_EQ(stats.entries, 10000u);
  EXPECT_EQ(stats.per_model.size(), 7u);
  EXPECT_EQ(cache.Evict(std::string("m0")), stats.per_model.at("m0"));
  EXPECT_EQ(cache.Inspect().entries, 10000u - stats.per_model.at("m0"));
  EXPECT_EQ(cache.Evict(std::nullopt), 10000u - stats.per_model.at("m0"));
  EXPECT_EQ(cache.Inspect().entries, 0u);
}

TEST(ModelHandleTest, MissThenHit) {
  TempDir dir;
  auto model = std::make_shared<EchoModel>();
  const ModelHandle handle(model, std::make_shared<ResponseCache>(dir.path()), false);
  const auto first = handle.Query("p");
  EXPECT_FALSE(first.from_cache);
  EXPECT_EQ(first.output_text, "out:p");
  const auto second = Query(handle, "p");
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(second.output_text, "out:p");
  EXPECT_EQ(model->calls, 1);
  // A new handle over the same directory still hits.
  const ModelHandle again(model, std::make_shared<ResponseCache>(dir.path()));
  EXPECT_TRUE(again.Query("p").from_cache);
  EXPECT_EQ(model->calls, 1);
}

TEST(ModelHandleTest, MismatchedEntryIsNotServed) {
  TempDir dir;
  auto cache = std::make_shared<ResponseCache>(dir.path());
  const std::string d = ResponseCache::Digest("echo", "p");
  cache->Put(d, {"other-model", d, "stale", 0, "t"});
  auto model = std::make_shared<EchoModel>();
  const ModelHandle handle(model, cache);
  EXPECT_EQ(handle.Query("p").output_text, "out:p");
  EXPECT_EQ(model->calls, 1);
}

TEST(ModelHandleTest, ExtractsCode) {
  EXPECT_EQ(ExtractCode("Here:\n```java\nint x;\n```\nDone"), "int x;\n");
  EXPECT_EQ(ExtractCode("no fences"), "no fences");
  EXPECT_EQ(ExtractCode("```\nopen"), "open");
  class Fenced : public EchoModel {
   public:
    ModelResponse Generate(std::string_view) override { return {"a\n```\ncode\n```", 0, false}; }
  };
  const ModelHandle handle(std::make_shared<Fenced>());
  EXPECT_EQ(handle.Query("p").output_text, "code\n");
}

TEST(ThresholdMockTest, SafeZone) {
  EmbeddingStore store(1);
  const SeedTask seed{"s", "alpha beta gamma", "t", 1, std::string("CODE"), {}};
  const MetricScorer scorer(MetricId::kLevWord, &store);
  auto mock = MakeThresholdMock({seed}, scorer, 1.0);
  EXPECT_EQ(mock->Generate(seed.prompt).output_text, "CODE");
  EXPECT_EQ(mock->Generate("alpha beta delta").output_text, "CODE");
  EXPECT_EQ(mock->Generate("alpha zeta delta").output_text, kDefaultFailureOutput);
  // theta at the self key: only the seed itself succeeds.
  auto strict = MakeThresholdMock({seed}, scorer, 0.0);
  EXPECT_EQ(strict->Generate(seed.prompt).output_text, "CODE");
  EXPECT_EQ(strict->Generate("alpha beta delta").output_text, kDefaultFailureOutput);
  EXPECT_THROW(MakeThresholdMock({seed}, scorer, -1.0), PreconditionError);
  auto two = MakeThresholdMock({seed}, scorer, 2.0);
  EXPECT_EQ(two->Generate("omega zeta delta").output_text, kDefaultFailureOutput);
  EXPECT_EQ(two->Generate("alpha beta delta").output_text, "CODE");
  EXPECT_EQ(mock->kind(), ModelKind::kMock);
}

TEST(ThresholdMockTest, NearestSeedWins) {
  const SeedTask a{"a", "one two three", "t", 1, {}, {}};
  const SeedTask b{"b", "four five six", "t", 1, {}, {}};
  auto mock = MakeThresholdMock({a, b}, "lev_word", 2.0, nullptr);
  EXPECT_EQ(mock->Generate("four five seven").output_text, "<<base output for b>>");
  EXPECT_EQ(mock->Generate("one two seven").output_text, "<<base output for a>>");
  EXPECT_THROW(MakeThresholdMock({a}, "nope", 1.0, nullptr), ParseError);
}

RemoteModelOptions Fast(const std::string& url) {
  RemoteModelOptions o;
  o.id = "remote-x";
  o.endpoint = url;
  o.timeout = std::chrono::milliseconds(2000);
  o.retries = 2;
  o.initial_backoff = std::chrono::milliseconds(5);
  return o;
}

TEST(RemoteModelTest, SendsPromptAndBearer) {
  std::string auth;
  testing::StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    const auto j = nlohmann::json::parse(req.body);
    res.set_content(nlohmann::json{{"output", "re:" + j["prompt"].get<std::string>()}}.dump(),
                    "application/json");
  });
  setenv("ROBUSTA_API_KEY", "sekret", 1);
  auto model = MakeRemoteModel(Fast(server.url()));
  const auto r = model->Generate("hi");
  unsetenv("ROBUSTA_API_KEY");
  EXPECT_EQ(r.output_text, "re:hi");
  EXPECT_EQ(auth, "Bearer sekret");
  EXPECT_EQ(model->kind(), ModelKind::kRemote);
}

TEST(RemoteModelTest, ClientErrorIsNotRetried) {
  testing::StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 400;
    res.set_content("bad", "text/plain");
  });
  auto model = MakeRemoteModel(Fast(server.url()));
  try {
    model->Generate("x");
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_FALSE(e.retriable());
  }
  EXPECT_EQ(server.requests(), 1);
}

TEST(RemoteModelTest, ServerErrorsAreRetried) {
  std::atomic<int> n{0};
  testing::StubServer server([&](const httplib::Request&, httplib::Response& res) {
    if (++n < 3) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"output":"ok"})", "application/json");
  });
  auto model = MakeRemoteModel(Fast(server.url()));
  EXPECT_EQ(model->Generate("x").output_text, "ok");
  EXPECT_EQ(server.requests(), 3);
}

TEST(RemoteModelTest, ExhaustedRetriesAndProtocolErrors) {
  testing::StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"output": 42})", "application/json");
  });
  auto model = MakeRemoteModel(Fast(server.url()));
  try {
    model->Generate("x");
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_TRUE(e.retriable());
  }
  EXPECT_EQ(server.requests(), 3);
}

TEST(RemoteModelTest, UnreachableEndpoint) {
  auto opts = Fast("http://127.0.0.1:1/none");
  opts.retries = 0;
  EXPECT_THROW(MakeRemoteModel(opts)->Generate("x"), ModelError);
  EXPECT_THROW(MakeRemoteModel(Fast("ftp://x")), ParseError);
}

TEST(RemoteModelTest, ConcurrentRequestsAreBounded) {
  std::atomic<int> active{0}, peak{0};
  testing::StubServer server([&](const httplib::Request&, httplib::Response& res) {
    const int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --active;
    res.set_content(R"({"output":"ok"})", "application/json");
  });
  SetGlobalInFlightLimit(2);
  auto model = MakeRemoteModel(Fast(server.url()));
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) threads.emplace_back([&] { model->Generate("x"); });
  for (auto& t : threads) t.join();
  SetGlobalInFlightLimit(8);
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(server.requests(), 6);
}

}  // namespace
}  // namespace robusta

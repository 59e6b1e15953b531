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

// Thin JSON-over-HTTP POST shared by the remote scorer and remote models.

#ifndef ROBUSTA_HTTP_CLIENT_H_
#define ROBUSTA_HTTP_CLIENT_H_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace robusta {

struct Url {
  std::string scheme;  // http or https
  std::string host;
  int port = 0;
  std::string path;  // starts with '/'
};

// Throws ParseError on anything but http(s)://host[:port][/path].
Url ParseUrl(const std::string& url);

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Null on transport failure (connect, timeout, reset).
std::optional<HttpResponse> PostJson(
    const Url& url, const std::string& body,
    const std::map<std::string, std::string>& headers,
    std::chrono::milliseconds timeout);

// Caps the number of concurrent requests.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(std::size_t limit) : limit_(limit == 0 ? 1 : limit) {}

  class Slot {
   public:
    explicit Slot(InFlightLimiter& owner) : owner_(owner) { owner_.Acquire(); }
    ~Slot() { owner_.Release(); }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

   private:
    InFlightLimiter& owner_;
  };

 private:
  void Acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [this] { return active_ < limit_; });
    ++active_;
  }
  void Release() {
    {
      std::lock_guard lock(mu_);
      --active_;
    }
    cv_.notify_one();
  }

  std::size_t limit_;
  std::size_t active_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
};

}  // namespace robusta

#endif  // ROBUSTA_HTTP_CLIENT_H_

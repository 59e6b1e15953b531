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

#include "robusta/http_client.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "robusta/error.h"

namespace robusta {

Url ParseUrl(const std::string& url) {
  Url out;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ParseError("url '" + url + "' has no scheme");
  }
  out.scheme = url.substr(0, scheme_end);
  if (out.scheme != "http" && out.scheme != "https") {
    throw ParseError("url '" + url + "': only http and https are supported");
  }
  std::string rest = url.substr(scheme_end + 3);
  const auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    try {
      out.port = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw ParseError("url '" + url + "' has a malformed port");
    }
    authority = authority.substr(0, colon);
  } else {
    out.port = out.scheme == "https" ? 443 : 80;
  }
  if (authority.empty()) throw ParseError("url '" + url + "' has no host");
  out.host = authority;
  return out;
}

std::optional<HttpResponse> PostJson(
    const Url& url, const std::string& body,
    const std::map<std::string, std::string>& headers,
    std::chrono::milliseconds timeout) {
  httplib::Client client(url.scheme + "://" + url.host + ":" +
                         std::to_string(url.port));
  const auto secs = timeout.count() / 1000;
  const auto usecs = (timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(url.path, h, body, "application/json");
  if (!res) return std::nullopt;
  return HttpResponse{res->status, res->body};
}

}  // namespace robusta

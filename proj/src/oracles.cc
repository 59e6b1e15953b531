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

#include "robusta/oracles.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "robusta/error.h"
#include "robusta/log.h"

namespace robusta {
namespace fs = std::filesystem;
namespace {

// Removes the directory tree on scope exit.
class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "robusta-oracle-XXXXXX").string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    if (::mkdtemp(buf.data()) == nullptr) {
      throw OracleError("cannot create oracle temp directory");
    }
    path_ = buf.data();
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void WriteFile(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw OracleError("cannot write " + path.string());
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string ReplaceAll(std::string text, std::string_view from,
                       const std::string& to) {
  for (auto pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string StripComments(std::string_view code) {
  std::string out;
  out.reserve(code.size());
  for (std::size_t i = 0; i < code.size();) {
    if (code.compare(i, 2, "/*") == 0) {
      const auto end = code.find("*/", i + 2);
      i = end == std::string_view::npos ? code.size() : end + 2;
      out.push_back(' ');
    } else if (code.compare(i, 2, "//") == 0 || code[i] == '#') {
      while (i < code.size() && code[i] != '\n') ++i;
    } else {
      out.push_back(code[i++]);
    }
  }
  return out;
}

// Runs `command` through /bin/sh. Returns the exit status or throws.
int RunShell(const std::string& command, const fs::path& dir,
             std::chrono::seconds timeout) {
  const fs::path out_path = dir / "stdout.txt";
  const fs::path err_path = dir / "stderr.txt";
  const pid_t pid = ::fork();
  if (pid < 0) throw OracleError("fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    const int out_fd = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    const int err_fd = ::open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (out_fd >= 0) ::dup2(out_fd, STDOUT_FILENO);
    if (err_fd >= 0) ::dup2(err_fd, STDERR_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  int status = 0;
  while (true) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw OracleError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw OracleError("oracle command timed out after " +
                        std::to_string(timeout.count()) + "s: " + command);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  const std::string out = ReadAll(out_path);
  const std::string err = ReadAll(err_path);
  if (!out.empty() || !err.empty()) {
    Log(LogLevel::kInfo, "oracle `" + command + "` stdout: " + out +
                             " stderr: " + err);
  }
  if (!WIFEXITED(status)) {
    throw OracleError("oracle command killed by a signal: " + command);
  }
  return WEXITSTATUS(status);
}

}  // namespace

std::string_view OracleKindName(OracleKind kind) {
  switch (kind) {
    case OracleKind::kExact: return "exact";
    case OracleKind::kNormalized: return "normalized";
    case OracleKind::kExternalCommand: return "external_command";
  }
  return "?";
}

OracleKind ParseOracleKind(std::string_view name) {
  if (name == "exact") return OracleKind::kExact;
  if (name == "normalized") return OracleKind::kNormalized;
  if (name == "external_command" || name == "command") {
    return OracleKind::kExternalCommand;
  }
  throw ParseError("unknown oracle kind '" + std::string(name) + "'");
}

void Validate(const OracleSpec& spec) {
  if (spec.kind != OracleKind::kExternalCommand) return;
  if (!spec.command_template ||
      spec.command_template->find("{A}") == std::string::npos ||
      spec.command_template->find("{B}") == std::string::npos) {
    throw PreconditionError(
        "external oracle template must contain {A} and {B} placeholders");
  }
  if (spec.timeout.count() <= 0) {
    throw PreconditionError("external oracle timeout must be positive");
  }
}

std::string NormalizeCode(std::string_view code) {
  const std::string stripped = StripComments(code);
  std::string out;
  std::istringstream lines(stripped);
  std::string line;
  while (std::getline(lines, line)) {
    std::string collapsed;
    bool pending_space = false;
    for (char c : line) {
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        pending_space = !collapsed.empty();
      } else {
        if (pending_space) collapsed.push_back(' ');
        pending_space = false;
        collapsed.push_back(c);
      }
    }
    if (collapsed.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += collapsed;
  }
  return out;
}

bool Fail(const OracleSpec& oracle, std::string_view out_seed,
          std::string_view out_mutant) {
  switch (oracle.kind) {
    case OracleKind::kExact:
      return out_seed != out_mutant;
    case OracleKind::kNormalized:
      return NormalizeCode(out_seed) != NormalizeCode(out_mutant);
    case OracleKind::kExternalCommand: {
      Validate(oracle);
      TempDir dir;
      const fs::path a = dir.path() / "A.txt";
      const fs::path b = dir.path() / "B.txt";
      WriteFile(a, out_seed);
      WriteFile(b, out_mutant);
      std::string command = ReplaceAll(*oracle.command_template, "{A}",
                                       "'" + a.string() + "'");
      command = ReplaceAll(std::move(command), "{B}", "'" + b.string() + "'");
      const int code = RunShell(command, dir.path(), oracle.timeout);
      if (code == 0) return false;
      if (code == 1) return true;
      throw OracleError("oracle command exited with " + std::to_string(code) +
                        ": " + command);
    }
  }
  throw Error("unreachable oracle kind");
}

}  // namespace robusta

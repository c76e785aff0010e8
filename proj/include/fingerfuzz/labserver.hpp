// Copyright 2026 The fingerfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FINGERFUZZ_LABSERVER_HPP
#define FINGERFUZZ_LABSERVER_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fingerfuzz/error.hpp"

namespace fingerfuzz {

class ScriptError : public ParseError {
 public:
  using ParseError::ParseError;
};

struct ScriptReply {
  int code = 0;
  std::string text;
  friend bool operator==(const ScriptReply&, const ScriptReply&) = default;
};

struct ArgPredicate {
  enum class Kind { kAny, kLenGt, kNonPrintable, kEmpty };
  Kind kind = Kind::kAny;
  std::size_t length = 0;  // for kLenGt

  bool test(std::string_view arg) const noexcept;
  friend bool operator==(const ArgPredicate&, const ArgPredicate&) = default;
};

struct ScriptAction {
  enum class Kind { kReply, kMultiline, kDrop, kSilence };
  Kind kind = Kind::kReply;
  int code = 0;
  std::vector<std::string> lines;  // one entry for kReply

  // Bytes put on the wire; empty for kDrop and kSilence.
  std::string render() const;
  std::string describe() const;
  friend bool operator==(const ScriptAction&, const ScriptAction&) = default;
};

struct Rule {
  std::string command;  // uppercase mnemonic or "*"
  ArgPredicate predicate;
  ScriptAction action;
  friend bool operator==(const Rule&, const Rule&) = default;
};

// Behavior table of a lab responder. After login every request line maps to
// exactly one action through `respond`, independent of earlier lines.
struct ServerScript {
  std::string name;
  ScriptReply greeting{220, "ready"};
  int login_user = 331;
  int login_pass = 230;
  std::vector<Rule> rules;
  ScriptReply default_reply{502, "not implemented"};

  // First matching rule, or the default reply.
  ScriptAction respond(std::string_view request) const;

  friend bool operator==(const ServerScript&, const ServerScript&) = default;
};

// Line-oriented script text:
//   name <label>
//   greeting <code> <text>
//   login USER=<code> PASS=<code>
//   rule <CMD|*> <ANY|LEN_GT:n|NONPRINT|EMPTY> <REPLY:code:text|MULTI:code:l1|l2|DROP|SILENCE>
//   default <code> <text>
// Blank lines and lines starting with `#` are ignored. Throws ScriptError
// with the offending line number.
ServerScript parse_script(std::string_view text);
ServerScript load_script(const std::string& path);
std::string save_script(const ServerScript& script);

// Semantic problems (reply codes outside 100..599, empty multiline bodies).
std::vector<std::string> validate_script(const ServerScript& script);

// Deterministic FTP control-connection responder. Accepts connections on a
// background thread; each connection is served on its own thread. Stops and
// joins everything on destruction.
class LabServer {
 public:
  using Logger = std::function<void(std::string_view request,
                                    std::string_view action)>;

  // Port 0 binds an ephemeral port; see port(). Throws IoError when the
  // address cannot be bound.
  LabServer(ServerScript script, std::uint16_t port,
            std::string bind_host = "127.0.0.1", Logger logger = {});
  ~LabServer();
  LabServer(const LabServer&) = delete;
  LabServer& operator=(const LabServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  const ServerScript& script() const noexcept { return *script_; }
  std::size_t connections_accepted() const noexcept { return accepted_.load(); }
  void stop();

 private:
  struct Client {
    int fd = -1;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void serve_client(Client& client);
  void reap_finished();

  std::shared_ptr<const ServerScript> script_;
  Logger logger_;
  int listen_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> accepted_{0};
  std::mutex clients_mu_;
  std::list<Client> clients_;
  std::thread acceptor_;
};

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_LABSERVER_HPP

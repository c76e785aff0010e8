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

#ifndef FINGERFUZZ_TESTS_LAB_FIXTURE_HPP
#define FINGERFUZZ_TESTS_LAB_FIXTURE_HPP

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <thread>

#include "fingerfuzz/fuzzgen.hpp"
#include "fingerfuzz/labserver.hpp"
#include "fingerfuzz/reply.hpp"
#include "fingerfuzz/wire_ftp.hpp"

namespace fftest {

inline std::unique_ptr<fingerfuzz::LabServer> start_lab(const std::string& script_text) {
  return std::make_unique<fingerfuzz::LabServer>(fingerfuzz::parse_script(script_text), 0);
}

// Short timeouts so sentinel paths finish quickly on loopback.
inline fingerfuzz::TargetSpec local_target(std::uint16_t port) {
  fingerfuzz::TargetSpec t;
  t.host = "127.0.0.1";
  t.port = port;
  t.reply_timeout = fingerfuzz::Millis(150);
  t.drain_window = fingerfuzz::Millis(1);
  t.connect_timeout = fingerfuzz::Millis(1000);
  return t;
}

// Accepts one connection, writes `payload`, then keeps the socket open until
// destroyed. For replies the lab server cannot produce.
class RawServer {
 public:
  explicit RawServer(std::string payload) : payload_(std::move(payload)) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in a{};
    a.sin_family = AF_INET;
    a.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(fd_, reinterpret_cast<sockaddr*>(&a), sizeof a);
    ::listen(fd_, 1);
    socklen_t len = sizeof a;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&a), &len);
    port_ = ntohs(a.sin_port);
    thread_ = std::thread([this] {
      client_ = ::accept(fd_, nullptr, nullptr);
      if (client_ >= 0) ::send(client_, payload_.data(), payload_.size(), MSG_NOSIGNAL);
    });
  }
  ~RawServer() {
    ::shutdown(fd_, SHUT_RDWR);
    thread_.join();
    if (client_ >= 0) ::close(client_);
    ::close(fd_);
  }
  std::uint16_t port() const { return port_; }

 private:
  std::string payload_;
  int fd_ = -1;
  int client_ = -1;
  std::uint16_t port_ = 0;
  std::thread thread_;
};

// A port with nothing listening on it (bound, then released).
inline std::uint16_t closed_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in a{};
  a.sin_family = AF_INET;
  a.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&a), sizeof a);
  socklen_t len = sizeof a;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&a), &len);
  ::close(fd);
  return ntohs(a.sin_port);
}

// What a scan of `script` must record for each record, read straight off the
// rule table.
inline std::vector<fingerfuzz::ReplyObservation> scripted_vector(
    const fingerfuzz::ServerScript& script, const fingerfuzz::FuzzCollection& c) {
  using K = fingerfuzz::ScriptAction::Kind;
  std::vector<fingerfuzz::ReplyObservation> out;
  for (const auto& r : c.records) {
    const auto a = script.respond(r.bytes);
    if (a.kind == K::kDrop)
      out.push_back(fingerfuzz::ReplyObservation::dropped());
    else if (a.kind == K::kSilence)
      out.push_back(fingerfuzz::ReplyObservation::timeout());
    else
      out.push_back(fingerfuzz::ReplyObservation::code(a.code));
  }
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("fingerfuzz-test-" + std::to_string(rd()) + std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fftest

#endif  // FINGERFUZZ_TESTS_LAB_FIXTURE_HPP

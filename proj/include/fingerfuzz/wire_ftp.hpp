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

#ifndef FINGERFUZZ_WIRE_FTP_HPP
#define FINGERFUZZ_WIRE_FTP_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fingerfuzz/error.hpp"
#include "fingerfuzz/reply.hpp"

namespace fingerfuzz {

using Millis = std::chrono::milliseconds;

struct TargetSpec {
  std::string host = "127.0.0.1";
  std::uint16_t port = 21;
  std::string username = "anonymous";
  std::string password = "guest@example.com";
  Millis reply_timeout{5000};
  Millis drain_window{200};
  Millis connect_timeout{10000};

  // Throws ConfigError.
  void validate() const;
  std::string descriptor() const { return host + ":" + std::to_string(port); }
};

// TCP connect failed or timed out.
class ConnectionError : public Error {
 public:
  using Error::Error;
};

// Local socket failure that is not a peer hang-up; aborts a scan.
class TransportError : public Error {
 public:
  using Error::Error;
};

struct LoginOutcome {
  ReplyObservation user;
  std::optional<ReplyObservation> pass;
};

class LoginError : public Error {
 public:
  LoginError(const std::string& what, LoginOutcome outcome)
      : Error(what), outcome_(outcome) {}
  const LoginOutcome& outcome() const noexcept { return outcome_; }

 private:
  LoginOutcome outcome_;
};

struct Connection;

// One FTP control connection. Move-only; the socket closes with the object.
// Strictly sequential: one request in flight at a time.
class Session {
 public:
  Session() = default;
  Session(Session&& other) noexcept;
  Session& operator=(Session&& other) noexcept;
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;
  ~Session();

  bool is_open() const noexcept { return fd_ >= 0; }
  void close() noexcept;

  // Sends `request` + CR LF and reads one reply. See read_reply().
  ReplyObservation exchange(std::string_view request);

  // Reads one reply within reply_timeout, then discards whatever else
  // arrives until a drain_window passes in silence. A peer hang-up closes the
  // session.
  ReplyObservation read_reply();

 private:
  friend Connection connect(const TargetSpec& target);
  Session(int fd, const TargetSpec& target) : fd_(fd), target_(target) {}

  void drain();
  // Discards bytes that are already buffered without waiting. Closes the
  // session if the peer has hung up.
  void discard_pending();

  int fd_ = -1;
  TargetSpec target_;
};

struct Connection {
  Session session;
  ReplyObservation greeting;
};

// Opens the control connection and reads the greeting. Throws
// ConnectionError on refusal, resolution failure or connect timeout.
Connection connect(const TargetSpec& target);

// USER, then PASS when the server asks for it (331/332). Succeeds on a final
// 230 or 202; otherwise throws LoginError carrying what was observed.
LoginOutcome login(Session& session, const std::string& username,
                   const std::string& password);

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_WIRE_FTP_HPP

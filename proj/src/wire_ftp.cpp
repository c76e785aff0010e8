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

#include "fingerfuzz/wire_ftp.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>

namespace fingerfuzz {
namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left =
      std::chrono::duration_cast<Millis>(deadline - Clock::now()).count();
  return left > 0 ? static_cast<int>(left) : 0;
}

// poll() for readability. Returns >0 readable, 0 timeout.
int wait_readable(int fd, int timeout_ms) {
  for (;;) {
    pollfd p{fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, timeout_ms);
    if (rc >= 0) return rc;
    if (errno != EINTR)
      throw TransportError(std::string("poll: ") + std::strerror(errno));
  }
}

bool is_hangup_errno(int e) {
  return e == ECONNRESET || e == EPIPE || e == ENOTCONN || e == ECONNABORTED;
}

}  // namespace

void TargetSpec::validate() const {
  if (host.empty()) throw ConfigError("host", "empty host");
  if (port == 0) throw ConfigError("port", "port must be in 1..65535");
  if (reply_timeout.count() <= 0)
    throw ConfigError("reply_timeout", "must be positive");
  if (connect_timeout.count() <= 0)
    throw ConfigError("connect_timeout", "must be positive");
  if (drain_window.count() < 0)
    throw ConfigError("drain_window", "must not be negative");
  if (drain_window >= reply_timeout)
    throw ConfigError("drain_window", "must be shorter than reply_timeout");
}

Session::Session(Session&& other) noexcept
    : fd_(other.fd_), target_(std::move(other.target_)) {
  other.fd_ = -1;
}

Session& Session::operator=(Session&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    target_ = std::move(other.target_);
    other.fd_ = -1;
  }
  return *this;
}

Session::~Session() { close(); }

void Session::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Session::discard_pending() {
  std::array<char, 4096> buf{};
  while (is_open() && wait_readable(fd_, 0) > 0) {
    const ssize_t n = ::recv(fd_, buf.data(), buf.size(), MSG_DONTWAIT);
    if (n > 0) continue;
    if (n == 0) {
      close();
      return;
    }
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) return;
    if (is_hangup_errno(errno)) {
      close();
      return;
    }
    throw TransportError(std::string("recv: ") + std::strerror(errno));
  }
}

void Session::drain() {
  std::array<char, 4096> buf{};
  const auto limit = Clock::now() + target_.reply_timeout;
  while (is_open() && Clock::now() < limit) {
    const int wait = static_cast<int>(
        std::min<long long>(target_.drain_window.count(), remaining_ms(limit)));
    if (wait_readable(fd_, wait) == 0) return;
    const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n > 0) continue;
    if (n == 0) {
      close();
      return;
    }
    if (errno == EINTR) continue;
    if (is_hangup_errno(errno)) {
      close();
      return;
    }
    throw TransportError(std::string("recv: ") + std::strerror(errno));
  }
}

ReplyObservation Session::read_reply() {
  if (!is_open()) return ReplyObservation::dropped();
  ReplyParser parser;
  std::array<char, 4096> buf{};
  const auto deadline = Clock::now() + target_.reply_timeout;
  for (;;) {
    const int wait = remaining_ms(deadline);
    if (wait == 0 || wait_readable(fd_, wait) == 0) {
      const auto obs = parser.finish(false);
      if (obs.kind() == ReplyKind::kGarbled) drain();
      return obs;
    }
    const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n == 0) {
      close();
      return parser.finish(true);
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      if (is_hangup_errno(errno)) {
        close();
        return parser.finish(true);
      }
      throw TransportError(std::string("recv: ") + std::strerror(errno));
    }
    parser.feed(std::string_view(buf.data(), static_cast<std::size_t>(n)));
    if (parser.state() != ReplyParser::State::kNeedMore) {
      drain();
      return parser.finish(false);
    }
  }
}

ReplyObservation Session::exchange(std::string_view request) {
  discard_pending();
  if (!is_open()) return ReplyObservation::dropped();
  std::string wire(request);
  wire += "\r\n";
  std::size_t sent = 0;
  while (sent < wire.size()) {
    const ssize_t n =
        ::send(fd_, wire.data() + sent, wire.size() - sent, MSG_NOSIGNAL);
    if (n >= 0) {
      sent += static_cast<std::size_t>(n);
      continue;
    }
    if (errno == EINTR) continue;
    if (is_hangup_errno(errno)) {
      close();
      return ReplyObservation::dropped();
    }
    throw TransportError(std::string("send: ") + std::strerror(errno));
  }
  return read_reply();
}

Connection connect(const TargetSpec& target) {
  target.validate();
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(target.port);
  if (const int rc = ::getaddrinfo(target.host.c_str(), port.c_str(), &hints, &res);
      rc != 0)
    throw ConnectionError("cannot resolve " + target.host + ": " +
                          ::gai_strerror(rc));
  std::string last_error = "no address";
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr && fd < 0; ai = ai->ai_next) {
    const int s = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                           ai->ai_protocol);
    if (s < 0) {
      last_error = std::strerror(errno);
      continue;
    }
    const int flags = ::fcntl(s, F_GETFL, 0);
    ::fcntl(s, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(s, ai->ai_addr, ai->ai_addrlen);
    if (rc < 0 && errno == EINPROGRESS) {
      pollfd p{s, POLLOUT, 0};
      do {
        rc = ::poll(&p, 1, static_cast<int>(target.connect_timeout.count()));
      } while (rc < 0 && errno == EINTR);
      if (rc == 0) {
        last_error = "connect timed out";
        ::close(s);
        continue;
      }
      int err = 0;
      socklen_t len = sizeof err;
      ::getsockopt(s, SOL_SOCKET, SO_ERROR, &err, &len);
      rc = err == 0 ? 0 : -1;
      errno = err;
    }
    if (rc < 0) {
      last_error = std::strerror(errno);
      ::close(s);
      continue;
    }
    ::fcntl(s, F_SETFL, flags);
    fd = s;
  }
  ::freeaddrinfo(res);
  if (fd < 0)
    throw ConnectionError("cannot connect to " + target.descriptor() + ": " +
                          last_error);
  Connection c{Session(fd, target), ReplyObservation::timeout()};
  c.greeting = c.session.read_reply();
  return c;
}

LoginOutcome login(Session& session, const std::string& username,
                   const std::string& password) {
  auto accepted = [](const ReplyObservation& o) {
    return o.is_code() && (o.value() == 230 || o.value() == 202);
  };
  LoginOutcome out;
  out.user = session.exchange("USER " + username);
  if (accepted(out.user)) return out;
  if (out.user.is_code() && (out.user.value() == 331 || out.user.value() == 332)) {
    out.pass = session.exchange("PASS " + password);
    if (accepted(*out.pass)) return out;
    throw LoginError("login rejected: PASS answered " + out.pass->token(), out);
  }
  throw LoginError("login rejected: USER answered " + out.user.token(), out);
}

}  // namespace fingerfuzz

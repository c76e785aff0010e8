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

#include "fingerfuzz/labserver.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>
#include <sstream>

#include "fingerfuzz/codec.hpp"
#include "fingerfuzz/fileio.hpp"

namespace fingerfuzz {
namespace {

constexpr std::size_t kMaxRequestLine = 1 << 20;

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

bool code_in_range(int code) { return code >= 100 && code <= 599; }

// Splits off the first space-delimited token. `rest` loses the token and the
// single space after it.
std::string_view take_token(std::string_view& rest) {
  const auto sp = rest.find(' ');
  const auto tok = rest.substr(0, sp);
  rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
  return tok;
}

int parse_code(std::string_view tok, std::size_t line) {
  if (tok.size() != 3 || !std::all_of(tok.begin(), tok.end(), [](char c) {
        return c >= '0' && c <= '9';
      }))
    throw ScriptError(line, "reply code must be three digits, got '" +
                                std::string(tok) + "'");
  const int code = (tok[0] - '0') * 100 + (tok[1] - '0') * 10 + (tok[2] - '0');
  if (!code_in_range(code))
    throw ScriptError(line, "reply code " + std::string(tok) +
                                " outside 100..599");
  return code;
}

std::string code_str(int code) {
  std::string s = std::to_string(code);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

ArgPredicate parse_predicate(std::string_view tok, std::size_t line) {
  ArgPredicate p;
  if (tok == "ANY") {
    p.kind = ArgPredicate::Kind::kAny;
  } else if (tok == "NONPRINT") {
    p.kind = ArgPredicate::Kind::kNonPrintable;
  } else if (tok == "EMPTY") {
    p.kind = ArgPredicate::Kind::kEmpty;
  } else if (tok.substr(0, 7) == "LEN_GT:") {
    const auto num = tok.substr(7);
    if (num.empty() || !std::all_of(num.begin(), num.end(),
                                    [](char c) { return c >= '0' && c <= '9'; }))
      throw ScriptError(line, "LEN_GT needs a non-negative integer");
    p.kind = ArgPredicate::Kind::kLenGt;
    p.length = std::stoul(std::string(num));
  } else {
    throw ScriptError(line, "unknown predicate '" + std::string(tok) + "'");
  }
  return p;
}

ScriptAction parse_action(std::string_view text, std::size_t line) {
  ScriptAction a;
  if (text == "DROP") {
    a.kind = ScriptAction::Kind::kDrop;
    return a;
  }
  if (text == "SILENCE") {
    a.kind = ScriptAction::Kind::kSilence;
    return a;
  }
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  if (colon == std::string_view::npos || (kind != "REPLY" && kind != "MULTI"))
    throw ScriptError(line, "unknown action '" + std::string(text) + "'");
  auto rest = text.substr(colon + 1);
  const auto colon2 = rest.find(':');
  if (colon2 == std::string_view::npos)
    throw ScriptError(line, std::string(kind) + " needs <code>:<text>");
  a.code = parse_code(rest.substr(0, colon2), line);
  rest = rest.substr(colon2 + 1);
  if (kind == "REPLY") {
    a.kind = ScriptAction::Kind::kReply;
    a.lines.emplace_back(rest);
  } else {
    a.kind = ScriptAction::Kind::kMultiline;
    std::size_t start = 0;
    for (;;) {
      const auto bar = rest.find('|', start);
      a.lines.emplace_back(rest.substr(start, bar - start));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
  }
  return a;
}

std::string predicate_text(const ArgPredicate& p) {
  switch (p.kind) {
    case ArgPredicate::Kind::kAny:
      return "ANY";
    case ArgPredicate::Kind::kLenGt:
      return "LEN_GT:" + std::to_string(p.length);
    case ArgPredicate::Kind::kNonPrintable:
      return "NONPRINT";
    case ArgPredicate::Kind::kEmpty:
      return "EMPTY";
  }
  return "ANY";
}

std::string action_text(const ScriptAction& a) {
  switch (a.kind) {
    case ScriptAction::Kind::kReply:
      return "REPLY:" + code_str(a.code) + ":" + (a.lines.empty() ? "" : a.lines[0]);
    case ScriptAction::Kind::kMultiline: {
      std::string s = "MULTI:" + code_str(a.code) + ":";
      for (std::size_t i = 0; i < a.lines.size(); ++i)
        s += (i ? "|" : "") + a.lines[i];
      return s;
    }
    case ScriptAction::Kind::kDrop:
      return "DROP";
    case ScriptAction::Kind::kSilence:
      return "SILENCE";
  }
  return "DROP";
}

std::string login_text(int code) {
  switch (code) {
    case 230:
      return "Login successful.";
    case 331:
      return "Please specify the password.";
    case 332:
      return "Need account for login.";
    case 530:
      return "Login incorrect.";
    default:
      return "Login response.";
  }
}

bool send_all(int fd, std::string_view data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

bool ArgPredicate::test(std::string_view arg) const noexcept {
  switch (kind) {
    case Kind::kAny:
      return true;
    case Kind::kLenGt:
      return arg.size() > length;
    case Kind::kNonPrintable:
      return std::any_of(arg.begin(), arg.end(), [](char c) {
        const auto b = static_cast<unsigned char>(c);
        return b < 0x20 || b > 0x7e;
      });
    case Kind::kEmpty:
      return arg.empty();
  }
  return false;
}

std::string ScriptAction::render() const {
  const std::string c = code_str(code);
  switch (kind) {
    case Kind::kReply:
      return c + " " + (lines.empty() ? "" : lines[0]) + "\r\n";
    case Kind::kMultiline: {
      if (lines.size() <= 1)
        return c + " " + (lines.empty() ? "" : lines[0]) + "\r\n";
      std::string out = c + "-" + lines.front() + "\r\n";
      for (std::size_t i = 1; i + 1 < lines.size(); ++i)
        out += " " + lines[i] + "\r\n";
      out += c + " " + lines.back() + "\r\n";
      return out;
    }
    case Kind::kDrop:
    case Kind::kSilence:
      return {};
  }
  return {};
}

std::string ScriptAction::describe() const { return action_text(*this); }

ScriptAction ServerScript::respond(std::string_view request) const {
  auto rest = request;
  const std::string command = upper(take_token(rest));
  const bool has_arg = request.find(' ') != std::string_view::npos;
  const std::string_view arg = has_arg ? rest : std::string_view{};
  for (const auto& rule : rules) {
    if (rule.command != "*" && rule.command != command) continue;
    if (!rule.predicate.test(arg)) continue;
    return rule.action;
  }
  ScriptAction fallback;
  fallback.kind = ScriptAction::Kind::kReply;
  fallback.code = default_reply.code;
  fallback.lines = {default_reply.text};
  return fallback;
}

ServerScript parse_script(std::string_view text) {
  ServerScript s;
  s.rules.clear();
  bool have_greeting = false;
  bool have_default = false;
  bool have_login = false;
  std::size_t ln = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++ln;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    line.remove_prefix(first);
    auto rest = line;
    const auto keyword = take_token(rest);
    if (keyword == "name") {
      s.name = std::string(rest);
    } else if (keyword == "greeting" || keyword == "default") {
      const bool is_greeting = keyword == "greeting";
      bool& seen = is_greeting ? have_greeting : have_default;
      if (seen)
        throw ScriptError(ln, "duplicate '" + std::string(keyword) + "' line");
      seen = true;
      ScriptReply r;
      r.code = parse_code(take_token(rest), ln);
      r.text = std::string(rest);
      (is_greeting ? s.greeting : s.default_reply) = r;
    } else if (keyword == "login") {
      if (have_login) throw ScriptError(ln, "duplicate 'login' line");
      have_login = true;
      bool user = false, pass = false;
      while (!rest.empty()) {
        const auto tok = take_token(rest);
        if (tok.empty()) continue;
        if (tok.substr(0, 5) == "USER=") {
          s.login_user = parse_code(tok.substr(5), ln);
          user = true;
        } else if (tok.substr(0, 5) == "PASS=") {
          s.login_pass = parse_code(tok.substr(5), ln);
          pass = true;
        } else {
          throw ScriptError(ln, "expected USER=<code> or PASS=<code>, got '" +
                                    std::string(tok) + "'");
        }
      }
      if (!user || !pass) throw ScriptError(ln, "login needs USER= and PASS=");
    } else if (keyword == "rule") {
      Rule r;
      const auto cmd = take_token(rest);
      if (cmd.empty() ||
          (cmd != "*" && !std::all_of(cmd.begin(), cmd.end(), [](char c) {
            return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
          })))
        throw ScriptError(ln, "rule command must be a mnemonic or '*'");
      r.command = upper(cmd);
      r.predicate = parse_predicate(take_token(rest), ln);
      if (rest.empty()) throw ScriptError(ln, "rule is missing its action");
      r.action = parse_action(rest, ln);
      s.rules.push_back(std::move(r));
    } else {
      throw ScriptError(ln, "unknown keyword '" + std::string(keyword) + "'");
    }
  }
  if (!have_greeting) throw ScriptError(0, "script has no 'greeting' line");
  if (!have_default) throw ScriptError(0, "script has no 'default' line");
  if (const auto diags = validate_script(s); !diags.empty())
    throw ScriptError(0, diags.front());
  return s;
}

ServerScript load_script(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_script(text);
  } catch (const ScriptError& e) {
    throw ScriptError(e.line(), path + ": " + e.what());
  }
}

std::string save_script(const ServerScript& s) {
  std::ostringstream out;
  if (!s.name.empty()) out << "name " << s.name << '\n';
  out << "greeting " << code_str(s.greeting.code) << ' ' << s.greeting.text << '\n';
  out << "login USER=" << code_str(s.login_user) << " PASS=" << code_str(s.login_pass)
      << '\n';
  for (const auto& r : s.rules)
    out << "rule " << r.command << ' ' << predicate_text(r.predicate) << ' '
        << action_text(r.action) << '\n';
  out << "default " << code_str(s.default_reply.code) << ' ' << s.default_reply.text
      << '\n';
  return out.str();
}

std::vector<std::string> validate_script(const ServerScript& s) {
  std::vector<std::string> diags;
  auto check = [&](int code, const std::string& where) {
    if (!code_in_range(code))
      diags.push_back(where + ": reply code " + std::to_string(code) +
                      " outside 100..599");
  };
  check(s.greeting.code, "greeting");
  check(s.login_user, "login USER");
  check(s.login_pass, "login PASS");
  check(s.default_reply.code, "default");
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    const auto& r = s.rules[i];
    const std::string where = "rule " + std::to_string(i + 1);
    if (r.command.empty()) diags.push_back(where + ": empty command");
    const auto& a = r.action;
    if (a.kind == ScriptAction::Kind::kReply || a.kind == ScriptAction::Kind::kMultiline)
      check(a.code, where);
    if (a.kind == ScriptAction::Kind::kMultiline && a.lines.empty())
      diags.push_back(where + ": multiline reply without lines");
    for (const auto& l : a.lines)
      if (l.find_first_of("\r\n|") != std::string::npos && a.kind == ScriptAction::Kind::kMultiline)
        diags.push_back(where + ": reply line contains CR, LF or '|'");
      else if (l.find_first_of("\r\n") != std::string::npos)
        diags.push_back(where + ": reply text contains CR or LF");
  }
  return diags;
}

LabServer::LabServer(ServerScript script, std::uint16_t port, std::string bind_host,
                     Logger logger)
    : script_(std::make_shared<const ServerScript>(std::move(script))),
      logger_(std::move(logger)) {
  if (const auto diags = validate_script(*script_); !diags.empty())
    throw ScriptError(0, diags.front());
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw IoError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, bind_host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw IoError("bad bind address '" + bind_host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
      ::listen(listen_fd_, 64) < 0) {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    throw IoError("cannot listen on " + bind_host + ":" + std::to_string(port) +
                  ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  if (::pipe2(wake_pipe_, O_CLOEXEC) < 0) {
    ::close(listen_fd_);
    throw IoError(std::string("pipe: ") + std::strerror(errno));
  }
  acceptor_ = std::thread([this] { accept_loop(); });
}

LabServer::~LabServer() { stop(); }

void LabServer::stop() {
  if (stopping_.exchange(true)) return;
  const char b = 'x';
  (void)!::write(wake_pipe_[1], &b, 1);
  if (acceptor_.joinable()) acceptor_.join();
  {
    std::lock_guard lock(clients_mu_);
    for (auto& c : clients_) ::shutdown(c.fd, SHUT_RDWR);
  }
  for (auto& c : clients_) {
    if (c.thread.joinable()) c.thread.join();
    ::close(c.fd);
  }
  clients_.clear();
  ::close(listen_fd_);
  ::close(wake_pipe_[0]);
  ::close(wake_pipe_[1]);
}

void LabServer::reap_finished() {
  std::lock_guard lock(clients_mu_);
  for (auto it = clients_.begin(); it != clients_.end();) {
    if (it->done.load()) {
      it->thread.join();
      ::close(it->fd);
      it = clients_.erase(it);
    } else {
      ++it;
    }
  }
}

void LabServer::accept_loop() {
  for (;;) {
    pollfd fds[2] = {{listen_fd_, POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
    const int rc = ::poll(fds, 2, -1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      return;
    }
    if (fds[1].revents) return;
    if (!(fds[0].revents & POLLIN)) continue;
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    reap_finished();
    ++accepted_;
    std::lock_guard lock(clients_mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    Client& c = clients_.emplace_back();
    c.fd = fd;
    c.thread = std::thread([this, &c] { serve_client(c); });
  }
}

void LabServer::serve_client(Client& client) {
  const int fd = client.fd;
  const ServerScript& s = *script_;
  auto finish = [&] {
    ::shutdown(fd, SHUT_RDWR);
    client.done = true;
  };
  if (!send_all(fd, code_str(s.greeting.code) + " " + s.greeting.text + "\r\n"))
    return finish();

  bool logged_in = false;
  std::string buffer;
  std::array<char, 4096> chunk{};
  for (;;) {
    const auto nl = buffer.find('\n');
    if (nl == std::string::npos) {
      if (buffer.size() > kMaxRequestLine) return finish();
      const ssize_t n = ::recv(fd, chunk.data(), chunk.size(), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return finish();
      buffer.append(chunk.data(), static_cast<std::size_t>(n));
      continue;
    }
    std::string line = buffer.substr(0, nl);
    buffer.erase(0, nl + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    if (!logged_in) {
      std::string_view rest(line);
      const std::string cmd = upper(take_token(rest));
      int code = 530;
      std::string text = "Please login with USER and PASS.";
      if (cmd == "USER" || cmd == "PASS") {
        code = cmd == "USER" ? s.login_user : s.login_pass;
        text = login_text(code);
        logged_in = code == 230 || code == 202;
      }
      if (logger_) logger_(line, "LOGIN:" + code_str(code));
      if (!send_all(fd, code_str(code) + " " + text + "\r\n")) return finish();
      continue;
    }

    const ScriptAction action = s.respond(line);
    if (logger_) logger_(line, action.describe());
    if (action.kind == ScriptAction::Kind::kDrop) return finish();
    if (action.kind == ScriptAction::Kind::kSilence) continue;
    if (!send_all(fd, action.render())) return finish();
  }
}

}  // namespace fingerfuzz

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

#ifndef FINGERFUZZ_REPLY_HPP
#define FINGERFUZZ_REPLY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace fingerfuzz {

enum class ReplyKind { kCode, kTimeout, kDropped, kGarbled };

// One fingerprint position: a reply code, or the reason there is none.
class ReplyObservation {
 public:
  constexpr ReplyObservation() = default;

  static constexpr ReplyObservation code(int c) noexcept {
    return ReplyObservation(ReplyKind::kCode, c);
  }
  static constexpr ReplyObservation timeout() noexcept {
    return ReplyObservation(ReplyKind::kTimeout, 0);
  }
  static constexpr ReplyObservation dropped() noexcept {
    return ReplyObservation(ReplyKind::kDropped, 0);
  }
  static constexpr ReplyObservation garbled() noexcept {
    return ReplyObservation(ReplyKind::kGarbled, 0);
  }

  constexpr ReplyKind kind() const noexcept { return kind_; }
  constexpr bool is_code() const noexcept { return kind_ == ReplyKind::kCode; }
  // Only meaningful when is_code().
  constexpr int value() const noexcept { return code_; }

  // `ddd`, `TMO`, `DRP` or `GBL`.
  std::string token() const;
  // Inverse of token(); nullopt for anything outside the token grammar or a
  // code outside 100..599.
  static std::optional<ReplyObservation> from_token(std::string_view token);

  friend constexpr bool operator==(const ReplyObservation&,
                                   const ReplyObservation&) = default;

 private:
  constexpr ReplyObservation(ReplyKind k, int c) noexcept : kind_(k), code_(c) {}

  ReplyKind kind_ = ReplyKind::kGarbled;
  int code_ = 0;
};

// Incremental RFC 959 reply recognizer.
//
// A reply is either a single line starting `ddd ` (or a bare `ddd`), or a
// multiline block opened by `ddd-` and closed by the first later line that
// starts with the same `ddd `. Lines end at LF; a preceding CR is ignored.
// A complete first line that does not open a reply makes the parser
// garbled. Codes outside 100..599 do not open a reply.
class ReplyParser {
 public:
  enum class State { kNeedMore, kComplete, kGarbled };

  // Consumes bytes up to the end of the reply (or the garbling line) and
  // returns how many were consumed. Bytes past that point are not examined.
  std::size_t feed(std::string_view bytes);

  State state() const noexcept { return state_; }
  int code() const noexcept { return code_; }
  bool saw_bytes() const noexcept { return saw_bytes_; }

  // Observation once input stops. `closed` distinguishes peer close from a
  // timeout.
  ReplyObservation finish(bool closed) const noexcept;

 private:
  void end_line();

  State state_ = State::kNeedMore;
  bool in_multiline_ = false;
  bool saw_bytes_ = false;
  int code_ = 0;
  std::string prefix_;  // first four bytes of the current line
  std::size_t line_len_ = 0;
};

// Runs a whole byte stream through ReplyParser. `closed` tells what happened
// after the last byte: the peer hung up (true) or the timeout expired.
ReplyObservation parse_reply_stream(std::string_view bytes, bool closed);

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_REPLY_HPP

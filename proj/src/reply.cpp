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

#include "fingerfuzz/reply.hpp"

#include <algorithm>

namespace fingerfuzz {
namespace {

struct LineStart {
  int code = 0;
  bool final = false;
};

std::optional<LineStart> classify(std::string_view prefix) {
  if (prefix.size() < 3) return std::nullopt;
  for (int i = 0; i < 3; ++i)
    if (prefix[i] < '0' || prefix[i] > '9') return std::nullopt;
  const int code =
      (prefix[0] - '0') * 100 + (prefix[1] - '0') * 10 + (prefix[2] - '0');
  if (code < 100 || code > 599) return std::nullopt;
  if (prefix.size() == 3 || prefix[3] == ' ') return LineStart{code, true};
  if (prefix[3] == '-') return LineStart{code, false};
  return std::nullopt;
}

}  // namespace

std::string ReplyObservation::token() const {
  switch (kind_) {
    case ReplyKind::kCode: {
      std::string s = std::to_string(code_);
      return std::string(3 - std::min<std::size_t>(3, s.size()), '0') + s;
    }
    case ReplyKind::kTimeout:
      return "TMO";
    case ReplyKind::kDropped:
      return "DRP";
    case ReplyKind::kGarbled:
      return "GBL";
  }
  return "GBL";
}

std::optional<ReplyObservation> ReplyObservation::from_token(
    std::string_view token) {
  if (token == "TMO") return timeout();
  if (token == "DRP") return dropped();
  if (token == "GBL") return garbled();
  if (token.size() != 3) return std::nullopt;
  for (char c : token)
    if (c < '0' || c > '9') return std::nullopt;
  const int v = (token[0] - '0') * 100 + (token[1] - '0') * 10 + (token[2] - '0');
  if (v < 100 || v > 599) return std::nullopt;
  return code(v);
}

std::size_t ReplyParser::feed(std::string_view bytes) {
  std::size_t used = 0;
  while (used < bytes.size() && state_ == State::kNeedMore) {
    const char c = bytes[used++];
    saw_bytes_ = true;
    if (c == '\n') {
      end_line();
      prefix_.clear();
      line_len_ = 0;
    } else {
      if (prefix_.size() < 4) prefix_ += c;
      ++line_len_;
    }
  }
  return used;
}

void ReplyParser::end_line() {
  std::string_view line(prefix_);
  // CR right before LF terminates; it is only visible here when the whole
  // line fits in the prefix.
  if (line_len_ == line.size() && !line.empty() && line.back() == '\r')
    line.remove_suffix(1);
  const auto start = classify(line);
  if (!in_multiline_) {
    if (!start) {
      state_ = State::kGarbled;
    } else if (start->final) {
      code_ = start->code;
      state_ = State::kComplete;
    } else {
      code_ = start->code;
      in_multiline_ = true;
    }
    return;
  }
  if (start && start->final && start->code == code_) state_ = State::kComplete;
}

ReplyObservation ReplyParser::finish(bool closed) const noexcept {
  switch (state_) {
    case State::kComplete:
      return ReplyObservation::code(code_);
    case State::kGarbled:
      return ReplyObservation::garbled();
    case State::kNeedMore:
      break;
  }
  if (closed) return ReplyObservation::dropped();
  return saw_bytes_ ? ReplyObservation::garbled() : ReplyObservation::timeout();
}

ReplyObservation parse_reply_stream(std::string_view bytes, bool closed) {
  ReplyParser p;
  p.feed(bytes);
  return p.finish(closed);
}

}  // namespace fingerfuzz

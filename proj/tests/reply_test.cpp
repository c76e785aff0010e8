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

#include <gtest/gtest.h>

#include "fingerfuzz/rng.hpp"

namespace ff = fingerfuzz;
using ff::ReplyObservation;

namespace {
ReplyObservation parse(std::string_view s, bool closed = false) {
  return ff::parse_reply_stream(s, closed);
}
}  // namespace

TEST(ReplyParser, SingleLine) {
  EXPECT_EQ(parse("500 Syntax error\r\n"), ReplyObservation::code(500));
  EXPECT_EQ(parse("220 ok\r\n"), ReplyObservation::code(220));
  EXPECT_EQ(parse("200\r\n"), ReplyObservation::code(200));
  EXPECT_EQ(parse("250 bare lf\n"), ReplyObservation::code(250));
}

TEST(ReplyParser, Multiline) {
  EXPECT_EQ(parse("211-features\r\n211 end\r\n"), ReplyObservation::code(211));
  EXPECT_EQ(parse("211-a\r\n 211 not yet\r\n211-still open\r\n"
                  "212 other code\r\n123 digits\r\n211 done\r\n"),
            ReplyObservation::code(211));
}

TEST(ReplyParser, UnterminatedMultilineIsGarbledOnTimeout) {
  EXPECT_EQ(parse("211-features\r\nmore\r\n"), ReplyObservation::garbled());
  EXPECT_EQ(parse("211-features\r\n", true), ReplyObservation::dropped());
}

TEST(ReplyParser, Sentinels) {
  EXPECT_EQ(parse(""), ReplyObservation::timeout());
  EXPECT_EQ(parse("", true), ReplyObservation::dropped());
  EXPECT_EQ(parse("hello\r\n"), ReplyObservation::garbled());
  EXPECT_EQ(parse("220 no newline"), ReplyObservation::garbled());
  EXPECT_EQ(parse("099 low\r\n"), ReplyObservation::garbled());
  EXPECT_EQ(parse("600 high\r\n"), ReplyObservation::garbled());
  EXPECT_EQ(parse("22 short\r\n"), ReplyObservation::garbled());
  EXPECT_EQ(parse("220x\r\n"), ReplyObservation::garbled());
  EXPECT_EQ(parse("220\rX\r\n"), ReplyObservation::garbled());
  EXPECT_EQ(parse("\r\n220 late\r\n"), ReplyObservation::garbled());
}

TEST(ReplyParser, StopsConsumingAtEndOfReply) {
  ff::ReplyParser p;
  const std::string s = "200 ok\r\n500 extra\r\n";
  EXPECT_EQ(p.feed(s), 8u);
  EXPECT_EQ(p.state(), ff::ReplyParser::State::kComplete);
}

TEST(ReplyParser, ByteAtATimeEqualsWhole) {
  const std::string s = "230-first\r\n230-second\r\n230 done\r\n";
  ff::ReplyParser p;
  for (char c : s) p.feed(std::string_view(&c, 1));
  EXPECT_EQ(p.finish(false), ReplyObservation::code(230));
}

TEST(ReplyParser, CodeFidelityForEveryValidCode) {
  for (int code = 100; code <= 599; ++code) {
    const std::string c = std::to_string(code);
    ASSERT_EQ(parse(c + " text\r\n"), ReplyObservation::code(code));
    ASSERT_EQ(parse(c + "-a\r\n" + "999 x\r\n" + c + " z\r\n"), ReplyObservation::code(code));
  }
}

TEST(ReplyParser, MultilineInteriorOfAnyLength) {
  ff::Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int code = 100 + static_cast<int>(rng.below(500));
    const std::string c = std::to_string(code);
    std::string s = c + "-open\r\n";
    const auto lines = rng.below(20);
    for (std::size_t i = 0; i < lines; ++i) {
      // Interior lines may start with digits or even another code.
      int other = 100 + static_cast<int>(rng.below(500));
      if (other == code) other = code == 599 ? 598 : code + 1;
      s += std::to_string(other) + (rng.below(2) ? " x" : "-y") + "\r\n";
    }
    s += c + " close\r\n";
    ASSERT_EQ(parse(s), ReplyObservation::code(code)) << s;
  }
}

TEST(ReplyParser, TotalOverRandomBytes) {
  ff::Rng rng(1234);
  for (int trial = 0; trial < 5000; ++trial) {
    std::string s(rng.below(40), '\0');
    for (auto& ch : s) {
      // Bias toward digits, spaces, dashes and line ends.
      static const char kBias[] = "0123456789 -\r\n";
      ch = rng.below(2) ? kBias[rng.below(sizeof kBias - 1)]
                        : static_cast<char>(rng.below(256));
    }
    const auto o = parse(s, rng.below(2) == 1);
    if (o.is_code()) {
      ASSERT_GE(o.value(), 100);
      ASSERT_LE(o.value(), 599);
    }
  }
}

TEST(ReplyObservation, Tokens) {
  EXPECT_EQ(ReplyObservation::code(220).token(), "220");
  EXPECT_EQ(ReplyObservation::timeout().token(), "TMO");
  EXPECT_EQ(ReplyObservation::dropped().token(), "DRP");
  EXPECT_EQ(ReplyObservation::garbled().token(), "GBL");
  for (const char* t : {"220", "TMO", "DRP", "GBL", "599", "100"})
    EXPECT_EQ(ReplyObservation::from_token(t)->token(), t);
  for (const char* t : {"099", "600", "22", "2200", "tmo", "", "2a0"})
    EXPECT_FALSE(ReplyObservation::from_token(t).has_value()) << t;
}

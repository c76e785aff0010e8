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

#include <gtest/gtest.h>

#include "support/lab_fixture.hpp"

namespace ff = fingerfuzz;
using ff::ReplyObservation;

namespace {
constexpr const char* kScript = R"(greeting 220 ok
login USER=331 PASS=230
rule SYNT ANY REPLY:500:Syntax error
rule FEAT ANY MULTI:211:features|MDTM|end
rule QUIT ANY DROP
rule SITE ANY SILENCE
default 200 fine
)";
}  // namespace

TEST(TargetSpec, Validation) {
  ff::TargetSpec t;
  EXPECT_NO_THROW(t.validate());
  t.port = 0;
  EXPECT_THROW(t.validate(), ff::ConfigError);
  t = {};
  t.drain_window = t.reply_timeout;
  EXPECT_THROW(t.validate(), ff::ConfigError);
  t = {};
  t.reply_timeout = ff::Millis(0);
  EXPECT_THROW(t.validate(), ff::ConfigError);
  t = {};
  EXPECT_EQ(t.username, "anonymous");
  EXPECT_EQ(t.password, "guest@example.com");
  EXPECT_EQ(t.port, 21);
  EXPECT_EQ(t.reply_timeout, ff::Millis(5000));
  EXPECT_EQ(t.drain_window, ff::Millis(200));
}

TEST(Connect, ReadsScriptedGreeting) {
  auto lab = fftest::start_lab(kScript);
  auto c = ff::connect(fftest::local_target(lab->port()));
  EXPECT_EQ(c.greeting, ReplyObservation::code(220));
  EXPECT_TRUE(c.session.is_open());
}

TEST(Connect, ClosedPortIsConnectionError) {
  EXPECT_THROW(ff::connect(fftest::local_target(fftest::closed_port())),
               ff::ConnectionError);
}

TEST(Connect, GarbledGreetingKeepsSessionUsable) {
  fftest::RawServer raw("hello\r\n");
  auto c = ff::connect(fftest::local_target(raw.port()));
  EXPECT_EQ(c.greeting, ReplyObservation::garbled());
  EXPECT_TRUE(c.session.is_open());
}

TEST(Login, UserThenPass) {
  auto lab = fftest::start_lab(kScript);
  auto c = ff::connect(fftest::local_target(lab->port()));
  const auto out = ff::login(c.session, "anonymous", "x");
  EXPECT_EQ(out.user, ReplyObservation::code(331));
  ASSERT_TRUE(out.pass.has_value());
  EXPECT_EQ(*out.pass, ReplyObservation::code(230));
}

TEST(Login, UserAloneSuffices) {
  auto lab = fftest::start_lab("greeting 220 hi\nlogin USER=230 PASS=530\ndefault 200 ok\n");
  auto c = ff::connect(fftest::local_target(lab->port()));
  const auto out = ff::login(c.session, "anonymous", "x");
  EXPECT_EQ(out.user, ReplyObservation::code(230));
  EXPECT_FALSE(out.pass.has_value());
}

TEST(Login, RejectedPassCarriesObservations) {
  auto lab = fftest::start_lab("greeting 220 hi\nlogin USER=331 PASS=530\ndefault 200 ok\n");
  auto c = ff::connect(fftest::local_target(lab->port()));
  try {
    ff::login(c.session, "anonymous", "x");
    FAIL();
  } catch (const ff::LoginError& e) {
    EXPECT_EQ(e.outcome().user, ReplyObservation::code(331));
    EXPECT_EQ(e.outcome().pass, ReplyObservation::code(530));
  }
}

TEST(Exchange, ScriptedOutcomes) {
  auto lab = fftest::start_lab(kScript);
  auto c = ff::connect(fftest::local_target(lab->port()));
  ff::login(c.session, "anonymous", "x");
  EXPECT_EQ(c.session.exchange("SYNT"), ReplyObservation::code(500));
  EXPECT_EQ(c.session.exchange("FEAT"), ReplyObservation::code(211));
  EXPECT_EQ(c.session.exchange("NOOP"), ReplyObservation::code(200));
  EXPECT_EQ(c.session.exchange("SITE x"), ReplyObservation::timeout());
  EXPECT_EQ(c.session.exchange("NOOP"), ReplyObservation::code(200));
  EXPECT_EQ(c.session.exchange("QUIT"), ReplyObservation::dropped());
  EXPECT_FALSE(c.session.is_open());
  EXPECT_EQ(c.session.exchange("NOOP"), ReplyObservation::dropped());
}

TEST(Exchange, DrainDiscardsExtraReplies) {
  // Greeting followed by two unsolicited replies, as a server provoked into
  // answering twice would send them.
  fftest::RawServer doubled("220 hi\r\n200 one\r\n201 two\r\n");
  auto target = fftest::local_target(doubled.port());
  target.drain_window = ff::Millis(50);
  auto c = ff::connect(target);
  EXPECT_EQ(c.greeting, ReplyObservation::code(220));
  // The extras were drained with the greeting, so this request sees silence
  // rather than a stale 200.
  EXPECT_EQ(c.session.exchange("NOOP"), ReplyObservation::timeout());
}

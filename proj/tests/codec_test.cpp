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

#include "fingerfuzz/codec.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fingerfuzz/error.hpp"
#include "fingerfuzz/rng.hpp"

namespace ff = fingerfuzz;

TEST(Codec, PrintablePassthrough) { EXPECT_EQ(ff::escape_line("NOOP"), "NOOP"); }

TEST(Codec, BackslashSelfEscapes) {
  EXPECT_EQ(ff::escape_line("\\"), "\\\\");
  EXPECT_EQ(ff::unescape_line("\\\\"), "\\");
}

TEST(Codec, ControlAndHighBytesAsLowercaseHex) {
  EXPECT_EQ(ff::escape_line(std::string("\x07", 1)), "\\x07");
  EXPECT_EQ(ff::escape_line(std::string("USER \x00\xff", 7)), "USER \\x00\\xff");
  EXPECT_EQ(ff::escape_line("\x7f"), "\\x7f");
  EXPECT_EQ(ff::unescape_line("\\xAb"), "\xab");
}

TEST(Codec, UnescapeRejectsMalformedInput) {
  EXPECT_THROW(ff::unescape_line("abc\\"), ff::ParseError);
  EXPECT_THROW(ff::unescape_line("\\x4"), ff::ParseError);
  EXPECT_THROW(ff::unescape_line("\\xg0"), ff::ParseError);
  EXPECT_THROW(ff::unescape_line("\\n"), ff::ParseError);
  EXPECT_THROW(ff::unescape_line("tab\there"), ff::ParseError);
}

TEST(Codec, RoundTripOverRandomBytes) {
  ff::Rng rng(42);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string bytes(rng.below(64), '\0');
    for (auto& c : bytes) c = static_cast<char>(rng.below(256));
    const auto line = ff::escape_line(bytes);
    for (char c : line) {
      ASSERT_GE(static_cast<unsigned char>(c), 0x20);
      ASSERT_LE(static_cast<unsigned char>(c), 0x7e);
    }
    ASSERT_EQ(ff::unescape_line(line), bytes);
  }
}

TEST(Codec, Sha256KnownVectors) {
  EXPECT_EQ(ff::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(ff::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_TRUE(ff::is_hex_digest(ff::sha256_hex("x")));
  EXPECT_FALSE(ff::is_hex_digest("ABC"));
}

// Reference outputs from tests/oracle/fuzzgen_oracle.py (`rng 1 4`, `rng 0 2`).
TEST(Rng, MatchesIndependentImplementation) {
  ff::Rng one(1);
  EXPECT_EQ(one.next(), 0xb3f2af6d0fc710c5ULL);
  EXPECT_EQ(one.next(), 0x853b559647364ceaULL);
  EXPECT_EQ(one.next(), 0x92f89756082a4514ULL);
  EXPECT_EQ(one.next(), 0x642e1c7bc266a3a7ULL);
  ff::Rng zero(0);
  EXPECT_EQ(zero.next(), 0x99ec5f36cb75f2b4ULL);
  EXPECT_EQ(zero.next(), 0xbf6e1f784956452aULL);
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  ff::Rng rng(9);
  std::array<int, 7> hits{};
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  EXPECT_EQ(rng.below(1), 0u);
}

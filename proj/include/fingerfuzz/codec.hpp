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

#ifndef FINGERFUZZ_CODEC_HPP
#define FINGERFUZZ_CODEC_HPP

#include <string>
#include <string_view>

namespace fingerfuzz {

// Line codec for request bytes. 0x20..0x7E pass through except `\`, which
// becomes `\\`; every other byte becomes `\xHH` in lowercase hex.
std::string escape_line(std::string_view bytes);

// Inverse of escape_line. Throws ParseError (line 0) on a dangling `\`, an
// unknown escape, a bad hex digit, or a non-printable input character.
std::string unescape_line(std::string_view text);

std::string to_hex(std::string_view bytes);

// SHA-256 of `data` as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

bool is_hex_digest(std::string_view s) noexcept;

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_CODEC_HPP

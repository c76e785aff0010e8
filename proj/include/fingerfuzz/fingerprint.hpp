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

#ifndef FINGERFUZZ_FINGERPRINT_HPP
#define FINGERFUZZ_FINGERPRINT_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fingerfuzz/reply.hpp"
#include "fingerfuzz/wire_ftp.hpp"

namespace fingerfuzz {

// The reply vector a target produced for one fuzz collection. Greeting and
// login replies are kept as metadata and never take part in matching.
struct Fingerprint {
  std::string collection_digest;
  std::string target;  // host:port
  std::optional<std::string> label;
  std::string created_at;  // ISO-8601 UTC, e.g. 2026-10-14T03:00:00Z
  ReplyObservation greeting;
  LoginOutcome login;
  std::vector<ReplyObservation> observations;

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return a.collection_digest == b.collection_digest && a.target == b.target &&
           a.label == b.label && a.created_at == b.created_at &&
           a.greeting == b.greeting && a.login.user == b.login.user &&
           a.login.pass == b.login.pass && a.observations == b.observations;
  }
};

std::string utc_timestamp_now();

// `.fp` text format. The reader throws ParseError on an unknown token, a
// malformed header, or a body whose length disagrees with `#count`.
void write_fingerprint(const Fingerprint& fp, std::ostream& out);
Fingerprint read_fingerprint(std::istream& in);

void save_fingerprint(const Fingerprint& fp, const std::string& path);
Fingerprint load_fingerprint(const std::string& path);

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_FINGERPRINT_HPP

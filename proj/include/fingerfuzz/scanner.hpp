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

#ifndef FINGERFUZZ_SCANNER_HPP
#define FINGERFUZZ_SCANNER_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "fingerfuzz/fingerprint.hpp"
#include "fingerfuzz/fuzzgen.hpp"
#include "fingerfuzz/wire_ftp.hpp"

namespace fingerfuzz {

struct ScanOptions {
  std::optional<std::string> label;
  Millis delay{0};  // pause before every fuzz request
  int reconnect_attempts = 3;
  Millis reconnect_backoff{50};
  // Called after each observation with (done, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

// The target refused the credentials. Without access every server answers
// with the same error code, so a fingerprint would carry no information.
class ScanRefusedError : public Error {
 public:
  ScanRefusedError(const std::string& what, ReplyObservation greeting,
                   LoginOutcome outcome)
      : Error(what), greeting_(greeting), outcome_(outcome) {}
  ReplyObservation greeting() const noexcept { return greeting_; }
  const LoginOutcome& outcome() const noexcept { return outcome_; }

 private:
  ReplyObservation greeting_;
  LoginOutcome outcome_;
};

// The scan stopped before every request was answered.
class PartialScanError : public Error {
 public:
  PartialScanError(const std::string& what, std::size_t completed)
      : Error(what), completed_(completed) {}
  std::size_t completed() const noexcept { return completed_; }

 private:
  std::size_t completed_;
};

// Sends every record of `collection` in order and records one observation
// per record. A dropped connection is recorded as DRP at that position and
// the scan resumes on a fresh, logged-in connection.
Fingerprint fingerprint_target(const FuzzCollection& collection,
                               const TargetSpec& target,
                               const ScanOptions& options = {});

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_SCANNER_HPP

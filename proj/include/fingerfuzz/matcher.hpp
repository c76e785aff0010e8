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

#ifndef FINGERFUZZ_MATCHER_HPP
#define FINGERFUZZ_MATCHER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fingerfuzz/fingerprint.hpp"

namespace fingerfuzz {

// Positional agreement between two fingerprints. Ordering always uses the
// exact ratio agree/total; `percent_text()` is for display only.
struct MatchResult {
  std::string label;
  std::size_t agree = 0;
  std::size_t total = 0;

  // 100 * agree / total in hundredths, rounded half away from zero.
  std::int64_t percent_hundredths() const noexcept;
  // e.g. "97.80"
  std::string percent_text() const;
  bool is_identical() const noexcept { return agree == total; }

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

// Exact comparison of agree/total ratios.
int compare_ratio(const MatchResult& a, const MatchResult& b) noexcept;

// Throws IncomparableError unless both fingerprints refer to the same
// collection and have the same, non-zero length. The result carries
// `b`'s label.
MatchResult match_pair(const Fingerprint& a, const Fingerprint& b,
                       std::string label = {});

class FingerprintDB {
 public:
  struct Entry {
    std::string label;
    Fingerprint fingerprint;
  };

  // Loads every `*.fp` file in `dir`. Labels come from `#label` or, when
  // absent, the file stem. Throws IncomparableError listing the entries whose
  // collection digest differs from the rest.
  static FingerprintDB load_directory(const std::string& dir);

  // Throws on duplicate label or digest mismatch.
  void add(std::string label, Fingerprint fp);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  // Empty string when the db is empty.
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::vector<Entry> entries_;
  std::string digest_;
};

// Best `k` entries by exact ratio, ties by label (byte order).
std::vector<MatchResult> rank(const Fingerprint& probe, const FingerprintDB& db,
                              std::size_t k = 5);

struct MatchMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<MatchResult>> cells;  // cells[i][j]: i vs j

  // Header row and column of labels, cells as 2-decimal percentages.
  std::string to_csv() const;
};

MatchMatrix match_matrix(const FingerprintDB& db);

// `<rank>. <label>  <percent>%  (<agree>/<total>)` per line. With a
// threshold, lines at or above it are annotated.
std::string format_report(const std::vector<MatchResult>& results,
                          std::optional<double> threshold = std::nullopt);
std::string format_json(const std::vector<MatchResult>& results);

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_MATCHER_HPP

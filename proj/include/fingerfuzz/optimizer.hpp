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

#ifndef FINGERFUZZ_OPTIMIZER_HPP
#define FINGERFUZZ_OPTIMIZER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "fingerfuzz/fingerprint.hpp"
#include "fingerfuzz/fuzzgen.hpp"
#include "fingerfuzz/matcher.hpp"

namespace fingerfuzz {

// Record indexes of a collection worth keeping, with how many fingerprint
// pairs each one separates (`provenance[i]` belongs to `kept[i]`).
struct IndexSelection {
  std::string source_digest;
  std::vector<std::size_t> kept;  // strictly ascending
  std::vector<std::size_t> provenance;

  // `index,provenance` rows under a header line.
  std::string to_csv() const;
};

// Every index at which at least two fingerprints of `db` disagree. Throws
// InsufficientDataError for fewer than two entries.
IndexSelection discriminating_indexes(const FingerprintDB& db);

// The kept records in their original order, renumbered from 0, with a fresh
// digest and `reduced_from` set to the parent digest.
FuzzCollection reduce_collection(const FuzzCollection& full,
                                 const IndexSelection& selection);

// Restricts `fp` to the kept positions and rebinds it to `reduced_digest`.
// Matches a re-scan with the reduced collection only when the target answers
// each request independently of what came before.
Fingerprint project_fingerprint(const Fingerprint& fp,
                                const IndexSelection& selection,
                                const std::string& reduced_digest);

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_OPTIMIZER_HPP

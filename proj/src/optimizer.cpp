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

#include "fingerfuzz/optimizer.hpp"

#include <map>
#include <sstream>

#include "fingerfuzz/error.hpp"

namespace fingerfuzz {

std::string IndexSelection::to_csv() const {
  std::ostringstream out;
  out << "index,provenance\n";
  for (std::size_t i = 0; i < kept.size(); ++i)
    out << kept[i] << ',' << provenance[i] << '\n';
  return out.str();
}

IndexSelection discriminating_indexes(const FingerprintDB& db) {
  if (db.size() < 2)
    throw InsufficientDataError(
        "need at least 2 fingerprints to find discriminating requests");
  const auto& es = db.entries();
  const std::size_t n = es.front().fingerprint.observations.size();
  for (const auto& e : es)
    if (e.fingerprint.observations.size() != n)
      throw IncomparableError("fingerprint '" + e.label + "' has " +
                              std::to_string(e.fingerprint.observations.size()) +
                              " observations, expected " + std::to_string(n));

  IndexSelection sel;
  sel.source_digest = db.digest();
  const std::size_t all_pairs = es.size() * (es.size() - 1) / 2;
  std::map<std::string, std::size_t> groups;
  for (std::size_t i = 0; i < n; ++i) {
    groups.clear();
    for (const auto& e : es) ++groups[e.fingerprint.observations[i].token()];
    if (groups.size() < 2) continue;
    // Pairs that differ = all pairs minus pairs inside each token group.
    std::size_t same = 0;
    for (const auto& [tok, cnt] : groups) same += cnt * (cnt - 1) / 2;
    sel.kept.push_back(i);
    sel.provenance.push_back(all_pairs - same);
  }
  return sel;
}

FuzzCollection reduce_collection(const FuzzCollection& full,
                                 const IndexSelection& selection) {
  if (selection.source_digest != full.digest)
    throw IncomparableError("selection was computed for collection " +
                            selection.source_digest + ", not " + full.digest);
  if (selection.kept.empty())
    throw InsufficientDataError(
        "no request discriminates between the fingerprints; the database is "
        "degenerate (all entries identical?)");
  FuzzCollection out;
  out.config = full.config;
  out.reduced_from = full.digest;
  out.records.reserve(selection.kept.size());
  for (std::size_t idx : selection.kept) {
    if (idx >= full.records.size())
      throw Error("selection index " + std::to_string(idx) + " out of range");
    RequestRecord r = full.records[idx];
    r.index = out.records.size();
    out.records.push_back(std::move(r));
  }
  out.digest = collection_digest(out.records);
  return out;
}

Fingerprint project_fingerprint(const Fingerprint& fp,
                                const IndexSelection& selection,
                                const std::string& reduced_digest) {
  if (fp.collection_digest != selection.source_digest)
    throw IncomparableError("fingerprint was not taken with the selection's "
                            "source collection");
  if (selection.kept.empty())
    throw InsufficientDataError("cannot project onto an empty selection");
  Fingerprint out = fp;
  out.collection_digest = reduced_digest;
  out.observations.clear();
  out.observations.reserve(selection.kept.size());
  for (std::size_t idx : selection.kept) {
    if (idx >= fp.observations.size())
      throw Error("selection index " + std::to_string(idx) + " out of range");
    out.observations.push_back(fp.observations[idx]);
  }
  return out;
}

}  // namespace fingerfuzz

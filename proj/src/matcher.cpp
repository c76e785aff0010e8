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

#include "fingerfuzz/matcher.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fingerfuzz/error.hpp"

namespace fingerfuzz {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::int64_t MatchResult::percent_hundredths() const noexcept {
  if (total == 0) return 0;
  // floor(10000 * agree / total + 1/2); the value is never negative.
  const auto num = static_cast<unsigned __int128>(agree) * 20000 + total;
  return static_cast<std::int64_t>(num / (static_cast<unsigned __int128>(total) * 2));
}

std::string MatchResult::percent_text() const {
  const auto h = percent_hundredths();
  std::string frac = std::to_string(h % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(h / 100) + "." + frac;
}

int compare_ratio(const MatchResult& a, const MatchResult& b) noexcept {
  const auto lhs = static_cast<unsigned __int128>(a.agree) * b.total;
  const auto rhs = static_cast<unsigned __int128>(b.agree) * a.total;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

MatchResult match_pair(const Fingerprint& a, const Fingerprint& b,
                       std::string label) {
  if (a.collection_digest != b.collection_digest)
    throw IncomparableError("fingerprints were taken with different collections (" +
                            a.collection_digest.substr(0, 12) + "... vs " +
                            b.collection_digest.substr(0, 12) + "...)");
  if (a.observations.size() != b.observations.size())
    throw IncomparableError("fingerprint lengths differ (" +
                            std::to_string(a.observations.size()) + " vs " +
                            std::to_string(b.observations.size()) + ")");
  if (a.observations.empty()) throw IncomparableError("empty fingerprints");
  MatchResult r;
  r.label = label.empty() ? b.label.value_or(b.target) : std::move(label);
  r.total = a.observations.size();
  for (std::size_t i = 0; i < r.total; ++i)
    if (a.observations[i] == b.observations[i]) ++r.agree;
  return r;
}

void FingerprintDB::add(std::string label, Fingerprint fp) {
  for (const auto& e : entries_)
    if (e.label == label) throw Error("duplicate fingerprint label '" + label + "'");
  if (!entries_.empty() && fp.collection_digest != digest_)
    throw IncomparableError("fingerprint '" + label +
                            "' was taken with a different collection than the "
                            "rest of the database");
  if (entries_.empty()) digest_ = fp.collection_digest;
  entries_.push_back({std::move(label), std::move(fp)});
}

FingerprintDB FingerprintDB::load_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError(dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir))
    if (de.is_regular_file() && de.path().extension() == ".fp")
      files.push_back(de.path());
  std::sort(files.begin(), files.end());

  std::vector<Entry> loaded;
  std::map<std::string, std::vector<std::string>> by_digest;
  for (const auto& f : files) {
    Fingerprint fp = load_fingerprint(f.string());
    std::string label = fp.label.value_or(f.stem().string());
    by_digest[fp.collection_digest].push_back(label);
    loaded.push_back({std::move(label), std::move(fp)});
  }
  if (by_digest.size() > 1) {
    // Name everything outside the largest group.
    auto majority = std::max_element(
        by_digest.begin(), by_digest.end(),
        [](const auto& x, const auto& y) { return x.second.size() < y.second.size(); });
    std::string odd;
    for (const auto& [d, labels] : by_digest) {
      if (d == majority->first) continue;
      for (const auto& l : labels) odd += (odd.empty() ? "" : ", ") + l;
    }
    throw IncomparableError("database " + dir +
                            " mixes collections; incomparable entries: " + odd);
  }
  FingerprintDB db;
  for (auto& e : loaded) db.add(std::move(e.label), std::move(e.fingerprint));
  return db;
}

std::vector<MatchResult> rank(const Fingerprint& probe, const FingerprintDB& db,
                              std::size_t k) {
  if (db.empty()) throw InsufficientDataError("fingerprint database is empty");
  if (k == 0) throw ConfigError("top", "must be at least 1");
  if (probe.collection_digest != db.digest()) {
    std::string labels;
    for (const auto& e : db.entries())
      labels += (labels.empty() ? "" : ", ") + e.label;
    throw IncomparableError(
        "probe was taken with a different collection than the database; "
        "incomparable entries: " + labels);
  }
  std::vector<MatchResult> results;
  results.reserve(db.size());
  for (const auto& e : db.entries())
    results.push_back(match_pair(probe, e.fingerprint, e.label));
  std::sort(results.begin(), results.end(),
            [](const MatchResult& a, const MatchResult& b) {
              const int c = compare_ratio(a, b);
              return c != 0 ? c > 0 : a.label < b.label;
            });
  if (results.size() > k) results.resize(k);
  return results;
}

MatchMatrix match_matrix(const FingerprintDB& db) {
  if (db.size() < 2)
    throw InsufficientDataError("a match matrix needs at least 2 fingerprints");
  MatchMatrix m;
  const auto& es = db.entries();
  for (const auto& e : es) m.labels.push_back(e.label);
  m.cells.assign(es.size(), std::vector<MatchResult>(es.size()));
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i; j < es.size(); ++j) {
      m.cells[i][j] = match_pair(es[i].fingerprint, es[j].fingerprint, es[j].label);
      m.cells[j][i] = m.cells[i][j];
      m.cells[j][i].label = es[i].label;
    }
  }
  return m;
}

std::string MatchMatrix::to_csv() const {
  std::ostringstream out;
  out << "label";
  for (const auto& l : labels) out << ',' << csv_field(l);
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << csv_field(labels[i]);
    for (const auto& cell : cells[i]) out << ',' << cell.percent_text();
    out << '\n';
  }
  return out.str();
}

std::string format_report(const std::vector<MatchResult>& results,
                          std::optional<double> threshold) {
  std::ostringstream out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << (i + 1) << ". " << r.label << "  " << r.percent_text() << "%  ("
        << r.agree << '/' << r.total << ')';
    if (threshold &&
        static_cast<double>(r.percent_hundredths()) >= *threshold * 100.0)
      out << "  [>= " << *threshold << "% threshold]";
    out << '\n';
  }
  return out.str();
}

std::string format_json(const std::vector<MatchResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    arr.push_back({{"rank", i + 1},
                   {"label", r.label},
                   {"agree", r.agree},
                   {"total", r.total},
                   {"ratio", r.total ? static_cast<double>(r.agree) /
                                           static_cast<double>(r.total)
                                     : 0.0},
                   {"percent", r.percent_text()}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace fingerfuzz

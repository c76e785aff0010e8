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

#ifndef FINGERFUZZ_FUZZGEN_HPP
#define FINGERFUZZ_FUZZGEN_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fingerfuzz/rng.hpp"

namespace fingerfuzz {

// Sorted, duplicate-free set of bytes that generated and mutated characters
// are drawn from.
class Alphabet {
 public:
  // All 256 byte values except CR and LF.
  static Alphabet standard();
  // All 256 byte values minus `excluded`.
  static Alphabet excluding(std::string_view excluded);

  const std::vector<unsigned char>& bytes() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }
  bool empty() const noexcept { return bytes_.empty(); }
  bool contains(unsigned char b) const noexcept;
  // Complement with respect to 0x00..0xFF, ascending.
  std::string excluded() const;
  // Members in 0x20..0x7E, used for base arguments.
  std::vector<unsigned char> printable() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<unsigned char> bytes_;
};

struct FuzzConfig {
  std::vector<std::string> commands;
  std::size_t max_arg_len = 16;
  std::size_t instances = 2;
  std::size_t mutations = 4;
  std::uint64_t seed = 1;
  Alphabet alphabet = Alphabet::standard();

  // Control-connection commands shipped with the CLI. File transfer and
  // directory-changing commands are left out on purpose.
  static FuzzConfig standard();

  // Throws ConfigError naming the first offending field.
  void validate() const;

  friend bool operator==(const FuzzConfig&, const FuzzConfig&) = default;
};

struct RequestRecord {
  std::size_t index = 0;
  std::string command;
  std::size_t arg_len = 0;
  std::size_t instance = 0;
  std::size_t step = 0;  // 0 = unmutated base
  std::string bytes;     // no trailing CR LF

  friend bool operator==(const RequestRecord&, const RequestRecord&) = default;
};

struct FuzzCollection {
  FuzzConfig config;
  std::vector<RequestRecord> records;
  std::string digest;
  // Set on collections produced by the optimizer.
  std::optional<std::string> reduced_from;

  std::size_t size() const noexcept { return records.size(); }
  bool is_reduced() const noexcept { return reduced_from.has_value(); }

  friend bool operator==(const FuzzCollection&, const FuzzCollection&) = default;
};

// |commands| * (L+1) * n * (m+1).
std::size_t expected_record_count(const FuzzConfig& config) noexcept;

// SHA-256 over every escaped body line followed by LF.
std::string collection_digest(const std::vector<RequestRecord>& records);

FuzzCollection build_collection(const FuzzConfig& config);

enum class MutationKind { kInsert, kChange, kDelete };

struct Mutation {
  MutationKind kind = MutationKind::kInsert;
  std::size_t position = 0;
  unsigned char byte = 0;  // unused for kDelete
};

// Draws one mutation for `message`: an operator uniformly among the
// applicable ones, then a position, then (for insert/change) a byte. A change
// never draws the byte it replaces.
Mutation draw_mutation(std::string_view message, const Alphabet& alphabet,
                       Rng& rng);

// Applies `m` to `message`. Throws std::out_of_range on a bad position.
std::string apply_mutation(std::string_view message, const Mutation& m);

inline std::string mutate(std::string_view message, const Alphabet& alphabet,
                          Rng& rng) {
  return apply_mutation(message, draw_mutation(message, alphabet, rng));
}

// `.fc` text format.
void write_collection(const FuzzCollection& collection, std::ostream& out);
FuzzCollection read_collection(std::istream& in);

void save_collection(const FuzzCollection& collection, const std::string& path);
FuzzCollection load_collection(const std::string& path);

}  // namespace fingerfuzz

#endif  // FINGERFUZZ_FUZZGEN_HPP

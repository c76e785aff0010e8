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

#include "fingerfuzz/fuzzgen.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fingerfuzz/codec.hpp"
#include "fingerfuzz/error.hpp"
#include "fingerfuzz/fileio.hpp"

namespace fingerfuzz {

Alphabet Alphabet::standard() { return excluding("\r\n"); }

Alphabet Alphabet::excluding(std::string_view excluded) {
  std::array<bool, 256> drop{};
  for (char c : excluded) drop[static_cast<unsigned char>(c)] = true;
  Alphabet a;
  for (int b = 0; b < 256; ++b)
    if (!drop[b]) a.bytes_.push_back(static_cast<unsigned char>(b));
  return a;
}

bool Alphabet::contains(unsigned char b) const noexcept {
  return std::binary_search(bytes_.begin(), bytes_.end(), b);
}

std::string Alphabet::excluded() const {
  std::string out;
  for (int b = 0; b < 256; ++b)
    if (!contains(static_cast<unsigned char>(b))) out += static_cast<char>(b);
  return out;
}

std::vector<unsigned char> Alphabet::printable() const {
  std::vector<unsigned char> out;
  for (unsigned char b : bytes_)
    if (b >= 0x20 && b <= 0x7e) out.push_back(b);
  return out;
}

FuzzConfig FuzzConfig::standard() {
  FuzzConfig c;
  c.commands = {"USER", "PASS", "ACCT", "CWD",  "CDUP", "SMNT", "REIN",
                "QUIT", "PORT", "PASV", "TYPE", "STRU", "MODE", "SYST",
                "STAT", "HELP", "NOOP", "ALLO", "REST", "SITE", "FEAT",
                "OPTS", "MDTM", "SIZE", "CLNT", "XPWD", "PWD"};
  c.max_arg_len = 16;
  c.instances = 2;
  c.mutations = 4;
  c.seed = 1;
  return c;
}

void FuzzConfig::validate() const {
  if (commands.empty()) throw ConfigError("commands", "command list is empty");
  std::set<std::string> seen;
  for (const auto& cmd : commands) {
    const bool shape_ok =
        cmd.size() >= 3 && cmd.size() <= 8 &&
        std::all_of(cmd.begin(), cmd.end(),
                    [](char c) { return c >= 'A' && c <= 'Z'; });
    if (!shape_ok)
      throw ConfigError("commands", "malformed mnemonic '" + escape_line(cmd) +
                                        "' (expected 3-8 uppercase letters)");
    if (!seen.insert(cmd).second)
      throw ConfigError("commands", "duplicate mnemonic '" + cmd + "'");
  }
  if (instances < 1) throw ConfigError("instances", "must be at least 1");
  if (alphabet.empty()) throw ConfigError("alphabet", "alphabet is empty");
  if (alphabet.contains('\r') || alphabet.contains('\n'))
    throw ConfigError("alphabet", "alphabet must exclude CR and LF");
  if (max_arg_len > 0 && alphabet.printable().empty())
    throw ConfigError("alphabet",
                      "no printable bytes available for base arguments");
}

std::size_t expected_record_count(const FuzzConfig& config) noexcept {
  return config.commands.size() * (config.max_arg_len + 1) * config.instances *
         (config.mutations + 1);
}

std::string collection_digest(const std::vector<RequestRecord>& records) {
  std::string body;
  for (const auto& r : records) {
    body += escape_line(r.bytes);
    body += '\n';
  }
  return sha256_hex(body);
}

Mutation draw_mutation(std::string_view message, const Alphabet& alphabet,
                       Rng& rng) {
  const auto& bytes = alphabet.bytes();
  Mutation m;
  std::vector<MutationKind> ops{MutationKind::kInsert};
  if (!message.empty()) {
    if (alphabet.size() >= 2) ops.push_back(MutationKind::kChange);
    ops.push_back(MutationKind::kDelete);
  }
  m.kind = ops[rng.below(ops.size())];
  switch (m.kind) {
    case MutationKind::kInsert:
      m.position = rng.below(message.size() + 1);
      m.byte = bytes[rng.below(bytes.size())];
      break;
    case MutationKind::kChange: {
      m.position = rng.below(message.size());
      const auto original = static_cast<unsigned char>(message[m.position]);
      if (alphabet.contains(original)) {
        // Draw from the alphabet with the original removed.
        const auto at = static_cast<std::size_t>(
            std::lower_bound(bytes.begin(), bytes.end(), original) -
            bytes.begin());
        std::size_t pick = rng.below(bytes.size() - 1);
        if (pick >= at) ++pick;
        m.byte = bytes[pick];
      } else {
        m.byte = bytes[rng.below(bytes.size())];
      }
      break;
    }
    case MutationKind::kDelete:
      m.position = rng.below(message.size());
      break;
  }
  return m;
}

std::string apply_mutation(std::string_view message, const Mutation& m) {
  std::string out(message);
  switch (m.kind) {
    case MutationKind::kInsert:
      if (m.position > out.size()) throw std::out_of_range("insert position");
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(m.position),
                 static_cast<char>(m.byte));
      break;
    case MutationKind::kChange:
      if (m.position >= out.size()) throw std::out_of_range("change position");
      out[m.position] = static_cast<char>(m.byte);
      break;
    case MutationKind::kDelete:
      if (m.position >= out.size()) throw std::out_of_range("delete position");
      out.erase(m.position, 1);
      break;
  }
  return out;
}

FuzzCollection build_collection(const FuzzConfig& config) {
  config.validate();
  FuzzCollection c;
  c.config = config;
  c.records.reserve(expected_record_count(config));
  const auto printable = config.alphabet.printable();
  Rng rng(config.seed);
  for (const auto& cmd : config.commands) {
    for (std::size_t len = 0; len <= config.max_arg_len; ++len) {
      for (std::size_t inst = 0; inst < config.instances; ++inst) {
        std::string msg = cmd;
        if (len > 0) {
          msg += ' ';
          for (std::size_t i = 0; i < len; ++i)
            msg += static_cast<char>(printable[rng.below(printable.size())]);
        }
        for (std::size_t step = 0; step <= config.mutations; ++step) {
          if (step > 0) msg = mutate(msg, config.alphabet, rng);
          c.records.push_back(
              RequestRecord{c.records.size(), cmd, len, inst, step, msg});
        }
      }
    }
  }
  c.digest = collection_digest(c.records);
  return c;
}

namespace {

// Canonical coordinates of record `index` in a full collection.
RequestRecord coordinates(const FuzzConfig& config, std::size_t index) {
  const std::size_t per_instance = config.mutations + 1;
  const std::size_t per_len = config.instances * per_instance;
  const std::size_t per_cmd = (config.max_arg_len + 1) * per_len;
  RequestRecord r;
  r.command = config.commands.at(index / per_cmd);
  std::size_t rest = index % per_cmd;
  r.arg_len = rest / per_len;
  rest %= per_len;
  r.instance = rest / per_instance;
  r.step = rest % per_instance;
  return r;
}

std::string excludes_hex(const Alphabet& a) {
  // CR and LF lead so the standard alphabet reads `0d0a`.
  std::string ex = a.excluded();
  std::string ordered;
  for (char c : {'\r', '\n'})
    if (ex.find(c) != std::string::npos) ordered += c;
  for (char c : ex)
    if (c != '\r' && c != '\n') ordered += c;
  return to_hex(ordered);
}

template <typename T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError(line, std::string("bad ") + what + " '" +
                               std::string(s) + "'");
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_collection(const FuzzCollection& c, std::ostream& out) {
  out << "#fc-version 1\n";
  out << "#seed " << c.config.seed << '\n';
  out << "#commands ";
  for (std::size_t i = 0; i < c.config.commands.size(); ++i)
    out << (i ? "," : "") << c.config.commands[i];
  out << '\n';
  out << "#max-arg-len " << c.config.max_arg_len << '\n';
  out << "#instances " << c.config.instances << '\n';
  out << "#mutations " << c.config.mutations << '\n';
  out << "#alphabet-excludes " << excludes_hex(c.config.alphabet) << '\n';
  if (c.reduced_from) {
    out << "#reduced-from " << *c.reduced_from << '\n';
    out << "#source-indexes ";
    // Reduced records keep their parent coordinates; recover the parent
    // index from them so the reader can rebuild each record exactly.
    const std::size_t per_instance = c.config.mutations + 1;
    const std::size_t per_len = c.config.instances * per_instance;
    const std::size_t per_cmd = (c.config.max_arg_len + 1) * per_len;
    for (std::size_t i = 0; i < c.records.size(); ++i) {
      const auto& r = c.records[i];
      const auto cmd_pos = static_cast<std::size_t>(
          std::find(c.config.commands.begin(), c.config.commands.end(),
                    r.command) -
          c.config.commands.begin());
      const std::size_t parent = cmd_pos * per_cmd + r.arg_len * per_len +
                                 r.instance * per_instance + r.step;
      out << (i ? "," : "") << parent;
    }
    out << '\n';
  }
  out << "#digest " << c.digest << '\n';
  for (const auto& r : c.records) out << escape_line(r.bytes) << '\n';
}

FuzzCollection read_collection(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  std::vector<std::string_view> lines;
  {
    std::string_view rest(text);
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      lines.push_back(rest.substr(0, nl));
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }

  std::map<std::string, std::pair<std::string, std::size_t>> header;
  std::size_t body_start = 0;
  bool have_digest = false;
  for (std::size_t i = 0; i < lines.size() && !have_digest; ++i) {
    const auto line = lines[i];
    if (line.empty() || line[0] != '#')
      throw ParseError(i + 1, "expected header line before #digest");
    const auto sp = line.find(' ');
    const std::string key(line.substr(1, sp == std::string_view::npos
                                             ? std::string_view::npos
                                             : sp - 1));
    const std::string value(sp == std::string_view::npos ? std::string_view{}
                                                         : line.substr(sp + 1));
    static const std::set<std::string> known = {
        "fc-version", "seed",              "commands",     "max-arg-len",
        "instances",  "mutations",         "alphabet-excludes",
        "digest",     "reduced-from",      "source-indexes"};
    if (!known.count(key))
      throw ParseError(i + 1, "unknown header '" + key + "'");
    if (!header.emplace(key, std::make_pair(value, i + 1)).second)
      throw ParseError(i + 1, "duplicate header '" + key + "'");
    if (key == "digest") {
      have_digest = true;
      body_start = i + 1;
    }
  }
  if (!have_digest) throw ParseError(lines.size(), "missing #digest header");

  auto field = [&](const char* key) -> const std::pair<std::string, std::size_t>& {
    auto it = header.find(key);
    if (it == header.end())
      throw ParseError(0, std::string("missing #") + key + " header");
    return it->second;
  };

  const auto& version = field("fc-version");
  if (version.first != "1")
    throw ParseError(version.second, "unsupported fc-version " + version.first);

  FuzzCollection c;
  {
    const auto& [v, ln] = field("seed");
    c.config.seed = parse_number<std::uint64_t>(v, ln, "seed");
  }
  {
    const auto& [v, ln] = field("commands");
    c.config.commands = split(v, ',');
    (void)ln;
  }
  {
    const auto& [v, ln] = field("max-arg-len");
    c.config.max_arg_len = parse_number<std::size_t>(v, ln, "max-arg-len");
  }
  {
    const auto& [v, ln] = field("instances");
    c.config.instances = parse_number<std::size_t>(v, ln, "instances");
  }
  {
    const auto& [v, ln] = field("mutations");
    c.config.mutations = parse_number<std::size_t>(v, ln, "mutations");
  }
  {
    const auto& [v, ln] = field("alphabet-excludes");
    if (v.size() % 2 != 0) throw ParseError(ln, "odd-length alphabet-excludes");
    std::string ex;
    for (std::size_t i = 0; i < v.size(); i += 2) {
      unsigned b = 0;
      const auto [p, ec] =
          std::from_chars(v.data() + i, v.data() + i + 2, b, 16);
      if (ec != std::errc() || p != v.data() + i + 2)
        throw ParseError(ln, "bad hex in alphabet-excludes");
      ex += static_cast<char>(b);
    }
    c.config.alphabet = Alphabet::excluding(ex);
  }
  try {
    c.config.validate();
  } catch (const ConfigError& e) {
    throw ParseError(0, std::string("invalid header configuration: ") + e.what());
  }

  const auto& digest = field("digest");
  if (!is_hex_digest(digest.first))
    throw ParseError(digest.second, "malformed digest");
  c.digest = digest.first;

  std::vector<std::size_t> source;
  const std::size_t full = expected_record_count(c.config);
  if (auto it = header.find("reduced-from"); it != header.end()) {
    if (!is_hex_digest(it->second.first))
      throw ParseError(it->second.second, "malformed reduced-from digest");
    c.reduced_from = it->second.first;
    const auto& [v, ln] = field("source-indexes");
    for (const auto& tok : split(v, ',')) {
      const auto idx = parse_number<std::size_t>(tok, ln, "source index");
      if (idx >= full) throw ParseError(ln, "source index out of range");
      if (!source.empty() && idx <= source.back())
        throw ParseError(ln, "source indexes must be strictly ascending");
      source.push_back(idx);
    }
  } else if (header.count("source-indexes")) {
    throw ParseError(header["source-indexes"].second,
                     "#source-indexes without #reduced-from");
  }

  const std::size_t body_lines = lines.size() - body_start;
  const std::size_t expected = c.reduced_from ? source.size() : full;
  if (body_lines != expected)
    throw ParseError(0, "body has " + std::to_string(body_lines) +
                            " requests, header implies " +
                            std::to_string(expected));

  c.records.reserve(body_lines);
  for (std::size_t i = 0; i < body_lines; ++i) {
    const std::size_t ln = body_start + i + 1;
    RequestRecord r = coordinates(c.config, c.reduced_from ? source[i] : i);
    r.index = i;
    try {
      r.bytes = unescape_line(lines[body_start + i]);
    } catch (const ParseError& e) {
      throw ParseError(ln, e.what());
    }
    if (r.bytes.find_first_of("\r\n") != std::string::npos)
      throw ParseError(ln, "request contains CR or LF");
    if (r.step == 0) {
      const bool ok =
          r.arg_len == 0
              ? r.bytes == r.command
              : r.bytes.size() == r.command.size() + 1 + r.arg_len &&
                    r.bytes.compare(0, r.command.size() + 1, r.command + " ") == 0;
      if (!ok) throw ParseError(ln, "base request does not match its command");
    }
    c.records.push_back(std::move(r));
  }

  if (const auto actual = collection_digest(c.records); actual != c.digest)
    throw IntegrityError("collection digest mismatch: header says " + c.digest +
                         ", body hashes to " + actual);
  return c;
}

void save_collection(const FuzzCollection& collection, const std::string& path) {
  write_file_atomic(path,
                    [&](std::ostream& out) { write_collection(collection, out); });
}

FuzzCollection load_collection(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_collection(in);
}

}  // namespace fingerfuzz

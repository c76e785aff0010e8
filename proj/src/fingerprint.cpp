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

#include "fingerfuzz/fingerprint.hpp"

#include <charconv>
#include <ctime>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fingerfuzz/codec.hpp"
#include "fingerfuzz/error.hpp"
#include "fingerfuzz/fileio.hpp"

namespace fingerfuzz {

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  ::gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_fingerprint(const Fingerprint& fp, std::ostream& out) {
  out << "#fp-version 1\n";
  out << "#collection " << fp.collection_digest << '\n';
  out << "#target " << fp.target << '\n';
  if (fp.label) out << "#label " << *fp.label << '\n';
  out << "#created " << fp.created_at << '\n';
  out << "#greeting " << fp.greeting.token() << '\n';
  out << "#login " << fp.login.user.token();
  if (fp.login.pass) out << ',' << fp.login.pass->token();
  out << '\n';
  out << "#count " << fp.observations.size() << '\n';
  for (const auto& o : fp.observations) out << o.token() << '\n';
}

Fingerprint read_fingerprint(std::istream& in) {
  Fingerprint fp;
  std::map<std::string, std::pair<std::string, std::size_t>> header;
  std::string line;
  std::size_t ln = 0;
  std::optional<std::size_t> count;
  auto token = [&](std::string_view t, std::size_t at) {
    auto o = ReplyObservation::from_token(t);
    if (!o) throw ParseError(at, "bad token '" + escape_line(t) + "'");
    return *o;
  };
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line[0] == '#') {
      if (!fp.observations.empty())
        throw ParseError(ln, "header line after body");
      const auto sp = line.find(' ');
      const std::string key = line.substr(1, sp == std::string::npos ? sp : sp - 1);
      const std::string value = sp == std::string::npos ? "" : line.substr(sp + 1);
      static const std::set<std::string> known = {
          "fp-version", "collection", "target", "label",
          "created",    "greeting",   "login",  "count"};
      if (!known.count(key)) throw ParseError(ln, "unknown header '" + key + "'");
      if (!header.emplace(key, std::make_pair(value, ln)).second)
        throw ParseError(ln, "duplicate header '" + key + "'");
      continue;
    }
    fp.observations.push_back(token(line, ln));
  }

  auto need = [&](const char* key) -> const std::pair<std::string, std::size_t>& {
    auto it = header.find(key);
    if (it == header.end())
      throw ParseError(0, std::string("missing #") + key + " header");
    return it->second;
  };
  if (need("fp-version").first != "1")
    throw ParseError(need("fp-version").second, "unsupported fp-version");
  fp.collection_digest = need("collection").first;
  if (!is_hex_digest(fp.collection_digest))
    throw ParseError(need("collection").second, "malformed collection digest");
  fp.target = need("target").first;
  if (auto it = header.find("label"); it != header.end()) fp.label = it->second.first;
  fp.created_at = need("created").first;
  fp.greeting = token(need("greeting").first, need("greeting").second);
  {
    const auto& [v, at] = need("login");
    const auto comma = v.find(',');
    fp.login.user = token(std::string_view(v).substr(0, comma), at);
    if (comma != std::string::npos)
      fp.login.pass = token(std::string_view(v).substr(comma + 1), at);
  }
  {
    const auto& [v, at] = need("count");
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size())
      throw ParseError(at, "bad count '" + v + "'");
    count = n;
  }
  if (*count != fp.observations.size())
    throw ParseError(0, "body has " + std::to_string(fp.observations.size()) +
                            " observations, header says " +
                            std::to_string(*count));
  return fp;
}

void save_fingerprint(const Fingerprint& fp, const std::string& path) {
  write_file_atomic(path, [&](std::ostream& out) { write_fingerprint(fp, out); });
}

Fingerprint load_fingerprint(const std::string& path) {
  std::istringstream in(read_file(path));
  try {
    return read_fingerprint(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

}  // namespace fingerfuzz

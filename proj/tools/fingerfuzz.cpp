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

// fingerfuzz: generate fuzz collections, fingerprint FTP servers, match and
// reduce fingerprint databases, and run scripted lab servers.

#include <charconv>
#include <csignal>
#include <iomanip>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "fingerfuzz/codec.hpp"
#include "fingerfuzz/error.hpp"
#include "fingerfuzz/fileio.hpp"
#include "fingerfuzz/fingerprint.hpp"
#include "fingerfuzz/fuzzgen.hpp"
#include "fingerfuzz/labserver.hpp"
#include "fingerfuzz/matcher.hpp"
#include "fingerfuzz/optimizer.hpp"
#include "fingerfuzz/scanner.hpp"

namespace ff = fingerfuzz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOperational = 1;
constexpr int kExitUsage = 2;

// Usage problems found after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> read_command_file(const std::string& path) {
  std::istringstream in(ff::read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::uint64_t parse_seed(const std::string& s, const char* origin) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw UsageError(std::string(origin) + ": invalid seed '" + s + "'");
  return v;
}

// ---- generate ---------------------------------------------------------------

struct GenerateFlags {
  std::string commands = "default";
  long long max_len = 16;
  long long instances = 2;
  long long mutations = 4;
  std::optional<std::string> seed;
  std::string output;
};

int cmd_generate(const GenerateFlags& f) {
  if (f.max_len < 0) throw UsageError("--max-len must be >= 0");
  if (f.instances < 1) throw UsageError("--instances must be >= 1");
  if (f.mutations < 0) throw UsageError("--mutations must be >= 0");
  ff::FuzzConfig config = ff::FuzzConfig::standard();
  if (f.commands != "default") config.commands = read_command_file(f.commands);
  config.max_arg_len = static_cast<std::size_t>(f.max_len);
  config.instances = static_cast<std::size_t>(f.instances);
  config.mutations = static_cast<std::size_t>(f.mutations);
  // flag > FINGERFUZZ_SEED > 1
  if (f.seed) {
    config.seed = parse_seed(*f.seed, "--seed");
  } else if (const char* env = std::getenv("FINGERFUZZ_SEED"); env && *env) {
    config.seed = parse_seed(env, "FINGERFUZZ_SEED");
  }
  const auto collection = ff::build_collection(config);
  ff::save_collection(collection, f.output);
  std::cout << "wrote " << collection.size() << " requests to " << f.output << '\n'
            << "digest " << collection.digest << '\n';
  return kExitOk;
}

// ---- scan -------------------------------------------------------------------

struct ScanFlags {
  std::string collection;
  std::string host;
  int port = 21;
  std::optional<std::string> user;
  std::optional<std::string> pass;
  std::optional<std::string> label;
  long long delay_ms = 0;
  long long reply_timeout_ms = 5000;
  long long drain_ms = 200;
  long long connect_timeout_ms = 10000;
  std::string output;
  std::string targets;
};

struct TargetLine {
  std::string host;
  int port = 21;
  std::optional<std::string> label;
};

std::vector<TargetLine> read_targets(const std::string& path, int default_port) {
  std::istringstream in(ff::read_file(path));
  std::vector<TargetLine> out;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    std::istringstream ls(line);
    std::string hostport, label;
    if (!(ls >> hostport) || hostport[0] == '#') continue;
    TargetLine t;
    t.port = default_port;
    const auto colon = hostport.rfind(':');
    t.host = hostport.substr(0, colon);
    if (colon != std::string::npos) {
      try {
        t.port = std::stoi(hostport.substr(colon + 1));
      } catch (...) {
        throw UsageError(path + ":" + std::to_string(ln) + ": bad port");
      }
    }
    if (ls >> label) t.label = label;
    out.push_back(std::move(t));
  }
  if (out.empty()) throw UsageError(path + ": no targets");
  return out;
}

std::string histogram(const ff::Fingerprint& fp) {
  std::map<std::string, std::size_t> counts;
  for (const auto& o : fp.observations) ++counts[o.token()];
  std::ostringstream out;
  for (const auto& [tok, n] : counts) out << "  " << tok << "  " << n << '\n';
  return out.str();
}

ff::TargetSpec make_target(const ScanFlags& f, const std::string& host, int port) {
  if (port < 1 || port > 65535) throw UsageError("--port must be in 1..65535");
  ff::TargetSpec t;
  t.host = host;
  t.port = static_cast<std::uint16_t>(port);
  if (f.user) t.username = *f.user;
  if (f.pass) t.password = *f.pass;
  t.reply_timeout = ff::Millis(f.reply_timeout_ms);
  t.drain_window = ff::Millis(f.drain_ms);
  t.connect_timeout = ff::Millis(f.connect_timeout_ms);
  try {
    t.validate();
  } catch (const ff::ConfigError& e) {
    throw UsageError(e.what());
  }
  return t;
}

int cmd_scan(const ScanFlags& f) {
  if (f.delay_ms < 0) throw UsageError("--delay must be >= 0");
  if (f.host.empty() == f.targets.empty())
    throw UsageError("give exactly one of --host or --targets");

  std::vector<std::pair<ff::TargetSpec, std::optional<std::string>>> jobs;
  if (!f.host.empty()) {
    jobs.emplace_back(make_target(f, f.host, f.port), f.label);
  } else {
    for (const auto& t : read_targets(f.targets, f.port))
      jobs.emplace_back(make_target(f, t.host, t.port), t.label);
    if (!std::filesystem::is_directory(f.output))
      throw UsageError("with --targets, -o must name an existing directory");
  }
  const auto collection = ff::load_collection(f.collection);

  std::mutex out_mu;
  std::vector<int> status(jobs.size(), kExitOk);
  auto run = [&](std::size_t i) {
    const auto& [target, label] = jobs[i];
    ff::ScanOptions opts;
    opts.label = label;
    opts.delay = ff::Millis(f.delay_ms);
    try {
      const auto fp = ff::fingerprint_target(collection, target, opts);
      std::string path = f.output;
      if (!f.targets.empty()) {
        std::string stem = label.value_or(target.host + "_" + std::to_string(target.port));
        path = (std::filesystem::path(f.output) / (stem + ".fp")).string();
      }
      ff::save_fingerprint(fp, path);
      std::lock_guard lock(out_mu);
      std::cout << target.descriptor() << ": " << fp.observations.size()
                << " observations written to " << path << '\n'
                << histogram(fp);
    } catch (const ff::ScanRefusedError& e) {
      std::lock_guard lock(out_mu);
      std::cerr << "error: " << e.what() << '\n';
      status[i] = kExitOperational;
    } catch (const std::exception& e) {
      std::lock_guard lock(out_mu);
      std::cerr << "error: " << target.descriptor() << ": " << e.what() << '\n';
      status[i] = kExitOperational;
    }
  };
  if (jobs.size() == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < jobs.size(); ++i) threads.emplace_back(run, i);
    for (auto& t : threads) t.join();
  }
  for (int s : status)
    if (s != kExitOk) return s;
  return kExitOk;
}

// ---- match ------------------------------------------------------------------

struct MatchFlags {
  std::string db;
  std::string fingerprint;
  long long top = 5;
  bool json = false;
  bool matrix = false;
  std::optional<double> threshold;
};

int cmd_match(const MatchFlags& f) {
  if (f.top < 1) throw UsageError("--top must be >= 1");
  if (!f.matrix && f.fingerprint.empty())
    throw UsageError("--fingerprint is required unless --matrix is given");
  const auto db = ff::FingerprintDB::load_directory(f.db);
  if (f.matrix) {
    std::cout << ff::match_matrix(db).to_csv();
    if (f.fingerprint.empty()) return kExitOk;
  }
  const auto probe = ff::load_fingerprint(f.fingerprint);
  const auto results = ff::rank(probe, db, static_cast<std::size_t>(f.top));
  std::cout << (f.json ? ff::format_json(results)
                       : ff::format_report(results, f.threshold));
  return kExitOk;
}

// ---- optimize ---------------------------------------------------------------

struct OptimizeFlags {
  std::string db;
  std::string collection;
  std::string output;
  std::string emit_indexes;
};

int cmd_optimize(const OptimizeFlags& f) {
  const auto db = ff::FingerprintDB::load_directory(f.db);
  const auto full = ff::load_collection(f.collection);
  const auto sel = ff::discriminating_indexes(db);
  if (sel.kept.empty()) {
    std::cerr << "error: all " << db.size()
              << " fingerprints agree at every position; nothing discriminates. "
                 "Add fingerprints of different servers before optimizing.\n";
    return kExitOperational;
  }
  const auto reduced = ff::reduce_collection(full, sel);
  ff::save_collection(reduced, f.output);
  if (!f.emit_indexes.empty()) {
    const std::string csv = sel.to_csv();
    ff::write_file_atomic(f.emit_indexes, [&](std::ostream& out) { out << csv; });
  }
  const double pct = 100.0 * static_cast<double>(reduced.size()) /
                     static_cast<double>(full.size());
  std::cout << "kept " << reduced.size() << " of " << full.size() << " requests ("
            << std::fixed << std::setprecision(2) << pct << "%)\n"
            << "digest " << reduced.digest << '\n';
  return kExitOk;
}

// ---- lab --------------------------------------------------------------------

struct LabFlags {
  std::string script;
  int port = 2121;
  std::string bind = "127.0.0.1";
};

int cmd_lab(const LabFlags& f) {
  if (f.port < 0 || f.port > 65535) throw UsageError("--port must be in 0..65535");
  auto script = ff::load_script(f.script);

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  std::mutex log_mu;
  ff::LabServer server(std::move(script), static_cast<std::uint16_t>(f.port), f.bind,
                       [&](std::string_view req, std::string_view action) {
                         std::lock_guard lock(log_mu);
                         std::cerr << ff::escape_line(req) << "\t" << action << '\n';
                       });
  std::cout << "listening on " << f.bind << ":" << server.port() << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fingerfuzz - service fingerprinting with fuzz-generated requests"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* g = app.add_subcommand("generate", "generate a fuzz collection (.fc)");
  g->add_option("--commands", gen.commands, "command list file, or 'default'");
  g->add_option("--max-len", gen.max_len, "largest argument length");
  g->add_option("--instances", gen.instances, "instances per command and length");
  g->add_option("--mutations", gen.mutations, "mutation steps per instance");
  g->add_option("--seed", gen.seed, "generator seed (default: $FINGERFUZZ_SEED or 1)");
  g->add_option("-o,--output", gen.output, "output .fc file")->required();

  ScanFlags scan;
  auto* s = app.add_subcommand("scan", "fingerprint a target (.fp)");
  s->add_option("--collection", scan.collection, "fuzz collection")->required();
  s->add_option("--host", scan.host, "target host");
  s->add_option("--targets", scan.targets, "file of 'host[:port] [label]' lines");
  s->add_option("--port", scan.port, "target port");
  s->add_option("--user", scan.user, "username (default anonymous)");
  s->add_option("--pass", scan.pass, "password");
  s->add_option("--label", scan.label, "label stored in the fingerprint");
  s->add_option("--delay", scan.delay_ms, "pause before each request (ms)");
  s->add_option("--reply-timeout", scan.reply_timeout_ms, "reply timeout (ms)");
  s->add_option("--drain-window", scan.drain_ms, "post-reply drain window (ms)");
  s->add_option("--connect-timeout", scan.connect_timeout_ms, "connect timeout (ms)");
  s->add_option("-o,--output", scan.output, "output .fp file (directory with --targets)")
      ->required();

  MatchFlags match;
  auto* m = app.add_subcommand("match", "rank a fingerprint against a database");
  m->add_option("--db", match.db, "directory of .fp files")->required();
  m->add_option("--fingerprint", match.fingerprint, "probe fingerprint");
  m->add_option("--top", match.top, "number of results");
  m->add_flag("--json", match.json, "machine-readable output");
  m->add_flag("--matrix", match.matrix, "all-pairs CSV of the database");
  m->add_option("--threshold", match.threshold, "annotate results at or above this percent");

  OptimizeFlags opt;
  auto* o = app.add_subcommand("optimize", "keep only discriminating requests");
  o->add_option("--db", opt.db, "directory of .fp files")->required();
  o->add_option("--collection", opt.collection, "full fuzz collection")->required();
  o->add_option("-o,--output", opt.output, "reduced .fc file")->required();
  o->add_option("--emit-indexes", opt.emit_indexes, "write index,provenance CSV");

  LabFlags lab;
  auto* l = app.add_subcommand("lab", "run a scripted FTP responder");
  l->add_option("--script", lab.script, "server script")->required();
  l->add_option("--port", lab.port, "listen port (0 = ephemeral)");
  l->add_option("--bind", lab.bind, "listen address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*s) return cmd_scan(scan);
    if (*m) return cmd_match(match);
    if (*o) return cmd_optimize(opt);
    if (*l) return cmd_lab(lab);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ff::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ff::ScriptError& e) {
    std::cerr << "script error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOperational;
  }
  return kExitUsage;
}

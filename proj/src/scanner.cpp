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

#include "fingerfuzz/scanner.hpp"

#include <thread>

namespace fingerfuzz {
namespace {

struct Opened {
  Session session;
  ReplyObservation greeting;
  LoginOutcome login;
};

Opened open_and_login(const TargetSpec& target) {
  Connection c = connect(target);
  LoginOutcome outcome = login(c.session, target.username, target.password);
  return {std::move(c.session), c.greeting, outcome};
}

}  // namespace

Fingerprint fingerprint_target(const FuzzCollection& collection,
                               const TargetSpec& target,
                               const ScanOptions& options) {
  target.validate();
  Fingerprint fp;
  fp.collection_digest = collection.digest;
  fp.target = target.descriptor();
  fp.label = options.label;

  Session session;
  {
    Connection c = connect(target);
    fp.greeting = c.greeting;
    try {
      fp.login = login(c.session, target.username, target.password);
    } catch (const LoginError& e) {
      std::string code = e.outcome().pass ? e.outcome().pass->token()
                                          : e.outcome().user.token();
      throw ScanRefusedError(
          "login to " + target.descriptor() + " refused (" + code +
              "); without anonymous access or valid credentials servers "
              "answer every request with the same error code and cannot be "
              "told apart",
          c.greeting, e.outcome());
    }
    session = std::move(c.session);
  }

  const std::size_t total = collection.records.size();
  fp.observations.reserve(total);

  auto reconnect = [&](std::size_t done) {
    std::string last;
    for (int attempt = 1; attempt <= options.reconnect_attempts; ++attempt) {
      try {
        session = open_and_login(target).session;
        return;
      } catch (const Error& e) {
        last = e.what();
      }
      std::this_thread::sleep_for(options.reconnect_backoff * attempt);
    }
    throw PartialScanError("reconnect to " + target.descriptor() + " failed " +
                               std::to_string(options.reconnect_attempts) +
                               " times after " + std::to_string(done) + " of " +
                               std::to_string(total) + " requests: " + last,
                           done);
  };

  for (const auto& record : collection.records) {
    if (!session.is_open()) reconnect(fp.observations.size());
    if (options.delay.count() > 0) std::this_thread::sleep_for(options.delay);
    ReplyObservation obs;
    try {
      obs = session.exchange(record.bytes);
    } catch (const TransportError& e) {
      throw PartialScanError(std::string("transport failure: ") + e.what(),
                             fp.observations.size());
    }
    fp.observations.push_back(obs);
    if (obs.kind() == ReplyKind::kDropped) session.close();
    if (options.progress) options.progress(fp.observations.size(), total);
  }
  fp.created_at = utc_timestamp_now();
  return fp;
}

}  // namespace fingerfuzz

// Copyright 2026 The OVK Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <nlohmann/json.hpp>

#include "ovk/authenticator.h"
#include "ovk/crypto/envelope.h"
#include "ovk/crypto/suite.h"
#include "ovk/harness/race.h"
#include "ovk/harness/scenario.h"
#include "ovk/harness/secrecy.h"
#include "ovk/harness/world.h"
#include "ovk/ownership.h"
#include "ovk/service.h"
#include "support/oracle.h"
#include "support/testing.h"
#include "support/vectors.h"

namespace ovk::acceptance {
namespace {

using namespace std::chrono_literals;
using authenticator::Authenticator;
using authenticator::LoginOutcome;
using harness::DeviceSpec;
using harness::ServiceSpec;
using harness::World;
using nlohmann::json;

struct Verdict {
  bool pass = true;
  std::string detail;

  // Records a failed check; the first few are kept for the report.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || failures < 5) detail += (detail.empty() ? "" : "; ") + what;
    pass = false;
    ++failures;
  }
  int failures = 0;
};

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  return testing::code_of(fn);
}

std::string name_of(std::optional<ErrorCode> c) {
  return c ? std::string(error_name(*c)) : "no error";
}

// Every world built by the other criteria passes through here; the
// secrecy criterion reports the totals.
struct SecrecySweep {
  std::size_t worlds = 0;
  std::size_t entries = 0;
  std::size_t secrets = 0;
  std::vector<std::string> findings;

  void scan(const std::vector<wire::TrafficLog::Entry>& log,
            const std::vector<Bytes>& secret_values,
            const std::vector<std::string>& passwords) {
    ++worlds;
    entries += log.size();
    secrets += secret_values.size() + passwords.size();
    for (const auto& f : harness::scan_traffic(log, secret_values, passwords)) {
      findings.push_back(f.channel + ": " + f.what);
    }
  }

  void observe(World& w) { scan(w.log()->entries(), w.secrets(), w.passwords()); }
};

SecrecySweep& sweep() {
  static SecrecySweep s;
  return s;
}

std::mt19937_64& rng() {
  static std::mt19937_64 r(std::random_device{}());
  return r;
}

std::size_t uniform(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng());
}

DeviceSpec device_spec(const std::string& name) {
  DeviceSpec spec;
  spec.name = name;
  return spec;
}

// 1. The nine-step use case, end to end.
Verdict use_case_replay() {
  Verdict v;
  auto report = harness::run_scenario_file(
      std::filesystem::path(OVK_SOURCE_DIR) / "scenarios" / "usecase_nine_steps.json",
      [](World& w) { sweep().observe(w); });
  for (const auto& s : report.steps) {
    v.require(s.ok, "step " + std::to_string(s.index) + " (" + s.label + ") got " + s.outcome);
  }
  // The three behaviours the use case exists to show.
  auto find = [&](const std::string& label, const std::string& outcome) {
    return std::any_of(report.steps.begin(), report.steps.end(), [&](const auto& s) {
      return s.label == label && s.outcome == outcome && s.ok;
    });
  };
  v.require(find("7", "session"), "lost device did not authenticate before the majority");
  v.require(find("8", "reenroll-required"), "lost device not revoked after the majority");
  v.require(find("9", "enrolled"), "no seamless re-enrollment after the deadline commit");
  if (v.pass) v.detail = std::to_string(report.steps.size()) + " steps exact";
  return v;
}

// 2. Race outcomes against a rule oracle over every ordering.
Verdict race_table() {
  Verdict v;
  std::size_t runs = 0, claim_checks = 0, tie_first_attacker = 0;
  for (std::uint32_t n = 2; n <= 5; ++n) {
    for (std::uint32_t nu = 0; nu <= n; ++nu) {
      for (std::uint32_t na = 0; nu + na <= n; ++na) {
        std::string order = std::string(na, 'a') + std::string(nu, 'u');
        do {
          harness::RaceConfig cfg;
          cfg.n = n;
          cfg.n_user = nu;
          cfg.n_attacker = na;
          cfg.order = order;
          cfg.observer = [](World& w) { sweep().observe(w); };
          auto r = harness::run_race(cfg);
          ++runs;
          char expected = oracle::race_winner(n, order);
          char got = harness::winner_name(r.winner)[0];
          std::string tag = "n=" + std::to_string(n) + " " + order;
          v.require(got == expected, tag + ": got " + std::string(harness::winner_name(r.winner)) +
                                         ", oracle " + std::string(1, expected));

          // The claims, in the form the rules support.
          bool user_first = !order.empty() && order[0] == 'u';
          if (n == 2 && na == 1 && order[0] == 'a') {
            ++claim_checks;
            v.require(r.winner == harness::Winner::kAttacker, tag + ": N=2 attacker-first");
          }
          if (n >= 3 && nu > 0 && (nu > na || (2 * nu >= n && user_first))) {
            ++claim_checks;
            v.require(r.winner == harness::Winner::kUser, tag + ": user should win");
          }
          if (n >= 3 && 2 * nu >= n && nu == na && !user_first) ++tie_first_attacker;
        } while (std::next_permutation(order.begin(), order.end()));
      }
    }
  }
  // A couple of random interleavings through the seeded path as well.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    harness::RaceConfig cfg{5, 2, 2, false, seed, std::nullopt, {}};
    auto r = harness::run_race(cfg);
    ++runs;
    v.require(harness::winner_name(r.winner)[0] == oracle::race_winner(5, r.sequence),
              "seeded ordering " + r.sequence);
  }
  if (v.pass) {
    v.detail = std::to_string(runs) + " races match the oracle, " +
               std::to_string(claim_checks) + " claim checks; " +
               std::to_string(tie_first_attacker) +
               " tie orderings with the attacker first go to the attacker";
  }
  return v;
}

// 3. N-party seed agreement against the direct computation.
Verdict seed_agreement() {
  Verdict v;
  std::size_t trials = 0;
  for (std::uint32_t n = 2; n <= 5; ++n) {
    for (int t = 0; t < 20; ++t) {
      std::vector<crypto::Scalar> scalars;
      std::vector<oracle::Bytes> raw;
      std::vector<Bytes> secrets;
      for (std::uint32_t i = 0; i < n; ++i) {
        scalars.push_back(crypto::Scalar::random());
        raw.emplace_back(scalars.back().bytes().begin(), scalars.back().bytes().end());
        secrets.push_back(raw.back());
      }
      std::string password = "pw-" + to_hex(crypto::random_bytes(6));
      std::vector<std::string> wire;
      auto seeds = testing::run_ring(n, password, 1, scalars, {}, &wire);
      Bytes expected = oracle::group_seed(raw);
      for (const auto& s : seeds) {
        v.require(s.seed == expected, "N=" + std::to_string(n) + " trial " +
                                          std::to_string(t) + " disagrees with oracle");
      }
      secrets.push_back(expected);
      std::vector<wire::TrafficLog::Entry> log;
      for (auto& w : wire) log.push_back({"seed-round", std::move(w)});
      sweep().scan(log, secrets, {password});
      ++trials;
    }
  }
  if (v.pass) v.detail = std::to_string(trials) + " trials, all parties equal the oracle";
  return v;
}

std::string random_label(std::size_t len) {
  static const char* letters = "abcdefghijklmnopqrstuvwxyz";
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(letters[uniform(0, 25)]);
  return s;
}

// A second origin that looks like the first, or an unrelated one.
std::string lookalike(const std::string& origin) {
  std::string host = origin.substr(8);
  switch (uniform(0, 4)) {
    case 0: {  // one confusable character
      std::size_t i = uniform(0, host.find('.') - 1);
      const std::map<char, char> swap = {{'l', '1'}, {'o', '0'}, {'i', 'l'}, {'e', '3'}};
      auto it = swap.find(host[i]);
      host[i] = it != swap.end() ? it->second : (host[i] == 'z' ? 'y' : host[i] + 1);
      break;
    }
    case 1:
      host = host.substr(0, host.find('.')) + "-login" + host.substr(host.find('.'));
      break;
    case 2:
      host += ".evil.example";
      break;
    case 3:
      return "http://" + host;
    default:
      host = random_label(8) + ".example";
  }
  return "https://" + host;
}

// 4. Metadata replayed by another origin never produces an enrollment.
Verdict homograph() {
  Verdict v;
  World w;
  for (const char* n : {"A", "B"}) w.add_device(device_spec(n));
  w.share_seed({"A", "B"});
  std::set<std::string> used;
  int pairs = 0;
  while (pairs < 100) {
    std::string real = "https://" + random_label(uniform(5, 12)) + ".example";
    std::string fake = lookalike(real);
    if (fake == real || used.contains(real) || used.contains(fake)) continue;
    used.insert(real);
    used.insert(fake);
    w.add_service({real, 24h, std::nullopt});
    w.add_service({fake, 24h, real});
    auto client = w.client(real);
    w.device("A").register_account(client, "alice");
    sweep().observe(w);
    w.log()->clear();
    auto phish = w.client(fake);
    for (const char* dev : {"B", "A"}) {
      auto code = code_of([&] { w.device(dev).login_or_enroll(phish, "alice"); });
      v.require(code == ErrorCode::kWrongService,
                std::string(dev) + " via " + fake + " gave " + name_of(code));
    }
    std::size_t registration_frames = 0;
    for (const auto& e : w.log()->entries()) {
      if (e.channel != "device->service") continue;
      auto kind = json::parse(e.bytes)["kind"].get<std::string>();
      if (kind == "enroll" || kind == "register") ++registration_frames;
    }
    v.require(registration_frames == 0, fake + " received a registration frame");
    v.require(w.service(real).account("alice")->active_count() == 1,
              real + " gained a credential");
    sweep().observe(w);
    ++pairs;
  }
  if (v.pass) v.detail = "100 origin pairs, WrongService with zero registration frames";
  return v;
}

// 5. At most N active credentials under any interleaving.
Verdict capacity() {
  Verdict v;
  World w;
  std::vector<std::string> devs{"d0", "d1", "d2", "d3"};
  for (const auto& d : devs) w.add_device(device_spec(d));
  // Three devices agree a seed (N = 3); a fourth ends up holding it too.
  auto seeds = w.share_seed({"d0", "d1", "d2"});
  w.device("d3").add_seed(seeds[0], true);

  for (int shuffle = 0; shuffle < 200; ++shuffle) {
    std::string sid = "https://capacity" + std::to_string(shuffle) + ".example";
    w.add_service({sid, 24h, std::nullopt});
    auto client = w.client(sid);
    auto order = devs;
    std::shuffle(order.begin(), order.end(), rng());
    w.device(order[0]).register_account(client, "alice");
    // Each remaining device tries one to three times, interleaved.
    std::vector<std::string> attempts;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t k = uniform(i == 0 ? 0 : 1, 3); k > 0; --k) attempts.push_back(order[i]);
    }
    std::shuffle(attempts.begin(), attempts.end(), rng());
    std::set<std::string> holders{order[0]};
    for (const auto& d : attempts) {
      bool had = w.device(d).credential(sid, "alice") != nullptr;
      std::size_t active_before = w.service(sid).account("alice")->active_count();
      auto code = code_of([&] { w.device(d).login_or_enroll(client, "alice"); });
      std::size_t active = w.service(sid).account("alice")->active_count();
      v.require(active <= 3, sid + ": " + std::to_string(active) + " active");
      if (had) {
        v.require(!code, sid + ": login by " + d + " gave " + name_of(code));
      } else if (active_before == 3) {
        v.require(code == ErrorCode::kNLimitExceeded,
                  sid + ": 4th enrollment by " + d + " gave " + name_of(code));
      } else {
        v.require(!code, sid + ": enrollment by " + d + " gave " + name_of(code));
        holders.insert(d);
      }
    }
    v.require(w.service(sid).account("alice")->active_count() == holders.size(),
              sid + ": active count mismatch");
  }
  // The plain sequence, stated directly.
  std::string sid = "https://capacity-direct.example";
  w.add_service({sid, 24h, std::nullopt});
  auto client = w.client(sid);
  w.device("d0").register_account(client, "alice");
  w.device("d1").login_or_enroll(client, "alice");
  w.device("d2").login_or_enroll(client, "alice");
  auto fourth = code_of([&] { w.device("d3").login_or_enroll(client, "alice"); });
  v.require(fourth == ErrorCode::kNLimitExceeded, "4th enrollment gave " + name_of(fourth));
  sweep().observe(w);
  if (v.pass) v.detail = "4th enrollment NLimitExceeded; 200 shuffles never above 3 active";
  return v;
}

// 6. Published vectors and exhaustive single-character envelope tampering.
Verdict crypto_vectors() {
  Verdict v;
  for (const auto& t : vectors::rfc4231()) {
    v.require(to_hex(crypto::hmac_sha256(t.key, t.message)) == t.mac_hex, "RFC 4231 mismatch");
  }
  for (const auto& t : vectors::nist_gcm()) {
    auto out = crypto::aes128_gcm_seal(t.key, t.iv, t.aad, t.plaintext);
    v.require(to_hex(out.ciphertext) == t.ciphertext_hex && to_hex(out.tag) == t.tag_hex,
              "GCM vector mismatch");
    auto back = crypto::aes128_gcm_open(t.key, t.iv, t.aad, out.ciphertext, out.tag);
    v.require(back && *back == t.plaintext, "GCM open failed");
  }
  for (const auto& t : vectors::rfc6979_p256()) {
    bool ok = crypto::verify(crypto::EcPoint::from_bytes(t.public_key), t.message, t.signature);
    v.require(ok == t.valid, "ECDSA known answer mismatch");
  }

  const std::string good =
      crypto::seal("tamper password", to_bytes("{\"point\":\"share\"}"),
                   crypto::kMinPbkdf2Iterations)
          .serialize();
  const std::string substitutes =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_+/=.";
  std::size_t mutations = 0;
  for (std::size_t i = 0; i < good.size(); ++i) {
    for (char c : substitutes) {
      if (c == good[i]) continue;
      std::string m = good;
      m[i] = c;
      ++mutations;
      auto code = code_of([&] { crypto::open("tamper password", m); });
      v.require(code == ErrorCode::kAuthFailure || code == ErrorCode::kParseError,
                "mutation at " + std::to_string(i) + " to '" + std::string(1, c) + "' gave " +
                    name_of(code));
    }
  }
  if (v.pass) {
    v.detail = "RFC 4231 x6, GCM x4, ECDSA KAT x4, " + std::to_string(mutations) +
               " envelope mutations rejected";
  }
  return v;
}

// 7. No enrollment while a migration is open.
Verdict migration_freeze() {
  Verdict v;
  World w;
  std::vector<std::string> devs{"d0", "d1", "d2", "d3", "d4"};
  for (const auto& d : devs) w.add_device(device_spec(d));
  std::size_t attempts = 0, frozen = 0;
  for (int schedule = 0; schedule < 100; ++schedule) {
    std::string sid = "https://freeze" + std::to_string(schedule) + ".example";
    w.add_service({sid, 24h, std::nullopt});
    auto client = w.client(sid);
    w.share_seed(devs);
    auto order = devs;
    std::shuffle(order.begin(), order.end(), rng());
    std::size_t enrolled = uniform(2, 4);
    w.device(order[0]).register_account(client, "alice");
    for (std::size_t i = 1; i < enrolled; ++i) w.device(order[i]).login_or_enroll(client, "alice");
    const std::string updater = order[uniform(0, enrolled - 1)];
    const std::string late = order[uniform(enrolled, order.size() - 1)];
    std::vector<std::string> group{updater, late};
    w.share_seed(group);
    auto first = w.device(updater).login_or_enroll(client, "alice");
    v.require(first.update_sent && first.update && !first.update->committed,
              sid + ": migration did not open");

    // Random mix of waiting, sibling logins and enrollment attempts, all
    // inside the migration period.
    Duration elapsed{0};
    std::size_t steps = uniform(3, 8);
    for (std::size_t s = 0; s < steps; ++s) {
      switch (uniform(0, 2)) {
        case 0: {
          Duration d = std::chrono::minutes(uniform(1, 60 * 4));
          if (elapsed + d < 24h) {
            w.advance(d);
            elapsed += d;
          }
          break;
        }
        case 1: {
          const std::string& sib = order[uniform(0, enrolled - 1)];
          if (sib != updater) w.device(sib).login_or_enroll(client, "alice");
          break;
        }
        default: {
          auto code = code_of([&] { w.device(late).login_or_enroll(client, "alice"); });
          ++attempts;
          if (code == ErrorCode::kMigrationInProgress) ++frozen;
          v.require(code == ErrorCode::kMigrationInProgress,
                    sid + ": enrollment during migration gave " + name_of(code));
        }
      }
    }
    auto code = code_of([&] { w.device(late).login_or_enroll(client, "alice"); });
    ++attempts;
    if (code == ErrorCode::kMigrationInProgress) ++frozen;
    v.require(code == ErrorCode::kMigrationInProgress,
              sid + ": final enrollment during migration gave " + name_of(code));
    v.require(w.service(sid).account("alice")->active_count() == enrolled,
              sid + ": credential count changed during migration");

    // After the deadline the new OVK is in force and the late device, which
    // holds the new seed, enrolls normally.
    w.advance(24h - elapsed + 1s);
    auto after = w.device(late).login_or_enroll(client, "alice");
    v.require(after.outcome == LoginOutcome::kEnrolled, sid + ": no enrollment after deadline");
  }
  sweep().observe(w);
  if (v.pass) {
    v.detail = std::to_string(frozen) + "/" + std::to_string(attempts) +
               " enrollment attempts in 100 schedules got MigrationInProgress";
  }
  return v;
}

// 8. Same seed, R and service id give the same key on any device.
Verdict determinism() {
  Verdict v;
  auto dir = std::filesystem::temp_directory_path() /
             ("ovk-acc-det-" + to_hex(crypto::random_bytes(6)));
  std::filesystem::create_directories(dir);
  const auto& m = testing::test_manufacturer();
  std::size_t derived = 0;
  for (int t = 0; t < 500; ++t) {
    auto seed = testing::random_seed(1, static_cast<std::uint32_t>(uniform(2, 5)));
    Bytes r = crypto::random_bytes(kMetadataRandomSize);
    std::string sid = "https://" + random_label(uniform(1, 20)) + ".example";

    // Two device instances; the second reads its seed back from storage.
    Authenticator one("one", attestation::DeviceIdentity::provision(m, "ovk-reference"));
    one.unlock(true);
    one.add_seed(seed);
    auto path = dir / "dev.json";
    one.save(path);
    Authenticator two = Authenticator::load(path);
    two.unlock(true);

    auto a = derive_with_r(seed, sid, r);
    auto expected = oracle::ovsk(seed.seed, r);
    v.require(a.has_value() == expected.has_value(), "range decision differs from oracle");
    if (!a) continue;
    ++derived;
    v.require(Bytes(a->ovpk().view().begin(), a->ovpk().view().end()) ==
                  oracle::mul_base(*expected),
              "OVPK differs from oracle");
    v.require(a->metadata.m == oracle::metadata_mac(*expected, r, sid), "MAC differs");
    // Both instances accept the metadata and land on the same key.
    v.require(one.can_derive(sid, a->metadata) && two.can_derive(sid, a->metadata),
              "a device instance rejects its own metadata");
    auto b = derive_from_metadata(seed, sid, a->metadata);
    v.require(b.ovpk() == a->ovpk(), "re-derivation differs");
  }
  std::filesystem::remove_all(dir);
  if (v.pass) v.detail = std::to_string(derived) + " triples byte-identical across instances";
  return v;
}

// 9. Nothing secret on any wire the other criteria produced.
Verdict secrecy() {
  Verdict v;
  // The scanner must actually catch a planted secret.
  Bytes planted = crypto::random_bytes(32);
  auto hits = harness::scan_traffic(
      {{"probe", "{\"x\":\"" + to_hex(planted) + "\"}"},
       {"probe", "{\"x\":\"" + base64url_encode(planted) + "\"}"}},
      {planted}, {});
  std::set<std::size_t> caught;
  for (const auto& h : hits) caught.insert(h.entry);
  v.require(caught.size() == 2, "scanner missed a planted secret");
  const auto& s = sweep();
  v.require(s.worlds > 100, "sweep saw too few runs");
  v.require(s.entries > 10000, "sweep saw too little traffic");
  for (const auto& f : s.findings) v.require(false, f);
  if (v.pass) {
    v.detail = std::to_string(s.entries) + " frames from " + std::to_string(s.worlds) +
               " runs, 0 findings";
  }
  return v;
}

// One deployment for the persistence criterion, built without World so the
// service and devices can be torn down and restored from disk.
struct Deployment {
  std::shared_ptr<ManualClock> clock;
  std::unique_ptr<service::Service> service;
  std::shared_ptr<wire::TrafficLog> log = std::make_shared<wire::TrafficLog>();
  std::unique_ptr<wire::LoopbackTransport> transport;
  std::map<std::string, std::unique_ptr<Authenticator>> devices;

  static constexpr char kSid[] = "https://persist.example";

  void connect() {
    transport = std::make_unique<wire::LoopbackTransport>(
        [this](const wire::Frame& f) { return service->handle(f); }, kSid, log);
  }
  std::string vote(const std::string& d) {
    wire::ServiceClient client(*transport);
    try {
      auto r = devices.at(d)->login_or_enroll(client, "alice");
      std::string out(authenticator::outcome_name(r.outcome));
      if (r.update) out += r.update->committed ? "+committed" : "+pending";
      return out;
    } catch (const Error& e) {
      return std::string(e.name());
    }
  }
  std::vector<Bytes> secrets() const {
    std::vector<Bytes> out;
    for (const auto& [_, d] : devices) {
      for (auto& s : d->secret_material()) out.push_back(std::move(s));
    }
    return out;
  }
};

// What must match between the two runs. Signature bytes are excluded:
// ECDSA is randomized, so re-sent votes carry fresh signatures.
json commit_summary(const service::Account& a) {
  json creds = json::array();
  for (const auto& c : a.credentials) {
    creds.push_back({to_hex(c.id), service::status_name(c.status)});
  }
  json j = {{"ovpk", to_hex(a.ovpk.view())},
            {"metadata", a.metadata},
            {"generation", a.generation},
            {"migrating", a.migration.has_value()},
            {"credentials", creds}};
  return j;
}

bool bindings_verify(const service::Account& a) {
  for (const auto& c : a.credentials) {
    if (c.active() && !verify_registration(a.ovpk, c.public_key, Deployment::kSid,
                                           c.binding_signature)) {
      return false;
    }
  }
  return true;
}

// 10. Save and restore in the middle of a migration changes nothing.
Verdict persistence() {
  Verdict v;
  auto dir = std::filesystem::temp_directory_path() /
             ("ovk-acc-persist-" + to_hex(crypto::random_bytes(6)));
  std::filesystem::create_directories(dir);
  const auto& maker = testing::test_manufacturer();
  int runs = 0;
  while (runs < 20) {
    std::uint32_t n = static_cast<std::uint32_t>(uniform(3, 5));
    std::uint32_t nu = static_cast<std::uint32_t>(uniform(1, n - 1));
    std::uint32_t na = static_cast<std::uint32_t>(uniform(1, n - nu));
    std::string order = std::string(nu, 'u') + std::string(na, 'a');
    std::shuffle(order.begin(), order.end(), rng());
    // Snapshot once both proposals exist, while no side has a majority.
    std::size_t both = std::max(order.find('u'), order.find('a')) + 1;
    auto majority_by = [&](std::size_t k) {
      auto u = std::count(order.begin(), order.begin() + k, 'u');
      auto a = std::count(order.begin(), order.begin() + k, 'a');
      return static_cast<std::uint32_t>(std::max(u, a)) > n / 2;
    };
    if (majority_by(both)) continue;
    std::size_t cut = both;
    while (cut < order.size() && !majority_by(cut + 1) && uniform(0, 1)) ++cut;

    auto store = dir / ("store-" + std::to_string(runs) + ".json");
    auto snapshot = dir / ("snapshot-" + std::to_string(runs) + ".json");
    service::ServiceConfig config;
    config.service_id = Deployment::kSid;
    config.policy = testing::test_policy();
    config.store_path = store;

    Deployment live;
    live.clock = std::make_shared<ManualClock>();
    live.service = std::make_unique<service::Service>(config, live.clock);
    live.connect();
    std::vector<std::string> names;
    for (std::uint32_t i = 0; i < n; ++i) names.push_back("d" + std::to_string(i));
    names.push_back("user-fresh");
    names.push_back("attacker-fresh");
    for (const auto& name : names) {
      live.devices[name] = std::make_unique<Authenticator>(
          name, attestation::DeviceIdentity::provision(maker, "ovk-reference"),
          authenticator::RetentionPolicy::max_seeds(4), live.clock);
      live.devices[name]->unlock(true);
    }
    auto negotiate = [&](const std::vector<std::string>& group, const std::string& pw) {
      std::vector<Authenticator*> ptrs;
      for (const auto& g : group) ptrs.push_back(live.devices[g].get());
      harness::NegotiationOptions options;
      options.password = pw;
      auto seeds = harness::negotiate_in_memory(ptrs, options, live.log.get());
      for (std::size_t i = 0; i < ptrs.size(); ++i) ptrs[i]->add_seed(seeds[i], true);
    };
    negotiate({names.begin(), names.begin() + n}, "first password");
    {
      wire::ServiceClient client(*live.transport);
      live.devices["d0"]->register_account(client, "alice");
    }
    for (std::uint32_t i = 1; i < n; ++i) (void)live.vote(names[i]);

    std::vector<std::string> users(names.begin(), names.begin() + nu);
    std::vector<std::string> thieves(names.begin() + (n - na), names.begin() + n);
    auto user_group = users;
    user_group.push_back("user-fresh");
    auto thief_group = thieves;
    thief_group.push_back("attacker-fresh");
    negotiate(user_group, "user password");
    negotiate(thief_group, "thief password");

    std::vector<std::string> voters;
    std::size_t ui = 0, ai = 0;
    for (char c : order) voters.push_back(c == 'u' ? users[ui++] : thieves[ai++]);

    for (std::size_t k = 0; k < cut; ++k) {
      (void)live.vote(voters[k]);
      live.clock->advance(std::chrono::minutes(uniform(1, 120)));
    }
    // Snapshot: service store and every device store, at one instant.
    std::filesystem::copy_file(store, snapshot);
    Instant snapshot_time = live.clock->now();
    for (const auto& name : names) {
      live.devices[name]->save(dir / (name + "-" + std::to_string(runs) + ".json"));
    }
    std::vector<Duration> gaps;
    for (std::size_t k = cut; k < voters.size(); ++k) {
      gaps.push_back(std::chrono::minutes(uniform(1, 120)));
    }

    auto finish = [&](Deployment& d, std::vector<std::string>& outcomes) {
      for (std::size_t k = cut; k < voters.size(); ++k) {
        outcomes.push_back(d.vote(voters[k]));
        d.clock->advance(gaps[k - cut]);
      }
      d.clock->advance(25h);
      d.service->tick();
      return *d.service->account("alice");
    };
    std::vector<std::string> live_outcomes, resumed_outcomes;
    auto uninterrupted = finish(live, live_outcomes);

    Deployment restored;
    restored.clock = std::make_shared<ManualClock>(snapshot_time);
    auto restored_config = config;
    restored_config.store_path = snapshot;
    restored.service = std::make_unique<service::Service>(restored_config, restored.clock);
    restored.connect();
    for (const auto& name : names) {
      restored.devices[name] = std::make_unique<Authenticator>(Authenticator::load(
          dir / (name + "-" + std::to_string(runs) + ".json"), restored.clock));
      restored.devices[name]->unlock(true);
    }
    auto resumed = finish(restored, resumed_outcomes);

    std::string tag = "n=" + std::to_string(n) + " " + order + " cut " + std::to_string(cut);
    v.require(uninterrupted.generation == 1, tag + ": no commit");
    v.require(commit_summary(uninterrupted) == commit_summary(resumed),
              tag + ": restored run diverged");
    v.require(live_outcomes == resumed_outcomes, tag + ": replies after the snapshot differ");
    v.require(bindings_verify(uninterrupted) && bindings_verify(resumed),
              tag + ": binding signature does not verify");
    char expected = oracle::race_winner(n, order);
    bool user_won = live.devices["user-fresh"]->can_derive(Deployment::kSid, resumed.metadata);
    v.require((expected == 'u') == user_won, tag + ": winner differs from oracle");

    sweep().scan(live.log->entries(), live.secrets(),
                 {"first password", "user password", "thief password"});
    sweep().scan(restored.log->entries(), restored.secrets(),
                 {"first password", "user password", "thief password"});
    ++runs;
  }
  std::filesystem::remove_all(dir);
  if (v.pass) v.detail = "20 mid-migration restores match their uninterrupted runs";
  return v;
}

}  // namespace
}  // namespace ovk::acceptance

int main() {
  using namespace ovk::acceptance;
  struct Criterion {
    int id;
    const char* name;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {1, "use-case replay", use_case_replay},
      {2, "update race table", race_table},
      {3, "seed agreement", seed_agreement},
      {4, "homograph defense", homograph},
      {5, "capacity", capacity},
      {6, "crypto vectors", crypto_vectors},
      {7, "migration freeze", migration_freeze},
      {8, "determinism", determinism},
      {10, "persistence", persistence},
      {9, "secrecy sweep", secrecy},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << v.detail << " [" << ms << " ms]" << std::endl;
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

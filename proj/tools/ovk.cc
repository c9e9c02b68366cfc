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

// ovk: command-line front end for devices, services, scenarios and races.
//
// Exit status: 0 on success, 1 when an operation fails (the error name is
// printed on stderr), 2 on usage errors.

#include <CLI11.hpp>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ovk/authenticator.h"
#include "ovk/error.h"
#include "ovk/harness/channel.h"
#include "ovk/harness/race.h"
#include "ovk/harness/scenario.h"
#include "ovk/service.h"
#include "ovk/wire/transport.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kDefaultPort = 8080;

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ovk::Error(ovk::ErrorCode::kInvalidInput, "cannot read " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ovk::Error(ovk::ErrorCode::kParseError, path.string() + " is not JSON");
  }
  return j;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ovk::Error(ovk::ErrorCode::kInvalidInput, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ovk::attestation::Manufacturer load_or_create_manufacturer(const fs::path& path) {
  if (fs::exists(path)) {
    return ovk::attestation::Manufacturer::from_private_json(read_json(path));
  }
  auto m = ovk::attestation::Manufacturer::create(path.stem().string());
  write_json(path, m.to_private_json());
  return m;
}

ovk::authenticator::Authenticator open_device(const fs::path& store) {
  auto device = ovk::authenticator::Authenticator::load(store);
  // Invoking the tool is the local user verification.
  device.unlock(true);
  return device;
}

struct Endpoint {
  std::string host;
  int port = kDefaultPort;
};

Endpoint parse_url(const std::string& url) {
  std::string rest = url;
  if (auto p = rest.find("://"); p != std::string::npos) rest = rest.substr(p + 3);
  if (auto p = rest.find('/'); p != std::string::npos) rest = rest.substr(0, p);
  Endpoint e{rest, kDefaultPort};
  if (auto p = rest.rfind(':'); p != std::string::npos) {
    e.host = rest.substr(0, p);
    try {
      e.port = std::stoi(rest.substr(p + 1));
    } catch (const std::exception&) {
      throw ovk::Error(ovk::ErrorCode::kInvalidInput, "bad port in '" + url + "'");
    }
  }
  return e;
}

std::string channel_dir(const std::string& spec) {
  if (spec.rfind("dir:", 0) != 0 || spec.size() <= 4) {
    throw CLI::ValidationError("--channel", "expected dir:<path>");
  }
  return spec.substr(4);
}

struct ClientFlags {
  std::string store;
  std::string url;
  std::string origin;
  std::string user;
};

void add_client_flags(CLI::App* cmd, ClientFlags& f) {
  cmd->add_option("--store", f.store, "Device store file")->required();
  cmd->add_option("--url", f.url, "Service address, e.g. http://127.0.0.1:8080")->required();
  cmd->add_option("--origin", f.origin,
                  "Service identifier the channel authenticates (default: --url)");
  cmd->add_option("--user", f.user, "Account name")->required();
}

std::string login_summary(const ovk::authenticator::LoginResult& r) {
  using ovk::authenticator::LoginOutcome;
  std::string out;
  switch (r.outcome) {
    case LoginOutcome::kSession:
      out = "signed in";
      break;
    case LoginOutcome::kEnrolled:
      out = "seamless enrollment performed";
      break;
    case LoginOutcome::kReenrollRequired:
      out = "credential revoked; run login again to re-enroll";
      break;
  }
  if (r.update_sent) {
    out += r.update && r.update->committed ? "; update committed" : "; update pending";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OVK devices, services, scenarios and races"};
  app.require_subcommand(1);
  int status = 0;

  // device
  auto* device = app.add_subcommand("device", "Emulated authenticator operations");
  device->require_subcommand(1);

  std::string create_store, create_name, create_model = "ovk-reference", create_mfr;
  std::uint32_t create_max_seeds = 2;
  auto* create = device->add_subcommand("create", "Provision a new device store");
  create->add_option("--store", create_store, "Device store file to create")->required();
  create->add_option("--name", create_name, "Device name")->required();
  create->add_option("--model", create_model, "Model name in the attestation certificate");
  create->add_option("--manufacturer", create_mfr,
                     "Manufacturer key file (created when missing)")
      ->required();
  create->add_option("--max-seeds", create_max_seeds, "Seeds kept before eviction")
      ->check(CLI::Range(2u, 64u));
  create->callback([&] {
    if (fs::exists(create_store)) {
      throw ovk::Error(ovk::ErrorCode::kInvalidInput, create_store + " already exists");
    }
    auto mfr = load_or_create_manufacturer(create_mfr);
    ovk::authenticator::Authenticator d(
        create_name, ovk::attestation::DeviceIdentity::provision(mfr, create_model),
        ovk::authenticator::RetentionPolicy::max_seeds(create_max_seeds));
    d.save(create_store);
    std::cout << "created " << create_name << " (" << create_model << ")\n";
  });

  std::string neg_store, neg_password, neg_channel, neg_policy;
  std::uint32_t neg_party = 0, neg_parties = 2, neg_iterations = 210000, neg_timeout = 120;
  std::optional<std::uint64_t> neg_epoch;
  bool neg_consent = false;
  auto* negotiate = device->add_subcommand("negotiate", "Join a seed exchange");
  negotiate->add_option("--store", neg_store, "Device store file")->required();
  negotiate->add_option("--party-id", neg_party, "This device's ring position");
  negotiate->add_option("--parties", neg_parties, "Number of devices")->required();
  negotiate->add_option("--password", neg_password, "Exchange password")
      ->envname("OVK_PASSWORD")
      ->required();
  negotiate->add_option("--channel", neg_channel, "dir:<path> shared by all parties")
      ->required();
  negotiate->add_option("--epoch", neg_epoch, "Seed epoch (default: newest held + 1)");
  negotiate->add_option("--iterations", neg_iterations, "PBKDF2 iterations");
  negotiate->add_option("--timeout-secs", neg_timeout, "Per-round wait");
  negotiate->add_option("--policy", neg_policy, "Trust policy peers must satisfy");
  negotiate->add_flag("--consent", neg_consent, "Allow evicting the oldest seed");
  negotiate->callback([&] {
    auto d = open_device(neg_store);
    ovk::seed::NegotiationConfig cfg;
    cfg.password = neg_password;
    cfg.self_id = neg_party;
    cfg.n_parties = neg_parties;
    cfg.epoch = neg_epoch.value_or(d.latest_epoch().value_or(0) + 1);
    cfg.kdf_iterations = neg_iterations;
    if (!neg_policy.empty()) cfg.peer_policy = ovk::attestation::TrustPolicy::load(neg_policy);
    auto party = d.begin_negotiation(cfg);
    ovk::harness::DirectoryChannel channel(channel_dir(neg_channel));
    auto record = ovk::harness::run_party(party, channel, std::chrono::seconds(neg_timeout));
    std::string fingerprint = record.fingerprint();
    d.add_seed(std::move(record), neg_consent);
    d.save(neg_store);
    std::cout << "epoch " << cfg.epoch << " fingerprint " << fingerprint << "\n";
  });

  ClientFlags reg_flags, login_flags, update_flags;
  auto* reg = device->add_subcommand("register", "Create an account");
  add_client_flags(reg, reg_flags);
  auto* login = device->add_subcommand("login", "Sign in, enrolling seamlessly if needed");
  add_client_flags(login, login_flags);
  auto* update = device->add_subcommand("update", "Sign in and migrate to the newest seed");
  add_client_flags(update, update_flags);

  auto with_client = [](const ClientFlags& f, auto&& body) {
    auto d = open_device(f.store);
    auto ep = parse_url(f.url);
    ovk::wire::HttpTransport transport(ep.host, ep.port, f.origin.empty() ? f.url : f.origin);
    ovk::wire::ServiceClient client(transport);
    body(d, client);
    d.save(f.store);
  };
  reg->callback([&] {
    with_client(reg_flags, [&](auto& d, auto& client) {
      auto created = d.register_account(client, reg_flags.user);
      std::cout << "registered " << created.username << " (capacity " << created.capacity
                << ")\n";
    });
  });
  login->callback([&] {
    with_client(login_flags, [&](auto& d, auto& client) {
      std::cout << login_summary(d.login_or_enroll(client, login_flags.user)) << "\n";
    });
  });
  update->callback([&] {
    with_client(update_flags, [&](auto& d, auto& client) {
      auto r = d.login_or_enroll(client, update_flags.user);
      std::cout << login_summary(r) << "\n";
      if (r.outcome == ovk::authenticator::LoginOutcome::kSession && !r.update_sent) {
        std::cout << "already current\n";
      }
    });
  });

  std::string info_store;
  auto* info = device->add_subcommand("info", "Show seeds and credentials");
  info->add_option("--store", info_store, "Device store file")->required();
  info->callback([&] {
    auto d = ovk::authenticator::Authenticator::load(info_store);
    json out = {{"name", d.name()}, {"model", d.model_name()},
                {"seed_fingerprints", d.seed_fingerprints()}};
    out["latest_epoch"] = d.latest_epoch() ? json(*d.latest_epoch()) : json(nullptr);
    json creds = json::array();
    for (const auto& c : d.credentials()) {
      creds.push_back({{"service", c.service_id}, {"user", c.username},
                       {"pending_update", c.pending_update.has_value()}});
    }
    out["credentials"] = creds;
    std::cout << out.dump(2) << "\n";
  });

  // service
  auto* service = app.add_subcommand("service", "Relying-party operations");
  service->require_subcommand(1);

  std::string serve_config, serve_host = "127.0.0.1";
  std::optional<int> serve_port;
  auto* serve = service->add_subcommand("serve", "Serve the HTTP endpoints");
  serve->add_option("--config", serve_config, "Service config JSON")->required();
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--port", serve_port, "Port (default: $OVK_PORT or 8080; 0 picks one)");
  serve->callback([&] {
    int port = kDefaultPort;
    if (serve_port) {
      port = *serve_port;
    } else if (const char* env = std::getenv("OVK_PORT")) {
      port = std::atoi(env);
    }
    ovk::service::Service svc(ovk::service::ServiceConfig::load(serve_config),
                              std::make_shared<ovk::SystemClock>());
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    ovk::service::HttpHost host(svc, serve_host, port);
    int bound = host.start();
    std::cout << "listening on " << serve_host << ":" << bound << " as "
              << svc.service_id() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    host.stop();
  });

  std::string pol_mfr, pol_out;
  std::vector<std::string> pol_compliant, pol_secure;
  auto* policy = service->add_subcommand("policy", "Write a trust policy");
  policy->add_option("--manufacturer", pol_mfr, "Manufacturer key file")->required();
  policy->add_option("--compliant", pol_compliant, "Compliant model names");
  policy->add_option("--secure-storage", pol_secure, "Models with secure seed storage");
  policy->add_option("--out", pol_out, "Policy file to write")->required();
  policy->callback([&] {
    auto mfr = load_or_create_manufacturer(pol_mfr);
    ovk::attestation::TrustPolicy p;
    if (fs::exists(pol_out)) p = ovk::attestation::TrustPolicy::load(pol_out);
    p.trusted_roots.insert(mfr.root_point());
    p.compliant_models.insert(pol_compliant.begin(), pol_compliant.end());
    p.secure_storage_models.insert(pol_secure.begin(), pol_secure.end());
    p.save(pol_out);
    std::cout << "policy: " << p.trusted_roots.size() << " root(s), "
              << p.compliant_models.size() << " compliant, "
              << p.secure_storage_models.size() << " secure-storage model(s)\n";
  });

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Scripted end-to-end runs");
  scenario->require_subcommand(1);
  std::string scen_file, scen_out;
  auto* scen_run = scenario->add_subcommand("run", "Run a scenario file");
  scen_run->add_option("file", scen_file, "Scenario JSON")->required();
  scen_run->add_option("--out", scen_out, "Also write the report here");
  scen_run->callback([&] {
    auto report = ovk::harness::run_scenario_file(scen_file);
    std::string lines = report.to_jsonl();
    std::cout << lines;
    if (!scen_out.empty()) std::ofstream(scen_out, std::ios::trunc) << lines;
    if (!report.passed()) {
      for (const auto& s : report.steps) {
        if (!s.ok) {
          throw ovk::Error(ovk::ErrorCode::kAssertionFailed,
                           "step " + std::to_string(s.index) + " (" + s.action +
                               "): got " + s.outcome + ", expected " +
                               s.expected.value_or("success"));
        }
      }
    }
  });

  // race
  auto* race = app.add_subcommand("race", "User-versus-attacker update races");
  race->require_subcommand(1);
  ovk::harness::RaceConfig race_cfg;
  std::optional<std::uint64_t> race_seed;
  std::optional<std::string> race_order;
  auto* race_run = race->add_subcommand("run", "Run one race");
  race_run->add_option("--n", race_cfg.n, "Registered devices")->required();
  race_run->add_option("--user", race_cfg.n_user, "User devices sending updates")->required();
  race_run->add_option("--attacker", race_cfg.n_attacker, "Stolen devices")->required();
  race_run->add_flag("--attacker-first", race_cfg.attacker_first, "Attacker updates first");
  race_run->add_option("--ordering-seed", race_seed, "Random interleaving seed");
  race_run->add_option("--order", race_order, "Explicit order, e.g. uaau");
  race_run->callback([&] {
    race_cfg.ordering_seed = race_seed;
    race_cfg.order = race_order;
    auto r = ovk::harness::run_race(race_cfg);
    json out = {{"n", race_cfg.n},
                {"n_user", race_cfg.n_user},
                {"n_attacker", race_cfg.n_attacker},
                {"sequence", r.sequence},
                {"winner", ovk::harness::winner_name(r.winner)},
                {"decided_early", r.decided_early},
                {"outcomes", r.outcomes}};
    std::cout << out.dump() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ovk::Error& e) {
    std::cerr << e.name() << ": " << e.detail() << "\n";
    status = 1;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    status = 1;
  }
  return status;
}

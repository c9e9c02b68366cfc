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

#include "ovk/harness/scenario.h"

#include <fstream>
#include <nlohmann/json.hpp>

#include "ovk/error.h"
#include "ovk/harness/world.h"

namespace ovk::harness {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kScenarioParse, what);
}

template <typename T>
T req(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("'") + key + "' has the wrong type");
  }
}

template <typename T>
T opt(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return req<T>(j, key);
}

std::string login_outcome(const authenticator::LoginResult& r) {
  std::string out(authenticator::outcome_name(r.outcome));
  if (r.update_sent) {
    out += r.update && r.update->committed ? "+update:committed" : "+update:pending";
  }
  return out;
}

class Runner {
 public:
  explicit Runner(const json& doc) {
    if (!doc.is_object()) bad("scenario must be an object");
    name_ = opt<std::string>(doc, "name", "scenario");
    for (const auto& d : req<json>(doc, "devices")) {
      DeviceSpec spec;
      spec.name = req<std::string>(d, "name");
      spec.model = opt<std::string>(d, "model", spec.model);
      spec.compliant = opt<bool>(d, "compliant", true);
      spec.secure_storage = opt<bool>(d, "secure_storage", true);
      spec.retention =
          authenticator::RetentionPolicy::max_seeds(opt<std::uint32_t>(d, "max_seeds", 4));
      specs_.push_back(spec);
    }
    for (const auto& s : req<json>(doc, "services")) {
      ServiceSpec spec;
      spec.id = req<std::string>(s, "id");
      spec.migration_period =
          std::chrono::seconds(opt<std::int64_t>(s, "migration_period_secs", 86400));
      if (s.contains("relays") && !s.at("relays").is_null()) {
        spec.relays = req<std::string>(s, "relays");
      }
      world_.add_service(spec);
    }
    // Devices after services so every service sees the final policy.
    for (const auto& spec : specs_) world_.add_device(spec);
    script_ = req<json>(doc, "script");
    if (!script_.is_array()) bad("'script' must be an array");
    for (const auto& step : script_) req<std::string>(step, "action");
  }

  World& world() { return world_; }

  Report run() {
    Report report{name_, {}};
    for (std::size_t i = 0; i < script_.size(); ++i) {
      const json& step = script_[i];
      StepReport r;
      r.index = i + 1;
      r.action = step.at("action").get<std::string>();
      r.label = opt<std::string>(step, "label", "");
      if (step.contains("expect")) r.expected = req<std::string>(step, "expect");
      bool raised = false;
      try {
        r.outcome = execute(r.action, step, r.detail);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kScenarioParse) throw;
        raised = true;
        r.outcome = std::string(e.name());
        r.detail = e.detail();
      }
      r.ok = r.expected ? *r.expected == r.outcome : !raised;
      report.steps.push_back(std::move(r));
    }
    return report;
  }

 private:
  std::string execute(const std::string& action, const json& step, std::string& detail) {
    if (action == "share_seed" || action == "reshare") {
      NegotiationOptions options;
      options.password = opt<std::string>(step, "password", options.password);
      if (step.contains("epoch")) options.epoch = req<std::uint64_t>(step, "epoch");
      auto names = req<std::vector<std::string>>(step, "devices");
      auto records = world_.share_seed(names, options, opt<bool>(step, "consent", true));
      detail = "epoch " + std::to_string(records.front().epoch) + " fingerprint " +
               records.front().fingerprint();
      return "ok";
    }
    if (action == "register") {
      auto client = world_.client(req<std::string>(step, "service"));
      world_.device(req<std::string>(step, "device"))
          .register_account(client, req<std::string>(step, "user"));
      return "ok";
    }
    if (action == "login" || action == "update") {
      auto client = world_.client(req<std::string>(step, "service"));
      auto result = world_.device(req<std::string>(step, "device"))
                        .login_or_enroll(client, req<std::string>(step, "user"));
      if (action == "update" && !result.update_sent) return "already-current";
      return login_outcome(result);
    }
    if (action == "lose_device") {
      world_.lose_device(req<std::string>(step, "device"));
      return "ok";
    }
    if (action == "lock") {
      world_.device(req<std::string>(step, "device")).lock();
      return "ok";
    }
    if (action == "unlock") {
      world_.device(req<std::string>(step, "device")).unlock(opt<bool>(step, "verified", true));
      return "ok";
    }
    if (action == "advance_clock") {
      world_.advance(std::chrono::seconds(req<std::int64_t>(step, "secs")));
      return "ok";
    }
    if (action == "expect") return check(step, detail);
    bad("unknown action '" + action + "'");
  }

  std::string check(const json& step, std::string& detail) {
    auto acct = world_.service(req<std::string>(step, "service"))
                    .account(req<std::string>(step, "user"));
    std::vector<std::string> mismatches;
    auto compare = [&](const char* key, const json& actual) {
      if (step.contains(key) && step.at(key) != actual) {
        mismatches.push_back(std::string(key) + "=" + actual.dump() + " (want " +
                             step.at(key).dump() + ")");
      }
    };
    compare("exists", acct.has_value());
    if (acct) {
      std::uint32_t revoked = static_cast<std::uint32_t>(acct->credentials.size()) -
                              acct->active_count();
      compare("state", acct->migration ? "migrating" : "stable");
      compare("active_credentials", acct->active_count());
      compare("revoked_credentials", revoked);
      compare("generation", acct->generation);
    } else {
      for (const char* key :
           {"state", "active_credentials", "revoked_credentials", "generation"}) {
        if (step.contains(key)) mismatches.push_back(std::string(key) + ": no such account");
      }
    }
    if (mismatches.empty()) return "ok";
    for (const auto& m : mismatches) detail += (detail.empty() ? "" : "; ") + m;
    throw Error(ErrorCode::kAssertionFailed, detail);
  }

  std::string name_;
  std::vector<DeviceSpec> specs_;
  World world_;
  json script_;
};

}  // namespace

bool Report::passed() const {
  for (const auto& s : steps) {
    if (!s.ok) return false;
  }
  return true;
}

std::string Report::to_jsonl() const {
  std::string out;
  for (const auto& s : steps) {
    json line = {{"scenario", name},  {"step", s.index},   {"label", s.label},
                 {"action", s.action}, {"outcome", s.outcome}, {"ok", s.ok}};
    line["expected"] = s.expected ? json(*s.expected) : json(nullptr);
    if (!s.detail.empty()) line["detail"] = s.detail;
    out += line.dump() + "\n";
  }
  return out;
}

Report run_scenario(const json& scenario, const WorldObserver& observer) {
  Runner runner(scenario);
  Report report = runner.run();
  if (observer) observer(runner.world());
  return report;
}

Report run_scenario_file(const std::filesystem::path& path, const WorldObserver& observer) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kScenarioParse, "cannot read " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kScenarioParse, "invalid JSON");
  return run_scenario(doc, observer);
}

}  // namespace ovk::harness

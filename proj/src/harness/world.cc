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

#include "ovk/harness/world.h"

#include <algorithm>

#include "ovk/error.h"
#include "ovk/wire/frame.h"

namespace ovk::harness {

std::vector<seed::SeedRecord> negotiate_in_memory(
    const std::vector<authenticator::Authenticator*>& devices,
    const NegotiationOptions& options, wire::TrafficLog* log) {
  const auto n = static_cast<std::uint32_t>(devices.size());
  std::uint64_t epoch = 1;
  if (options.epoch) {
    epoch = *options.epoch;
  } else {
    for (const auto* d : devices) epoch = std::max(epoch, d->latest_epoch().value_or(0) + 1);
  }

  std::vector<seed::NegotiationConfig> configs;
  for (std::uint32_t i = 0; i < n; ++i) {
    configs.push_back({options.password, i, n, epoch, options.iterations,
                       options.peer_policy});
  }
  seed::validate_roster(configs);

  std::vector<seed::Negotiation> parties;
  for (std::uint32_t i = 0; i < n; ++i) {
    parties.push_back(devices[i]->begin_negotiation(configs[i]));
  }
  auto relay = [log](const seed::RoundMessage& m) {
    std::string bytes = wire::encode(wire::to_frame(wire::SeedRound{m}));
    if (log) log->record("seed-round", bytes);
    return wire::from_frame<wire::SeedRound>(wire::decode(bytes)).message;
  };

  std::vector<seed::RoundMessage> inflight;
  for (auto& p : parties) inflight.push_back(relay(p.start()));

  std::vector<seed::SeedRecord> out(n);
  try {
    for (std::uint32_t round = 1; round < n; ++round) {
      std::vector<seed::RoundMessage> next(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        const seed::RoundMessage& msg = inflight[i];
        auto result = parties[msg.to_id].step(msg);
        if (auto* m = std::get_if<seed::RoundMessage>(&result)) {
          next[msg.to_id] = relay(*m);
        } else {
          out[msg.to_id] = std::get<seed::SeedRecord>(std::move(result));
        }
      }
      inflight = std::move(next);
    }
  } catch (...) {
    for (auto& p : parties) p.abort();
    throw;
  }
  return out;
}

World::World()
    : clock_(std::make_shared<ManualClock>()),
      manufacturer_(attestation::Manufacturer::create("ovk-test-manufacturer")),
      log_(std::make_shared<wire::TrafficLog>()) {
  policy_.trusted_roots.insert(manufacturer_.root_point());
}

authenticator::Authenticator& World::add_device(const DeviceSpec& spec) {
  if (spec.name.empty() || devices_.contains(spec.name)) {
    throw Error(ErrorCode::kInvalidInput, "device name '" + spec.name + "' unusable");
  }
  if (spec.compliant) policy_.compliant_models.insert(spec.model);
  if (spec.secure_storage) policy_.secure_storage_models.insert(spec.model);
  // A model marked untrusted stays untrusted for every device of that model.
  if (!spec.compliant) policy_.compliant_models.erase(spec.model);
  if (!spec.secure_storage) policy_.secure_storage_models.erase(spec.model);
  for (auto& [_, svc] : services_) svc->set_policy(policy_);

  auto device = std::make_unique<authenticator::Authenticator>(
      spec.name, attestation::DeviceIdentity::provision(manufacturer_, spec.model),
      spec.retention, clock_);
  device->unlock(true);
  auto& ref = *device;
  devices_.emplace(spec.name, std::move(device));
  return ref;
}

service::Service& World::add_service(const ServiceSpec& spec) {
  if (spec.id.empty() || services_.contains(spec.id)) {
    throw Error(ErrorCode::kInvalidInput, "service id '" + spec.id + "' unusable");
  }
  service::ServiceConfig config;
  config.service_id = spec.id;
  config.migration_period = spec.migration_period;
  config.policy = policy_;
  auto svc = std::make_unique<service::Service>(std::move(config), clock_);
  auto& ref = *svc;
  services_.emplace(spec.id, std::move(svc));
  if (spec.relays) relays_[spec.id] = *spec.relays;
  return ref;
}

authenticator::Authenticator& World::device(const std::string& name) {
  auto it = devices_.find(name);
  if (it == devices_.end()) {
    throw Error(ErrorCode::kInvalidInput, "no device '" + name + "'");
  }
  return *it->second;
}

bool World::has_device(const std::string& name) const { return devices_.contains(name); }

service::Service& World::service(const std::string& id) {
  auto it = services_.find(id);
  if (it == services_.end()) throw Error(ErrorCode::kInvalidInput, "no service '" + id + "'");
  return *it->second;
}

void World::lose_device(const std::string& name) {
  device(name);
  lost_.insert(name);
}

wire::ServiceClient World::client(const std::string& service_id) {
  auto it = transports_.find(service_id);
  if (it == transports_.end()) {
    std::string target = service_id;
    if (auto r = relays_.find(service_id); r != relays_.end()) target = r->second;
    service::Service* svc = &service(target);
    it = transports_
             .emplace(service_id, std::make_unique<wire::LoopbackTransport>(
                                      [svc](const wire::Frame& f) { return svc->handle(f); },
                                      service_id, log_))
             .first;
  }
  return wire::ServiceClient(*it->second);
}

std::vector<seed::SeedRecord> World::share_seed(const std::vector<std::string>& names,
                                                const NegotiationOptions& options,
                                                bool consent) {
  std::vector<authenticator::Authenticator*> parties;
  for (const auto& n : names) parties.push_back(&device(n));
  passwords_.push_back(options.password);
  auto records = negotiate_in_memory(parties, options, log_.get());
  for (std::size_t i = 0; i < parties.size(); ++i) {
    parties[i]->add_seed(records[i], consent);
  }
  seed_history_.push_back(records.front());
  return records;
}

void World::advance(Duration by) {
  clock_->advance(by);
  for (auto& [_, svc] : services_) svc->tick();
}

std::vector<Bytes> World::secrets() const {
  std::vector<Bytes> out;
  for (const auto& [_, d] : devices_) {
    for (auto& s : d->secret_material()) out.push_back(std::move(s));
  }
  for (const auto& s : seed_history_) out.push_back(s.seed);
  for (const auto& [id, svc] : services_) {
    for (const auto& user : svc->usernames()) {
      auto acct = svc->account(user);
      std::vector<OvkMetadata> metas{acct->metadata};
      if (acct->migration) {
        for (const auto& p : acct->migration->proposals) {
          metas.push_back(p.message.new_metadata);
        }
      }
      for (const auto& m : metas) {
        for (const auto& s : seed_history_) {
          if (!metadata_matches(s, id, m)) continue;
          auto v = derive_from_metadata(s, id, m).keypair.private_scalar.view();
          out.emplace_back(v.begin(), v.end());
        }
      }
    }
  }
  return out;
}

}  // namespace ovk::harness

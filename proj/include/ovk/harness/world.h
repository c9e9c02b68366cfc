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

#ifndef OVK_HARNESS_WORLD_H_
#define OVK_HARNESS_WORLD_H_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ovk/attestation.h"
#include "ovk/authenticator.h"
#include "ovk/clock.h"
#include "ovk/service.h"
#include "ovk/wire/transport.h"

// An in-process deployment: one manual clock, one manufacturer, any number
// of devices and services, all traffic recorded in one log.
namespace ovk::harness {

inline constexpr std::uint32_t kTestIterations = 1000;

struct NegotiationOptions {
  std::string password = "correct horse battery staple";
  std::optional<std::uint64_t> epoch;  // default: newest held epoch + 1
  std::uint32_t iterations = kTestIterations;
  std::optional<attestation::TrustPolicy> peer_policy;
};

// Runs the ring protocol among the given devices, party i being devices[i].
// Round messages are serialized and, when log is set, recorded on the
// "seed-round" channel. The seeds are returned, not stored.
std::vector<seed::SeedRecord> negotiate_in_memory(
    const std::vector<authenticator::Authenticator*>& devices,
    const NegotiationOptions& options, wire::TrafficLog* log = nullptr);

struct DeviceSpec {
  std::string name;
  std::string model = "ovk-reference";
  bool compliant = true;
  bool secure_storage = true;
  authenticator::RetentionPolicy retention = authenticator::RetentionPolicy::max_seeds(4);
};

struct ServiceSpec {
  std::string id;
  Duration migration_period = std::chrono::hours(24);
  // When set, this service forwards every frame to that service: a
  // phishing origin relaying the real one.
  std::optional<std::string> relays;
};

class World {
 public:
  World();

  ManualClock& clock() { return *clock_; }
  std::shared_ptr<ManualClock> shared_clock() { return clock_; }
  const attestation::TrustPolicy& policy() const { return policy_; }
  const attestation::Manufacturer& manufacturer() const { return manufacturer_; }
  const std::shared_ptr<wire::TrafficLog>& log() const { return log_; }

  // Provisions a device (unlocked) and updates the trust policy. Throws
  // InvalidInput on a duplicate name.
  authenticator::Authenticator& add_device(const DeviceSpec& spec);
  service::Service& add_service(const ServiceSpec& spec);

  authenticator::Authenticator& device(const std::string& name);
  service::Service& service(const std::string& id);
  bool has_device(const std::string& name) const;
  // The user no longer holds the device. It keeps working for whoever has
  // it, and is left out of default re-share groups.
  void lose_device(const std::string& name);
  bool is_lost(const std::string& name) const { return lost_.contains(name); }

  // Frames sent through this client reach service id (or what it relays)
  // with origin id.
  wire::ServiceClient client(const std::string& service_id);

  // Negotiates among the named devices and stores the seed on each.
  std::vector<seed::SeedRecord> share_seed(const std::vector<std::string>& names,
                                           const NegotiationOptions& options = {},
                                           bool consent = true);

  // Advances the clock and finalizes due migrations on every service.
  void advance(Duration by);

  // Every secret the world's devices hold (seeds, private keys) plus the
  // OVSKs behind every registered OVPK.
  std::vector<Bytes> secrets() const;
  std::vector<std::string> passwords() const { return passwords_; }

 private:
  std::shared_ptr<ManualClock> clock_;
  attestation::Manufacturer manufacturer_;
  attestation::TrustPolicy policy_;
  std::shared_ptr<wire::TrafficLog> log_;
  std::map<std::string, std::unique_ptr<authenticator::Authenticator>> devices_;
  std::map<std::string, std::unique_ptr<service::Service>> services_;
  std::map<std::string, std::string> relays_;
  std::map<std::string, std::unique_ptr<wire::LoopbackTransport>> transports_;
  std::vector<std::string> passwords_;
  std::set<std::string> lost_;
  // Seeds ever stored, for re-deriving OVSKs in secrets().
  std::vector<seed::SeedRecord> seed_history_;
};

}  // namespace ovk::harness

#endif  // OVK_HARNESS_WORLD_H_

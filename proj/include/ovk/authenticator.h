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

#ifndef OVK_AUTHENTICATOR_H_
#define OVK_AUTHENTICATOR_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ovk/attestation.h"
#include "ovk/clock.h"
#include "ovk/ownership.h"
#include "ovk/seed_exchange.h"
#include "ovk/wire/transport.h"

namespace ovk::authenticator {

using namespace std::chrono_literals;

// How many seeds a device keeps. Dropping a seed can strand accounts that
// still use it, so count-based eviction needs the user's consent.
struct RetentionPolicy {
  enum class Kind { kMaxCount, kExpiry };

  Kind kind = Kind::kMaxCount;
  std::uint32_t max_count = 2;
  Duration lifetime = 24h * 365;
  Duration renewal_window = 24h * 30;

  static RetentionPolicy max_seeds(std::uint32_t k);
  static RetentionPolicy expiring(Duration lifetime, Duration renewal_window);
};

struct LocalCredential {
  std::string service_id;
  std::string username;
  Bytes credential_id;
  crypto::EcKeyPair keypair;
  // Sent but not yet committed; resent on each login until resolved.
  std::optional<UpdatingMessage> pending_update;
};

enum class LoginOutcome { kSession, kEnrolled, kReenrollRequired };

std::string_view outcome_name(LoginOutcome outcome);

struct LoginResult {
  LoginOutcome outcome = LoginOutcome::kSession;
  std::string username;
  Bytes credential_id;
  bool update_sent = false;
  std::optional<wire::UpdateAck> update;
};

class Authenticator {
 public:
  Authenticator(std::string name, attestation::DeviceIdentity identity,
                RetentionPolicy retention = {},
                std::shared_ptr<const Clock> clock = nullptr);

  const std::string& name() const { return name_; }
  const attestation::DeviceIdentity& identity() const { return identity_; }
  const std::string& model_name() const { return identity_.model_name; }

  // Local user verification. unlock(false) leaves the state unchanged.
  void unlock(bool user_verified);
  void lock() { unlocked_ = false; }
  bool unlocked() const { return unlocked_; }

  // A negotiation bound to this device's attestation identity.
  seed::Negotiation begin_negotiation(seed::NegotiationConfig config) const;

  // Stores a finalized seed. Throws EpochOrder unless its epoch is newer
  // than every held seed, ConsentRequired when the max-count policy would
  // evict a seed and consent is false.
  void add_seed(seed::SeedRecord record, bool consent = false);
  // Drops expired seeds (expiry policy) and, with consent, seeds beyond the
  // max count. Returns the number dropped.
  std::size_t enforce_retention(bool consent = false);
  // Expiry policy: the newest seed expires within the renewal window.
  bool needs_renewal() const;

  std::vector<std::string> seed_fingerprints() const;
  // Some held seed verifies the metadata for service_id.
  bool can_derive(const std::string& service_id, const OvkMetadata& metadata) const;
  std::size_t seed_count() const { return seeds_.size(); }
  std::optional<std::uint64_t> latest_epoch() const;

  // Creates an account: fresh OVK from the latest seed, attested
  // authentication key and OVPK.
  wire::AccountCreated register_account(wire::ServiceClient& client,
                                        const std::string& username);

  // Authenticates with the stored credential, attaching an OVK update when
  // the device holds a newer seed than the registered one. Without a local
  // credential the device enrolls a new one under the registered OVK. Throws
  // WrongService, before sending anything but start-authn, when no held seed
  // verifies the metadata for this origin.
  LoginResult login_or_enroll(wire::ServiceClient& client, const std::string& username);

  const LocalCredential* credential(const std::string& service_id,
                                    const std::string& username) const;
  std::vector<LocalCredential> credentials() const { return credentials_; }

  // The device store holds secrets; it stands in for secure storage.
  void save(const std::filesystem::path& path) const;
  static Authenticator load(const std::filesystem::path& path,
                            std::shared_ptr<const Clock> clock = nullptr);

  // For secrecy sweeps in tests.
  std::vector<Bytes> secret_material() const;

 private:
  void require_unlocked() const;
  const seed::SeedRecord& latest_seed() const;
  LocalCredential* find_credential(const std::string& service_id,
                                   const std::string& username);
  std::optional<UpdatingMessage> plan_update(const std::string& origin,
                                             const wire::StartAuthnResponse& start,
                                             LocalCredential& cred);
  LoginResult enroll(wire::ServiceClient& client, const std::string& username,
                     const wire::StartAuthnResponse& start);

  std::string name_;
  attestation::DeviceIdentity identity_;
  RetentionPolicy retention_;
  std::shared_ptr<const Clock> clock_;
  bool unlocked_ = false;
  std::vector<seed::SeedRecord> seeds_;  // ascending epoch
  std::vector<LocalCredential> credentials_;
};

}  // namespace ovk::authenticator

#endif  // OVK_AUTHENTICATOR_H_

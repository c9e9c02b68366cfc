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

#ifndef OVK_SERVICE_H_
#define OVK_SERVICE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ovk/attestation.h"
#include "ovk/clock.h"
#include "ovk/ownership.h"
#include "ovk/wire/frame.h"

namespace ovk::service {

using namespace std::chrono_literals;

struct ServiceConfig {
  std::string service_id;
  Duration migration_period = 24h;
  Duration challenge_ttl = 5min;
  attestation::TrustPolicy policy;
  std::optional<std::filesystem::path> store_path;

  // {"origin", "migration_period_secs", "challenge_ttl_secs", "store_path",
  //  "trust_policy_path"}; relative paths resolve against the file's
  // directory.
  static ServiceConfig load(const std::filesystem::path& path);
};

enum class CredentialStatus { kActive, kRevoked };

struct CredentialRecord {
  Bytes id;
  crypto::EcPoint public_key = crypto::EcPoint::generator();
  std::string model_name;
  Bytes binding_signature;  // current OVSK over public_key
  CredentialStatus status = CredentialStatus::kActive;
  Instant created_at{};

  bool active() const { return status == CredentialStatus::kActive; }
  bool operator==(const CredentialRecord&) const = default;
};

struct Proposal {
  UpdatingMessage message;  // first message seen with this OVPK
  std::vector<Bytes> supporters;  // credential ids, in vote order
  // Each supporter's rebinding signature, parallel to supporters.
  std::vector<Bytes> rebindings;
  Instant first_seen{};

  bool operator==(const Proposal&) const = default;
};

struct Migration {
  Instant opened_at{};
  Instant deadline{};
  std::uint32_t electorate = 0;  // Active credentials when it opened
  std::vector<Proposal> proposals;  // first-seen order

  bool operator==(const Migration&) const = default;
};

struct Account {
  std::string username;
  crypto::EcPoint ovpk = crypto::EcPoint::generator();
  OvkMetadata metadata;
  std::vector<CredentialRecord> credentials;
  std::optional<Migration> migration;
  Instant created_at{};
  std::uint64_t generation = 0;  // committed updates so far

  std::uint32_t active_count() const;
  const CredentialRecord* find_credential(ByteView id) const;
  CredentialRecord* find_credential(ByteView id);
  bool operator==(const Account&) const = default;
};

// Relying party. All state sits behind one mutex; every public call is
// atomic with respect to the others.
class Service {
 public:
  Service(ServiceConfig config, std::shared_ptr<const Clock> clock);

  const ServiceConfig& config() const { return config_; }
  const std::string& service_id() const { return config_.service_id; }
  // Replaces the attestation trust policy (an operator action).
  void set_policy(attestation::TrustPolicy policy);

  // Dispatches a request frame. Errors come back as "error" frames; this
  // never throws for bad input.
  wire::Frame handle(const wire::Frame& request);

  wire::StartAuthnResponse start_authn(const wire::StartAuthnRequest& request);
  wire::AccountCreated register_account(const wire::RegisterRequest& request);
  wire::KeyBound enroll_key(const wire::EnrollRequest& request);
  wire::SessionGranted authn(const wire::AuthnRequest& request);

  // Finalizes every migration whose deadline has passed.
  void tick();

  std::optional<Account> account(const std::string& username) const;
  std::vector<std::string> usernames() const;
  std::size_t pending_challenges() const;

  // Writes the account table to config().store_path (no-op when unset).
  void persist() const;
  // Throws CorruptStore when the store cannot be read back.
  void restore();

 private:
  struct PendingChallenge {
    std::string username;
    Instant expires_at;
  };

  void consume_challenge(ByteView challenge, const std::string& username);
  void require_trusted(const attestation::AttestationStatement& statement,
                       attestation::AttestedKind kind, const crypto::EcPoint& subject,
                       ByteView challenge) const;
  Account& lookup(const std::string& username);
  void finalize_if_due(Account& account);
  void commit(Account& account, const Proposal& winner);
  wire::UpdateAck process_update(Account& account, CredentialRecord& sender,
                                 const UpdatingMessage& update);
  void persist_locked() const;
  void purge_expired_challenges();

  ServiceConfig config_;
  std::shared_ptr<const Clock> clock_;
  mutable std::mutex mu_;
  std::map<std::string, Account> accounts_;
  std::map<Bytes, PendingChallenge> challenges_;
};

std::string_view status_name(CredentialStatus status);

void to_json(nlohmann::json& j, const Account& account);
void from_json(const nlohmann::json& j, Account& account);

// Serves a Service over HTTP: POST /<kind> with an encoded frame.
class HttpHost {
 public:
  HttpHost(Service& service, std::string host, int port);
  ~HttpHost();

  HttpHost(const HttpHost&) = delete;
  HttpHost& operator=(const HttpHost&) = delete;

  // Binds and serves on a background thread. Returns the bound port
  // (useful with port 0).
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ovk::service

#endif  // OVK_SERVICE_H_

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

#include "ovk/service.h"

#include <algorithm>
#include <fstream>

#include "json_util.h"
#include "ovk/error.h"

namespace ovk::service {

using json_util::json;
namespace att = attestation;

namespace {

constexpr std::size_t kChallengeSize = 32;

void check_metadata(const OvkMetadata& m) {
  if (m.r.size() != kMetadataRandomSize || m.m.size() != crypto::kMacSize || m.n < 1) {
    throw Error(ErrorCode::kMalformedMetadata,
                "metadata needs 32-byte r, 32-byte m and n >= 1");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), {});
  json j = json_util::parse(text);
  auto base = path.parent_path();

  ServiceConfig c;
  c.service_id = json_util::get<std::string>(j, "origin");
  if (c.service_id.empty()) json_util::violation("origin must not be empty");
  if (json_util::has(j, "migration_period_secs")) {
    c.migration_period =
        std::chrono::seconds(json_util::get<std::int64_t>(j, "migration_period_secs"));
  }
  if (json_util::has(j, "challenge_ttl_secs")) {
    c.challenge_ttl =
        std::chrono::seconds(json_util::get<std::int64_t>(j, "challenge_ttl_secs"));
  }
  if (json_util::has(j, "store_path")) {
    c.store_path = resolve(base, json_util::get<std::string>(j, "store_path"));
  }
  if (json_util::has(j, "trust_policy_path")) {
    c.policy =
        att::TrustPolicy::load(resolve(base, json_util::get<std::string>(j, "trust_policy_path")));
  }
  return c;
}

std::uint32_t Account::active_count() const {
  return static_cast<std::uint32_t>(
      std::count_if(credentials.begin(), credentials.end(),
                    [](const auto& c) { return c.active(); }));
}

const CredentialRecord* Account::find_credential(ByteView id) const {
  for (const auto& c : credentials) {
    if (std::equal(c.id.begin(), c.id.end(), id.begin(), id.end())) return &c;
  }
  return nullptr;
}

CredentialRecord* Account::find_credential(ByteView id) {
  return const_cast<CredentialRecord*>(std::as_const(*this).find_credential(id));
}

std::string_view status_name(CredentialStatus status) {
  return status == CredentialStatus::kActive ? "active" : "revoked";
}

Service::Service(ServiceConfig config, std::shared_ptr<const Clock> clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  if (config_.service_id.empty()) {
    throw Error(ErrorCode::kInvalidInput, "service id must not be empty");
  }
  if (!clock_) clock_ = std::make_shared<SystemClock>();
  if (config_.store_path && std::filesystem::exists(*config_.store_path)) restore();
}

void Service::set_policy(att::TrustPolicy policy) {
  std::lock_guard lock(mu_);
  config_.policy = std::move(policy);
}

wire::Frame Service::handle(const wire::Frame& request) {
  try {
    const std::string& k = request.kind;
    if (k == wire::StartAuthnRequest::kKind) {
      return wire::to_frame(start_authn(wire::from_frame<wire::StartAuthnRequest>(request)));
    }
    if (k == wire::RegisterRequest::kKind) {
      return wire::to_frame(
          register_account(wire::from_frame<wire::RegisterRequest>(request)));
    }
    if (k == wire::EnrollRequest::kKind) {
      return wire::to_frame(enroll_key(wire::from_frame<wire::EnrollRequest>(request)));
    }
    if (k == wire::AuthnRequest::kKind) {
      return wire::to_frame(authn(wire::from_frame<wire::AuthnRequest>(request)));
    }
    throw Error(ErrorCode::kUnknownKind, "service does not accept '" + k + "'");
  } catch (const Error& e) {
    return wire::to_frame(wire::ErrorReply{std::string(e.name()), e.detail()});
  } catch (const std::exception& e) {
    return wire::to_frame(wire::ErrorReply{"InternalError", e.what()});
  }
}

void Service::purge_expired_challenges() {
  Instant now = clock_->now();
  std::erase_if(challenges_, [now](const auto& kv) { return kv.second.expires_at <= now; });
}

void Service::consume_challenge(ByteView challenge, const std::string& username) {
  auto it = challenges_.find(Bytes(challenge.begin(), challenge.end()));
  if (it == challenges_.end()) {
    throw Error(ErrorCode::kStaleChallenge, "challenge unknown or already used");
  }
  PendingChallenge pending = it->second;
  // Any attempt that names an issued challenge burns it.
  challenges_.erase(it);
  if (pending.expires_at <= clock_->now()) {
    throw Error(ErrorCode::kStaleChallenge, "challenge expired");
  }
  if (pending.username != username) {
    throw Error(ErrorCode::kStaleChallenge, "challenge was issued for another user");
  }
}

void Service::require_trusted(const att::AttestationStatement& statement,
                              att::AttestedKind kind, const crypto::EcPoint& subject,
                              ByteView challenge) const {
  if (statement.kind != kind || statement.subject_point != subject) {
    throw Error(ErrorCode::kUntrustedAttestation,
                std::string("statement does not attest this ") +
                    std::string(att::kind_name(kind)));
  }
  auto verdict = att::verify_statement(statement, config_.policy, challenge);
  if (!verdict.chain_ok) {
    throw Error(ErrorCode::kUntrustedAttestation, "attestation chain does not verify");
  }
  if (!verdict.criterion1) {
    throw Error(ErrorCode::kUntrustedAttestation,
                "model '" + statement.model_name + "' is not compliant");
  }
  if (!verdict.criterion2) {
    throw Error(ErrorCode::kUntrustedAttestation,
                "seed storage of '" + statement.model_name + "' or a peer is not trusted");
  }
}

Account& Service::lookup(const std::string& username) {
  auto it = accounts_.find(username);
  if (it == accounts_.end()) {
    throw Error(ErrorCode::kUnknownAccount, "no account '" + username + "'");
  }
  finalize_if_due(it->second);
  return it->second;
}

wire::StartAuthnResponse Service::start_authn(const wire::StartAuthnRequest& request) {
  std::lock_guard lock(mu_);
  purge_expired_challenges();
  wire::StartAuthnResponse resp;
  resp.challenge = crypto::random_bytes(kChallengeSize);
  challenges_[resp.challenge] = {request.username, clock_->now() + config_.challenge_ttl};

  auto it = accounts_.find(request.username);
  if (it == accounts_.end()) return resp;
  Account& acct = it->second;
  finalize_if_due(acct);
  for (const auto& c : acct.credentials) {
    if (c.active()) resp.credentials.push_back(c.id);
  }
  resp.ovpk = acct.ovpk;
  resp.metadata = acct.metadata;
  if (acct.migration) {
    resp.state = wire::OvkState::kMigrating;
    for (const auto& p : acct.migration->proposals) {
      resp.candidates.push_back(p.message.new_metadata);
    }
  }
  return resp;
}

wire::AccountCreated Service::register_account(const wire::RegisterRequest& request) {
  std::lock_guard lock(mu_);
  consume_challenge(request.challenge, request.username);
  if (accounts_.contains(request.username)) {
    throw Error(ErrorCode::kDuplicateUser, "'" + request.username + "' is taken");
  }
  if (request.credential_id.empty()) {
    throw Error(ErrorCode::kInvalidInput, "empty credential id");
  }
  require_trusted(request.attestation, att::AttestedKind::kAuthnKey, request.public_key,
                  request.challenge);
  require_trusted(request.ovpk_attestation, att::AttestedKind::kOvpk, request.ovpk,
                  request.challenge);
  check_metadata(request.metadata);
  if (!verify_registration(request.ovpk, request.public_key, config_.service_id,
                           request.ovk_signature)) {
    throw Error(ErrorCode::kBadOwnershipSignature,
                "OVK signature over the new key does not verify");
  }

  Account acct;
  acct.username = request.username;
  acct.ovpk = request.ovpk;
  acct.metadata = request.metadata;
  acct.created_at = clock_->now();
  acct.credentials.push_back({request.credential_id, request.public_key,
                              request.attestation.model_name, request.ovk_signature,
                              CredentialStatus::kActive, clock_->now()});
  accounts_.emplace(acct.username, acct);
  persist_locked();
  return {request.username, request.credential_id, acct.metadata.n};
}

wire::KeyBound Service::enroll_key(const wire::EnrollRequest& request) {
  std::lock_guard lock(mu_);
  Account& acct = lookup(request.username);
  consume_challenge(request.challenge, request.username);
  if (acct.migration) {
    throw Error(ErrorCode::kMigrationInProgress,
                "enrollment waits until the OVK migration finishes");
  }
  if (request.credential_id.empty() || acct.find_credential(request.credential_id)) {
    throw Error(ErrorCode::kInvalidInput, "credential id empty or already used");
  }
  require_trusted(request.attestation, att::AttestedKind::kAuthnKey, request.public_key,
                  request.challenge);
  if (!verify_registration(acct.ovpk, request.public_key, config_.service_id,
                           request.ovk_signature)) {
    throw Error(ErrorCode::kBadOwnershipSignature,
                "new key is not signed by the registered OVK");
  }
  if (acct.active_count() >= acct.metadata.n) {
    throw Error(ErrorCode::kNLimitExceeded,
                "account already has " + std::to_string(acct.active_count()) +
                    " active credentials, limit " + std::to_string(acct.metadata.n));
  }
  acct.credentials.push_back({request.credential_id, request.public_key,
                              request.attestation.model_name, request.ovk_signature,
                              CredentialStatus::kActive, clock_->now()});
  persist_locked();
  return {request.username, request.credential_id, acct.active_count()};
}

wire::SessionGranted Service::authn(const wire::AuthnRequest& request) {
  std::lock_guard lock(mu_);
  Account& acct = lookup(request.username);
  consume_challenge(request.challenge, request.username);
  CredentialRecord* cred = acct.find_credential(request.credential_id);
  if (cred == nullptr) {
    throw Error(ErrorCode::kBadSignature, "credential is not registered");
  }
  if (!cred->active()) {
    throw Error(ErrorCode::kRevokedCredential, "credential was revoked");
  }
  Bytes payload = wire::authn_payload(request.challenge, config_.service_id,
                                      request.username, request.credential_id);
  if (request.signature.size() != crypto::kSignatureSize ||
      !crypto::verify(cred->public_key, payload, request.signature)) {
    throw Error(ErrorCode::kBadSignature, "challenge signature does not verify");
  }
  wire::SessionGranted out{request.username, request.credential_id, std::nullopt};
  if (request.update) out.update = process_update(acct, *cred, *request.update);
  persist_locked();
  return out;
}

wire::UpdateAck Service::process_update(Account& acct, CredentialRecord& sender,
                                        const UpdatingMessage& update) {
  if (!std::ranges::equal(update.sender_credential_id, sender.id)) {
    throw Error(ErrorCode::kBadUpdateSignature,
                "update names a different sender credential");
  }
  check_metadata(update.new_metadata);
  // Proposals are always signed by the OVSK in force when migration opened.
  if (!verify_update(update, acct.ovpk, config_.service_id)) {
    throw Error(ErrorCode::kBadUpdateSignature,
                "update is not signed by the registered OVK");
  }
  if (!verify_rebinding(update, sender.public_key, config_.service_id)) {
    throw Error(ErrorCode::kBadUpdateSignature,
                "new OVK does not sign the sender's key");
  }
  if (update.new_ovpk == acct.ovpk) {
    throw Error(ErrorCode::kInvalidInput, "update repeats the current OVPK");
  }

  Instant now = clock_->now();
  if (!acct.migration) {
    Migration m;
    m.opened_at = now;
    m.deadline = now + config_.migration_period;
    m.electorate = acct.active_count();
    acct.migration = std::move(m);
  }
  Migration& mig = *acct.migration;

  // One vote per credential; repeats (for any proposal) change nothing.
  for (const auto& p : mig.proposals) {
    if (std::ranges::find(p.supporters, sender.id) != p.supporters.end()) {
      return {false, wire::OvkState::kMigrating};
    }
  }

  auto prop = std::ranges::find_if(mig.proposals, [&](const Proposal& p) {
    return p.message.new_ovpk == update.new_ovpk;
  });
  if (prop != mig.proposals.end() && prop->message.new_metadata != update.new_metadata) {
    throw Error(ErrorCode::kMalformedMetadata,
                "same OVPK proposed with different metadata");
  }
  if (prop == mig.proposals.end()) {
    mig.proposals.push_back(Proposal{update, {}, {}, now});
    prop = std::prev(mig.proposals.end());
  }
  if (prop->supporters.size() + 1 > prop->message.new_metadata.n) {
    throw Error(ErrorCode::kNLimitExceeded,
                "proposal already has " + std::to_string(prop->supporters.size()) +
                    " supporters, limit " +
                    std::to_string(prop->message.new_metadata.n));
  }
  prop->supporters.push_back(sender.id);
  prop->rebindings.push_back(update.rebinding_signature);

  if (prop->supporters.size() > mig.electorate / 2) {
    Proposal winner = *prop;
    commit(acct, winner);
    return {true, wire::OvkState::kStable};
  }
  return {false, wire::OvkState::kMigrating};
}

void Service::commit(Account& acct, const Proposal& winner) {
  acct.ovpk = winner.message.new_ovpk;
  acct.metadata = winner.message.new_metadata;
  for (auto& c : acct.credentials) {
    auto it = std::ranges::find(winner.supporters, c.id);
    if (it == winner.supporters.end()) {
      c.status = CredentialStatus::kRevoked;
      continue;
    }
    c.binding_signature = winner.rebindings[it - winner.supporters.begin()];
  }
  acct.migration.reset();
  ++acct.generation;
}

void Service::finalize_if_due(Account& acct) {
  if (!acct.migration || clock_->now() < acct.migration->deadline) return;
  const auto& props = acct.migration->proposals;
  // Most supporters wins; ties go to the earliest proposal.
  auto best = props.begin();
  for (auto it = props.begin(); it != props.end(); ++it) {
    if (it->supporters.size() > best->supporters.size()) best = it;
  }
  if (best == props.end()) {
    acct.migration.reset();
    return;
  }
  Proposal winner = *best;
  commit(acct, winner);
}

void Service::tick() {
  std::lock_guard lock(mu_);
  purge_expired_challenges();
  bool changed = false;
  for (auto& [_, acct] : accounts_) {
    bool before = acct.migration.has_value();
    finalize_if_due(acct);
    changed |= before != acct.migration.has_value();
  }
  if (changed) persist_locked();
}

std::optional<Account> Service::account(const std::string& username) const {
  std::lock_guard lock(mu_);
  auto it = accounts_.find(username);
  if (it == accounts_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Service::usernames() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, _] : accounts_) out.push_back(name);
  return out;
}

std::size_t Service::pending_challenges() const {
  std::lock_guard lock(mu_);
  return challenges_.size();
}

void Service::persist() const {
  std::lock_guard lock(mu_);
  persist_locked();
}

void Service::persist_locked() const {
  if (!config_.store_path) return;
  json accounts = json::array();
  for (const auto& [_, acct] : accounts_) accounts.push_back(acct);
  json doc = {{"version", 1}, {"service_id", config_.service_id}, {"accounts", accounts}};
  auto tmp = *config_.store_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kInternalError, "cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, *config_.store_path);
}

void Service::restore() {
  std::lock_guard lock(mu_);
  if (!config_.store_path) return;
  try {
    std::ifstream in(*config_.store_path);
    if (!in) throw Error(ErrorCode::kCorruptStore, "cannot open store");
    std::string text((std::istreambuf_iterator<char>(in)), {});
    json doc = json_util::parse(text);
    if (json_util::get<int>(doc, "version") != 1 ||
        json_util::get<std::string>(doc, "service_id") != config_.service_id) {
      throw Error(ErrorCode::kCorruptStore, "store belongs to another service");
    }
    std::map<std::string, Account> loaded;
    for (const auto& a : json_util::field(doc, "accounts")) {
      Account acct = a.get<Account>();
      std::string name = acct.username;
      if (!loaded.emplace(name, std::move(acct)).second) {
        throw Error(ErrorCode::kCorruptStore, "duplicate account '" + name + "'");
      }
    }
    accounts_ = std::move(loaded);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptStore) throw;
    throw Error(ErrorCode::kCorruptStore, e.detail());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptStore, e.what());
  }
}

namespace {

json to_json_credential(const CredentialRecord& c) {
  return {{"id", json_util::b64(c.id)},
          {"public_key", json_util::b64(c.public_key.view())},
          {"model", c.model_name},
          {"binding_signature", json_util::b64(c.binding_signature)},
          {"status", status_name(c.status)},
          {"created_at_ms", to_millis(c.created_at)}};
}

CredentialRecord credential_from_json(const json& j) {
  CredentialRecord c;
  c.id = json_util::get_bytes(j, "id");
  c.public_key = json_util::get_point(j, "public_key");
  c.model_name = json_util::get<std::string>(j, "model");
  c.binding_signature = json_util::get_bytes(j, "binding_signature");
  auto status = json_util::get<std::string>(j, "status");
  if (status == "active") {
    c.status = CredentialStatus::kActive;
  } else if (status == "revoked") {
    c.status = CredentialStatus::kRevoked;
  } else {
    json_util::violation("unknown credential status '" + status + "'");
  }
  c.created_at = from_millis(json_util::get<std::int64_t>(j, "created_at_ms"));
  return c;
}

std::vector<Bytes> bytes_list(const json& j, const char* key) {
  std::vector<Bytes> out;
  const json& arr = json_util::field(j, key);
  if (!arr.is_array()) json_util::violation(std::string(key) + " must be an array");
  for (const auto& v : arr) {
    if (!v.is_string()) json_util::violation(std::string(key) + " entries are strings");
    out.push_back(base64url_decode(v.get<std::string>()));
  }
  return out;
}

json b64_list(const std::vector<Bytes>& v) {
  json out = json::array();
  for (const auto& b : v) out.push_back(json_util::b64(b));
  return out;
}

}  // namespace

void to_json(json& j, const Account& a) {
  json creds = json::array();
  for (const auto& c : a.credentials) creds.push_back(to_json_credential(c));
  j = {{"username", a.username},
       {"ovpk", json_util::b64(a.ovpk.view())},
       {"metadata", a.metadata},
       {"credentials", creds},
       {"created_at_ms", to_millis(a.created_at)},
       {"generation", a.generation},
       {"migration", nullptr}};
  if (a.migration) {
    json props = json::array();
    for (const auto& p : a.migration->proposals) {
      props.push_back({{"message", p.message},
                       {"supporters", b64_list(p.supporters)},
                       {"rebindings", b64_list(p.rebindings)},
                       {"first_seen_ms", to_millis(p.first_seen)}});
    }
    j["migration"] = {{"opened_at_ms", to_millis(a.migration->opened_at)},
                      {"deadline_ms", to_millis(a.migration->deadline)},
                      {"electorate", a.migration->electorate},
                      {"proposals", props}};
  }
}

void from_json(const json& j, Account& a) {
  a.username = json_util::get<std::string>(j, "username");
  a.ovpk = json_util::get_point(j, "ovpk");
  a.metadata = json_util::field(j, "metadata").get<OvkMetadata>();
  a.credentials.clear();
  for (const auto& c : json_util::field(j, "credentials")) {
    a.credentials.push_back(credential_from_json(c));
  }
  a.created_at = from_millis(json_util::get<std::int64_t>(j, "created_at_ms"));
  a.generation = json_util::get<std::uint64_t>(j, "generation");
  a.migration.reset();
  if (json_util::has(j, "migration")) {
    const json& m = j.at("migration");
    Migration mig;
    mig.opened_at = from_millis(json_util::get<std::int64_t>(m, "opened_at_ms"));
    mig.deadline = from_millis(json_util::get<std::int64_t>(m, "deadline_ms"));
    mig.electorate = json_util::get<std::uint32_t>(m, "electorate");
    for (const auto& p : json_util::field(m, "proposals")) {
      Proposal prop;
      prop.message = json_util::field(p, "message").get<UpdatingMessage>();
      prop.supporters = bytes_list(p, "supporters");
      prop.rebindings = bytes_list(p, "rebindings");
      if (prop.supporters.size() != prop.rebindings.size()) {
        json_util::violation("supporters and rebindings differ in length");
      }
      prop.first_seen = from_millis(json_util::get<std::int64_t>(p, "first_seen_ms"));
      mig.proposals.push_back(std::move(prop));
    }
    a.migration = std::move(mig);
  }
}

}  // namespace ovk::service

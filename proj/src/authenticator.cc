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

#include "ovk/authenticator.h"

#include <algorithm>
#include <fstream>

#include "json_util.h"
#include "ovk/error.h"

namespace ovk::authenticator {

using json_util::json;
namespace att = attestation;

namespace {

constexpr std::size_t kCredentialIdSize = 16;

crypto::EcKeyPair keypair_from(const Bytes& scalar) {
  auto kp = crypto::scalar_to_keypair(scalar);
  if (!kp) json_util::violation("stored private key is out of range");
  return *std::move(kp);
}

}  // namespace

RetentionPolicy RetentionPolicy::max_seeds(std::uint32_t k) {
  if (k < 2) throw Error(ErrorCode::kInvalidInput, "an update needs room for two seeds");
  RetentionPolicy p;
  p.kind = Kind::kMaxCount;
  p.max_count = k;
  return p;
}

RetentionPolicy RetentionPolicy::expiring(Duration lifetime, Duration renewal_window) {
  if (lifetime <= Duration::zero() || renewal_window < Duration::zero() ||
      renewal_window >= lifetime) {
    throw Error(ErrorCode::kInvalidInput, "need 0 <= renewal window < lifetime");
  }
  RetentionPolicy p;
  p.kind = Kind::kExpiry;
  p.lifetime = lifetime;
  p.renewal_window = renewal_window;
  return p;
}

std::string_view outcome_name(LoginOutcome outcome) {
  switch (outcome) {
    case LoginOutcome::kSession:
      return "session";
    case LoginOutcome::kEnrolled:
      return "enrolled";
    case LoginOutcome::kReenrollRequired:
      return "reenroll-required";
  }
  return "session";
}

Authenticator::Authenticator(std::string name, att::DeviceIdentity identity,
                             RetentionPolicy retention,
                             std::shared_ptr<const Clock> clock)
    : name_(std::move(name)),
      identity_(std::move(identity)),
      retention_(retention),
      clock_(std::move(clock)) {
  if (!clock_) clock_ = std::make_shared<SystemClock>();
}

void Authenticator::unlock(bool user_verified) {
  if (user_verified) unlocked_ = true;
}

void Authenticator::require_unlocked() const {
  if (!unlocked_) throw Error(ErrorCode::kDeviceLocked, name_ + " is locked");
}

seed::Negotiation Authenticator::begin_negotiation(seed::NegotiationConfig config) const {
  require_unlocked();
  return seed::Negotiation(std::move(config), identity_);
}

void Authenticator::add_seed(seed::SeedRecord record, bool consent) {
  require_unlocked();
  if (record.seed.size() != crypto::kSeedSize) {
    throw Error(ErrorCode::kInvalidInput, "seed must be 32 bytes");
  }
  if (!seeds_.empty() && record.epoch <= seeds_.back().epoch) {
    throw Error(ErrorCode::kEpochOrder,
                "epoch " + std::to_string(record.epoch) + " is not newer than " +
                    std::to_string(seeds_.back().epoch));
  }
  if (retention_.kind == RetentionPolicy::Kind::kExpiry && !record.expires_at) {
    record.expires_at = clock_->now() + retention_.lifetime;
  }
  if (retention_.kind == RetentionPolicy::Kind::kMaxCount &&
      seeds_.size() + 1 > retention_.max_count && !consent) {
    throw Error(ErrorCode::kConsentRequired,
                "storing this seed evicts epoch " + std::to_string(seeds_.front().epoch));
  }
  seeds_.push_back(std::move(record));
  enforce_retention(consent);
}

std::size_t Authenticator::enforce_retention(bool consent) {
  std::size_t before = seeds_.size();
  if (retention_.kind == RetentionPolicy::Kind::kExpiry) {
    Instant now = clock_->now();
    std::erase_if(seeds_, [now](const seed::SeedRecord& s) {
      return s.expires_at && *s.expires_at <= now;
    });
  } else if (seeds_.size() > retention_.max_count) {
    if (!consent) {
      throw Error(ErrorCode::kConsentRequired, "seed count exceeds the retention limit");
    }
    std::size_t excess = seeds_.size() - retention_.max_count;
    for (std::size_t i = 0; i < excess; ++i) secure_wipe(seeds_[i].seed);
    seeds_.erase(seeds_.begin(), seeds_.begin() + static_cast<std::ptrdiff_t>(excess));
  }
  return before - seeds_.size();
}

bool Authenticator::needs_renewal() const {
  if (retention_.kind != RetentionPolicy::Kind::kExpiry) return false;
  if (seeds_.empty()) return true;
  const auto& latest = seeds_.back();
  return !latest.expires_at ||
         *latest.expires_at - clock_->now() <= retention_.renewal_window;
}

std::vector<std::string> Authenticator::seed_fingerprints() const {
  std::vector<std::string> out;
  for (const auto& s : seeds_) out.push_back(s.fingerprint());
  return out;
}

bool Authenticator::can_derive(const std::string& service_id,
                               const OvkMetadata& metadata) const {
  return std::ranges::any_of(seeds_, [&](const seed::SeedRecord& s) {
    return metadata_matches(s, service_id, metadata);
  });
}

std::optional<std::uint64_t> Authenticator::latest_epoch() const {
  if (seeds_.empty()) return std::nullopt;
  return seeds_.back().epoch;
}

const seed::SeedRecord& Authenticator::latest_seed() const {
  if (seeds_.empty()) throw Error(ErrorCode::kInvalidInput, name_ + " holds no seed");
  return seeds_.back();
}

LocalCredential* Authenticator::find_credential(const std::string& service_id,
                                                const std::string& username) {
  for (auto& c : credentials_) {
    if (c.service_id == service_id && c.username == username) return &c;
  }
  return nullptr;
}

const LocalCredential* Authenticator::credential(const std::string& service_id,
                                                 const std::string& username) const {
  return const_cast<Authenticator*>(this)->find_credential(service_id, username);
}

wire::AccountCreated Authenticator::register_account(wire::ServiceClient& client,
                                                     const std::string& username) {
  require_unlocked();
  const seed::SeedRecord& seed = latest_seed();
  const std::string& origin = client.origin();
  if (find_credential(origin, username)) {
    throw Error(ErrorCode::kDuplicateUser, "already registered '" + username + "'");
  }
  auto start = client.start_authn({username});

  DerivedOvk ovk = derive_fresh(seed, origin);
  auto keypair = crypto::EcKeyPair::generate();
  wire::RegisterRequest req;
  req.username = username;
  req.challenge = start.challenge;
  req.credential_id = crypto::random_bytes(kCredentialIdSize);
  req.public_key = keypair.public_point;
  req.attestation = att::attest(identity_, att::AttestedKind::kAuthnKey,
                                keypair.public_point, {}, start.challenge);
  req.ovpk = ovk.ovpk();
  req.metadata = ovk.metadata;
  req.ovpk_attestation = att::attest(identity_, att::AttestedKind::kOvpk, ovk.ovpk(),
                                     seed.peer_models, start.challenge);
  req.ovk_signature = sign_registration(ovk, keypair.public_point);

  auto created = client.register_account(req);
  credentials_.push_back({origin, username, req.credential_id, keypair, std::nullopt});
  return created;
}

std::optional<UpdatingMessage> Authenticator::plan_update(
    const std::string& origin, const wire::StartAuthnResponse& start,
    LocalCredential& cred) {
  if (!start.metadata || !start.ovpk) return std::nullopt;
  if (cred.pending_update) {
    if (start.state == wire::OvkState::kMigrating) return cred.pending_update;
    cred.pending_update.reset();
  }
  if (seeds_.size() < 2) return std::nullopt;

  const seed::SeedRecord* prev = nullptr;
  const seed::SeedRecord* next = nullptr;
  try {
    std::tie(prev, next) = select_update_seed(seeds_, origin, *start.metadata);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEpochOrder || e.code() == ErrorCode::kNoMatchingSeed) {
      return std::nullopt;
    }
    throw;
  }
  DerivedOvk prev_ovk = derive_from_metadata(*prev, origin, *start.metadata);
  if (prev_ovk.ovpk() != *start.ovpk) return std::nullopt;
  NextOvk planned = derive_next(*next, origin, start.candidates);
  return build_update(prev_ovk, planned.ovk, cred.credential_id,
                      cred.keypair.public_point);
}

LoginResult Authenticator::login_or_enroll(wire::ServiceClient& client,
                                           const std::string& username) {
  require_unlocked();
  const std::string origin = client.origin();
  auto start = client.start_authn({username});

  LocalCredential* cred = find_credential(origin, username);
  if (cred == nullptr) return enroll(client, username, start);

  auto update = plan_update(origin, start, *cred);
  wire::AuthnRequest req;
  req.username = username;
  req.credential_id = cred->credential_id;
  req.challenge = start.challenge;
  req.signature = crypto::sign(
      cred->keypair,
      wire::authn_payload(start.challenge, origin, username, cred->credential_id));
  req.update = update;

  wire::SessionGranted granted;
  try {
    granted = client.authn(req);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRevokedCredential) throw;
    // Dropped locally; the next login enrolls a new credential.
    LoginResult out{LoginOutcome::kReenrollRequired, username, cred->credential_id,
                    false, std::nullopt};
    std::erase_if(credentials_, [&](const LocalCredential& c) {
      return c.service_id == origin && c.username == username;
    });
    return out;
  }
  LoginResult out{LoginOutcome::kSession, username, cred->credential_id,
                  update.has_value(), granted.update};
  if (update && granted.update && !granted.update->committed) {
    cred->pending_update = update;
  } else {
    cred->pending_update.reset();
  }
  return out;
}

LoginResult Authenticator::enroll(wire::ServiceClient& client, const std::string& username,
                                  const wire::StartAuthnResponse& start) {
  const std::string& origin = client.origin();
  if (!start.metadata || !start.ovpk) {
    throw Error(ErrorCode::kUnknownAccount, "no account '" + username + "' at " + origin);
  }
  const seed::SeedRecord* match = nullptr;
  for (auto it = seeds_.rbegin(); it != seeds_.rend(); ++it) {
    if (metadata_matches(*it, origin, *start.metadata)) {
      match = &*it;
      break;
    }
  }
  if (match == nullptr) {
    throw Error(ErrorCode::kWrongService,
                "no held seed verifies the metadata for '" + origin + "'");
  }
  DerivedOvk ovk = derive_from_metadata(*match, origin, *start.metadata);
  if (ovk.ovpk() != *start.ovpk) {
    throw Error(ErrorCode::kWrongService, "derived OVPK differs from the registered one");
  }

  auto keypair = crypto::EcKeyPair::generate();
  wire::EnrollRequest req;
  req.username = username;
  req.challenge = start.challenge;
  req.credential_id = crypto::random_bytes(kCredentialIdSize);
  req.public_key = keypair.public_point;
  req.attestation = att::attest(identity_, att::AttestedKind::kAuthnKey,
                                keypair.public_point, {}, start.challenge);
  req.ovk_signature = sign_registration(ovk, keypair.public_point);

  client.enroll(req);
  credentials_.push_back({origin, username, req.credential_id, keypair, std::nullopt});
  return {LoginOutcome::kEnrolled, username, req.credential_id, false, std::nullopt};
}

std::vector<Bytes> Authenticator::secret_material() const {
  std::vector<Bytes> out;
  for (const auto& s : seeds_) out.push_back(s.seed);
  for (const auto& c : credentials_) {
    auto v = c.keypair.private_scalar.view();
    out.emplace_back(v.begin(), v.end());
  }
  auto a = identity_.attestation_keypair.private_scalar.view();
  out.emplace_back(a.begin(), a.end());
  return out;
}

void Authenticator::save(const std::filesystem::path& path) const {
  json seeds = json::array();
  for (const auto& s : seeds_) {
    json e = {{"seed", json_util::b64(s.seed)},
              {"epoch", s.epoch},
              {"peer_models", s.peer_models},
              {"expires_at_ms", nullptr}};
    if (s.expires_at) e["expires_at_ms"] = to_millis(*s.expires_at);
    seeds.push_back(e);
  }
  json creds = json::array();
  for (const auto& c : credentials_) {
    json e = {{"service_id", c.service_id},
              {"username", c.username},
              {"credential_id", json_util::b64(c.credential_id)},
              {"private_key", json_util::b64(c.keypair.private_scalar.view())},
              {"pending_update", nullptr}};
    if (c.pending_update) e["pending_update"] = *c.pending_update;
    creds.push_back(e);
  }
  json retention = {{"kind", retention_.kind == RetentionPolicy::Kind::kMaxCount
                                 ? "max-count"
                                 : "expiry"},
                    {"max_count", retention_.max_count},
                    {"lifetime_ms", retention_.lifetime.count()},
                    {"renewal_window_ms", retention_.renewal_window.count()}};
  json doc = {
      {"version", 1},
      {"name", name_},
      {"model", identity_.model_name},
      {"attestation_key",
       json_util::b64(identity_.attestation_keypair.private_scalar.view())},
      {"certificate", identity_.device_certificate},
      {"retention", retention},
      {"seeds", seeds},
      {"credentials", creds}};
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kInternalError, "cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

Authenticator Authenticator::load(const std::filesystem::path& path,
                                  std::shared_ptr<const Clock> clock) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kCorruptStore, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), {});
  try {
    json doc = json_util::parse(text);
    if (json_util::get<int>(doc, "version") != 1) {
      throw Error(ErrorCode::kCorruptStore, "unsupported device store version");
    }
    att::ManufacturerCert cert{"", "", crypto::EcPoint::generator(), {}};
    att::from_json(json_util::field(doc, "certificate"), cert);
    att::DeviceIdentity id{json_util::get<std::string>(doc, "model"),
                           keypair_from(json_util::get_bytes(doc, "attestation_key")),
                           std::move(cert)};

    const json& r = json_util::field(doc, "retention");
    RetentionPolicy retention;
    retention.kind = json_util::get<std::string>(r, "kind") == "expiry"
                         ? RetentionPolicy::Kind::kExpiry
                         : RetentionPolicy::Kind::kMaxCount;
    retention.max_count = json_util::get<std::uint32_t>(r, "max_count");
    retention.lifetime = Duration(json_util::get<std::int64_t>(r, "lifetime_ms"));
    retention.renewal_window =
        Duration(json_util::get<std::int64_t>(r, "renewal_window_ms"));

    Authenticator device(json_util::get<std::string>(doc, "name"), std::move(id),
                         retention, std::move(clock));
    for (const auto& s : json_util::field(doc, "seeds")) {
      seed::SeedRecord rec;
      rec.seed = json_util::get_bytes_sized(s, "seed", crypto::kSeedSize);
      rec.epoch = json_util::get<std::uint64_t>(s, "epoch");
      rec.peer_models = json_util::get<std::vector<std::string>>(s, "peer_models");
      if (json_util::has(s, "expires_at_ms")) {
        rec.expires_at = from_millis(json_util::get<std::int64_t>(s, "expires_at_ms"));
      }
      device.seeds_.push_back(std::move(rec));
    }
    for (const auto& c : json_util::field(doc, "credentials")) {
      LocalCredential cred{json_util::get<std::string>(c, "service_id"),
                           json_util::get<std::string>(c, "username"),
                           json_util::get_bytes(c, "credential_id"),
                           keypair_from(json_util::get_bytes(c, "private_key")),
                           std::nullopt};
      if (json_util::has(c, "pending_update")) {
        cred.pending_update = c.at("pending_update").get<UpdatingMessage>();
      }
      device.credentials_.push_back(std::move(cred));
    }
    return device;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptStore) throw;
    throw Error(ErrorCode::kCorruptStore, e.detail());
  }
}

}  // namespace ovk::authenticator

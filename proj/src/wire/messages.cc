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

#include "ovk/wire/messages.h"

#include <array>

#include "json_util.h"

namespace ovk::wire {

using json_util::json;

namespace {

constexpr std::array<std::string_view, 10> kKinds = {
    StartAuthnRequest::kKind, StartAuthnResponse::kKind, RegisterRequest::kKind,
    AccountCreated::kKind,    EnrollRequest::kKind,      KeyBound::kKind,
    AuthnRequest::kKind,      SessionGranted::kKind,     ErrorReply::kKind,
    SeedRound::kKind};

std::string get_username(const json& j) {
  auto name = json_util::get<std::string>(j, "username");
  if (name.empty()) json_util::violation("username must not be empty");
  return name;
}

OvkState parse_state(const std::string& s) {
  if (s == "stable") return OvkState::kStable;
  if (s == "migrating") return OvkState::kMigrating;
  json_util::violation("unknown state '" + s + "'");
}

}  // namespace

std::string_view state_name(OvkState s) {
  return s == OvkState::kStable ? "stable" : "migrating";
}

Bytes authn_payload(ByteView challenge, std::string_view service_id,
                    std::string_view username, ByteView credential_id) {
  return Transcript("ovk/authn/v1")
      .add(challenge)
      .add(service_id)
      .add(username)
      .add(credential_id)
      .bytes();
}

bool is_known_kind(std::string_view kind) {
  for (auto k : kKinds) {
    if (k == kind) return true;
  }
  return false;
}

void to_json(json& j, const StartAuthnRequest& v) { j = {{"username", v.username}}; }

void from_json(const json& j, StartAuthnRequest& v) { v.username = get_username(j); }

void to_json(json& j, const StartAuthnResponse& v) {
  json creds = json::array();
  for (const auto& c : v.credentials) creds.push_back(json_util::b64(c));
  j = {{"challenge", json_util::b64(v.challenge)},
       {"credentials", creds},
       {"candidates", v.candidates},
       {"state", state_name(v.state)}};
  j["ovpk"] = v.ovpk ? json(json_util::b64(v.ovpk->view())) : json(nullptr);
  j["metadata"] = v.metadata ? json(*v.metadata) : json(nullptr);
}

void from_json(const json& j, StartAuthnResponse& v) {
  v.challenge = json_util::get_bytes(j, "challenge");
  v.credentials.clear();
  const json& creds = json_util::field(j, "credentials");
  if (!creds.is_array()) json_util::violation("credentials must be an array");
  for (const auto& c : creds) {
    if (!c.is_string()) json_util::violation("credential id must be a string");
    try {
      v.credentials.push_back(base64url_decode(c.get<std::string>()));
    } catch (const Error&) {
      json_util::violation("credential id is not canonical base64url");
    }
  }
  v.ovpk.reset();
  if (json_util::has(j, "ovpk")) v.ovpk = json_util::get_point(j, "ovpk");
  v.metadata.reset();
  if (json_util::has(j, "metadata")) {
    v.metadata = json_util::field(j, "metadata").get<OvkMetadata>();
  }
  v.candidates.clear();
  if (json_util::has(j, "candidates")) {
    const json& c = json_util::field(j, "candidates");
    if (!c.is_array()) json_util::violation("candidates must be an array");
    for (const auto& m : c) v.candidates.push_back(m.get<OvkMetadata>());
  }
  v.state = parse_state(json_util::get<std::string>(j, "state"));
}

void to_json(json& j, const RegisterRequest& v) {
  j = {{"username", v.username},
       {"challenge", json_util::b64(v.challenge)},
       {"credential_id", json_util::b64(v.credential_id)},
       {"public_key", json_util::b64(v.public_key.view())},
       {"attestation", v.attestation},
       {"ovpk", json_util::b64(v.ovpk.view())},
       {"metadata", v.metadata},
       {"ovpk_attestation", v.ovpk_attestation},
       {"ovk_signature", json_util::b64(v.ovk_signature)}};
}

void from_json(const json& j, RegisterRequest& v) {
  v.username = get_username(j);
  v.challenge = json_util::get_bytes(j, "challenge");
  v.credential_id = json_util::get_bytes(j, "credential_id");
  v.public_key = json_util::get_point(j, "public_key");
  v.attestation =
      json_util::field(j, "attestation").get<attestation::AttestationStatement>();
  v.ovpk = json_util::get_point(j, "ovpk");
  v.metadata = json_util::field(j, "metadata").get<OvkMetadata>();
  v.ovpk_attestation =
      json_util::field(j, "ovpk_attestation").get<attestation::AttestationStatement>();
  v.ovk_signature = json_util::get_bytes(j, "ovk_signature");
}

void to_json(json& j, const AccountCreated& v) {
  j = {{"username", v.username},
       {"credential_id", json_util::b64(v.credential_id)},
       {"capacity", v.capacity}};
}

void from_json(const json& j, AccountCreated& v) {
  v.username = get_username(j);
  v.credential_id = json_util::get_bytes(j, "credential_id");
  v.capacity = json_util::get<std::uint32_t>(j, "capacity");
}

void to_json(json& j, const EnrollRequest& v) {
  j = {{"username", v.username},
       {"challenge", json_util::b64(v.challenge)},
       {"credential_id", json_util::b64(v.credential_id)},
       {"public_key", json_util::b64(v.public_key.view())},
       {"attestation", v.attestation},
       {"ovk_signature", json_util::b64(v.ovk_signature)}};
}

void from_json(const json& j, EnrollRequest& v) {
  v.username = get_username(j);
  v.challenge = json_util::get_bytes(j, "challenge");
  v.credential_id = json_util::get_bytes(j, "credential_id");
  v.public_key = json_util::get_point(j, "public_key");
  v.attestation =
      json_util::field(j, "attestation").get<attestation::AttestationStatement>();
  v.ovk_signature = json_util::get_bytes(j, "ovk_signature");
}

void to_json(json& j, const KeyBound& v) {
  j = {{"username", v.username},
       {"credential_id", json_util::b64(v.credential_id)},
       {"active_credentials", v.active_credentials}};
}

void from_json(const json& j, KeyBound& v) {
  v.username = get_username(j);
  v.credential_id = json_util::get_bytes(j, "credential_id");
  v.active_credentials = json_util::get<std::uint32_t>(j, "active_credentials");
}

void to_json(json& j, const AuthnRequest& v) {
  j = {{"username", v.username},
       {"credential_id", json_util::b64(v.credential_id)},
       {"challenge", json_util::b64(v.challenge)},
       {"signature", json_util::b64(v.signature)}};
  j["update"] = v.update ? json(*v.update) : json(nullptr);
}

void from_json(const json& j, AuthnRequest& v) {
  v.username = get_username(j);
  v.credential_id = json_util::get_bytes(j, "credential_id");
  v.challenge = json_util::get_bytes(j, "challenge");
  v.signature = json_util::get_bytes(j, "signature");
  v.update.reset();
  if (json_util::has(j, "update")) {
    v.update = json_util::field(j, "update").get<UpdatingMessage>();
  }
}

void to_json(json& j, const UpdateAck& v) {
  j = {{"committed", v.committed}, {"state", state_name(v.state)}};
}

void from_json(const json& j, UpdateAck& v) {
  v.committed = json_util::get<bool>(j, "committed");
  v.state = parse_state(json_util::get<std::string>(j, "state"));
}

void to_json(json& j, const SessionGranted& v) {
  j = {{"username", v.username}, {"credential_id", json_util::b64(v.credential_id)}};
  j["update"] = v.update ? json(*v.update) : json(nullptr);
}

void from_json(const json& j, SessionGranted& v) {
  v.username = get_username(j);
  v.credential_id = json_util::get_bytes(j, "credential_id");
  v.update.reset();
  if (json_util::has(j, "update")) {
    v.update = json_util::field(j, "update").get<UpdateAck>();
  }
}

void to_json(json& j, const ErrorReply& v) {
  j = {{"code", v.code}, {"message", v.message}};
}

void from_json(const json& j, ErrorReply& v) {
  v.code = json_util::get<std::string>(j, "code");
  v.message = json_util::get<std::string>(j, "message");
}

void to_json(json& j, const SeedRound& v) { j = {{"message", v.message}}; }

void from_json(const json& j, SeedRound& v) {
  v.message = json_util::field(j, "message").get<seed::RoundMessage>();
}

}  // namespace ovk::wire

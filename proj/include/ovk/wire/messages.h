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

#ifndef OVK_WIRE_MESSAGES_H_
#define OVK_WIRE_MESSAGES_H_

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ovk/attestation.h"
#include "ovk/bytes.h"
#include "ovk/crypto/suite.h"
#include "ovk/ownership.h"
#include "ovk/seed_exchange.h"

// Every message that crosses a device/service or device/device boundary.
// Each type has a stable kind string and a JSON body codec.
namespace ovk::wire {

enum class OvkState { kStable, kMigrating };
std::string_view state_name(OvkState s);

struct StartAuthnRequest {
  static constexpr std::string_view kKind = "start-authn";
  std::string username;
  bool operator==(const StartAuthnRequest&) const = default;
};

// Unknown usernames get the same shape as an account without metadata.
struct StartAuthnResponse {
  static constexpr std::string_view kKind = "start-authn-response";
  Bytes challenge;
  std::vector<Bytes> credentials;  // Active credential ids
  std::optional<crypto::EcPoint> ovpk;
  std::optional<OvkMetadata> metadata;
  std::vector<OvkMetadata> candidates;  // proposals, in first-seen order
  OvkState state = OvkState::kStable;
  bool operator==(const StartAuthnResponse&) const = default;
};

struct RegisterRequest {
  static constexpr std::string_view kKind = "register";
  std::string username;
  Bytes challenge;
  Bytes credential_id;
  crypto::EcPoint public_key = crypto::EcPoint::generator();
  attestation::AttestationStatement attestation;
  crypto::EcPoint ovpk = crypto::EcPoint::generator();
  OvkMetadata metadata;
  attestation::AttestationStatement ovpk_attestation;
  Bytes ovk_signature;  // OVSK over the registrant's own public key
  bool operator==(const RegisterRequest&) const = default;
};

struct AccountCreated {
  static constexpr std::string_view kKind = "account-created";
  std::string username;
  Bytes credential_id;
  std::uint32_t capacity = 0;
  bool operator==(const AccountCreated&) const = default;
};

struct EnrollRequest {
  static constexpr std::string_view kKind = "enroll";
  std::string username;
  Bytes challenge;
  Bytes credential_id;
  crypto::EcPoint public_key = crypto::EcPoint::generator();
  attestation::AttestationStatement attestation;
  Bytes ovk_signature;
  bool operator==(const EnrollRequest&) const = default;
};

struct KeyBound {
  static constexpr std::string_view kKind = "key-bound";
  std::string username;
  Bytes credential_id;
  std::uint32_t active_credentials = 0;
  bool operator==(const KeyBound&) const = default;
};

struct AuthnRequest {
  static constexpr std::string_view kKind = "authn";
  std::string username;
  Bytes credential_id;
  Bytes challenge;
  Bytes signature;
  std::optional<UpdatingMessage> update;
  bool operator==(const AuthnRequest&) const = default;
};

struct UpdateAck {
  bool committed = false;  // the account now uses this message's OVPK
  OvkState state = OvkState::kStable;
  bool operator==(const UpdateAck&) const = default;
};

struct SessionGranted {
  static constexpr std::string_view kKind = "session-granted";
  std::string username;
  Bytes credential_id;
  std::optional<UpdateAck> update;
  bool operator==(const SessionGranted&) const = default;
};

struct ErrorReply {
  static constexpr std::string_view kKind = "error";
  std::string code;
  std::string message;
  bool operator==(const ErrorReply&) const = default;
};

struct SeedRound {
  static constexpr std::string_view kKind = "seed-round";
  seed::RoundMessage message;
  bool operator==(const SeedRound&) const = default;
};

// Signature input for a challenge response.
Bytes authn_payload(ByteView challenge, std::string_view service_id,
                    std::string_view username, ByteView credential_id);

bool is_known_kind(std::string_view kind);

#define OVK_WIRE_CODEC(T)                           \
  void to_json(nlohmann::json& j, const T& value); \
  void from_json(const nlohmann::json& j, T& value);

OVK_WIRE_CODEC(StartAuthnRequest)
OVK_WIRE_CODEC(StartAuthnResponse)
OVK_WIRE_CODEC(RegisterRequest)
OVK_WIRE_CODEC(AccountCreated)
OVK_WIRE_CODEC(EnrollRequest)
OVK_WIRE_CODEC(KeyBound)
OVK_WIRE_CODEC(AuthnRequest)
OVK_WIRE_CODEC(UpdateAck)
OVK_WIRE_CODEC(SessionGranted)
OVK_WIRE_CODEC(ErrorReply)
OVK_WIRE_CODEC(SeedRound)

#undef OVK_WIRE_CODEC

}  // namespace ovk::wire

#endif  // OVK_WIRE_MESSAGES_H_

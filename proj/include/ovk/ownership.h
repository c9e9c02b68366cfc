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

#ifndef OVK_OWNERSHIP_H_
#define OVK_OWNERSHIP_H_

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "ovk/bytes.h"
#include "ovk/crypto/suite.h"
#include "ovk/seed_exchange.h"

// Ownership verification keys. Every device holding a seed can derive the
// same per-service key pair from (seed, r): the OVSK is KDF(seed, r) read as
// a P-256 scalar. A service stores the public half (OVPK) together with the
// metadata (r, m, n) that lets sibling devices re-derive the private half:
//
//   m = MAC(OVSK, len(r) || r || len(sid) || sid)
//
// The MAC binds r to one service identifier, so metadata replayed by a
// different origin fails verification on the device.
namespace ovk {

inline constexpr std::size_t kMetadataRandomSize = 32;
inline constexpr int kMaxDerivationAttempts = 64;

struct OvkMetadata {
  Bytes r;  // 32 random bytes
  Bytes m;  // 32-byte MAC tag
  std::uint32_t n = 1;  // authenticators sharing the seed

  bool operator==(const OvkMetadata&) const = default;
};

struct DerivedOvk {
  crypto::EcKeyPair keypair;
  OvkMetadata metadata;
  std::string service_id;
  std::uint64_t seed_epoch = 0;

  const crypto::EcPoint& ovpk() const { return keypair.public_point; }
};

struct UpdatingMessage {
  crypto::EcPoint new_ovpk = crypto::EcPoint::generator();
  OvkMetadata new_metadata;
  Bytes signature;  // by the previous OVSK
  Bytes sender_credential_id;
  // By the new OVSK over the sender's own authentication key, so the
  // service can re-bind that credential if this proposal wins.
  Bytes rebinding_signature;

  bool operator==(const UpdatingMessage&) const = default;
};

Bytes metadata_mac_input(ByteView r, std::string_view service_id);

// Derivation with a caller-chosen r. Returns nullopt when KDF(seed, r) is not
// a valid scalar.
std::optional<DerivedOvk> derive_with_r(const seed::SeedRecord& seed,
                                        std::string_view service_id, ByteView r);

// Draws r until the KDF output is a valid scalar. Throws InvalidInput on an
// empty service id and InternalError after kMaxDerivationAttempts.
DerivedOvk derive_fresh(const seed::SeedRecord& seed, std::string_view service_id);

// Re-derives the OVK a sibling registered. Throws WrongService when the
// metadata MAC does not verify for this (seed, service id).
DerivedOvk derive_from_metadata(const seed::SeedRecord& seed,
                                std::string_view service_id,
                                const OvkMetadata& metadata);
bool metadata_matches(const seed::SeedRecord& seed, std::string_view service_id,
                      const OvkMetadata& metadata);

Bytes registration_payload(const crypto::EcPoint& new_public_key,
                           std::string_view service_id);
Bytes sign_registration(const DerivedOvk& ovk, const crypto::EcPoint& new_public_key);
bool verify_registration(const crypto::EcPoint& ovpk,
                         const crypto::EcPoint& new_public_key,
                         std::string_view service_id, ByteView signature);

Bytes update_payload(const crypto::EcPoint& new_ovpk, const OvkMetadata& metadata,
                     std::string_view service_id);

// Signs next's OVPK and metadata with prev's OVSK. Throws InvalidInput if
// the service ids differ and EpochOrder unless prev.seed_epoch < next.seed_epoch.
UpdatingMessage build_update(const DerivedOvk& prev, const DerivedOvk& next,
                             ByteView sender_credential_id,
                             const crypto::EcPoint& sender_public_key);
bool verify_update(const UpdatingMessage& message, const crypto::EcPoint& current_ovpk,
                   std::string_view service_id);
bool verify_rebinding(const UpdatingMessage& message,
                      const crypto::EcPoint& sender_public_key,
                      std::string_view service_id);

// Picks (previous seed, new seed) for an update: the previous seed is the one
// whose derived OVSK verifies the registered metadata, the new one is the
// latest epoch. Throws InvalidInput with fewer than two seeds, NoMatchingSeed
// when no held seed verifies, EpochOrder when the latest seed already does.
std::pair<const seed::SeedRecord*, const seed::SeedRecord*> select_update_seed(
    std::span<const seed::SeedRecord> seeds, std::string_view service_id,
    const OvkMetadata& prev_metadata);

struct NextOvk {
  DerivedOvk ovk;
  bool fresh_r = false;  // true when no candidate verified
};

// Adopts the first candidate whose MAC verifies under new_seed, otherwise
// derives a fresh OVK.
NextOvk derive_next(const seed::SeedRecord& new_seed, std::string_view service_id,
                    std::span<const OvkMetadata> candidates);

void to_json(nlohmann::json& j, const OvkMetadata& m);
void from_json(const nlohmann::json& j, OvkMetadata& m);
void to_json(nlohmann::json& j, const UpdatingMessage& m);
void from_json(const nlohmann::json& j, UpdatingMessage& m);

}  // namespace ovk

#endif  // OVK_OWNERSHIP_H_

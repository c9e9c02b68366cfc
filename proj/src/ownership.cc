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

#include "ovk/ownership.h"

#include <algorithm>

#include "json_util.h"
#include "ovk/error.h"

namespace ovk {

using json_util::json;

Bytes metadata_mac_input(ByteView r, std::string_view service_id) {
  return Transcript().add(r).add(service_id).bytes();
}

std::optional<DerivedOvk> derive_with_r(const seed::SeedRecord& seed,
                                        std::string_view service_id, ByteView r) {
  if (service_id.empty()) {
    throw Error(ErrorCode::kInvalidInput, "service id must not be empty");
  }
  Bytes candidate = crypto::kdf({seed.seed, Bytes(r.begin(), r.end())});
  auto keypair = crypto::scalar_to_keypair(candidate);
  secure_wipe(candidate);
  if (!keypair) return std::nullopt;

  DerivedOvk out{*std::move(keypair), {}, std::string(service_id), seed.epoch};
  out.metadata.r.assign(r.begin(), r.end());
  out.metadata.m = crypto::mac(out.keypair.private_scalar.view(),
                               metadata_mac_input(r, service_id));
  out.metadata.n = seed.n_parties();
  return out;
}

DerivedOvk derive_fresh(const seed::SeedRecord& seed, std::string_view service_id) {
  for (int attempt = 0; attempt < kMaxDerivationAttempts; ++attempt) {
    Bytes r = crypto::random_bytes(kMetadataRandomSize);
    if (auto ovk = derive_with_r(seed, service_id, r)) return *std::move(ovk);
  }
  throw Error(ErrorCode::kInternalError, "no valid OVSK after 64 attempts");
}

bool metadata_matches(const seed::SeedRecord& seed, std::string_view service_id,
                      const OvkMetadata& metadata) {
  if (metadata.r.size() < crypto::kMinSaltSize || service_id.empty()) return false;
  Bytes candidate = crypto::kdf({seed.seed, metadata.r});
  auto keypair = crypto::scalar_to_keypair(candidate);
  secure_wipe(candidate);
  return keypair && crypto::mac_verify(keypair->private_scalar.view(),
                                       metadata_mac_input(metadata.r, service_id),
                                       metadata.m);
}

DerivedOvk derive_from_metadata(const seed::SeedRecord& seed,
                                std::string_view service_id,
                                const OvkMetadata& metadata) {
  if (!metadata_matches(seed, service_id, metadata)) {
    throw Error(ErrorCode::kWrongService,
                "metadata does not verify for '" + std::string(service_id) + "'");
  }
  DerivedOvk out = *derive_with_r(seed, service_id, metadata.r);
  // n is the registrant's declaration; keep what the service holds.
  out.metadata.n = metadata.n;
  return out;
}

Bytes registration_payload(const crypto::EcPoint& new_public_key,
                           std::string_view service_id) {
  return Transcript("ovk/enroll/v1").add(new_public_key.view()).add(service_id).bytes();
}

Bytes sign_registration(const DerivedOvk& ovk, const crypto::EcPoint& new_public_key) {
  return crypto::sign(ovk.keypair, registration_payload(new_public_key, ovk.service_id));
}

bool verify_registration(const crypto::EcPoint& ovpk,
                         const crypto::EcPoint& new_public_key,
                         std::string_view service_id, ByteView signature) {
  if (signature.size() != crypto::kSignatureSize) return false;
  return crypto::verify(ovpk, registration_payload(new_public_key, service_id),
                        signature);
}

Bytes update_payload(const crypto::EcPoint& new_ovpk, const OvkMetadata& metadata,
                     std::string_view service_id) {
  return Transcript("ovk/update/v1")
      .add(new_ovpk.view())
      .add(metadata.r)
      .add(metadata.m)
      .add_u64(metadata.n)
      .add(service_id)
      .bytes();
}

UpdatingMessage build_update(const DerivedOvk& prev, const DerivedOvk& next,
                             ByteView sender_credential_id,
                             const crypto::EcPoint& sender_public_key) {
  if (prev.service_id != next.service_id) {
    throw Error(ErrorCode::kInvalidInput, "update spans two services");
  }
  if (prev.seed_epoch >= next.seed_epoch) {
    throw Error(ErrorCode::kEpochOrder, "new OVK must come from a newer seed");
  }
  UpdatingMessage msg;
  msg.new_ovpk = next.ovpk();
  msg.new_metadata = next.metadata;
  msg.signature = crypto::sign(
      prev.keypair, update_payload(next.ovpk(), next.metadata, prev.service_id));
  msg.sender_credential_id.assign(sender_credential_id.begin(),
                                  sender_credential_id.end());
  msg.rebinding_signature = sign_registration(next, sender_public_key);
  return msg;
}

bool verify_update(const UpdatingMessage& message, const crypto::EcPoint& current_ovpk,
                   std::string_view service_id) {
  if (message.signature.size() != crypto::kSignatureSize) return false;
  return crypto::verify(
      current_ovpk,
      update_payload(message.new_ovpk, message.new_metadata, service_id),
      message.signature);
}

bool verify_rebinding(const UpdatingMessage& message,
                      const crypto::EcPoint& sender_public_key,
                      std::string_view service_id) {
  return verify_registration(message.new_ovpk, sender_public_key, service_id,
                             message.rebinding_signature);
}

std::pair<const seed::SeedRecord*, const seed::SeedRecord*> select_update_seed(
    std::span<const seed::SeedRecord> seeds, std::string_view service_id,
    const OvkMetadata& prev_metadata) {
  if (seeds.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "an update needs at least two seeds");
  }
  const seed::SeedRecord* latest = &*std::max_element(
      seeds.begin(), seeds.end(),
      [](const auto& a, const auto& b) { return a.epoch < b.epoch; });
  const seed::SeedRecord* prev = nullptr;
  for (const auto& s : seeds) {
    if (metadata_matches(s, service_id, prev_metadata)) {
      prev = &s;
      break;
    }
  }
  if (prev == nullptr) {
    throw Error(ErrorCode::kNoMatchingSeed,
                "no held seed verifies the registered metadata");
  }
  if (prev == latest) {
    throw Error(ErrorCode::kEpochOrder, "registered OVK already uses the latest seed");
  }
  return {prev, latest};
}

NextOvk derive_next(const seed::SeedRecord& new_seed, std::string_view service_id,
                    std::span<const OvkMetadata> candidates) {
  for (const auto& c : candidates) {
    if (metadata_matches(new_seed, service_id, c)) {
      return {derive_from_metadata(new_seed, service_id, c), false};
    }
  }
  return {derive_fresh(new_seed, service_id), true};
}

void to_json(json& j, const OvkMetadata& m) {
  j = {{"r", json_util::b64(m.r)}, {"m", json_util::b64(m.m)}, {"n", m.n}};
}

void from_json(const json& j, OvkMetadata& m) {
  m.r = json_util::get_bytes(j, "r");
  m.m = json_util::get_bytes(j, "m");
  m.n = json_util::get<std::uint32_t>(j, "n");
}

void to_json(json& j, const UpdatingMessage& m) {
  j = {{"new_ovpk", json_util::b64(m.new_ovpk.view())},
       {"new_metadata", m.new_metadata},
       {"signature", json_util::b64(m.signature)},
       {"sender_credential_id", json_util::b64(m.sender_credential_id)},
       {"rebinding_signature", json_util::b64(m.rebinding_signature)}};
}

void from_json(const json& j, UpdatingMessage& m) {
  m.new_ovpk = json_util::get_point(j, "new_ovpk");
  from_json(json_util::field(j, "new_metadata"), m.new_metadata);
  m.signature = json_util::get_bytes_sized(j, "signature", crypto::kSignatureSize);
  m.sender_credential_id = json_util::get_bytes(j, "sender_credential_id");
  m.rebinding_signature =
      json_util::get_bytes_sized(j, "rebinding_signature", crypto::kSignatureSize);
}

}  // namespace ovk

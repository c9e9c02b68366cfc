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

#ifndef OVK_ATTESTATION_H_
#define OVK_ATTESTATION_H_

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <set>
#include <string>
#include <vector>

#include "ovk/bytes.h"
#include "ovk/crypto/suite.h"

// A deliberately small manufacturer PKI. A manufacturer root key certifies
// per-device attestation keys; a device attestation key signs statements
// about keys the device generated. Certificates are fixed-field structures,
// not X.509.
namespace ovk::attestation {

enum class AttestedKind { kAuthnKey, kOvpk, kDhShare };

std::string_view kind_name(AttestedKind kind);
AttestedKind kind_from_name(std::string_view name);

struct ManufacturerCert {
  std::string manufacturer_id;
  std::string model_name;
  crypto::EcPoint subject_point;
  Bytes signature;

  Bytes signed_payload() const;
  bool operator==(const ManufacturerCert&) const = default;
};

// Holds a manufacturer root key. Only provisioning tools and tests own one.
class Manufacturer {
 public:
  static Manufacturer create(std::string id);
  Manufacturer(std::string id, crypto::EcKeyPair root);

  const std::string& id() const { return id_; }
  const crypto::EcPoint& root_point() const { return root_.public_point; }
  ManufacturerCert certify(const std::string& model_name,
                           const crypto::EcPoint& subject) const;

  // Includes the root private key; for the provisioning store only.
  nlohmann::json to_private_json() const;
  static Manufacturer from_private_json(const nlohmann::json& j);

 private:
  std::string id_;
  crypto::EcKeyPair root_;
};

struct DeviceIdentity {
  std::string model_name;
  crypto::EcKeyPair attestation_keypair;
  ManufacturerCert device_certificate;

  static DeviceIdentity provision(const Manufacturer& manufacturer,
                                  const std::string& model_name);
};

struct AttestationStatement {
  AttestedKind kind = AttestedKind::kAuthnKey;
  crypto::EcPoint subject_point = crypto::EcPoint::generator();
  std::string model_name;
  std::vector<std::string> peer_models;  // kOvpk only
  Bytes challenge_echo;
  Bytes signature;
  ManufacturerCert certificate{"", "", crypto::EcPoint::generator(), {}};

  Bytes signed_payload() const;
  bool operator==(const AttestationStatement&) const = default;
};

// Signs a statement about subject with the device attestation key. Throws
// InvalidInput when peer_models is non-empty for a kind other than kOvpk.
AttestationStatement attest(const DeviceIdentity& device, AttestedKind kind,
                            const crypto::EcPoint& subject,
                            std::vector<std::string> peer_models,
                            ByteView challenge_echo);

struct TrustPolicy {
  std::set<crypto::EcPoint> trusted_roots;
  std::set<std::string> compliant_models;       // OVK derived as specified
  std::set<std::string> secure_storage_models;  // seed kept in secure storage

  static TrustPolicy load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

struct TrustVerdict {
  bool chain_ok = false;
  bool criterion1 = false;
  bool criterion2 = false;

  bool trusted() const { return chain_ok && criterion1 && criterion2; }
  bool operator==(const TrustVerdict&) const = default;
};

// chain_ok: the certificate verifies under a trusted root, names the same
// model, the statement signature verifies under the certified key, the
// statement is well-formed for its kind and echoes expected_challenge.
// criterion1: the model is compliant. criterion2: the model and every peer
// model keep the seed in secure storage.
TrustVerdict verify_statement(const AttestationStatement& statement,
                              const TrustPolicy& policy,
                              ByteView expected_challenge);

void to_json(nlohmann::json& j, const ManufacturerCert& cert);
void from_json(const nlohmann::json& j, ManufacturerCert& cert);
void to_json(nlohmann::json& j, const AttestationStatement& statement);
void from_json(const nlohmann::json& j, AttestationStatement& statement);
void to_json(nlohmann::json& j, const TrustPolicy& policy);
void from_json(const nlohmann::json& j, TrustPolicy& policy);

}  // namespace ovk::attestation

#endif  // OVK_ATTESTATION_H_

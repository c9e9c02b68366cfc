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

#include "ovk/attestation.h"

#include <fstream>

#include "json_util.h"
#include "ovk/error.h"

namespace ovk::attestation {

using json_util::json;

std::string_view kind_name(AttestedKind kind) {
  switch (kind) {
    case AttestedKind::kAuthnKey:
      return "authn-key";
    case AttestedKind::kOvpk:
      return "ovpk";
    case AttestedKind::kDhShare:
      return "dh-share";
  }
  return "authn-key";
}

AttestedKind kind_from_name(std::string_view name) {
  if (name == "authn-key") return AttestedKind::kAuthnKey;
  if (name == "ovpk") return AttestedKind::kOvpk;
  if (name == "dh-share") return AttestedKind::kDhShare;
  throw Error(ErrorCode::kInvariantViolation,
              "unknown attested kind '" + std::string(name) + "'");
}

Bytes ManufacturerCert::signed_payload() const {
  return Transcript("ovk/cert/v1")
      .add(manufacturer_id)
      .add(model_name)
      .add(subject_point.view())
      .bytes();
}

Manufacturer::Manufacturer(std::string id, crypto::EcKeyPair root)
    : id_(std::move(id)), root_(std::move(root)) {}

Manufacturer Manufacturer::create(std::string id) {
  return Manufacturer(std::move(id), crypto::EcKeyPair::generate());
}

ManufacturerCert Manufacturer::certify(const std::string& model_name,
                                       const crypto::EcPoint& subject) const {
  ManufacturerCert cert{id_, model_name, subject, {}};
  cert.signature = crypto::sign(root_, cert.signed_payload());
  return cert;
}

json Manufacturer::to_private_json() const {
  return {{"id", id_},
          {"root_private", json_util::b64(root_.private_scalar.view())},
          {"root_public", json_util::b64(root_.public_point.view())}};
}

Manufacturer Manufacturer::from_private_json(const json& j) {
  auto scalar = crypto::Scalar::from_bytes(json_util::get_bytes(j, "root_private"));
  auto point = crypto::scalar_mult(scalar, crypto::EcPoint::generator());
  if (point != json_util::get_point(j, "root_public")) {
    json_util::violation("manufacturer root key pair mismatch");
  }
  return Manufacturer(json_util::get<std::string>(j, "id"),
                      crypto::EcKeyPair{scalar, point});
}

DeviceIdentity DeviceIdentity::provision(const Manufacturer& manufacturer,
                                         const std::string& model_name) {
  auto key = crypto::EcKeyPair::generate();
  auto cert = manufacturer.certify(model_name, key.public_point);
  return DeviceIdentity{model_name, std::move(key), std::move(cert)};
}

Bytes AttestationStatement::signed_payload() const {
  Transcript t("ovk/attest/v1");
  t.add(kind_name(kind)).add(subject_point.view()).add(model_name);
  t.add_u64(peer_models.size());
  for (const auto& m : peer_models) t.add(m);
  t.add(challenge_echo);
  return t.bytes();
}

AttestationStatement attest(const DeviceIdentity& device, AttestedKind kind,
                            const crypto::EcPoint& subject,
                            std::vector<std::string> peer_models,
                            ByteView challenge_echo) {
  if (kind != AttestedKind::kOvpk && !peer_models.empty()) {
    throw Error(ErrorCode::kInvalidInput,
                "peer models are only attested for an OVPK");
  }
  AttestationStatement s;
  s.kind = kind;
  s.subject_point = subject;
  s.model_name = device.model_name;
  s.peer_models = std::move(peer_models);
  s.challenge_echo.assign(challenge_echo.begin(), challenge_echo.end());
  s.certificate = device.device_certificate;
  s.signature = crypto::sign(device.attestation_keypair, s.signed_payload());
  return s;
}

namespace {

bool verify_quietly(const crypto::EcPoint& key, ByteView msg, ByteView sig) {
  if (sig.size() != crypto::kSignatureSize) return false;
  return crypto::verify(key, msg, sig);
}

}  // namespace

TrustVerdict verify_statement(const AttestationStatement& statement,
                              const TrustPolicy& policy,
                              ByteView expected_challenge) {
  TrustVerdict v;
  const ManufacturerCert& cert = statement.certificate;

  bool root_ok = false;
  for (const auto& root : policy.trusted_roots) {
    if (verify_quietly(root, cert.signed_payload(), cert.signature)) {
      root_ok = true;
      break;
    }
  }
  bool well_formed = statement.kind == AttestedKind::kOvpk ||
                     statement.peer_models.empty();
  bool challenge_ok =
      statement.challenge_echo.size() == expected_challenge.size() &&
      std::equal(statement.challenge_echo.begin(),
                 statement.challenge_echo.end(), expected_challenge.begin());
  v.chain_ok = root_ok && well_formed && challenge_ok &&
               cert.model_name == statement.model_name &&
               verify_quietly(cert.subject_point, statement.signed_payload(),
                              statement.signature);

  v.criterion1 = policy.compliant_models.contains(statement.model_name);
  v.criterion2 = policy.secure_storage_models.contains(statement.model_name);
  for (const auto& peer : statement.peer_models) {
    v.criterion2 = v.criterion2 && policy.secure_storage_models.contains(peer);
  }
  return v;
}

void to_json(json& j, const ManufacturerCert& cert) {
  j = {{"manufacturer", cert.manufacturer_id},
       {"model", cert.model_name},
       {"subject", json_util::b64(cert.subject_point.view())},
       {"signature", json_util::b64(cert.signature)}};
}

void from_json(const json& j, ManufacturerCert& cert) {
  cert.manufacturer_id = json_util::get<std::string>(j, "manufacturer");
  cert.model_name = json_util::get<std::string>(j, "model");
  cert.subject_point = json_util::get_point(j, "subject");
  cert.signature =
      json_util::get_bytes_sized(j, "signature", crypto::kSignatureSize);
}

void to_json(json& j, const AttestationStatement& s) {
  j = {{"kind", kind_name(s.kind)},
       {"subject", json_util::b64(s.subject_point.view())},
       {"model", s.model_name},
       {"peer_models", s.peer_models},
       {"challenge", json_util::b64(s.challenge_echo)},
       {"signature", json_util::b64(s.signature)},
       {"certificate", s.certificate}};
}

void from_json(const json& j, AttestationStatement& s) {
  s.kind = kind_from_name(json_util::get<std::string>(j, "kind"));
  s.subject_point = json_util::get_point(j, "subject");
  s.model_name = json_util::get<std::string>(j, "model");
  s.peer_models = json_util::get<std::vector<std::string>>(j, "peer_models");
  if (s.kind != AttestedKind::kOvpk && !s.peer_models.empty()) {
    json_util::violation("peer_models present on a non-OVPK statement");
  }
  s.challenge_echo = json_util::get_bytes(j, "challenge");
  s.signature = json_util::get_bytes_sized(j, "signature", crypto::kSignatureSize);
  from_json(json_util::field(j, "certificate"), s.certificate);
}

void to_json(json& j, const TrustPolicy& policy) {
  json roots = json::array();
  for (const auto& r : policy.trusted_roots) roots.push_back(json_util::b64(r.view()));
  j = {{"roots", roots},
       {"compliant_models", policy.compliant_models},
       {"secure_storage_models", policy.secure_storage_models}};
}

void from_json(const json& j, TrustPolicy& policy) {
  policy = TrustPolicy{};
  const json& roots = json_util::field(j, "roots");
  if (!roots.is_array()) json_util::violation("roots must be an array");
  for (const auto& r : roots) {
    if (!r.is_string()) json_util::violation("root must be a string");
    try {
      policy.trusted_roots.insert(
          crypto::EcPoint::from_bytes(base64url_decode(r.get<std::string>())));
    } catch (const Error&) {
      json_util::violation("root is not a valid curve point");
    }
  }
  policy.compliant_models =
      json_util::get<std::set<std::string>>(j, "compliant_models");
  policy.secure_storage_models =
      json_util::get<std::set<std::string>>(j, "secure_storage_models");
}

TrustPolicy TrustPolicy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return json_util::parse(text).get<TrustPolicy>();
}

void TrustPolicy::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path.string());
  out << json(*this).dump(2) << "\n";
}

}  // namespace ovk::attestation

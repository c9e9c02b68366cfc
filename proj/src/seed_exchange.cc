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

#include "ovk/seed_exchange.h"

#include <algorithm>
#include <set>

#include "json_util.h"
#include "ovk/error.h"

namespace ovk::seed {

using json_util::json;

void NegotiationConfig::validate() const {
  if (password.empty()) {
    throw Error(ErrorCode::kInvalidInput, "negotiation password is empty");
  }
  if (n_parties < 2) {
    throw Error(ErrorCode::kInvalidInput, "a seed needs at least two parties");
  }
  if (self_id >= n_parties) {
    throw Error(ErrorCode::kInvalidInput, "party id outside [0, N-1]");
  }
  if (kdf_iterations < crypto::kMinPbkdf2Iterations) {
    throw Error(ErrorCode::kInvalidInput, "iteration count below minimum");
  }
}

void validate_roster(std::span<const NegotiationConfig> configs) {
  if (configs.empty()) throw Error(ErrorCode::kInvalidInput, "empty roster");
  std::set<std::uint32_t> ids;
  for (const auto& c : configs) {
    c.validate();
    if (c.n_parties != configs.size()) {
      throw Error(ErrorCode::kInvalidInput,
                  "roster size disagrees with declared party count");
    }
    if (!ids.insert(c.self_id).second) {
      throw Error(ErrorCode::kInvalidInput,
                  "duplicate party id " + std::to_string(c.self_id));
    }
  }
}

void to_json(json& j, const RoundMessage& m) {
  j = {{"round", m.round},
       {"from", m.from_id},
       {"to", m.to_id},
       {"envelope", m.envelope.serialize()}};
}

void from_json(const json& j, RoundMessage& m) {
  m.round = json_util::get<std::uint32_t>(j, "round");
  m.from_id = json_util::get<std::uint32_t>(j, "from");
  m.to_id = json_util::get<std::uint32_t>(j, "to");
  if (m.round < 1) json_util::violation("round must be >= 1");
  try {
    m.envelope =
        crypto::EnvelopeCompact::parse(json_util::get<std::string>(j, "envelope"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvariantViolation) throw;
    json_util::violation(std::string("envelope: ") + e.what());
  }
}

std::string serialize(const RoundMessage& m) { return json(m).dump(); }

RoundMessage parse_round_message(std::string_view text) {
  return json_util::parse(text).get<RoundMessage>();
}

std::string SeedRecord::fingerprint() const {
  Bytes digest =
      crypto::sha256(Transcript("ovk/seed-fingerprint/v1").add(seed).bytes());
  return to_hex(ByteView(digest).first(8));
}

Bytes share_challenge(std::uint64_t epoch, std::uint32_t n_parties,
                      std::uint32_t party_id) {
  return crypto::sha256(Transcript("ovk/seed-share/v1")
                            .add_u64(epoch)
                            .add_u64(n_parties)
                            .add_u64(party_id)
                            .bytes());
}

Bytes seed_from_point(const crypto::EcPoint& agreed) {
  return crypto::sha256(agreed.x_coordinate());
}

Negotiation::Negotiation(NegotiationConfig config,
                         attestation::DeviceIdentity device)
    : config_(std::move(config)), device_(std::move(device)) {
  config_.validate();
}

Negotiation::~Negotiation() { wipe(); }

void Negotiation::wipe() { ephemeral_.reset(); }

RoundMessage Negotiation::start(std::optional<crypto::Scalar> injected_scalar) {
  if (state_ != State::kIdle) {
    throw Error(ErrorCode::kProtocolOrder, "negotiation already started");
  }
  ephemeral_ = injected_scalar ? *injected_scalar : crypto::Scalar::random();
  crypto::EcPoint share =
      crypto::scalar_mult(*ephemeral_, crypto::EcPoint::generator());
  own_share_ = attestation::attest(
      device_, attestation::AttestedKind::kDhShare, share, {},
      share_challenge(config_.epoch, config_.n_parties, config_.self_id));
  relayed_.clear();
  state_ = State::kRunning;
  expected_round_ = 1;
  return emit(1, share);
}

RoundMessage Negotiation::emit(std::uint32_t round, const crypto::EcPoint& point) {
  json shares = json::array();
  shares.push_back({{"party", config_.self_id}, {"statement", own_share_}});
  for (const auto& r : relayed_) {
    shares.push_back({{"party", r.party}, {"statement", r.statement}});
  }
  json plaintext = {{"point", json_util::b64(point.view())}, {"shares", shares}};
  Bytes body = to_bytes(plaintext.dump());
  RoundMessage out{round, config_.self_id, config_.send_to(),
                   crypto::seal(config_.password, body, config_.kdf_iterations)};
  return out;
}

std::vector<Negotiation::RelayedShare> Negotiation::check_shares(
    const json& shares, std::uint32_t round, const crypto::EcPoint& point) {
  if (!shares.is_array() || shares.size() != round) {
    json_util::violation("round " + std::to_string(round) + " must relay " +
                         std::to_string(round) + " share attestations");
  }
  const std::uint32_t n = config_.n_parties;
  std::vector<RelayedShare> out;
  for (std::uint32_t k = 0; k < round; ++k) {
    const json& entry = shares[k];
    std::uint32_t expected_party = (config_.receive_from() + n - k) % n;
    auto party = json_util::get<std::uint32_t>(entry, "party");
    if (party != expected_party) {
      throw Error(ErrorCode::kProtocolOrder, "relayed shares out of ring order");
    }
    auto stmt =
        json_util::field(entry, "statement").get<attestation::AttestationStatement>();
    if (stmt.kind != attestation::AttestedKind::kDhShare) {
      throw Error(ErrorCode::kUntrustedAttestation, "share is not a DH share");
    }
    Bytes challenge = share_challenge(config_.epoch, n, party);
    if (k == 0 && round == 1 && stmt.subject_point != point) {
      throw Error(ErrorCode::kUntrustedAttestation,
                  "attestation does not cover the received DH share");
    }
    bool self_consistent =
        stmt.challenge_echo == challenge &&
        stmt.certificate.model_name == stmt.model_name &&
        crypto::verify(stmt.certificate.subject_point, stmt.signed_payload(),
                       stmt.signature);
    if (!self_consistent) {
      throw Error(ErrorCode::kUntrustedAttestation,
                  "peer " + std::to_string(party) + " share attestation invalid");
    }
    if (config_.peer_policy) {
      auto verdict =
          attestation::verify_statement(stmt, *config_.peer_policy, challenge);
      if (!verdict.chain_ok || !verdict.criterion2) {
        throw Error(ErrorCode::kUntrustedAttestation,
                    "peer model '" + stmt.model_name + "' is not trusted");
      }
    }
    out.push_back(RelayedShare{party, std::move(stmt)});
  }
  return out;
}

Negotiation::StepResult Negotiation::step(const RoundMessage& incoming) {
  if (state_ != State::kRunning) {
    throw Error(ErrorCode::kProtocolOrder, "negotiation is not running");
  }
  if (incoming.to_id != config_.self_id ||
      incoming.from_id != config_.receive_from()) {
    throw Error(ErrorCode::kProtocolOrder, "message is not from the ring partner");
  }
  if (incoming.round != expected_round_) {
    throw Error(ErrorCode::kProtocolOrder,
                "expected round " + std::to_string(expected_round_) + ", got " +
                    std::to_string(incoming.round));
  }

  try {
    Bytes plaintext = crypto::open(config_.password, incoming.envelope);
    json body = json_util::parse(to_string(plaintext));
    crypto::EcPoint point = crypto::EcPoint::from_bytes(
        base64url_decode(json_util::get<std::string>(body, "point")));
    relayed_ = check_shares(json_util::field(body, "shares"), incoming.round, point);

    crypto::EcPoint next = crypto::dh(*ephemeral_, point);
    if (incoming.round + 1 < config_.n_parties) {
      ++expected_round_;
      return emit(incoming.round + 1, next);
    }

    SeedRecord record;
    record.seed = seed_from_point(next);
    record.epoch = config_.epoch;
    auto peers = relayed_;
    std::sort(peers.begin(), peers.end(),
              [](const auto& a, const auto& b) { return a.party < b.party; });
    for (const auto& p : peers) record.peer_models.push_back(p.statement.model_name);
    wipe();
    state_ = State::kFinalized;
    return record;
  } catch (...) {
    abort();
    throw;
  }
}

void Negotiation::abort() {
  wipe();
  relayed_.clear();
  if (state_ != State::kFinalized) state_ = State::kAborted;
}

}  // namespace ovk::seed

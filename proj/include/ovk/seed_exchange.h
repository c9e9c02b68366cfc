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

#ifndef OVK_SEED_EXCHANGE_H_
#define OVK_SEED_EXCHANGE_H_

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ovk/attestation.h"
#include "ovk/bytes.h"
#include "ovk/clock.h"
#include "ovk/crypto/envelope.h"
#include "ovk/crypto/suite.h"

// Password-authenticated agreement of one 256-bit seed among N >= 2
// devices arranged in a ring. Party i always sends to (i+1) mod N and
// receives from (i-1) mod N. In round 1 every party sends its own DH share
// g^a_i; in round k it raises the value received in round k-1 to its own
// scalar and forwards it. After round N-1 each party holds
// (prod a_i) * G, and the seed is SHA-256 of that point's x-coordinate.
//
// Every hop is sealed in a password envelope, so a party without the
// password can neither read nor forge a share. Round-1 shares carry a
// DhShare attestation; attestations are relayed around the ring so that
// each party learns the model names of all N-1 peers.
namespace ovk::seed {

struct NegotiationConfig {
  std::string password;  // entered on each device, never serialized
  std::uint32_t self_id = 0;
  std::uint32_t n_parties = 2;
  std::uint64_t epoch = 1;
  std::uint32_t kdf_iterations = crypto::kDefaultPbkdf2Iterations;
  // When set, every peer's DhShare attestation must chain to a trusted
  // root and name a secure-storage model.
  std::optional<attestation::TrustPolicy> peer_policy;

  // Throws InvalidInput on an empty password, N < 2 or an id outside
  // [0, N-1].
  void validate() const;
  std::uint32_t send_to() const { return (self_id + 1) % n_parties; }
  std::uint32_t receive_from() const {
    return (self_id + n_parties - 1) % n_parties;
  }
};

// Rejects a roster whose ids overlap or do not cover [0, N-1] exactly.
void validate_roster(std::span<const NegotiationConfig> configs);

struct RoundMessage {
  std::uint32_t round = 1;
  std::uint32_t from_id = 0;
  std::uint32_t to_id = 0;
  crypto::EnvelopeCompact envelope;

  bool operator==(const RoundMessage&) const = default;
};

void to_json(nlohmann::json& j, const RoundMessage& m);
void from_json(const nlohmann::json& j, RoundMessage& m);
std::string serialize(const RoundMessage& m);
RoundMessage parse_round_message(std::string_view text);

struct SeedRecord {
  Bytes seed;  // 32 bytes
  std::uint64_t epoch = 0;
  std::vector<std::string> peer_models;  // N-1 entries, by party id
  std::optional<Instant> expires_at;

  std::uint32_t n_parties() const {
    return static_cast<std::uint32_t>(peer_models.size() + 1);
  }
  // Short public identifier for display; reveals nothing about the seed.
  std::string fingerprint() const;

  bool operator==(const SeedRecord&) const = default;
};

// The challenge a DhShare attestation echoes: binds it to one negotiation
// epoch, ring size and party position.
Bytes share_challenge(std::uint64_t epoch, std::uint32_t n_parties,
                      std::uint32_t party_id);

// Seed from the final agreed point.
Bytes seed_from_point(const crypto::EcPoint& agreed);

class Negotiation {
 public:
  enum class State { kIdle, kRunning, kFinalized, kAborted };

  using StepResult = std::variant<RoundMessage, SeedRecord>;

  Negotiation(NegotiationConfig config, attestation::DeviceIdentity device);
  ~Negotiation();

  Negotiation(const Negotiation&) = delete;
  Negotiation& operator=(const Negotiation&) = delete;
  Negotiation(Negotiation&&) = default;
  Negotiation& operator=(Negotiation&&) = default;

  // Generates the ephemeral DH key pair (or adopts the injected scalar) and
  // returns the round-1 message carrying the attested own share.
  RoundMessage start(std::optional<crypto::Scalar> injected_scalar = {});

  // Consumes the message from the ring predecessor. Returns the next round
  // message, or the finalized seed after round N-1. Throws ProtocolOrder for
  // out-of-order or misaddressed input, AuthFailure for a wrong password or
  // tampering (the negotiation is aborted), InvalidPoint for a bad share,
  // UntrustedAttestation when a peer attestation fails.
  StepResult step(const RoundMessage& incoming);

  // Erases the ephemeral scalar. Idempotent.
  void abort();

  State state() const { return state_; }
  std::uint32_t expected_round() const { return expected_round_; }
  const NegotiationConfig& config() const { return config_; }

 private:
  struct RelayedShare {
    std::uint32_t party;
    attestation::AttestationStatement statement;
  };

  RoundMessage emit(std::uint32_t round, const crypto::EcPoint& point);
  std::vector<RelayedShare> check_shares(const nlohmann::json& shares,
                                         std::uint32_t round,
                                         const crypto::EcPoint& point);
  void wipe();

  NegotiationConfig config_;
  attestation::DeviceIdentity device_;
  std::optional<crypto::Scalar> ephemeral_;
  attestation::AttestationStatement own_share_;
  std::vector<RelayedShare> relayed_;
  State state_ = State::kIdle;
  std::uint32_t expected_round_ = 1;
};

}  // namespace ovk::seed

#endif  // OVK_SEED_EXCHANGE_H_

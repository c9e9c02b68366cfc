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

#ifndef OVK_CRYPTO_SUITE_H_
#define OVK_CRYPTO_SUITE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "ovk/bytes.h"

// Fixed algorithm suite: HMAC-SHA-256 for KDF and MAC, NIST P-256
// (secp256r1) for ECDSA and ECDH, AES-128-GCM content encryption, PBES2 with
// HMAC-SHA-256 and AES-128 key wrap for password-protected keys. Everything
// else in the project goes through this header, never through OpenSSL.
namespace ovk::crypto {

inline constexpr std::size_t kSeedSize = 32;
inline constexpr std::size_t kScalarSize = 32;
inline constexpr std::size_t kPointSize = 65;  // SEC 1 uncompressed
inline constexpr std::size_t kSignatureSize = 64;  // r || s
inline constexpr std::size_t kMacSize = 32;
inline constexpr std::size_t kMinSaltSize = 16;

Bytes random_bytes(std::size_t n);

Bytes sha256(ByteView data);
Bytes hmac_sha256(ByteView key, ByteView message);

struct KdfInput {
  Bytes seed;  // exactly kSeedSize
  Bytes salt;  // at least kMinSaltSize
};

// HMAC-SHA-256 keyed by the seed over the salt.
Bytes kdf(const KdfInput& input);

Bytes mac(ByteView key, ByteView message);
bool mac_verify(ByteView key, ByteView message, ByteView tag);

// A P-256 private scalar in [1, n-1], big-endian. Wiped on destruction.
class Scalar {
 public:
  // Throws InvalidInput unless the bytes encode an integer in [1, n-1].
  static Scalar from_bytes(ByteView bytes);
  static Scalar random();

  Scalar(const Scalar&) = default;
  Scalar& operator=(const Scalar&) = default;
  ~Scalar();

  const std::array<std::uint8_t, kScalarSize>& bytes() const { return bytes_; }
  ByteView view() const { return bytes_; }

  bool operator==(const Scalar& other) const;

 private:
  Scalar() = default;
  std::array<std::uint8_t, kScalarSize> bytes_{};
};

// A P-256 point other than the identity, stored in uncompressed form.
// Construction validates the encoding and curve membership.
class EcPoint {
 public:
  // Accepts compressed or uncompressed SEC 1 encodings; throws InvalidPoint.
  static EcPoint from_bytes(ByteView bytes);
  static const EcPoint& generator();

  const std::array<std::uint8_t, kPointSize>& bytes() const { return bytes_; }
  ByteView view() const { return bytes_; }
  ByteView x_coordinate() const { return ByteView(bytes_).subspan(1, 32); }

  bool operator==(const EcPoint& other) const = default;
  auto operator<=>(const EcPoint& other) const = default;

 private:
  EcPoint() = default;
  std::array<std::uint8_t, kPointSize> bytes_{};
};

struct EcKeyPair {
  Scalar private_scalar;
  EcPoint public_point;

  static EcKeyPair generate();
};

// Big-endian encoding of the P-256 group order n.
const std::array<std::uint8_t, kScalarSize>& group_order();

// Interprets the candidate as a big-endian integer d. Returns the key pair
// d*G when 1 <= d <= n-1 and nullopt otherwise; nullopt is a signal to retry
// with fresh input, not a failure.
std::optional<EcKeyPair> scalar_to_keypair(ByteView candidate);

EcPoint scalar_mult(const Scalar& k, const EcPoint& point);
// Elliptic-curve Diffie-Hellman: returns private_scalar * peer_point.
inline EcPoint dh(const Scalar& private_scalar, const EcPoint& peer_point) {
  return scalar_mult(private_scalar, peer_point);
}

// Product of scalars modulo the group order. Test oracles use this to
// compute multi-party agreement results directly.
Scalar scalar_product(std::span<const Scalar> factors);

// ECDSA over SHA-256(message). Signatures are fixed-width r || s.
Bytes sign(const EcKeyPair& key, ByteView message);
// Throws InvalidInput if the signature is not kSignatureSize bytes.
bool verify(const EcPoint& public_point, ByteView message, ByteView signature);

// Primitives behind the envelope, exposed for known-answer tests.
Bytes pbkdf2_sha256(std::string_view password, ByteView salt,
                    std::uint32_t iterations, std::size_t length);
Bytes aes_key_wrap(ByteView kek, ByteView key);
// Returns nullopt when the integrity check fails.
std::optional<Bytes> aes_key_unwrap(ByteView kek, ByteView wrapped);

struct GcmOutput {
  Bytes ciphertext;
  Bytes tag;
};
GcmOutput aes128_gcm_seal(ByteView key, ByteView iv, ByteView aad,
                          ByteView plaintext);
std::optional<Bytes> aes128_gcm_open(ByteView key, ByteView iv, ByteView aad,
                                     ByteView ciphertext, ByteView tag);

}  // namespace ovk::crypto

#endif  // OVK_CRYPTO_SUITE_H_

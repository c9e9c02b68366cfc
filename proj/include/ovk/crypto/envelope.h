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

#ifndef OVK_CRYPTO_ENVELOPE_H_
#define OVK_CRYPTO_ENVELOPE_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "ovk/bytes.h"

// Password-protected envelope in JWE compact serialization (RFC 7516):
// a random content-encryption key encrypts the payload with AES-128-GCM and
// is itself wrapped with PBES2-HS256+A128KW under the password.
namespace ovk::crypto {

inline constexpr std::string_view kEnvelopeKeyAlg = "PBES2-HS256+A128KW";
inline constexpr std::string_view kEnvelopeContentAlg = "A128GCM";
inline constexpr std::uint32_t kDefaultPbkdf2Iterations = 210'000;
inline constexpr std::uint32_t kMinPbkdf2Iterations = 1'000;
inline constexpr std::uint32_t kMaxPbkdf2Iterations = 10'000'000;

struct EnvelopeHeader {
  std::string alg;
  std::string enc;
  Bytes p2s;  // PBES2 salt input
  std::uint32_t p2c = 0;  // PBKDF2 iteration count
};

class EnvelopeCompact {
 public:
  // Structural parse of "h.k.iv.ct.tag". Throws ParseError when the segment
  // count, alphabet or fixed lengths are wrong, and AuthFailure when a
  // segment is structurally fine but cannot be authentic (non-canonical
  // encoding, unreadable protected header).
  static EnvelopeCompact parse(std::string_view compact);

  std::string serialize() const;

  const EnvelopeHeader& header() const { return header_; }
  const std::string& encoded_header() const { return encoded_header_; }
  const Bytes& wrapped_cek() const { return wrapped_cek_; }
  const Bytes& iv() const { return iv_; }
  const Bytes& ciphertext() const { return ciphertext_; }
  const Bytes& tag() const { return tag_; }

  bool operator==(const EnvelopeCompact& other) const {
    return serialize() == other.serialize();
  }

 private:
  friend EnvelopeCompact seal(std::string_view, ByteView, std::uint32_t);

  EnvelopeHeader header_;
  std::string encoded_header_;  // exact protected-header segment (GCM AAD)
  Bytes wrapped_cek_;
  Bytes iv_;
  Bytes ciphertext_;
  Bytes tag_;
};

// Throws InvalidInput for an empty password or an iteration count below
// kMinPbkdf2Iterations.
EnvelopeCompact seal(std::string_view password, ByteView plaintext,
                     std::uint32_t iterations = kDefaultPbkdf2Iterations);

// Throws AuthFailure for a wrong password or any modification.
Bytes open(std::string_view password, const EnvelopeCompact& envelope);
Bytes open(std::string_view password, std::string_view compact);

}  // namespace ovk::crypto

#endif  // OVK_CRYPTO_ENVELOPE_H_

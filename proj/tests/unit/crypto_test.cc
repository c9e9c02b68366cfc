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

#include <gtest/gtest.h>

#include <set>

#include "ovk/bytes.h"
#include "ovk/crypto/suite.h"
#include "ovk/error.h"
#include "support/oracle.h"
#include "support/vectors.h"

namespace ovk::crypto {
namespace {

Bytes H(std::string_view hex) { return from_hex(hex); }

TEST(Hmac, Rfc4231) {
  for (const auto& v : vectors::rfc4231()) {
    EXPECT_EQ(to_hex(hmac_sha256(v.key, v.message)), v.mac_hex);
  }
}

TEST(Hmac, AgreesWithHandWrittenConstruction) {
  for (int i = 0; i < 50; ++i) {
    Bytes key = random_bytes(1 + i * 3);
    Bytes msg = random_bytes(i * 7);
    EXPECT_EQ(hmac_sha256(key, msg), oracle::hmac(key, msg));
  }
}

TEST(Kdf, IsHmacKeyedBySeed) {
  Bytes seed = random_bytes(32), salt = random_bytes(32);
  EXPECT_EQ(kdf({seed, salt}), oracle::hmac(seed, salt));
}

TEST(Kdf, RejectsBadSizes) {
  EXPECT_THROW(kdf({random_bytes(31), random_bytes(32)}), Error);
  EXPECT_THROW(kdf({random_bytes(32), random_bytes(15)}), Error);
  EXPECT_NO_THROW(kdf({random_bytes(32), random_bytes(16)}));
}

TEST(Mac, VerifyRejectsWrongTagAndLength) {
  Bytes key = random_bytes(32), msg = to_bytes("message");
  Bytes tag = mac(key, msg);
  EXPECT_TRUE(mac_verify(key, msg, tag));
  tag[5] ^= 1;
  EXPECT_FALSE(mac_verify(key, msg, tag));
  EXPECT_FALSE(mac_verify(key, msg, Bytes(31)));
  EXPECT_THROW(mac(random_bytes(16), msg), Error);
}

TEST(Gcm, NistVectors) {
  for (const auto& v : vectors::nist_gcm()) {
    auto out = aes128_gcm_seal(v.key, v.iv, v.aad, v.plaintext);
    EXPECT_EQ(to_hex(out.ciphertext), v.ciphertext_hex);
    EXPECT_EQ(to_hex(out.tag), v.tag_hex);
    auto back = aes128_gcm_open(v.key, v.iv, v.aad, out.ciphertext, out.tag);
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, v.plaintext);
  }
}

TEST(Gcm, RejectsModifiedInputs) {
  auto v = vectors::nist_gcm()[3];
  Bytes key = v.key, iv = v.iv, aad = v.aad, pt4 = v.plaintext;
  auto tc4 = aes128_gcm_seal(key, iv, aad, pt4);
  auto opened = aes128_gcm_open(key, iv, aad, tc4.ciphertext, tc4.tag);
  ASSERT_TRUE(opened);
  EXPECT_EQ(*opened, pt4);
  Bytes bad_aad = aad;
  bad_aad[0] ^= 1;
  EXPECT_FALSE(aes128_gcm_open(key, iv, bad_aad, tc4.ciphertext, tc4.tag));
  Bytes bad_tag = tc4.tag;
  bad_tag[15] ^= 0x80;
  EXPECT_FALSE(aes128_gcm_open(key, iv, aad, tc4.ciphertext, bad_tag));
}

// RFC 3394 section 4.1.
TEST(KeyWrap, Rfc3394) {
  Bytes kek = H("000102030405060708090A0B0C0D0E0F");
  Bytes key = H("00112233445566778899AABBCCDDEEFF");
  Bytes wrapped = aes_key_wrap(kek, key);
  EXPECT_EQ(to_hex(wrapped), "1fa68b0a8112b447aef34bd8fb5a7b829d3e862371d2cfe5");
  auto unwrapped = aes_key_unwrap(kek, wrapped);
  ASSERT_TRUE(unwrapped);
  EXPECT_EQ(*unwrapped, key);
  wrapped[3] ^= 1;
  EXPECT_FALSE(aes_key_unwrap(kek, wrapped));
}

TEST(Pbkdf2, Rfc7914Vector) {
  EXPECT_EQ(to_hex(pbkdf2_sha256("passwd", to_bytes("salt"), 1, 64)),
            "55ac046e56e3089fec1691c22544b605f94185216dde0465e68b9d57c20dacbc49ca9cccf1"
            "79b645991664b39d77ef317c71b845b1e30bd509112041d3a19783");
}

// RFC 6979 appendix A.2.5 (P-256, SHA-256).
TEST(Ecdsa, Rfc6979KnownAnswers) {
  auto kp = scalar_to_keypair(H(vectors::kRfc6979PrivateKey));
  ASSERT_TRUE(kp);
  auto set = vectors::rfc6979_p256();
  EXPECT_EQ(to_hex(kp->public_point.view()), to_hex(set[0].public_key));
  for (const auto& v : set) {
    EXPECT_EQ(verify(EcPoint::from_bytes(v.public_key), v.message, v.signature), v.valid);
  }
  EcPoint q = EcPoint::from_bytes(set[0].public_key);
  Bytes sig_sample = set[0].signature;
  for (std::size_t i = 0; i < sig_sample.size(); i += 7) {
    Bytes bad = sig_sample;
    bad[i] ^= 0x01;
    EXPECT_FALSE(verify(q, to_bytes("sample"), bad)) << "byte " << i;
  }
  EXPECT_THROW(verify(q, to_bytes("sample"), Bytes(63)), Error);
}

TEST(Ecdsa, SignVerifyRoundTrip) {
  for (int i = 0; i < 20; ++i) {
    auto kp = EcKeyPair::generate();
    Bytes msg = random_bytes(i * 5);
    Bytes sig = sign(kp, msg);
    ASSERT_EQ(sig.size(), kSignatureSize);
    EXPECT_TRUE(verify(kp.public_point, msg, sig));
    EXPECT_FALSE(verify(EcKeyPair::generate().public_point, msg, sig));
  }
}

TEST(Scalar, RangeChecks) {
  Bytes zero(32, 0);
  EXPECT_FALSE(scalar_to_keypair(zero));
  Bytes n(group_order().begin(), group_order().end());
  EXPECT_FALSE(scalar_to_keypair(n));
  EXPECT_THROW(Scalar::from_bytes(n), Error);
  Bytes n_minus_1 = n;
  n_minus_1[31] -= 1;
  EXPECT_TRUE(scalar_to_keypair(n_minus_1));
  Bytes ones(32, 0xff);
  EXPECT_FALSE(scalar_to_keypair(ones));
  Bytes one(32, 0);
  one[31] = 1;
  auto g = scalar_to_keypair(one);
  ASSERT_TRUE(g);
  EXPECT_EQ(g->public_point, EcPoint::generator());
  EXPECT_THROW(Scalar::from_bytes(Bytes(31, 1)), Error);
}

TEST(Point, RejectsInvalidEncodings) {
  auto expect_invalid = [](const Bytes& b) {
    try {
      EcPoint::from_bytes(b);
      ADD_FAILURE() << "accepted " << to_hex(b);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidPoint);
    }
  };
  expect_invalid({});
  expect_invalid(Bytes(65, 0));
  expect_invalid(Bytes{0x00});  // point at infinity
  Bytes g(EcPoint::generator().view().begin(), EcPoint::generator().view().end());
  Bytes off = g;
  off[64] ^= 1;  // not on the curve
  expect_invalid(off);
  Bytes compressed(g.begin(), g.begin() + 33);
  compressed[0] = 0x02 | (g[64] & 1);
  EXPECT_EQ(EcPoint::from_bytes(compressed), EcPoint::generator());
}

TEST(Point, ScalarMultMatchesOracle) {
  for (int i = 0; i < 20; ++i) {
    Scalar k = Scalar::random();
    Bytes kb(k.view().begin(), k.view().end());
    EcPoint p = scalar_mult(k, EcPoint::generator());
    EXPECT_EQ(to_hex(p.view()), oracle::hex(oracle::mul_base(kb)));
  }
}

TEST(Point, DhCommutes) {
  auto a = EcKeyPair::generate(), b = EcKeyPair::generate();
  EXPECT_EQ(dh(a.private_scalar, b.public_point), dh(b.private_scalar, a.public_point));
}

TEST(Scalar, ProductMatchesOracleSeed) {
  std::vector<Scalar> ks;
  std::vector<Bytes> raw;
  for (int i = 0; i < 4; ++i) {
    ks.push_back(Scalar::random());
    raw.emplace_back(ks.back().view().begin(), ks.back().view().end());
  }
  EcPoint p = scalar_mult(scalar_product(ks), EcPoint::generator());
  EXPECT_EQ(sha256(p.x_coordinate()), oracle::group_seed(raw));
}

TEST(Random, ProducesDistinctValues) {
  std::set<Bytes> seen;
  for (int i = 0; i < 100; ++i) seen.insert(random_bytes(16));
  EXPECT_EQ(seen.size(), 100u);
}

}  // namespace
}  // namespace ovk::crypto

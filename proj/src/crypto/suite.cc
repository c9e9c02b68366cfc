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

#include "ovk/crypto/suite.h"

#include <openssl/bn.h>
#include <openssl/crypto.h>
#include <openssl/ec.h>
#include <openssl/ecdsa.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <memory>

#include "ovk/error.h"

namespace ovk::crypto {
namespace {

struct BnFree {
  void operator()(BIGNUM* b) const { BN_clear_free(b); }
};
struct BnCtxFree {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_clear_free(p); }
};
struct EcKeyFree {
  void operator()(EC_KEY* k) const { EC_KEY_free(k); }
};
struct SigFree {
  void operator()(ECDSA_SIG* s) const { ECDSA_SIG_free(s); }
};
struct CipherCtxFree {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnFree>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxFree>;
using PointPtr = std::unique_ptr<EC_POINT, PointFree>;
using EcKeyPtr = std::unique_ptr<EC_KEY, EcKeyFree>;
using SigPtr = std::unique_ptr<ECDSA_SIG, SigFree>;
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

[[noreturn]] void fail(const char* what) {
  throw Error(ErrorCode::kInternalError, what);
}

template <typename T>
T* check(T* p, const char* what) {
  if (p == nullptr) fail(what);
  return p;
}

void check(int rc, const char* what) {
  if (rc != 1) fail(what);
}

// The group object is immutable after creation and safe to share.
const EC_GROUP* p256() {
  static const EC_GROUP* group =
      check(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1), "P-256 group");
  return group;
}

BnCtxPtr new_ctx() { return BnCtxPtr(check(BN_CTX_new(), "BN_CTX_new")); }

BnPtr to_bn(ByteView bytes) {
  return BnPtr(check(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()),
                               nullptr),
                     "BN_bin2bn"));
}

PointPtr to_ec_point(const EcPoint& point, BN_CTX* ctx) {
  PointPtr p(check(EC_POINT_new(p256()), "EC_POINT_new"));
  check(EC_POINT_oct2point(p256(), p.get(), point.bytes().data(),
                           point.bytes().size(), ctx),
        "EC_POINT_oct2point");
  return p;
}

std::array<std::uint8_t, kPointSize> encode_point(const EC_POINT* p,
                                                  BN_CTX* ctx) {
  std::array<std::uint8_t, kPointSize> out{};
  std::size_t n = EC_POINT_point2oct(p256(), p, POINT_CONVERSION_UNCOMPRESSED,
                                     out.data(), out.size(), ctx);
  if (n != kPointSize) fail("EC_POINT_point2oct");
  return out;
}

BnPtr order_bn() {
  return BnPtr(check(BN_dup(EC_GROUP_get0_order(p256())), "BN_dup"));
}

bool scalar_in_range(const BIGNUM* d) {
  return !BN_is_zero(d) && !BN_is_negative(d) &&
         BN_cmp(d, EC_GROUP_get0_order(p256())) < 0;
}

EcKeyPtr make_ec_key(const EcPoint& pub, const Scalar* priv) {
  EcKeyPtr key(check(EC_KEY_new_by_curve_name(NID_X9_62_prime256v1),
                     "EC_KEY_new"));
  BnCtxPtr ctx = new_ctx();
  PointPtr p = to_ec_point(pub, ctx.get());
  check(EC_KEY_set_public_key(key.get(), p.get()), "EC_KEY_set_public_key");
  if (priv != nullptr) {
    BnPtr d = to_bn(priv->view());
    check(EC_KEY_set_private_key(key.get(), d.get()), "EC_KEY_set_private_key");
  }
  return key;
}

}  // namespace

Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  if (n > 0) check(RAND_bytes(out.data(), static_cast<int>(n)), "RAND_bytes");
  return out;
}

Bytes sha256(ByteView data) {
  Bytes out(SHA256_DIGEST_LENGTH);
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Bytes hmac_sha256(ByteView key, ByteView message) {
  Bytes out(EVP_MAX_MD_SIZE);
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           message.data(), message.size(), out.data(), &len) == nullptr) {
    fail("HMAC");
  }
  out.resize(len);
  return out;
}

Bytes kdf(const KdfInput& input) {
  if (input.seed.size() != kSeedSize) {
    throw Error(ErrorCode::kInvalidInput, "seed must be 32 bytes");
  }
  if (input.salt.size() < kMinSaltSize) {
    throw Error(ErrorCode::kInvalidInput, "salt must be at least 16 bytes");
  }
  return hmac_sha256(input.seed, input.salt);
}

Bytes mac(ByteView key, ByteView message) {
  if (key.size() != kScalarSize) {
    throw Error(ErrorCode::kInvalidInput, "MAC key must be 32 bytes");
  }
  return hmac_sha256(key, message);
}

bool mac_verify(ByteView key, ByteView message, ByteView tag) {
  if (tag.size() != kMacSize) return false;
  Bytes expected = mac(key, message);
  return CRYPTO_memcmp(expected.data(), tag.data(), kMacSize) == 0;
}

Scalar::~Scalar() { OPENSSL_cleanse(bytes_.data(), bytes_.size()); }

bool Scalar::operator==(const Scalar& other) const {
  return CRYPTO_memcmp(bytes_.data(), other.bytes_.data(), kScalarSize) == 0;
}

Scalar Scalar::from_bytes(ByteView bytes) {
  if (bytes.size() != kScalarSize) {
    throw Error(ErrorCode::kInvalidInput, "scalar must be 32 bytes");
  }
  BnPtr d = to_bn(bytes);
  if (!scalar_in_range(d.get())) {
    throw Error(ErrorCode::kInvalidInput, "scalar outside [1, n-1]");
  }
  Scalar s;
  std::copy(bytes.begin(), bytes.end(), s.bytes_.begin());
  return s;
}

Scalar Scalar::random() {
  BnPtr d(check(BN_new(), "BN_new"));
  BnPtr range = order_bn();
  do {
    check(BN_priv_rand_range(d.get(), range.get()), "BN_priv_rand_range");
  } while (BN_is_zero(d.get()));
  Scalar s;
  check(BN_bn2binpad(d.get(), s.bytes_.data(), kScalarSize) ==
                static_cast<int>(kScalarSize)
            ? 1
            : 0,
        "BN_bn2binpad");
  return s;
}

EcPoint EcPoint::from_bytes(ByteView bytes) {
  BnCtxPtr ctx = new_ctx();
  PointPtr p(check(EC_POINT_new(p256()), "EC_POINT_new"));
  if (bytes.empty() ||
      EC_POINT_oct2point(p256(), p.get(), bytes.data(), bytes.size(),
                         ctx.get()) != 1) {
    throw Error(ErrorCode::kInvalidPoint, "not a P-256 point encoding");
  }
  if (EC_POINT_is_at_infinity(p256(), p.get()) == 1) {
    throw Error(ErrorCode::kInvalidPoint, "identity point");
  }
  if (EC_POINT_is_on_curve(p256(), p.get(), ctx.get()) != 1) {
    throw Error(ErrorCode::kInvalidPoint, "point not on curve");
  }
  EcPoint out;
  out.bytes_ = encode_point(p.get(), ctx.get());
  return out;
}

const EcPoint& EcPoint::generator() {
  static const EcPoint g = [] {
    BnCtxPtr ctx = new_ctx();
    EcPoint out;
    out.bytes_ = encode_point(EC_GROUP_get0_generator(p256()), ctx.get());
    return out;
  }();
  return g;
}

const std::array<std::uint8_t, kScalarSize>& group_order() {
  static const std::array<std::uint8_t, kScalarSize> n = [] {
    std::array<std::uint8_t, kScalarSize> out{};
    BN_bn2binpad(EC_GROUP_get0_order(p256()), out.data(), kScalarSize);
    return out;
  }();
  return n;
}

std::optional<EcKeyPair> scalar_to_keypair(ByteView candidate) {
  if (candidate.size() != kScalarSize) {
    throw Error(ErrorCode::kInvalidInput, "candidate must be 32 bytes");
  }
  BnPtr d = to_bn(candidate);
  if (!scalar_in_range(d.get())) return std::nullopt;
  Scalar s = Scalar::from_bytes(candidate);
  return EcKeyPair{s, scalar_mult(s, EcPoint::generator())};
}

EcKeyPair EcKeyPair::generate() {
  Scalar s = Scalar::random();
  return EcKeyPair{s, scalar_mult(s, EcPoint::generator())};
}

EcPoint scalar_mult(const Scalar& k, const EcPoint& point) {
  BnCtxPtr ctx = new_ctx();
  PointPtr in = to_ec_point(point, ctx.get());
  PointPtr out(check(EC_POINT_new(p256()), "EC_POINT_new"));
  BnPtr d = to_bn(k.view());
  check(EC_POINT_mul(p256(), out.get(), nullptr, in.get(), d.get(), ctx.get()),
        "EC_POINT_mul");
  // Prime order group and d in [1, n-1]: the product is never the identity.
  return EcPoint::from_bytes(encode_point(out.get(), ctx.get()));
}

Scalar scalar_product(std::span<const Scalar> factors) {
  if (factors.empty()) throw Error(ErrorCode::kInvalidInput, "no factors");
  BnCtxPtr ctx = new_ctx();
  BnPtr acc(check(BN_new(), "BN_new"));
  check(BN_one(acc.get()), "BN_one");
  for (const Scalar& f : factors) {
    BnPtr bn = to_bn(f.view());
    check(BN_mod_mul(acc.get(), acc.get(), bn.get(), EC_GROUP_get0_order(p256()),
                     ctx.get()),
          "BN_mod_mul");
  }
  std::array<std::uint8_t, kScalarSize> out{};
  BN_bn2binpad(acc.get(), out.data(), kScalarSize);
  Scalar s = Scalar::from_bytes(out);
  OPENSSL_cleanse(out.data(), out.size());
  return s;
}

Bytes sign(const EcKeyPair& key, ByteView message) {
  EcKeyPtr ec = make_ec_key(key.public_point, &key.private_scalar);
  Bytes digest = sha256(message);
  SigPtr sig(check(ECDSA_do_sign(digest.data(), static_cast<int>(digest.size()),
                                 ec.get()),
                   "ECDSA_do_sign"));
  const BIGNUM* r = nullptr;
  const BIGNUM* s = nullptr;
  ECDSA_SIG_get0(sig.get(), &r, &s);
  Bytes out(kSignatureSize);
  if (BN_bn2binpad(r, out.data(), 32) != 32 ||
      BN_bn2binpad(s, out.data() + 32, 32) != 32) {
    fail("signature encoding");
  }
  return out;
}

bool verify(const EcPoint& public_point, ByteView message, ByteView signature) {
  if (signature.size() != kSignatureSize) {
    throw Error(ErrorCode::kInvalidInput, "signature must be 64 bytes");
  }
  EcKeyPtr ec = make_ec_key(public_point, nullptr);
  SigPtr sig(check(ECDSA_SIG_new(), "ECDSA_SIG_new"));
  BIGNUM* r = check(BN_bin2bn(signature.data(), 32, nullptr), "BN_bin2bn");
  BIGNUM* s = check(BN_bin2bn(signature.data() + 32, 32, nullptr), "BN_bin2bn");
  if (ECDSA_SIG_set0(sig.get(), r, s) != 1) {
    BN_free(r);
    BN_free(s);
    fail("ECDSA_SIG_set0");
  }
  Bytes digest = sha256(message);
  return ECDSA_do_verify(digest.data(), static_cast<int>(digest.size()),
                         sig.get(), ec.get()) == 1;
}

Bytes pbkdf2_sha256(std::string_view password, ByteView salt,
                    std::uint32_t iterations, std::size_t length) {
  Bytes out(length);
  check(PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()),
                          salt.data(), static_cast<int>(salt.size()),
                          static_cast<int>(iterations), EVP_sha256(),
                          static_cast<int>(length), out.data()),
        "PKCS5_PBKDF2_HMAC");
  return out;
}

Bytes aes_key_wrap(ByteView kek, ByteView key) {
  if (kek.size() != 16 || key.size() % 8 != 0 || key.size() < 16) {
    throw Error(ErrorCode::kInvalidInput, "AES-KW input sizes");
  }
  CipherCtxPtr ctx(check(EVP_CIPHER_CTX_new(), "EVP_CIPHER_CTX_new"));
  EVP_CIPHER_CTX_set_flags(ctx.get(), EVP_CIPHER_CTX_FLAG_WRAP_ALLOW);
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_wrap(), nullptr, kek.data(),
                           nullptr),
        "AES-KW init");
  Bytes out(key.size() + 8);
  int len = 0;
  check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, key.data(),
                          static_cast<int>(key.size())),
        "AES-KW wrap");
  out.resize(static_cast<std::size_t>(len));
  return out;
}

std::optional<Bytes> aes_key_unwrap(ByteView kek, ByteView wrapped) {
  if (kek.size() != 16) throw Error(ErrorCode::kInvalidInput, "KEK size");
  if (wrapped.size() % 8 != 0 || wrapped.size() < 24) return std::nullopt;
  CipherCtxPtr ctx(check(EVP_CIPHER_CTX_new(), "EVP_CIPHER_CTX_new"));
  EVP_CIPHER_CTX_set_flags(ctx.get(), EVP_CIPHER_CTX_FLAG_WRAP_ALLOW);
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_wrap(), nullptr, kek.data(),
                           nullptr),
        "AES-KW init");
  Bytes out(wrapped.size());
  int len = 0;
  if (EVP_DecryptUpdate(ctx.get(), out.data(), &len, wrapped.data(),
                        static_cast<int>(wrapped.size())) != 1 ||
      len <= 0) {
    return std::nullopt;
  }
  out.resize(static_cast<std::size_t>(len));
  return out;
}

GcmOutput aes128_gcm_seal(ByteView key, ByteView iv, ByteView aad,
                          ByteView plaintext) {
  if (key.size() != 16 || iv.size() != 12) {
    throw Error(ErrorCode::kInvalidInput, "AES-128-GCM key/iv sizes");
  }
  CipherCtxPtr ctx(check(EVP_CIPHER_CTX_new(), "EVP_CIPHER_CTX_new"));
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                           iv.data()),
        "GCM init");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                            static_cast<int>(aad.size())),
          "GCM aad");
  }
  GcmOutput out{Bytes(plaintext.size()), Bytes(16)};
  if (!plaintext.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &len,
                            plaintext.data(), static_cast<int>(plaintext.size())),
          "GCM encrypt");
  }
  check(EVP_EncryptFinal_ex(ctx.get(), out.ciphertext.data() + len, &len),
        "GCM final");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, 16, out.tag.data()),
        "GCM tag");
  return out;
}

std::optional<Bytes> aes128_gcm_open(ByteView key, ByteView iv, ByteView aad,
                                     ByteView ciphertext, ByteView tag) {
  if (key.size() != 16 || iv.size() != 12 || tag.size() != 16) {
    throw Error(ErrorCode::kInvalidInput, "AES-128-GCM key/iv/tag sizes");
  }
  CipherCtxPtr ctx(check(EVP_CIPHER_CTX_new(), "EVP_CIPHER_CTX_new"));
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                           iv.data()),
        "GCM init");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                            static_cast<int>(aad.size())),
          "GCM aad");
  }
  Bytes out(ciphertext.size());
  if (!ciphertext.empty()) {
    check(EVP_DecryptUpdate(ctx.get(), out.data(), &len, ciphertext.data(),
                            static_cast<int>(ciphertext.size())),
          "GCM decrypt");
  }
  Bytes tag_copy(tag.begin(), tag.end());
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, 16,
                            tag_copy.data()),
        "GCM set tag");
  int final_len = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &final_len) != 1) {
    secure_wipe(out);
    return std::nullopt;
  }
  return out;
}

}  // namespace ovk::crypto

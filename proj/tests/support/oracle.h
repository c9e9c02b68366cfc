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

// Reference computations for tests. Everything here is built from raw
// OpenSSL primitives (SHA-256, BIGNUM, EC_POINT) and hand-written encodings,
// never from the library under test.

#ifndef OVK_TESTS_SUPPORT_ORACLE_H_
#define OVK_TESTS_SUPPORT_ORACLE_H_

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>
#include <openssl/sha.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

using Bytes = std::vector<std::uint8_t>;

inline Bytes sha256(const Bytes& data) {
  Bytes out(SHA256_DIGEST_LENGTH);
  SHA256(data.data(), data.size(), out.data());
  return out;
}

// RFC 2104 over SHA-256, written out.
inline Bytes hmac(Bytes key, const Bytes& msg) {
  constexpr std::size_t kBlock = 64;
  if (key.size() > kBlock) key = sha256(key);
  key.resize(kBlock, 0);
  Bytes inner, outer;
  for (auto b : key) inner.push_back(b ^ 0x36);
  for (auto b : key) outer.push_back(b ^ 0x5c);
  inner.insert(inner.end(), msg.begin(), msg.end());
  Bytes ih = sha256(inner);
  outer.insert(outer.end(), ih.begin(), ih.end());
  return sha256(outer);
}

inline Bytes str(std::string_view s) { return Bytes(s.begin(), s.end()); }

// u32 big-endian length prefix, then the bytes.
inline void put(Bytes& out, const Bytes& field) {
  auto n = static_cast<std::uint32_t>(field.size());
  out.push_back(n >> 24);
  out.push_back(n >> 16);
  out.push_back(n >> 8);
  out.push_back(n);
  out.insert(out.end(), field.begin(), field.end());
}

struct Group {
  EC_GROUP* group = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
  BN_CTX* ctx = BN_CTX_new();
  BIGNUM* order = BN_new();
  Group() { EC_GROUP_get_order(group, order, ctx); }
  ~Group() {
    BN_free(order);
    BN_CTX_free(ctx);
    EC_GROUP_free(group);
  }
};

inline Group& p256() {
  static Group g;
  return g;
}

inline Bytes bn_bytes(const BIGNUM* bn) {
  Bytes out(32);
  BN_bn2binpad(bn, out.data(), 32);
  return out;
}

// Uncompressed encoding of k*G.
inline Bytes mul_base(const Bytes& k) {
  auto& g = p256();
  BIGNUM* bn = BN_bin2bn(k.data(), static_cast<int>(k.size()), nullptr);
  EC_POINT* p = EC_POINT_new(g.group);
  EC_POINT_mul(g.group, p, bn, nullptr, nullptr, g.ctx);
  Bytes out(65);
  EC_POINT_point2oct(g.group, p, POINT_CONVERSION_UNCOMPRESSED, out.data(), 65, g.ctx);
  EC_POINT_free(p);
  BN_free(bn);
  return out;
}

// SHA-256 of the x-coordinate of (prod k_i mod n) * G.
inline Bytes group_seed(const std::vector<Bytes>& scalars) {
  auto& g = p256();
  BIGNUM* acc = BN_new();
  BN_one(acc);
  for (const auto& k : scalars) {
    BIGNUM* bn = BN_bin2bn(k.data(), static_cast<int>(k.size()), nullptr);
    BN_mod_mul(acc, acc, bn, g.order, g.ctx);
    BN_free(bn);
  }
  Bytes point = mul_base(bn_bytes(acc));
  BN_free(acc);
  return sha256(Bytes(point.begin() + 1, point.begin() + 33));
}

// OVSK = HMAC(seed, R) when it lies in [1, n-1].
inline std::optional<Bytes> ovsk(const Bytes& seed, const Bytes& r) {
  Bytes d = hmac(seed, r);
  auto& g = p256();
  BIGNUM* bn = BN_bin2bn(d.data(), 32, nullptr);
  bool ok = !BN_is_zero(bn) && BN_cmp(bn, g.order) < 0;
  BN_free(bn);
  if (!ok) return std::nullopt;
  return d;
}

inline Bytes metadata_mac(const Bytes& ovsk, const Bytes& r, std::string_view sid) {
  Bytes msg;
  put(msg, r);
  put(msg, str(sid));
  return hmac(ovsk, msg);
}

inline std::string hex(const Bytes& b) {
  static const char* d = "0123456789abcdef";
  std::string out;
  for (auto c : b) {
    out.push_back(d[c >> 4]);
    out.push_back(d[c & 15]);
  }
  return out;
}

inline Bytes unhex(std::string_view h) {
  Bytes out;
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
  };
  for (std::size_t i = 0; i + 1 < h.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(nib(h[i]) << 4 | nib(h[i + 1])));
  }
  return out;
}

// Update-race rules applied directly: one vote per update, a proposal that
// exceeds floor(electorate/2) commits at once, otherwise at the deadline the
// proposal with most votes wins and ties go to the one seen first.
// sequence holds 'u' / 'a' per vote. Returns 'u', 'a' or 'n' (no update).
inline char race_winner(std::uint32_t electorate, std::string_view sequence) {
  std::uint32_t u = 0, a = 0;
  char first = 'n';
  for (char side : sequence) {
    if (first == 'n') first = side;
    std::uint32_t& votes = side == 'u' ? u : a;
    ++votes;
    if (votes > electorate / 2) return side;
  }
  if (u == 0 && a == 0) return 'n';
  if (u != a) return u > a ? 'u' : 'a';
  return first;
}

}  // namespace oracle

#endif  // OVK_TESTS_SUPPORT_ORACLE_H_

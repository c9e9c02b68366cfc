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

#include "ovk/bytes.h"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <algorithm>

#include "ovk/error.h"

namespace ovk {

Bytes to_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

std::string to_string(ByteView bytes) {
  return std::string(bytes.begin(), bytes.end());
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw Error(ErrorCode::kParseError, "odd hex length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::kParseError, "bad hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string base64url_encode(ByteView bytes) {
  if (bytes.empty()) return {};
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  while (!out.empty() && out.back() == '=') out.pop_back();
  std::replace(out.begin(), out.end(), '+', '-');
  std::replace(out.begin(), out.end(), '/', '_');
  return out;
}

bool is_base64url_alphabet(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '-' || c == '_';
  });
}

namespace {

Bytes decode_lenient(std::string_view text) {
  if (!is_base64url_alphabet(text)) {
    throw Error(ErrorCode::kParseError, "character outside base64url alphabet");
  }
  if (text.size() % 4 == 1) {
    throw Error(ErrorCode::kParseError, "impossible base64url length");
  }
  if (text.empty()) return {};
  std::string std_b64(text);
  std::replace(std_b64.begin(), std_b64.end(), '-', '+');
  std::replace(std_b64.begin(), std_b64.end(), '_', '/');
  std::size_t pad = (4 - std_b64.size() % 4) % 4;
  std_b64.append(pad, '=');
  Bytes out(std_b64.size() / 4 * 3);
  int n = EVP_DecodeBlock(out.data(),
                          reinterpret_cast<const unsigned char*>(std_b64.data()),
                          static_cast<int>(std_b64.size()));
  if (n < 0) throw Error(ErrorCode::kParseError, "base64url decode failed");
  // EVP_DecodeBlock does not strip the bytes contributed by padding.
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

}  // namespace

bool is_canonical_base64url(std::string_view text) {
  try {
    return base64url_encode(decode_lenient(text)) == text;
  } catch (const Error&) {
    return false;
  }
}

Bytes base64url_decode(std::string_view text) {
  Bytes out = decode_lenient(text);
  if (base64url_encode(out) != text) {
    throw Error(ErrorCode::kParseError, "non-canonical base64url");
  }
  return out;
}

void secure_wipe(std::span<std::uint8_t> bytes) {
  if (!bytes.empty()) OPENSSL_cleanse(bytes.data(), bytes.size());
}

Transcript& Transcript::add(ByteView field) {
  auto len = static_cast<std::uint32_t>(field.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    bytes_.push_back(static_cast<std::uint8_t>(len >> shift));
  }
  bytes_.insert(bytes_.end(), field.begin(), field.end());
  return *this;
}

Transcript& Transcript::add(std::string_view field) {
  return add(ByteView(reinterpret_cast<const std::uint8_t*>(field.data()),
                      field.size()));
}

Transcript& Transcript::add_u64(std::uint64_t value) {
  std::uint8_t buf[8];
  for (int i = 0; i < 8; ++i) {
    buf[i] = static_cast<std::uint8_t>(value >> (56 - 8 * i));
  }
  return add(ByteView(buf, 8));
}

}  // namespace ovk

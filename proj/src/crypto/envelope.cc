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

#include "ovk/crypto/envelope.h"

#include <array>
#include <nlohmann/json.hpp>

#include "ovk/crypto/suite.h"
#include "ovk/error.h"

namespace ovk::crypto {
namespace {

constexpr std::size_t kCekSize = 16;
constexpr std::size_t kWrappedCekSize = kCekSize + 8;
constexpr std::size_t kIvSize = 12;
constexpr std::size_t kTagSize = 16;
constexpr std::size_t kP2sSize = 16;

[[noreturn]] void auth_failure(const char* what) {
  throw Error(ErrorCode::kAuthFailure, what);
}

// RFC 7518 section 4.8.1.1: the PBKDF2 salt is UTF8(alg) || 0x00 || p2s.
Bytes pbes2_salt(std::string_view alg, ByteView p2s) {
  Bytes salt(alg.begin(), alg.end());
  salt.push_back(0x00);
  salt.insert(salt.end(), p2s.begin(), p2s.end());
  return salt;
}

Bytes derive_kek(std::string_view password, const EnvelopeHeader& header) {
  return pbkdf2_sha256(password, pbes2_salt(header.alg, header.p2s), header.p2c,
                       kCekSize);
}

std::string encode_header(const EnvelopeHeader& header) {
  nlohmann::json j = {{"alg", header.alg},
                      {"enc", header.enc},
                      {"p2c", header.p2c},
                      {"p2s", base64url_encode(header.p2s)}};
  return base64url_encode(to_bytes(j.dump()));
}

EnvelopeHeader decode_header(const Bytes& raw) {
  nlohmann::json j = nlohmann::json::parse(raw.begin(), raw.end(), nullptr,
                                           /*allow_exceptions=*/false);
  if (!j.is_object()) auth_failure("protected header is not a JSON object");
  try {
    EnvelopeHeader h;
    h.alg = j.at("alg").get<std::string>();
    h.enc = j.at("enc").get<std::string>();
    h.p2c = j.at("p2c").get<std::uint32_t>();
    h.p2s = base64url_decode(j.at("p2s").get<std::string>());
    if (h.alg != kEnvelopeKeyAlg || h.enc != kEnvelopeContentAlg) {
      auth_failure("unsupported envelope algorithms");
    }
    if (h.p2c < kMinPbkdf2Iterations || h.p2c > kMaxPbkdf2Iterations) {
      auth_failure("iteration count out of range");
    }
    if (h.p2s.size() < 8) auth_failure("p2s too short");
    return h;
  } catch (const nlohmann::json::exception&) {
    auth_failure("protected header fields unreadable");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAuthFailure) throw;
    auth_failure("protected header fields unreadable");
  }
}

}  // namespace

EnvelopeCompact EnvelopeCompact::parse(std::string_view compact) {
  std::array<std::string_view, 5> segments;
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = compact.find('.', start);
    if (count == segments.size()) {
      throw Error(ErrorCode::kParseError, "envelope must have five segments");
    }
    if (dot == std::string_view::npos) {
      segments[count++] = compact.substr(start);
      break;
    }
    segments[count++] = compact.substr(start, dot - start);
    start = dot + 1;
  }
  if (count != segments.size()) {
    throw Error(ErrorCode::kParseError, "envelope must have five segments");
  }
  for (std::string_view seg : segments) {
    if (!is_base64url_alphabet(seg) || seg.size() % 4 == 1) {
      throw Error(ErrorCode::kParseError, "envelope segment is not base64url");
    }
  }
  // A segment that decodes but is not in canonical form was altered in
  // transit; treat it like any other tampering.
  for (std::string_view seg : segments) {
    if (!is_canonical_base64url(seg)) auth_failure("non-canonical segment");
  }

  EnvelopeCompact env;
  env.encoded_header_ = std::string(segments[0]);
  env.wrapped_cek_ = base64url_decode(segments[1]);
  env.iv_ = base64url_decode(segments[2]);
  env.ciphertext_ = base64url_decode(segments[3]);
  env.tag_ = base64url_decode(segments[4]);
  if (env.wrapped_cek_.size() != kWrappedCekSize || env.iv_.size() != kIvSize ||
      env.tag_.size() != kTagSize) {
    throw Error(ErrorCode::kParseError, "envelope segment has wrong length");
  }
  env.header_ = decode_header(base64url_decode(segments[0]));
  return env;
}

std::string EnvelopeCompact::serialize() const {
  std::string out = encoded_header_;
  for (const Bytes* part : {&wrapped_cek_, &iv_, &ciphertext_, &tag_}) {
    out.push_back('.');
    out += base64url_encode(*part);
  }
  return out;
}

EnvelopeCompact seal(std::string_view password, ByteView plaintext,
                     std::uint32_t iterations) {
  if (password.empty()) {
    throw Error(ErrorCode::kInvalidInput, "password must not be empty");
  }
  if (iterations < kMinPbkdf2Iterations || iterations > kMaxPbkdf2Iterations) {
    throw Error(ErrorCode::kInvalidInput, "iteration count out of range");
  }
  EnvelopeCompact env;
  env.header_.alg = std::string(kEnvelopeKeyAlg);
  env.header_.enc = std::string(kEnvelopeContentAlg);
  env.header_.p2c = iterations;
  env.header_.p2s = random_bytes(kP2sSize);
  env.encoded_header_ = encode_header(env.header_);

  Bytes kek = derive_kek(password, env.header_);
  Bytes cek = random_bytes(kCekSize);
  env.wrapped_cek_ = aes_key_wrap(kek, cek);
  env.iv_ = random_bytes(kIvSize);
  GcmOutput sealed =
      aes128_gcm_seal(cek, env.iv_, to_bytes(env.encoded_header_), plaintext);
  env.ciphertext_ = std::move(sealed.ciphertext);
  env.tag_ = std::move(sealed.tag);
  secure_wipe(kek);
  secure_wipe(cek);
  return env;
}

Bytes open(std::string_view password, const EnvelopeCompact& envelope) {
  if (password.empty()) auth_failure("empty password");
  Bytes kek = derive_kek(password, envelope.header());
  std::optional<Bytes> cek = aes_key_unwrap(kek, envelope.wrapped_cek());
  secure_wipe(kek);
  if (!cek || cek->size() != kCekSize) auth_failure("key unwrap failed");
  std::optional<Bytes> plaintext =
      aes128_gcm_open(*cek, envelope.iv(), to_bytes(envelope.encoded_header()),
                      envelope.ciphertext(), envelope.tag());
  secure_wipe(*cek);
  if (!plaintext) auth_failure("content authentication failed");
  return *std::move(plaintext);
}

Bytes open(std::string_view password, std::string_view compact) {
  return open(password, EnvelopeCompact::parse(compact));
}

}  // namespace ovk::crypto

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

// Internal helpers shared by every module that reads or writes JSON. Byte
// fields are unpadded base64url strings; any structural problem while
// reading surfaces as InvariantViolation.

#ifndef OVK_SRC_JSON_UTIL_H_
#define OVK_SRC_JSON_UTIL_H_

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "ovk/bytes.h"
#include "ovk/crypto/suite.h"
#include "ovk/error.h"

namespace ovk::json_util {

using nlohmann::json;

[[noreturn]] inline void violation(const std::string& what) {
  throw Error(ErrorCode::kInvariantViolation, what);
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) violation("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) violation(std::string("missing field '") + key + "'");
  return *it;
}

inline bool has(const json& j, const char* key) {
  return j.is_object() && j.contains(key) && !j.at(key).is_null();
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception&) {
    violation(std::string("field '") + key + "' has the wrong type");
  }
}

inline Bytes get_bytes(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) violation(std::string("field '") + key + "' not a string");
  try {
    return base64url_decode(v.get<std::string>());
  } catch (const Error&) {
    violation(std::string("field '") + key + "' is not canonical base64url");
  }
}

inline Bytes get_bytes_sized(const json& j, const char* key, std::size_t size) {
  Bytes b = get_bytes(j, key);
  if (b.size() != size) {
    violation(std::string("field '") + key + "' has length " +
              std::to_string(b.size()) + ", expected " + std::to_string(size));
  }
  return b;
}

inline crypto::EcPoint get_point(const json& j, const char* key) {
  Bytes b = get_bytes(j, key);
  try {
    return crypto::EcPoint::from_bytes(b);
  } catch (const Error&) {
    violation(std::string("field '") + key + "' is not a valid curve point");
  }
}

inline std::string b64(ByteView bytes) { return base64url_encode(bytes); }

// Parses text into JSON; syntax errors become ParseError.
inline json parse(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParseError, "invalid JSON");
  return j;
}

}  // namespace ovk::json_util

#endif  // OVK_SRC_JSON_UTIL_H_

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

#ifndef OVK_WIRE_FRAME_H_
#define OVK_WIRE_FRAME_H_

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "ovk/error.h"
#include "ovk/wire/messages.h"

namespace ovk::wire {

// A message in transit. The serialized form is the canonical JSON
// {"body":...,"kind":...}: sorted keys, no insignificant whitespace.
// service_id_hint is never serialized; the receiving transport fills it in
// with the origin it authenticated (what TLS would provide).
struct Frame {
  std::string kind;
  nlohmann::json body;
  std::string service_id_hint;

  bool operator==(const Frame&) const = default;
};

std::string encode(const Frame& frame);
// Throws ParseError for malformed JSON and UnknownKind for unknown kinds.
Frame decode(std::string_view bytes, std::string service_id_hint = {});

template <typename T>
Frame to_frame(const T& message) {
  return Frame{std::string(T::kKind), nlohmann::json(message), {}};
}

// Throws UnknownKind when the frame holds a different kind and
// InvariantViolation when the body does not form a valid T. Unknown body
// fields are ignored.
template <typename T>
T from_frame(const Frame& frame) {
  if (frame.kind != T::kKind) {
    throw Error(ErrorCode::kUnknownKind,
                "expected '" + std::string(T::kKind) + "', got '" + frame.kind + "'");
  }
  try {
    return frame.body.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvariantViolation, e.what());
  }
}

}  // namespace ovk::wire

#endif  // OVK_WIRE_FRAME_H_

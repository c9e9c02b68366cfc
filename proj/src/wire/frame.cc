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

#include "ovk/wire/frame.h"

#include "json_util.h"

namespace ovk::wire {

using json_util::json;

std::string encode(const Frame& frame) {
  // nlohmann objects are std::map backed, so dump() emits sorted keys.
  json j = {{"kind", frame.kind}, {"body", frame.body}};
  return j.dump();
}

Frame decode(std::string_view bytes, std::string service_id_hint) {
  json j = json_util::parse(bytes);
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "frame is not an object");
  auto kind = j.find("kind");
  auto body = j.find("body");
  if (kind == j.end() || !kind->is_string() || body == j.end()) {
    throw Error(ErrorCode::kParseError, "frame needs 'kind' and 'body'");
  }
  std::string k = kind->get<std::string>();
  if (!is_known_kind(k)) throw Error(ErrorCode::kUnknownKind, "unknown kind '" + k + "'");
  return Frame{std::move(k), *body, std::move(service_id_hint)};
}

}  // namespace ovk::wire

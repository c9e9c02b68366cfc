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

#ifndef OVK_BYTES_H_
#define OVK_BYTES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ovk {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

Bytes to_bytes(std::string_view text);
std::string to_string(ByteView bytes);

std::string to_hex(ByteView bytes);
// Throws ParseError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

// Unpadded base64url (RFC 4648 section 5).
std::string base64url_encode(ByteView bytes);
// Throws ParseError on characters outside the url-safe alphabet, on an
// impossible length, and on non-canonical trailing bits.
Bytes base64url_decode(std::string_view text);
bool is_base64url_alphabet(std::string_view text);
bool is_canonical_base64url(std::string_view text);

// Overwrites the buffer with zeros in a way the optimizer cannot elide.
void secure_wipe(std::span<std::uint8_t> bytes);

// Injective encoding of a sequence of fields: every field is written as a
// 4-byte big-endian length followed by its bytes. Used for every MAC and
// signature input so that distinct field tuples never collide.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(std::string_view label) { add(label); }

  Transcript& add(ByteView field);
  Transcript& add(std::string_view field);
  Transcript& add_u64(std::uint64_t value);

  const Bytes& bytes() const { return bytes_; }

 private:
  Bytes bytes_;
};

}  // namespace ovk

#endif  // OVK_BYTES_H_

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

#ifndef OVK_HARNESS_SECRECY_H_
#define OVK_HARNESS_SECRECY_H_

#include <string>
#include <vector>

#include "ovk/bytes.h"
#include "ovk/wire/transport.h"

namespace ovk::harness {

struct Finding {
  std::size_t entry = 0;
  std::string channel;
  std::string what;
};

// Looks for each secret (raw, hex, or inside any base64url-decodable JSON
// string or '.'-separated segment) and each password in every entry. Any
// 16-byte prefix of a secret counts as a leak.
std::vector<Finding> scan_traffic(const std::vector<wire::TrafficLog::Entry>& entries,
                                  const std::vector<Bytes>& secrets,
                                  const std::vector<std::string>& passwords);

}  // namespace ovk::harness

#endif  // OVK_HARNESS_SECRECY_H_

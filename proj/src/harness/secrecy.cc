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

#include "ovk/harness/secrecy.h"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>

namespace ovk::harness {

namespace {

constexpr std::size_t kProbeSize = 16;

bool contains(const std::string& hay, const std::string& needle) {
  return !needle.empty() && hay.find(needle) != std::string::npos;
}

std::string lower(std::string s) {
  std::ranges::transform(s, s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Every base64url-decodable piece of every string in the document.
void collect_blobs(const nlohmann::json& j, std::vector<std::string>& out) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    out.push_back(s);
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t dot = s.find('.', start);
      std::string seg = s.substr(start, dot == std::string::npos ? std::string::npos
                                                                 : dot - start);
      if (is_base64url_alphabet(seg)) {
        try {
          out.push_back(to_string(base64url_decode(seg)));
        } catch (const std::exception&) {
        }
      }
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
  } else if (j.is_structured()) {
    for (const auto& [key, v] : j.items()) {
      out.push_back(key);
      collect_blobs(v, out);
    }
  }
}

}  // namespace

std::vector<Finding> scan_traffic(const std::vector<wire::TrafficLog::Entry>& entries,
                                  const std::vector<Bytes>& secrets,
                                  const std::vector<std::string>& passwords) {
  std::vector<Finding> findings;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    std::vector<std::string> blobs{e.bytes};
    auto doc = nlohmann::json::parse(e.bytes, nullptr, false);
    if (!doc.is_discarded()) collect_blobs(doc, blobs);
    std::string lowered = lower(e.bytes);

    for (std::size_t s = 0; s < secrets.size(); ++s) {
      const Bytes& secret = secrets[s];
      if (secret.size() < kProbeSize) continue;
      std::string probe = to_string(ByteView(secret).first(kProbeSize));
      std::string hex = to_hex(ByteView(secret).first(kProbeSize));
      bool hit = contains(lowered, hex);
      for (const auto& b : blobs) hit = hit || contains(b, probe);
      if (hit) findings.push_back({i, e.channel, "secret #" + std::to_string(s)});
    }
    for (const auto& pw : passwords) {
      bool hit = false;
      for (const auto& b : blobs) hit = hit || contains(b, pw);
      if (hit) findings.push_back({i, e.channel, "password"});
    }
  }
  return findings;
}

}  // namespace ovk::harness

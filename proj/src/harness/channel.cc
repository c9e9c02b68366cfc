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

#include "ovk/harness/channel.h"

#include <fstream>
#include <thread>

#include "ovk/error.h"

namespace ovk::harness {

DirectoryChannel::DirectoryChannel(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path DirectoryChannel::file_for(std::uint32_t round, std::uint32_t from,
                                                 std::uint32_t to) const {
  return dir_ / ("round-" + std::to_string(round) + "-" + std::to_string(from) + "-" +
                 std::to_string(to) + ".json");
}

void DirectoryChannel::send(const seed::RoundMessage& message) const {
  auto path = file_for(message.round, message.from_id, message.to_id);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kTransportError, "cannot write " + tmp.string());
    out << seed::serialize(message);
  }
  std::filesystem::rename(tmp, path);
}

seed::RoundMessage DirectoryChannel::receive(std::uint32_t round, std::uint32_t from,
                                             std::uint32_t to, Duration timeout) const {
  auto path = file_for(round, from, to);
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (!std::filesystem::exists(path)) {
    if (std::chrono::steady_clock::now() >= deadline) {
      throw Error(ErrorCode::kTransportError, "timed out waiting for " + path.string());
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  return seed::parse_round_message(text);
}

seed::SeedRecord run_party(seed::Negotiation& party, const DirectoryChannel& channel,
                           Duration timeout) {
  const auto& cfg = party.config();
  channel.send(party.start());
  for (std::uint32_t round = 1; round < cfg.n_parties; ++round) {
    auto incoming = channel.receive(round, cfg.receive_from(), cfg.self_id, timeout);
    auto result = party.step(incoming);
    if (auto* record = std::get_if<seed::SeedRecord>(&result)) return *record;
    channel.send(std::get<seed::RoundMessage>(result));
  }
  throw Error(ErrorCode::kProtocolOrder, "negotiation ended without a seed");
}

}  // namespace ovk::harness

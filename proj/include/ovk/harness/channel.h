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

#ifndef OVK_HARNESS_CHANNEL_H_
#define OVK_HARNESS_CHANNEL_H_

#include <filesystem>

#include "ovk/clock.h"
#include "ovk/seed_exchange.h"

namespace ovk::harness {

// Seed-round messages exchanged through a shared directory, one file per
// message, so separate processes can negotiate. Files appear atomically.
class DirectoryChannel {
 public:
  explicit DirectoryChannel(std::filesystem::path dir);

  void send(const seed::RoundMessage& message) const;
  // Polls until the message for (round, from, to) arrives. Throws
  // TransportError on timeout.
  seed::RoundMessage receive(std::uint32_t round, std::uint32_t from, std::uint32_t to,
                             Duration timeout) const;

 private:
  std::filesystem::path file_for(std::uint32_t round, std::uint32_t from,
                                 std::uint32_t to) const;

  std::filesystem::path dir_;
};

// Drives one party of a negotiation to completion over the channel.
seed::SeedRecord run_party(seed::Negotiation& party, const DirectoryChannel& channel,
                           Duration timeout);

}  // namespace ovk::harness

#endif  // OVK_HARNESS_CHANNEL_H_

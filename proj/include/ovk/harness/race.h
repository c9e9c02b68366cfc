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

#ifndef OVK_HARNESS_RACE_H_
#define OVK_HARNESS_RACE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ovk/harness/world.h"

// Update race between a user and an attacker holding stolen devices. N
// devices share the old seed and each holds a credential for one account.
// The attacker controls n_a of them; n_u of the user's devices adopt a new
// seed and send updates. The attacker re-shares among the stolen devices and
// sends competing updates from each of them.
namespace ovk::harness {

enum class Winner { kNone, kUser, kAttacker };

std::string_view winner_name(Winner w);

struct RaceConfig {
  std::uint32_t n = 2;
  std::uint32_t n_user = 1;
  std::uint32_t n_attacker = 1;
  bool attacker_first = false;
  // When set, the two sides' updates interleave in an order drawn from this
  // seed instead of one side going entirely first.
  std::optional<std::uint64_t> ordering_seed;
  // Explicit order, one 'u' or 'a' per update; takes precedence over
  // ordering_seed. Must hold n_user 'u's and n_attacker 'a's.
  std::optional<std::string> order;
  // Sees the race's world once the outcome is known.
  std::function<void(World&)> observer;
};

struct RaceResult {
  Winner winner = Winner::kNone;
  // The migration closed on a majority before the deadline.
  bool decided_early = false;
  // 'u' or 'a' per update attempt, in sending order.
  std::string sequence;
  // Outcome of each update attempt, in sending order.
  std::vector<std::string> outcomes;
};

// Throws InvalidInput unless 2 <= n and n_user + n_attacker <= n.
RaceResult run_race(const RaceConfig& config);

}  // namespace ovk::harness

#endif  // OVK_HARNESS_RACE_H_

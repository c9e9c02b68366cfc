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

#include "ovk/harness/race.h"

#include <algorithm>
#include <random>

#include "ovk/error.h"
#include "ovk/harness/world.h"

namespace ovk::harness {

namespace {

constexpr char kService[] = "https://race.example";
constexpr char kUser[] = "victim";

std::string device_name(std::uint32_t i) { return "d" + std::to_string(i); }

}  // namespace

std::string_view winner_name(Winner w) {
  switch (w) {
    case Winner::kNone:
      return "none";
    case Winner::kUser:
      return "user";
    case Winner::kAttacker:
      return "attacker";
  }
  return "none";
}

RaceResult run_race(const RaceConfig& config) {
  const std::uint32_t n = config.n;
  if (n < 2 || config.n_user + config.n_attacker > n) {
    throw Error(ErrorCode::kInvalidInput, "need n >= 2 and n_user + n_attacker <= n");
  }
  World world;
  ServiceSpec svc;
  svc.id = kService;
  world.add_service(svc);

  std::vector<std::string> all;
  for (std::uint32_t i = 0; i < n; ++i) {
    all.push_back(device_name(i));
    DeviceSpec spec;
    spec.name = all.back();
    world.add_device(spec);
  }
  world.share_seed(all);
  auto client = world.client(kService);
  world.device(all[0]).register_account(client, kUser);
  for (std::uint32_t i = 1; i < n; ++i) world.device(all[i]).login_or_enroll(client, kUser);

  // User voters are the first n_user devices, stolen ones the last n_attacker.
  std::vector<std::string> user_voters(all.begin(), all.begin() + config.n_user);
  std::vector<std::string> stolen(all.end() - config.n_attacker, all.end());

  // Each side re-shares with one fresh device so the group has N >= 2.
  auto reshare = [&](std::vector<std::string> group, const std::string& fresh,
                     const std::string& password) {
    if (group.empty()) return;
    DeviceSpec spec;
    spec.name = fresh;
    world.add_device(spec);
    group.push_back(fresh);
    NegotiationOptions options;
    options.password = password;
    world.share_seed(group, options);
  };
  reshare(user_voters, "user-fresh", "user reshare password");
  reshare(stolen, "attacker-fresh", "attacker reshare password");

  RaceResult result;
  std::vector<std::string> order;
  if (config.order || config.ordering_seed) {
    std::string sides = std::string(config.n_user, 'u') + std::string(config.n_attacker, 'a');
    if (config.order) {
      std::string given = *config.order;
      std::sort(given.begin(), given.end());
      std::string want = sides;
      std::sort(want.begin(), want.end());
      if (given != want) {
        throw Error(ErrorCode::kInvalidInput,
                    "order must hold n_user 'u' and n_attacker 'a' entries");
      }
      sides = *config.order;
    } else {
      std::mt19937_64 rng(*config.ordering_seed);
      std::shuffle(sides.begin(), sides.end(), rng);
    }
    std::size_t u = 0, a = 0;
    for (char side : sides) {
      order.push_back(side == 'u' ? user_voters[u++] : stolen[a++]);
    }
    result.sequence = sides;
  } else {
    const auto& first = config.attacker_first ? stolen : user_voters;
    const auto& second = config.attacker_first ? user_voters : stolen;
    order.insert(order.end(), first.begin(), first.end());
    order.insert(order.end(), second.begin(), second.end());
    result.sequence = config.attacker_first
                          ? std::string(config.n_attacker, 'a') + std::string(config.n_user, 'u')
                          : std::string(config.n_user, 'u') + std::string(config.n_attacker, 'a');
  }
  for (const auto& name : order) {
    try {
      auto r = world.device(name).login_or_enroll(client, kUser);
      std::string outcome(authenticator::outcome_name(r.outcome));
      if (r.update_sent) {
        bool committed = r.update && r.update->committed;
        outcome += committed ? "+update:committed" : "+update:pending";
        if (committed) result.decided_early = true;
      }
      result.outcomes.push_back(outcome);
    } catch (const Error& e) {
      result.outcomes.emplace_back(e.name());
    }
  }

  world.advance(std::chrono::hours(24) + std::chrono::seconds(1));
  auto acct = world.service(kService).account(kUser);
  if (config.observer) config.observer(world);
  if (acct->generation == 0) return result;
  // The winner is whichever side's fresh device can derive the new OVK.
  if (world.has_device("user-fresh") &&
      world.device("user-fresh").can_derive(kService, acct->metadata)) {
    result.winner = Winner::kUser;
  } else if (world.has_device("attacker-fresh") &&
             world.device("attacker-fresh").can_derive(kService, acct->metadata)) {
    result.winner = Winner::kAttacker;
  }
  return result;
}

}  // namespace ovk::harness

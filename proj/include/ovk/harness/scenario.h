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

#ifndef OVK_HARNESS_SCENARIO_H_
#define OVK_HARNESS_SCENARIO_H_

#include <filesystem>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ovk/harness/world.h"

namespace ovk::harness {

// A scenario file declares devices and services, then a script of steps:
//
//   share_seed / reshare  {devices, password?, epoch?, consent?}
//   register              {device, service, user}
//   login                 {device, service, user}
//   update                {device, service, user}   login that must migrate
//   lose_device           {device}
//   lock / unlock         {device, verified?}
//   advance_clock         {secs}
//   expect                {service, user, exists?, state?, active_credentials?,
//                          revoked_credentials?, generation?}
//
// Any step may carry a "label" that is copied into its report line.
// Each step yields an outcome string: "ok", "session", "enrolled",
// "reenroll-required", "session+update:committed", "session+update:pending",
// "already-current", or the name of the error the step raised. A step with
// "expect" passes when the outcome matches it; without one it passes unless
// it raised.
struct StepReport {
  std::size_t index = 0;
  std::string label;  // free text from the step's "label"
  std::string action;
  std::string outcome;
  std::optional<std::string> expected;
  bool ok = false;
  std::string detail;
};

struct Report {
  std::string name;
  std::vector<StepReport> steps;

  bool passed() const;
  // One JSON object per line, one line per step.
  std::string to_jsonl() const;
};

// Throws ScenarioParse when the document does not describe a scenario.
// observer, when set, sees the scenario's world after the last step.
using WorldObserver = std::function<void(World&)>;

Report run_scenario(const nlohmann::json& scenario, const WorldObserver& observer = {});
Report run_scenario_file(const std::filesystem::path& path,
                         const WorldObserver& observer = {});

}  // namespace ovk::harness

#endif  // OVK_HARNESS_SCENARIO_H_

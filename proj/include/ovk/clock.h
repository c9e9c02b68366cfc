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

#ifndef OVK_CLOCK_H_
#define OVK_CLOCK_H_

#include <atomic>
#include <chrono>
#include <cstdint>

namespace ovk {

using Instant = std::chrono::time_point<std::chrono::system_clock,
                                        std::chrono::milliseconds>;
using Duration = std::chrono::milliseconds;

inline std::int64_t to_millis(Instant t) { return t.time_since_epoch().count(); }
inline Instant from_millis(std::int64_t ms) { return Instant(Duration(ms)); }

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Instant now() const override {
    return std::chrono::time_point_cast<Duration>(
        std::chrono::system_clock::now());
  }
};

// Test and scenario clock. Time only moves when advance() is called.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Instant start = from_millis(1'700'000'000'000))
      : millis_(to_millis(start)) {}

  Instant now() const override { return from_millis(millis_.load()); }
  void advance(Duration by) { millis_ += by.count(); }
  void set(Instant t) { millis_ = to_millis(t); }

 private:
  std::atomic<std::int64_t> millis_;
};

}  // namespace ovk

#endif  // OVK_CLOCK_H_

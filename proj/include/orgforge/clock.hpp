// Copyright 2026 The orgforge Authors.
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

#pragma once

#include <cstdint>

namespace orgforge {

inline constexpr int kMinutesPerDay = 24 * 60;
inline constexpr int kBusinessStart = 8 * 60;  // 08:00
inline constexpr int kBusinessEnd = 18 * 60;   // 18:00, exclusive

/// Position on the simulation time axis. Day 1 is a Monday.
struct SimClock {
  int day = 1;
  int minute = 0;  // minutes from midnight, [0, 1440)

  constexpr std::int64_t absolute_minute() const noexcept {
    return static_cast<std::int64_t>(day) * kMinutesPerDay + minute;
  }
  friend constexpr auto operator<=>(const SimClock&, const SimClock&) = default;
};

constexpr bool is_weekday(int day) noexcept { return (day - 1) % 7 < 5; }

constexpr bool is_business_hours(int minute) noexcept {
  return minute >= kBusinessStart && minute < kBusinessEnd;
}

/// Folds a minute that may run past midnight back onto the same sim day.
constexpr int wrap_minute(int minute) noexcept {
  return ((minute % kMinutesPerDay) + kMinutesPerDay) % kMinutesPerDay;
}

}  // namespace orgforge

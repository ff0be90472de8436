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

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string_view>
#include <tuple>
#include <utility>

namespace orgforge {

/// 64-bit FNV-1a. Used to turn stream tags into integers.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream (xoshiro256**) with portable bounded draws.
///
/// Every distribution here is implemented by hand on purpose: the standard
/// library distributions are not specified bit-for-bit, so corpora would
/// differ between standard libraries. Sub-streams are derived from a parent
/// seed plus tags, so a new consumer never shifts an unrelated stream.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) noexcept : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s = splitmix64(s);
      word = s;
    }
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    ++position_;
    return result;
  }

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SeededRng::below: bound must be positive");
    auto [hi, lo] = mul128(next_u64(), bound);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) std::tie(hi, lo) = mul128(next_u64(), bound);
    }
    return hi;
  }

  /// Uniform integer in the closed range [lo, hi].
  int uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("SeededRng::uniform_int: empty range");
    const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
    return static_cast<int>(lo + static_cast<std::int64_t>(below(span)));
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  /// Uniform element of any sized random-access container.
  template <typename C>
  const auto& pick(const C& items) {
    if (std::size(items) == 0) throw std::invalid_argument("SeededRng::pick: empty range");
    return items[below(std::size(items))];
  }

  std::size_t pick_index(std::size_t size) { return static_cast<std::size_t>(below(size)); }

  /// Child stream keyed by a tag. Independent of how much of *this was consumed.
  SeededRng derive(std::string_view tag) const noexcept {
    return SeededRng(splitmix64(seed_ ^ splitmix64(fnv1a64(tag))));
  }
  SeededRng derive(std::string_view tag, std::uint64_t a) const noexcept {
    return SeededRng(splitmix64(derive(tag).seed() ^ splitmix64(a + 0x632be59bd9b4e019ULL)));
  }
  SeededRng derive(std::string_view tag, std::uint64_t a, std::uint64_t b) const noexcept {
    return SeededRng(splitmix64(derive(tag, a).seed() ^ splitmix64(b + 0x8cb92ba72f3d8dd7ULL)));
  }
  SeededRng derive(std::string_view tag, std::uint64_t a, std::uint64_t b,
                   std::string_view sub) const noexcept {
    return derive(tag, a, b).derive(sub);
  }

 private:
  /// Full 64x64 -> 128 product as (high, low) words.
  static constexpr std::pair<std::uint64_t, std::uint64_t> mul128(std::uint64_t a,
                                                                  std::uint64_t b) noexcept {
    const std::uint64_t a_lo = a & 0xffffffffULL, a_hi = a >> 32;
    const std::uint64_t b_lo = b & 0xffffffffULL, b_hi = b >> 32;
    const std::uint64_t p0 = a_lo * b_lo, p1 = a_lo * b_hi, p2 = a_hi * b_lo, p3 = a_hi * b_hi;
    const std::uint64_t mid = (p0 >> 32) + (p1 & 0xffffffffULL) + (p2 & 0xffffffffULL);
    return {p3 + (p1 >> 32) + (p2 >> 32) + (mid >> 32), (mid << 32) | (p0 & 0xffffffffULL)};
  }

  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t state_[4]{};
  std::uint64_t position_ = 0;
};

}  // namespace orgforge

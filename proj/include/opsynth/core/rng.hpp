// Copyright 2026 The opsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reproducible random streams.
//
// A stream is identified by (master_seed, stream_index). Its 256-bit state is
// SHA-256 over the 16 bytes little-endian(master_seed) || little-endian(index),
// read as four little-endian 64-bit words that seed a xoshiro256** generator.
// All draws below are built from raw 64-bit outputs only, so sequences are
// identical on every platform and standard library (std:: distributions are
// implementation-defined and deliberately not used).

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opsynth/core/hash.hpp"

namespace opsynth {

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed), stream_index_(stream_index) {
    std::uint8_t key[16];
    for (int i = 0; i < 8; ++i) {
      key[i] = static_cast<std::uint8_t>(master_seed >> (8 * i));
      key[8 + i] = static_cast<std::uint8_t>(stream_index >> (8 * i));
    }
    const Sha256Digest digest = sha256(std::span<const std::uint8_t>(key, 16));
    for (int word = 0; word < 4; ++word) {
      std::uint64_t value = 0;
      for (int i = 0; i < 8; ++i) {
        value |= static_cast<std::uint64_t>(digest[word * 8 + i]) << (8 * i);
      }
      state_[word] = value;
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Little-endian bytes of successive 64-bit outputs.
  std::vector<std::uint8_t> bytes(std::size_t count) {
    std::vector<std::uint8_t> out;
    out.reserve(count);
    while (out.size() < count) {
      std::uint64_t word = next_u64();
      for (int i = 0; i < 8 && out.size() < count; ++i) {
        out.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
      }
    }
    return out;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in the closed range [lo, hi]; unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) {
      return static_cast<std::int64_t>(next_u64());
    }
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % range);
  }

  std::size_t uniform_index(std::size_t count) {
    if (count == 0) throw std::invalid_argument("uniform_index: empty range");
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(count) - 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Index drawn proportionally to nonnegative weights (at least one positive).
  std::size_t weighted_index(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("weighted_index: no positive weight");
    double target = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (target < weights[i]) return i;
      target -= weights[i];
    }
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return i;
    }
    return 0;
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t state_[4];
};

inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  return RngStream(master_seed, index);
}

}  // namespace opsynth

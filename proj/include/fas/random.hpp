// Copyright 2026 The FAS Authors
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

#pragma once

#include <cstdint>
#include <random>

#include "fas/common.hpp"

namespace fas {

// Seeded deterministic random source. All derived draws (big integers,
// bytes, Bernoulli trials) are built from raw 64-bit engine output so the
// stream is identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound) by rejection sampling over bit_length(bound) bits.
  BigInt uniform_below(const BigInt& bound);

  // Uniform in [low, high).
  BigInt uniform_range(const BigInt& low, const BigInt& high);

  // Uniform integer with exactly `bits` bits (top bit set).
  BigInt uniform_bits_exact(std::size_t bits);

  Bytes bytes(std::size_t count);

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01();

  double uniform_real(double low, double high) { return low + (high - low) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fas

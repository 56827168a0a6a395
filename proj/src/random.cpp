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

#include "fas/random.hpp"

namespace fas {

namespace {

BigInt random_bits(std::mt19937_64& engine, std::size_t bits) {
  BigInt out = 0;
  std::size_t remaining = bits;
  while (remaining > 0) {
    const std::size_t take = remaining < 64 ? remaining : 64;
    std::uint64_t word = engine();
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    out <<= static_cast<mp_bitcnt_t>(take);
    BigInt chunk;
    mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
    out += chunk;
    remaining -= take;
  }
  return out;
}

}  // namespace

BigInt Rng::uniform_below(const BigInt& bound) {
  if (bound <= 0) throw ParameterError("uniform_below: bound must be positive");
  const std::size_t bits = bit_length(bound);
  for (;;) {
    BigInt candidate = random_bits(engine_, bits);
    if (candidate < bound) return candidate;
  }
}

BigInt Rng::uniform_range(const BigInt& low, const BigInt& high) {
  if (high <= low) throw ParameterError("uniform_range: empty range");
  BigInt span = high - low;
  return low + uniform_below(span);
}

BigInt Rng::uniform_bits_exact(std::size_t bits) {
  if (bits == 0) throw ParameterError("uniform_bits_exact: zero width");
  BigInt out = random_bits(engine_, bits);
  mpz_setbit(out.get_mpz_t(), bits - 1);
  return out;
}

Bytes Rng::bytes(std::size_t count) {
  Bytes out(count);
  std::size_t i = 0;
  while (i < count) {
    std::uint64_t word = engine_();
    for (int b = 0; b < 8 && i < count; ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (56 - 8 * b));
    }
  }
  return out;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace fas

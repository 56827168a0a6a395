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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fas/common.hpp"

namespace fas {

using ShareIndex = std::uint32_t;

// Element of Z_q, always held in canonical form [0, q).
struct Scalar {
  BigInt value;

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value == b.value; }
};

// Element of the order-q subgroup of Z_p^*.
struct GroupElement {
  BigInt value;

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.value == b.value; }
};

// base^exponent mod modulus by square-and-multiply.
BigInt mod_exp(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

// Inverse of a modulo m; throws NonInvertibleError if gcd(a, m) != 1.
BigInt mod_inv(const BigInt& a, const BigInt& m);

bool is_probable_prime(const BigInt& n);

class PrimeField {
 public:
  explicit PrimeField(BigInt q);

  const BigInt& modulus() const noexcept { return q_; }
  std::size_t bits() const { return bit_length(q_); }

  // Checked construction: throws ParameterError unless 0 <= value < q.
  Scalar scalar(const BigInt& value) const;
  // Reduces any integer (including negative) into [0, q).
  Scalar reduce(const BigInt& value) const;

  Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a.value + b.value); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a.value - b.value); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a.value * b.value); }
  Scalar inv(const Scalar& a) const { return Scalar{mod_inv(a.value, q_)}; }

  bool contains(const BigInt& value) const { return value >= 0 && value < q_; }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.q_ == b.q_; }

 private:
  BigInt q_;
};

// Schnorr group: g generates the subgroup of prime order q in Z_p^*.
class GroupParams {
 public:
  // Validates primality, q | p-1, g != 1 and g^q = 1 (mod p).
  GroupParams(BigInt p, BigInt q, BigInt g);

  const BigInt& p() const noexcept { return p_; }
  const BigInt& q() const noexcept { return q_; }
  const BigInt& g() const noexcept { return g_; }

  PrimeField field() const { return PrimeField(q_); }

  // Width in bytes of the fixed big-endian element encoding.
  std::size_t element_bytes() const { return (bit_length(p_) + 7) / 8; }

  GroupElement generator() const { return GroupElement{g_}; }
  GroupElement identity() const { return GroupElement{1}; }
  GroupElement exp_g(const Scalar& exponent) const;
  GroupElement exp(const GroupElement& base, const BigInt& exponent) const;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const;

  bool contains(const BigInt& value) const;
  // Throws ParameterError if value is not a subgroup element.
  GroupElement element(const BigInt& value) const;

  friend bool operator==(const GroupParams& a, const GroupParams& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.g_ == b.g_;
  }

 private:
  BigInt p_;
  BigInt q_;
  BigInt g_;
};

// lambda_j = prod_{i != j} i / (i - j) mod q, the weight of f(j) in f(0).
Scalar lagrange_coefficient(std::span<const ShareIndex> index_set, ShareIndex j, const PrimeField& field);

namespace groups {

// p = 23, q = 11, g = 2. Known-answer tests only.
const GroupParams& test();
// 128-bit p, 32-bit q. Simulation default: keeps templates short.
const GroupParams& sim();
// 512-bit p, 64-bit q.
const GroupParams& medium();
// 2048-bit p, 256-bit q.
const GroupParams& production();

// Looks up "test", "sim", "medium" or "default"; throws ParameterError otherwise.
const GroupParams& by_name(std::string_view name);
std::vector<std::string> names();

}  // namespace groups

void to_json(nlohmann::json& j, const GroupParams& group);
GroupParams group_from_json(const nlohmann::json& j);

}  // namespace fas

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

#include <span>
#include <vector>

#include <json.hpp>

#include "fas/algebra.hpp"
#include "fas/random.hpp"

namespace fas {

// (t, n) sharing: any t+1 of n shares reconstruct, t or fewer reveal nothing.
struct ThresholdParams {
  std::uint32_t t = 0;
  std::uint32_t n = 1;

  std::uint32_t quorum() const { return t + 1; }
  // Throws ParameterError unless 1 <= t+1 <= n and n < q.
  void validate(const PrimeField& field) const;

  friend bool operator==(const ThresholdParams&, const ThresholdParams&) = default;
};

struct Share {
  ShareIndex index = 0;
  Scalar value;

  friend bool operator==(const Share& a, const Share& b) { return a.index == b.index && a.value == b.value; }
};

// C_k = g^{a_k} for the coefficients a_0..a_t of the sharing polynomial.
struct FeldmanCommitments {
  std::vector<GroupElement> commitments;

  std::size_t size() const { return commitments.size(); }
  friend bool operator==(const FeldmanCommitments& a, const FeldmanCommitments& b) {
    return a.commitments == b.commitments;
  }
};

struct Sharing {
  std::vector<Share> shares;
  FeldmanCommitments commitments;
};

// f(x) = coefficients[0] + coefficients[1] x + ... evaluated at x in Z_q.
Scalar evaluate_polynomial(std::span<const Scalar> coefficients, const BigInt& x, const PrimeField& field);

// Shares (i, f(i)) for i = 1..n; coefficients.size() must equal t+1.
std::vector<Share> shamir_split(std::span<const Scalar> coefficients, const ThresholdParams& params,
                                const PrimeField& field);

FeldmanCommitments feldman_commit(std::span<const Scalar> coefficients, const GroupParams& group);

// Deterministic sharing from explicit coefficients (coefficients[0] is the secret).
Sharing share_polynomial(std::span<const Scalar> coefficients, const ThresholdParams& params,
                         const GroupParams& group);

// Draws a_1..a_t uniformly from [0, q) and shares `secret`.
Sharing share_secret(const Scalar& secret, const ThresholdParams& params, const GroupParams& group, Rng& rng);

// g^value == prod_k C_k^{index^k} (mod p).
bool verify_share(const Share& share, const FeldmanCommitments& commitments, const GroupParams& group);

// Interpolates f(0) from shares with distinct indices.
Scalar reconstruct(std::span<const Share> shares, const PrimeField& field);

void to_json(nlohmann::json& j, const Share& share);
Share share_from_json(const nlohmann::json& j, const PrimeField& field);
void to_json(nlohmann::json& j, const FeldmanCommitments& commitments);
FeldmanCommitments commitments_from_json(const nlohmann::json& j, const GroupParams& group);

}  // namespace fas

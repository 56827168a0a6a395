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

#include "fas/sharing.hpp"

#include <string>

namespace fas {

void ThresholdParams::validate(const PrimeField& field) const {
  if (n == 0) throw ParameterError("threshold: n must be at least 1");
  if (t + 1 > n) {
    throw ParameterError("threshold: t+1 = " + std::to_string(t + 1) + " exceeds n = " + std::to_string(n));
  }
  if (BigInt(n) >= field.modulus()) throw ParameterError("threshold: n must be smaller than q");
}

Scalar evaluate_polynomial(std::span<const Scalar> coefficients, const BigInt& x, const PrimeField& field) {
  // Horner, highest degree first.
  BigInt acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = field.reduce(acc * x + it->value).value;
  }
  return Scalar{acc};
}

std::vector<Share> shamir_split(std::span<const Scalar> coefficients, const ThresholdParams& params,
                                const PrimeField& field) {
  params.validate(field);
  if (coefficients.size() != params.quorum()) throw ParameterError("sharing: need exactly t+1 coefficients");
  for (const Scalar& c : coefficients) {
    if (!field.contains(c.value)) throw ParameterError("sharing: coefficient out of range [0, q)");
  }
  std::vector<Share> shares;
  shares.reserve(params.n);
  for (ShareIndex i = 1; i <= params.n; ++i) {
    shares.push_back(Share{i, evaluate_polynomial(coefficients, BigInt(i), field)});
  }
  return shares;
}

FeldmanCommitments feldman_commit(std::span<const Scalar> coefficients, const GroupParams& group) {
  FeldmanCommitments out;
  out.commitments.reserve(coefficients.size());
  for (const Scalar& c : coefficients) out.commitments.push_back(group.exp_g(c));
  return out;
}

Sharing share_polynomial(std::span<const Scalar> coefficients, const ThresholdParams& params,
                         const GroupParams& group) {
  Sharing out;
  out.shares = shamir_split(coefficients, params, group.field());
  out.commitments = feldman_commit(coefficients, group);
  return out;
}

Sharing share_secret(const Scalar& secret, const ThresholdParams& params, const GroupParams& group, Rng& rng) {
  const PrimeField field = group.field();
  if (!field.contains(secret.value)) throw ParameterError("sharing: secret must be < q");
  params.validate(field);
  std::vector<Scalar> coefficients{secret};
  for (std::uint32_t k = 1; k <= params.t; ++k) coefficients.push_back(Scalar{rng.uniform_below(field.modulus())});
  Sharing out = share_polynomial(coefficients, params, group);
  for (Scalar& c : coefficients) c.value = 0;
  return out;
}

bool verify_share(const Share& share, const FeldmanCommitments& commitments, const GroupParams& group) {
  if (share.index == 0 || commitments.commitments.empty()) return false;
  if (!group.field().contains(share.value.value)) return false;
  const GroupElement lhs = group.exp_g(share.value);
  GroupElement rhs = group.identity();
  BigInt power = 1;  // index^k, reduced mod q since C_k has order q
  for (const GroupElement& c : commitments.commitments) {
    rhs = group.mul(rhs, group.exp(c, power));
    power = BigInt((power * share.index) % group.q());
  }
  return lhs == rhs;
}

Scalar reconstruct(std::span<const Share> shares, const PrimeField& field) {
  if (shares.empty()) throw ParameterError("reconstruct: no shares");
  std::vector<ShareIndex> indices;
  indices.reserve(shares.size());
  for (const Share& s : shares) indices.push_back(s.index);
  Scalar acc{0};
  for (const Share& s : shares) {
    acc = field.add(acc, field.mul(lagrange_coefficient(indices, s.index, field), s.value));
  }
  return acc;
}

void to_json(nlohmann::json& j, const Share& share) {
  j = nlohmann::json{{"index", share.index}, {"value", to_hex(share.value.value)}};
}

Share share_from_json(const nlohmann::json& j, const PrimeField& field) {
  Share s;
  s.index = j.at("index").get<ShareIndex>();
  if (s.index == 0) throw ParameterError("share: index must be non-zero");
  s.value = field.scalar(bigint_from_hex(j.at("value").get<std::string>()));
  return s;
}

void to_json(nlohmann::json& j, const FeldmanCommitments& commitments) {
  j = nlohmann::json::array();
  for (const GroupElement& c : commitments.commitments) j.push_back(to_hex(c.value));
}

FeldmanCommitments commitments_from_json(const nlohmann::json& j, const GroupParams& group) {
  FeldmanCommitments out;
  for (const auto& item : j) out.commitments.push_back(group.element(bigint_from_hex(item.get<std::string>())));
  return out;
}

}  // namespace fas

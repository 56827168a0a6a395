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

#include "fas/threshold_signature.hpp"

#include <algorithm>

namespace fas {

Scalar compute_challenge_scalar(const GroupElement& R, const GroupElement& y, std::span<const std::uint8_t> message,
                                const GroupParams& group) {
  const std::size_t width = group.element_bytes();
  Sha256Stream h;
  h.update(to_bytes_be(R.value, width));
  h.update(to_bytes_be(y.value, width));
  h.update(message);
  const Digest digest = h.finish();
  return group.field().reduce(bigint_from_bytes_be(digest));
}

const ChallengeFn& default_challenge() {
  static const ChallengeFn fn = compute_challenge_scalar;
  return fn;
}

namespace {

DealerOutput finish_dealing(const Sharing& sharing, const Scalar& secret, const ThresholdParams& params,
                            const GroupParams& group) {
  DealerOutput out{GroupPublicKey{group.exp_g(secret), group, params}, {}, sharing.commitments};
  out.shares.reserve(sharing.shares.size());
  for (const Share& s : sharing.shares) out.shares.push_back(KeyShare{s.index, s.value});
  return out;
}

}  // namespace

DealerOutput keygen_dealer(const ThresholdParams& params, const GroupParams& group, Rng& rng) {
  Scalar secret{rng.uniform_below(group.q())};
  Sharing sharing = share_secret(secret, params, group, rng);
  DealerOutput out = finish_dealing(sharing, secret, params, group);
  secret.value = 0;
  return out;
}

DealerOutput keygen_from_polynomial(std::span<const Scalar> coefficients, const ThresholdParams& params,
                                    const GroupParams& group) {
  if (coefficients.empty()) throw ParameterError("keygen: empty polynomial");
  const Sharing sharing = share_polynomial(coefficients, params, group);
  return finish_dealing(sharing, coefficients.front(), params, group);
}

std::pair<SecretNonce, NonceCommitment> sign_round1(const KeyShare& key_share, const std::string& session_id,
                                                    const GroupParams& group, Rng& rng) {
  // Drawing from [1, q) directly means a zero nonce can never occur.
  SecretNonce k(Scalar{rng.uniform_range(1, group.q())});
  NonceCommitment commitment{key_share.index, group.exp_g(k.value()), session_id};
  return {std::move(k), std::move(commitment)};
}

PartialSignature sign_round2(const KeyShare& key_share, const SecretNonce& nonce, const Scalar& c,
                             std::span<const ShareIndex> signer_set, const PrimeField& field,
                             const std::string& session_id) {
  if (std::find(signer_set.begin(), signer_set.end(), key_share.index) == signer_set.end()) {
    throw ParameterError("sign_round2: signer " + std::to_string(key_share.index) + " not in signer set");
  }
  const Scalar lambda = lagrange_coefficient(signer_set, key_share.index, field);
  const Scalar s = field.add(nonce.value(), field.mul(c, field.mul(lambda, key_share.value)));
  return PartialSignature{key_share.index, s, session_id};
}

GroupElement aggregate_nonce(std::span<const NonceCommitment> commitments, const GroupParams& group) {
  GroupElement R = group.identity();
  for (const NonceCommitment& c : commitments) R = group.mul(R, c.R);
  return R;
}

Signature combine(std::span<const NonceCommitment> commitments, std::span<const PartialSignature> partials,
                  const GroupPublicKey& public_key, std::span<const std::uint8_t> message,
                  const ChallengeFn& challenge) {
  const GroupParams& group = public_key.group;
  const PrimeField field = group.field();
  if (partials.size() < public_key.params.quorum()) {
    throw InsufficientSharesError("combine: " + std::to_string(partials.size()) + " partial signatures, need " +
                                  std::to_string(public_key.params.quorum()));
  }
  if (commitments.size() != partials.size()) throw ParameterError("combine: commitment/partial count mismatch");

  std::vector<ShareIndex> committed;
  std::vector<ShareIndex> responded;
  for (const NonceCommitment& c : commitments) committed.push_back(c.index);
  for (const PartialSignature& p : partials) responded.push_back(p.index);
  std::sort(committed.begin(), committed.end());
  std::sort(responded.begin(), responded.end());
  if (std::adjacent_find(committed.begin(), committed.end()) != committed.end()) {
    throw ParameterError("combine: duplicate signer index");
  }
  if (committed != responded) throw ParameterError("combine: commitment and partial index sets differ");

  const std::string& session = commitments.front().session_id;
  for (const NonceCommitment& c : commitments) {
    if (c.session_id != session) throw ParameterError("combine: mixed session identifiers");
  }
  for (const PartialSignature& p : partials) {
    if (p.session_id != session) throw ParameterError("combine: mixed session identifiers");
  }

  Signature sig{aggregate_nonce(commitments, group), Scalar{0}};
  for (const PartialSignature& p : partials) {
    if (!field.contains(p.s.value)) throw InvalidPartialError("combine: partial signature out of range");
    sig.s = field.add(sig.s, p.s);
  }
  if (!verify(public_key, message, sig, challenge)) {
    throw InvalidPartialError("combine: combined signature does not verify");
  }
  return sig;
}

bool verify(const GroupPublicKey& public_key, std::span<const std::uint8_t> message, const Signature& signature,
            const ChallengeFn& challenge) {
  const GroupParams& group = public_key.group;
  if (!group.field().contains(signature.s.value)) return false;
  if (!group.contains(signature.R.value)) return false;
  const Scalar c = challenge(signature.R, public_key.y, message, group);
  const GroupElement lhs = group.exp_g(signature.s);
  const GroupElement rhs = group.mul(signature.R, group.exp(public_key.y, c.value));
  return lhs == rhs;
}

ThresholdSigner::ThresholdSigner(KeyShare key_share, GroupParams group)
    : key_share_(std::move(key_share)), group_(std::move(group)) {
  if (!group_.field().contains(key_share_.value.value)) throw ParameterError("signer: key share out of range");
}

ThresholdSigner::~ThresholdSigner() { key_share_.value.value = 0; }

NonceCommitment ThresholdSigner::store(const std::string& session_id, SecretNonce nonce) {
  if (!used_sessions_.insert(session_id).second) {
    throw SessionError("signer " + std::to_string(key_share_.index) + ": session '" + session_id + "' reused");
  }
  NonceCommitment out{key_share_.index, group_.exp_g(nonce.value()), session_id};
  pending_.emplace(session_id, std::move(nonce));
  return out;
}

NonceCommitment ThresholdSigner::commit(const std::string& session_id, Rng& rng) {
  if (used_sessions_.count(session_id) != 0) {
    throw SessionError("signer " + std::to_string(key_share_.index) + ": session '" + session_id + "' reused");
  }
  auto [nonce, commitment] = sign_round1(key_share_, session_id, group_, rng);
  return store(session_id, std::move(nonce));
}

NonceCommitment ThresholdSigner::commit_with_nonce(const std::string& session_id, const Scalar& k) {
  if (k.value <= 0 || k.value >= group_.q()) throw ParameterError("signer: nonce must lie in [1, q)");
  return store(session_id, SecretNonce(k));
}

PartialSignature ThresholdSigner::respond(const std::string& session_id, const Scalar& c,
                                          std::span<const ShareIndex> signer_set) {
  auto it = pending_.find(session_id);
  if (it == pending_.end()) throw SessionError("signer: no pending nonce for session '" + session_id + "'");
  SecretNonce nonce = std::move(it->second);
  pending_.erase(it);
  return sign_round2(key_share_, nonce, c, signer_set, group_.field(), session_id);
}

void to_json(nlohmann::json& j, const Signature& signature) {
  j = nlohmann::json{{"R", to_hex(signature.R.value)}, {"s", to_hex(signature.s.value)}};
}

// Range checks are left to verify(): a malformed signature must simply fail.
Signature signature_from_json(const nlohmann::json& j) {
  return Signature{GroupElement{bigint_from_hex(j.at("R").get<std::string>())},
                   Scalar{bigint_from_hex(j.at("s").get<std::string>())}};
}

void to_json(nlohmann::json& j, const NonceCommitment& commitment) {
  j = nlohmann::json{{"index", commitment.index}, {"R", to_hex(commitment.R.value)}, {"session", commitment.session_id}};
}

NonceCommitment nonce_commitment_from_json(const nlohmann::json& j, const GroupParams& group) {
  return NonceCommitment{j.at("index").get<ShareIndex>(), group.element(bigint_from_hex(j.at("R").get<std::string>())),
                         j.at("session").get<std::string>()};
}

void to_json(nlohmann::json& j, const PartialSignature& partial) {
  j = nlohmann::json{{"index", partial.index}, {"s", to_hex(partial.s.value)}, {"session", partial.session_id}};
}

PartialSignature partial_from_json(const nlohmann::json& j) {
  return PartialSignature{j.at("index").get<ShareIndex>(), Scalar{bigint_from_hex(j.at("s").get<std::string>())},
                          j.at("session").get<std::string>()};
}

}  // namespace fas

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

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fas/algebra.hpp"
#include "fas/random.hpp"
#include "fas/sharing.hpp"

namespace fas {

// Two-round threshold Schnorr signatures over a Schnorr group.
//
// Round 1: each signer i draws k_i and publishes R_i = g^{k_i}.
// The gateway forms R = prod R_i and c = H(R, y, m).
// Round 2: each signer returns s_i = k_i + c * lambda_i * x_i.
// The combined (R, s = sum s_i) satisfies g^s = R * y^c, the ordinary
// Schnorr verification equation under y = g^x.

struct KeyShare {
  ShareIndex index = 0;
  Scalar value;

  Share as_share() const { return Share{index, value}; }
};

struct GroupPublicKey {
  GroupElement y;
  GroupParams group;
  ThresholdParams params;
};

struct NonceCommitment {
  ShareIndex index = 0;
  GroupElement R;
  std::string session_id;
};

struct PartialSignature {
  ShareIndex index = 0;
  Scalar s;
  std::string session_id;
};

struct Signature {
  GroupElement R;
  Scalar s;

  friend bool operator==(const Signature& a, const Signature& b) { return a.R == b.R && a.s == b.s; }
};

// Round-1 secret. Move-only; the value is zeroed when the nonce is consumed
// or destroyed.
class SecretNonce {
 public:
  explicit SecretNonce(Scalar k) : k_(std::move(k)) {}
  SecretNonce(SecretNonce&& other) noexcept : k_(std::move(other.k_)) { other.k_.value = 0; }
  SecretNonce& operator=(SecretNonce&& other) noexcept {
    k_ = std::move(other.k_);
    other.k_.value = 0;
    return *this;
  }
  SecretNonce(const SecretNonce&) = delete;
  SecretNonce& operator=(const SecretNonce&) = delete;
  ~SecretNonce() { k_.value = 0; }

  const Scalar& value() const { return k_; }

 private:
  Scalar k_;
};

using ChallengeFn =
    std::function<Scalar(const GroupElement& R, const GroupElement& y, std::span<const std::uint8_t> message,
                         const GroupParams& group)>;

// SHA-256(enc(R) || enc(y) || message) mod q, enc = fixed-width big-endian.
Scalar compute_challenge_scalar(const GroupElement& R, const GroupElement& y, std::span<const std::uint8_t> message,
                                const GroupParams& group);

// The production challenge function; pass a different ChallengeFn only in tests.
const ChallengeFn& default_challenge();

struct DealerOutput {
  GroupPublicKey public_key;
  std::vector<KeyShare> shares;
  FeldmanCommitments commitments;
};

// Trusted-dealer key generation. The secret and polynomial do not outlive the call.
DealerOutput keygen_dealer(const ThresholdParams& params, const GroupParams& group, Rng& rng);
// Deterministic variant for known-answer tests; coefficients[0] is the secret key.
DealerOutput keygen_from_polynomial(std::span<const Scalar> coefficients, const ThresholdParams& params,
                                    const GroupParams& group);

// Stateless round 1; k is drawn uniformly from [1, q).
std::pair<SecretNonce, NonceCommitment> sign_round1(const KeyShare& key_share, const std::string& session_id,
                                                    const GroupParams& group, Rng& rng);

PartialSignature sign_round2(const KeyShare& key_share, const SecretNonce& nonce, const Scalar& c,
                             std::span<const ShareIndex> signer_set, const PrimeField& field,
                             const std::string& session_id = {});

GroupElement aggregate_nonce(std::span<const NonceCommitment> commitments, const GroupParams& group);

// Sums partials and checks the result verifies. Throws InsufficientSharesError
// for <= t partials, ParameterError for inconsistent sessions or index sets and
// InvalidPartialError when the combined signature does not verify.
Signature combine(std::span<const NonceCommitment> commitments, std::span<const PartialSignature> partials,
                  const GroupPublicKey& public_key, std::span<const std::uint8_t> message,
                  const ChallengeFn& challenge = default_challenge());

bool verify(const GroupPublicKey& public_key, std::span<const std::uint8_t> message, const Signature& signature,
            const ChallengeFn& challenge = default_challenge());

// Device-side signer holding the per-session nonce store. Each session id may
// be committed exactly once; the nonce is erased when round 2 answers.
class ThresholdSigner {
 public:
  ThresholdSigner(KeyShare key_share, GroupParams group);
  ~ThresholdSigner();
  ThresholdSigner(ThresholdSigner&&) noexcept = default;
  ThresholdSigner& operator=(ThresholdSigner&&) noexcept = default;
  ThresholdSigner(const ThresholdSigner&) = delete;
  ThresholdSigner& operator=(const ThresholdSigner&) = delete;

  ShareIndex index() const { return key_share_.index; }

  NonceCommitment commit(const std::string& session_id, Rng& rng);
  // Injects a known nonce; k must be in [1, q).
  NonceCommitment commit_with_nonce(const std::string& session_id, const Scalar& k);

  PartialSignature respond(const std::string& session_id, const Scalar& c, std::span<const ShareIndex> signer_set);

  bool has_pending(const std::string& session_id) const { return pending_.count(session_id) != 0; }
  std::size_t pending_count() const { return pending_.size(); }
  void abandon(const std::string& session_id) { pending_.erase(session_id); }

 private:
  NonceCommitment store(const std::string& session_id, SecretNonce nonce);

  KeyShare key_share_;
  GroupParams group_;
  std::map<std::string, SecretNonce> pending_;
  std::set<std::string> used_sessions_;
};

void to_json(nlohmann::json& j, const Signature& signature);
Signature signature_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const NonceCommitment& commitment);
NonceCommitment nonce_commitment_from_json(const nlohmann::json& j, const GroupParams& group);
void to_json(nlohmann::json& j, const PartialSignature& partial);
PartialSignature partial_from_json(const nlohmann::json& j);

}  // namespace fas

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

#include <gtest/gtest.h>

#include <set>

#include "fas/random.hpp"

namespace fas {
namespace {

Scalar stub(const GroupElement&, const GroupElement&, std::span<const std::uint8_t>, const GroupParams&) {
  return Scalar{2};
}

const Bytes kMessage{'h', 'e', 'l', 'l', 'o'};

DealerOutput kat_key() {
  const std::vector<Scalar> coeffs{Scalar{7}, Scalar{4}};
  return keygen_from_polynomial(coeffs, ThresholdParams{1, 3}, groups::test());
}

struct Signed {
  std::vector<NonceCommitment> commitments;
  std::vector<PartialSignature> partials;
};

// Runs both rounds for the given shares with fresh nonces.
Signed sign_with(const DealerOutput& key, const std::vector<KeyShare>& shares, const std::string& session,
                 const Bytes& message, Rng& rng, const ChallengeFn& challenge = default_challenge()) {
  const GroupParams& g = key.public_key.group;
  std::vector<ShareIndex> set;
  for (const KeyShare& s : shares) set.push_back(s.index);
  std::vector<ThresholdSigner> signers;
  Signed out;
  for (const KeyShare& s : shares) {
    signers.emplace_back(s, g);
    out.commitments.push_back(signers.back().commit(session, rng));
  }
  const Scalar c = challenge(aggregate_nonce(out.commitments, g), key.public_key.y, message, g);
  for (ThresholdSigner& s : signers) out.partials.push_back(s.respond(session, c, set));
  return out;
}

TEST(ThresholdKeygen, KnownAnswer) {
  const DealerOutput d = kat_key();
  EXPECT_EQ(d.public_key.y.value, 13);
  ASSERT_EQ(d.shares.size(), 3u);
  EXPECT_EQ(d.shares[0].value.value, 0);
  EXPECT_EQ(d.shares[1].value.value, 4);
  EXPECT_EQ(d.shares[2].value.value, 8);
}

TEST(ThresholdSign, WorkedExample) {
  const DealerOutput d = kat_key();
  const GroupParams& g = groups::test();
  const ShareIndex set[] = {2, 3};
  const SecretNonce k2(Scalar{3});
  const SecretNonce k3(Scalar{5});
  const PartialSignature p2 = sign_round2(d.shares[1], k2, Scalar{2}, set, g.field(), "s");
  const PartialSignature p3 = sign_round2(d.shares[2], k3, Scalar{2}, set, g.field(), "s");
  EXPECT_EQ(p2.s.value, 5);
  EXPECT_EQ(p3.s.value, 6);
  const std::vector<NonceCommitment> commitments{{2, GroupElement{8}, "s"}, {3, GroupElement{9}, "s"}};
  const std::vector<PartialSignature> partials{p2, p3};
  const Signature sig = combine(commitments, partials, d.public_key, kMessage, stub);
  EXPECT_EQ(sig.R.value, 3);
  EXPECT_EQ(sig.s.value, 0);
  EXPECT_TRUE(verify(d.public_key, kMessage, sig, stub));
}

TEST(ThresholdSign, RoundOneCommitsToNonce) {
  const DealerOutput d = kat_key();
  const GroupParams& g = groups::test();
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    auto [nonce, commitment] = sign_round1(d.shares[1], "s", g, rng);
    EXPECT_GE(nonce.value().value, 1);
    EXPECT_LT(nonce.value().value, g.q());
    EXPECT_EQ(commitment.R, g.exp_g(nonce.value()));
    EXPECT_EQ(commitment.index, 2u);
  }
}

TEST(ThresholdSign, EveryQuorumVerifies) {
  const GroupParams& g = groups::sim();
  Rng rng(11);
  const DealerOutput d = keygen_dealer(ThresholdParams{2, 5}, g, rng);
  int subsets = 0;
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a + 1; b < 5; ++b) {
      for (std::size_t c = b + 1; c < 5; ++c) {
        const std::string session = "q" + std::to_string(subsets++);
        const Signed s = sign_with(d, {d.shares[a], d.shares[b], d.shares[c]}, session, kMessage, rng);
        const Signature sig = combine(s.commitments, s.partials, d.public_key, kMessage);
        EXPECT_TRUE(verify(d.public_key, kMessage, sig));
      }
    }
  }
  EXPECT_EQ(subsets, 10);
}

TEST(ThresholdSign, ProductionGroup) {
  Rng rng(2);
  const DealerOutput d = keygen_dealer(ThresholdParams{1, 3}, groups::production(), rng);
  const Signed s = sign_with(d, {d.shares[0], d.shares[2]}, "p", kMessage, rng);
  const Signature sig = combine(s.commitments, s.partials, d.public_key, kMessage);
  EXPECT_TRUE(verify(d.public_key, kMessage, sig));
  Bytes other = kMessage;
  other[0] ^= 1;
  EXPECT_FALSE(verify(d.public_key, other, sig));
}

TEST(ThresholdSign, TooFewPartialsCannotVerify) {
  const GroupParams& g = groups::sim();
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const DealerOutput d = keygen_dealer(ThresholdParams{2, 5}, g, rng);
    const Signed s = sign_with(d, {d.shares[0], d.shares[3]}, "t", kMessage, rng);
    EXPECT_THROW(combine(s.commitments, s.partials, d.public_key, kMessage), InsufficientSharesError);
    Scalar sum{0};
    for (const PartialSignature& p : s.partials) sum = g.field().add(sum, p.s);
    const Signature forged{aggregate_nonce(s.commitments, g), sum};
    EXPECT_FALSE(verify(d.public_key, kMessage, forged));
  }
}

TEST(ThresholdSign, CombineRejectsBadInput) {
  const GroupParams& g = groups::sim();
  Rng rng(5);
  const DealerOutput d = keygen_dealer(ThresholdParams{1, 3}, g, rng);
  Signed s = sign_with(d, {d.shares[0], d.shares[1]}, "x", kMessage, rng);

  Signed tampered = s;
  tampered.partials[0].s = g.field().add(tampered.partials[0].s, Scalar{1});
  EXPECT_THROW(combine(tampered.commitments, tampered.partials, d.public_key, kMessage), InvalidPartialError);

  Signed out_of_range = s;
  out_of_range.partials[0].s = Scalar{g.q()};
  EXPECT_THROW(combine(out_of_range.commitments, out_of_range.partials, d.public_key, kMessage), InvalidPartialError);

  Signed mixed = s;
  mixed.partials[1].session_id = "other";
  EXPECT_THROW(combine(mixed.commitments, mixed.partials, d.public_key, kMessage), ParameterError);

  Signed dup = s;
  dup.partials[1].index = dup.partials[0].index;
  EXPECT_THROW(combine(dup.commitments, dup.partials, d.public_key, kMessage), ParameterError);

  EXPECT_NO_THROW(combine(s.commitments, s.partials, d.public_key, kMessage));
}

TEST(ThresholdSigner, NonceIsSingleUse) {
  const GroupParams& g = groups::sim();
  Rng rng(8);
  const DealerOutput d = keygen_dealer(ThresholdParams{1, 3}, g, rng);
  ThresholdSigner signer(d.shares[0], g);
  const ShareIndex set[] = {1, 2};
  signer.commit("a", rng);
  EXPECT_THROW(signer.commit("a", rng), SessionError);
  EXPECT_TRUE(signer.has_pending("a"));
  signer.respond("a", Scalar{3}, set);
  EXPECT_FALSE(signer.has_pending("a"));
  EXPECT_THROW(signer.respond("a", Scalar{3}, set), SessionError);
  EXPECT_THROW(signer.commit("a", rng), SessionError);
  EXPECT_THROW(signer.commit_with_nonce("b", Scalar{0}), ParameterError);
  const ShareIndex without_me[] = {2, 3};
  signer.commit("c", rng);
  EXPECT_THROW(signer.respond("c", Scalar{3}, without_me), ParameterError);
}

TEST(Challenge, MessageBitChangesScalar) {
  const GroupParams& g = groups::production();
  Rng rng(23);
  const GroupElement R = g.exp_g(Scalar{rng.uniform_below(g.q())});
  const GroupElement y = g.exp_g(Scalar{rng.uniform_below(g.q())});
  for (int i = 0; i < 100; ++i) {
    Bytes m = rng.bytes(40);
    const Scalar c1 = compute_challenge_scalar(R, y, m, g);
    m[rng.next_u64() % m.size()] ^= static_cast<std::uint8_t>(1U << (rng.next_u64() % 8));
    EXPECT_NE(c1, compute_challenge_scalar(R, y, m, g));
  }
}

TEST(Challenge, FixedWidthEncoding) {
  // enc(R) is padded to the width of p, so R=1 and R=256 hash differently
  // from a naive concatenation that could collide.
  const GroupParams& g = groups::test();
  const Bytes m{};
  std::set<BigInt> seen;
  for (int r = 1; r < 23; ++r) {
    if (!g.contains(r)) continue;
    seen.insert(compute_challenge_scalar(GroupElement{r}, GroupElement{13}, m, g).value);
  }
  EXPECT_GT(seen.size(), 1u);
}

TEST(SignatureJson, RoundTrip) {
  const Signature s{GroupElement{3}, Scalar{0}};
  nlohmann::json j = s;
  EXPECT_EQ(signature_from_json(j), s);
}

}  // namespace
}  // namespace fas

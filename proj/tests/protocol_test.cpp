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

#include "fas/protocol.hpp"

#include <gtest/gtest.h>

#include "fas/random.hpp"

namespace fas {
namespace {

Scalar stub(const GroupElement&, const GroupElement&, std::span<const std::uint8_t>, const GroupParams&) {
  return Scalar{2};
}

std::vector<Scalar> kat_poly() { return {Scalar{7}, Scalar{4}}; }

std::size_t count_type(const Network& net, MessageType type) {
  std::size_t n = 0;
  for (const Message& m : net.transcript()) n += m.type() == type;
  return n;
}

void set_scores(Deployment& d, double score) {
  const Modality cycle[] = {Modality::gait, Modality::location, Modality::heartbeat};
  for (auto& dd : d.dds()) dd->set_sensed_reading(cycle[(dd->index() - 1) % 3], score);
}

BitString random_bits(std::size_t n, Rng& rng) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, rng.bernoulli(0.5));
  return b;
}

// CASE3 deployment whose devices currently sense exactly their enrolment template.
struct Case3 {
  std::unique_ptr<Deployment> deployment;
  std::map<ShareIndex, Template> templates;
};

Case3 make_case3(ThresholdParams params, Rng& rng, bool pd_holds_share = false) {
  const GroupParams& g = groups::sim();
  const CodeParams code = CodeParams::for_field(g.field(), 5);
  Case3 out;
  for (ShareIndex i = pd_holds_share ? 2 : 1; i <= params.n; ++i) out.templates[i] = Template{random_bits(code.length(), rng)};
  DeploymentConfig config;
  config.strategy = CaseStrategy::case3;
  config.params = params;
  config.pd_holds_share = pd_holds_share;
  out.deployment = std::make_unique<Deployment>(config, g, rng, out.templates);
  for (const auto& [i, tpl] : out.templates) out.deployment->dd(i)->set_sensed_template(tpl);
  set_scores(*out.deployment, 0.9);
  return out;
}

std::set<ShareIndex> all_indices(std::size_t n) {
  std::set<ShareIndex> s;
  for (ShareIndex i = 1; i <= n; ++i) s.insert(i);
  return s;
}

TEST(Enrol, Case2KnownAnswer) {
  EnrolmentRequest req;
  req.strategy = CaseStrategy::case2;
  req.params = ThresholdParams{1, 3};
  req.coefficients = kat_poly();
  for (ShareIndex i = 1; i <= 3; ++i) req.devices.push_back(EnrolmentDevice{"dd" + std::to_string(i), i, std::nullopt});
  Rng rng(1);
  const Enrolment e = enroll(req, groups::test(), rng);
  EXPECT_EQ(e.registration.public_key.y.value, 13);
  ASSERT_EQ(e.dds.size(), 3u);
  EXPECT_EQ(e.dds[0].stored_share->value.value, 0);
  EXPECT_EQ(e.dds[1].stored_share->value.value, 4);
  EXPECT_EQ(e.dds[2].stored_share->value.value, 8);
  EXPECT_FALSE(e.pd.whole_key);
}

TEST(Enrol, Case1WholeKeyOnGateway) {
  EnrolmentRequest req;
  req.strategy = CaseStrategy::case1;
  req.params = ThresholdParams{0, 1};
  req.devices.push_back(EnrolmentDevice{"pd", 1, std::nullopt});
  Rng rng(1);
  const Enrolment e = enroll(req, groups::sim(), rng);
  ASSERT_TRUE(e.pd.whole_key);
  EXPECT_EQ(groups::sim().exp_g(e.pd.whole_key->value), e.registration.public_key.y);
  EXPECT_TRUE(e.dds.empty());
}

TEST(Enrol, Errors) {
  Rng rng(1);
  EnrolmentRequest req;
  req.strategy = CaseStrategy::case3;
  req.params = ThresholdParams{1, 3};
  req.devices.push_back(EnrolmentDevice{"dd1", 1, std::nullopt});
  EXPECT_THROW(enroll(req, groups::sim(), rng), ParameterError);
  req.devices.push_back(EnrolmentDevice{"dd2", 2, std::nullopt});
  req.devices.push_back(EnrolmentDevice{"dd3", 3, std::nullopt});
  EXPECT_THROW(enroll(req, groups::sim(), rng), ParameterError);  // no templates
  req.strategy = CaseStrategy::case2;
  req.devices[2].index = 2;
  EXPECT_THROW(enroll(req, groups::sim(), rng), ParameterError);  // duplicate index
}

TEST(Enrol, Case3DumbDevicesHoldNoKeyBits) {
  Rng rng(5);
  Case3 c = make_case3(ThresholdParams{1, 3}, rng);
  for (auto& dd : c.deployment->dds()) {
    EXPECT_FALSE(dd->persists_share());
    EXPECT_FALSE(dd->holds_share_material());
    EXPECT_FALSE(dd->persistent_state().contains("share"));
  }
  EXPECT_EQ(c.deployment->pd().helper_store().size(), 3u);
}

TEST(Flow, Case2KnownAnswerSignature) {
  DeploymentConfig config;
  config.strategy = CaseStrategy::case2;
  config.params = ThresholdParams{1, 3};
  config.challenge = stub;
  config.coefficients = kat_poly();
  Rng rng(7);
  Deployment d(config, groups::test(), rng);
  set_scores(d, 0.9);
  d.dd(2)->set_nonce_override([](ShareIndex) { return std::optional<Scalar>(Scalar{3}); });
  d.dd(3)->set_nonce_override([](ShareIndex) { return std::optional<Scalar>(Scalar{5}); });
  const std::string s = d.authenticate({2, 3});
  ASSERT_TRUE(d.outcome(s));
  EXPECT_TRUE(d.outcome(s)->granted);
  const PdSession* session = d.pd().session(s);
  ASSERT_TRUE(session->signature);
  EXPECT_EQ(session->signature->R.value, 3);
  EXPECT_EQ(session->signature->s.value, 0);
  EXPECT_EQ(session->signer_set, (std::vector<ShareIndex>{2, 3}));
}

TEST(Flow, LowScoreDeniedBeforeSigning) {
  DeploymentConfig config;
  config.strategy = CaseStrategy::case2;
  config.params = ThresholdParams{1, 3};
  Rng rng(7);
  Deployment d(config, groups::sim(), rng);
  d.dd(1)->set_sensed_reading(Modality::gait, 0.8);
  d.dd(2)->set_sensed_reading(Modality::location, 0.5);
  d.dd(3)->set_sensed_reading(Modality::heartbeat, 0.0);
  const std::string s = d.authenticate({1, 2, 3});
  ASSERT_TRUE(d.outcome(s));
  EXPECT_FALSE(d.outcome(s)->granted);
  EXPECT_EQ(d.outcome(s)->reason, reasons::kScore);
  EXPECT_EQ(count_type(d.network(), MessageType::SignRound1), 0u);
  EXPECT_EQ(count_type(d.network(), MessageType::SignRound2), 0u);
  EXPECT_EQ(count_type(d.network(), MessageType::AuthResponse), 0u);
}

TEST(Flow, Case1) {
  DeploymentConfig config;
  config.strategy = CaseStrategy::case1;
  config.params = ThresholdParams{0, 2};
  Rng rng(3);
  Deployment d(config, groups::sim(), rng);
  set_scores(d, 0.9);
  const std::string s = d.authenticate({1, 2});
  EXPECT_TRUE(d.outcome(s)->granted);
  EXPECT_TRUE(d.pd().holds_whole_key());
  EXPECT_EQ(count_type(d.network(), MessageType::SignRound1), 0u);
}

TEST(Flow, Case3NoisyDeviceIsReplaced) {
  Rng rng(12);
  Case3 c = make_case3(ThresholdParams{1, 3}, rng);
  const CodeParams code = CodeParams::for_field(groups::sim().field(), 5);
  c.deployment->dd(1)->set_sensed_template(Template{random_bits(code.length(), rng)});
  const std::string s = c.deployment->authenticate({1, 2, 3});
  ASSERT_TRUE(c.deployment->outcome(s));
  EXPECT_TRUE(c.deployment->outcome(s)->granted);
  EXPECT_EQ(c.deployment->pd().session(s)->signer_set, (std::vector<ShareIndex>{2, 3}));
  EXPECT_EQ(count_type(c.deployment->network(), MessageType::HelperDelivery), 3u);
  for (auto& dd : c.deployment->dds()) EXPECT_FALSE(dd->holds_share_material());
}

TEST(Flow, InsufficientDevices) {
  Rng rng(12);
  Case3 c = make_case3(ThresholdParams{2, 3}, rng);
  const std::string s = c.deployment->authenticate({1, 2});
  EXPECT_FALSE(c.deployment->outcome(s)->granted);
  EXPECT_EQ(c.deployment->outcome(s)->reason, reasons::kInsufficientDevices);

  const CodeParams code = CodeParams::for_field(groups::sim().field(), 5);
  c.deployment->dd(3)->set_sensed_template(Template{random_bits(code.length(), rng)});
  c.deployment->network().advance(100);
  const std::string s2 = c.deployment->authenticate({1, 2, 3});
  EXPECT_FALSE(c.deployment->outcome(s2)->granted);
  EXPECT_EQ(c.deployment->outcome(s2)->reason, reasons::kInsufficientDevices);
}

TEST(Flow, GatewayHoldsShare) {
  Rng rng(4);
  for (CaseStrategy strategy : {CaseStrategy::case2, CaseStrategy::case3}) {
    std::unique_ptr<Deployment> d;
    if (strategy == CaseStrategy::case3) {
      d = std::move(make_case3(ThresholdParams{1, 3}, rng, true).deployment);
    } else {
      DeploymentConfig config;
      config.strategy = strategy;
      config.params = ThresholdParams{1, 3};
      config.pd_holds_share = true;
      d = std::make_unique<Deployment>(config, groups::sim(), rng);
      set_scores(*d, 0.9);
    }
    d->pd().add_own_reading(ModalityReading{"pd", Modality::gait, 0.9, 0});
    EXPECT_EQ(d->dds().size(), 2u);
    const std::string s = d->authenticate({1, 2, 3});
    EXPECT_TRUE(d->outcome(s)->granted) << case_name(strategy);
    EXPECT_EQ(d->pd().session(s)->signer_set, (std::vector<ShareIndex>{1, 2}));
  }
}

TEST(Flow, RobustToAnySingleMissingDevice) {
  Rng rng(31);
  for (CaseStrategy strategy : {CaseStrategy::case2, CaseStrategy::case3}) {
    for (std::uint32_t n = 2; n <= 6; ++n) {
      for (std::uint32_t t = 0; t + 2 <= n; ++t) {
        for (ShareIndex missing = 1; missing <= n; ++missing) {
          std::unique_ptr<Deployment> d;
          if (strategy == CaseStrategy::case3) {
            d = std::move(make_case3(ThresholdParams{t, n}, rng).deployment);
          } else {
            DeploymentConfig config;
            config.strategy = strategy;
            config.params = ThresholdParams{t, n};
            d = std::make_unique<Deployment>(config, groups::sim(), rng);
            set_scores(*d, 0.9);
          }
          std::set<ShareIndex> present = all_indices(n);
          present.erase(missing);
          const std::string s = d->authenticate(present);
          ASSERT_TRUE(d->outcome(s));
          EXPECT_TRUE(d->outcome(s)->granted)
              << case_name(strategy) << " n=" << n << " t=" << t << " missing=" << missing;
        }
      }
    }
  }
}

// The adversary holds the shares of `subset` and nothing else: it signs with
// Lagrange weights over its own index set and submits directly to the SP.
bool forge_with(Deployment& d, const std::vector<KeyShare>& shares, Rng& rng) {
  ServiceProvider& sp = d.sp();
  const GroupParams& g = d.pd().public_key().group;
  const ChallengePayload ch = sp.issue_challenge("user", d.network().now());
  const Bytes msg = challenge_message_bytes(ch.sp_id, ch.nonce);
  std::vector<ShareIndex> set;
  for (const KeyShare& s : shares) set.push_back(s.index);
  std::vector<ThresholdSigner> signers;
  std::vector<NonceCommitment> commitments;
  for (const KeyShare& s : shares) {
    signers.emplace_back(s, g);
    commitments.push_back(signers.back().commit("forge", rng));
  }
  Signature sig{aggregate_nonce(commitments, g), Scalar{0}};
  const Scalar c = default_challenge()(sig.R, d.pd().public_key().y, msg, g);
  for (ThresholdSigner& s : signers) sig.s = g.field().add(sig.s, s.respond("forge", c, set).s);
  return sp.verify_response(AuthResponsePayload{"user", ch.sp_id, ch.nonce, sig}, d.network().now()).granted;
}

TEST(Spoofing, AtMostTSharesNeverAuthenticate) {
  for (std::uint32_t n = 3; n <= 5; ++n) {
    for (std::uint32_t t = 1; t < n; ++t) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        DeploymentConfig config;
        config.strategy = CaseStrategy::case2;
        config.params = ThresholdParams{t, n};
        Deployment d(config, groups::sim(), rng);
        std::vector<KeyShare> stored;
        for (const DdEnrolment& e : d.enrolment_record().dds) stored.push_back(*e.stored_share);
        for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
          const std::size_t size = std::popcount(mask);
          if (size > t + 1) continue;
          std::vector<KeyShare> subset;
          for (std::uint32_t i = 0; i < n; ++i) {
            if (mask & (1U << i)) subset.push_back(stored[i]);
          }
          // A full quorum is the control: it must succeed.
          ASSERT_EQ(forge_with(d, subset, rng), size == t + 1) << "n=" << n << " t=" << t << " mask=" << mask;
        }
      }
    }
  }
}

TEST(Hygiene, NoEntityKeepsTheFullKey) {
  const GroupParams& g = groups::sim();
  Rng rng(8);
  const Scalar secret{rng.uniform_below(g.q())};
  const std::vector<Scalar> coeffs{secret, Scalar{rng.uniform_below(g.q())}};
  const std::string needle = "\"" + to_hex(secret.value) + "\"";
  for (CaseStrategy strategy : {CaseStrategy::case2, CaseStrategy::case3}) {
    DeploymentConfig config;
    config.strategy = strategy;
    config.params = ThresholdParams{1, 3};
    config.coefficients = coeffs;
    std::map<ShareIndex, Template> templates;
    for (ShareIndex i = 1; i <= 3; ++i) templates[i] = Template{random_bits(160, rng)};
    Deployment d(config, g, rng, templates);
    for (const auto& [i, tpl] : templates) d.dd(i)->set_sensed_template(tpl);
    set_scores(d, 0.9);
    auto check = [&] {
      EXPECT_EQ(d.pd().persistent_state().dump().find(needle), std::string::npos);
      EXPECT_FALSE(d.pd().holds_whole_key());
      for (auto& dd : d.dds()) {
        EXPECT_EQ(dd->persistent_state().dump().find(needle), std::string::npos);
        if (strategy == CaseStrategy::case3) {
          EXPECT_FALSE(dd->holds_share_material());
        }
      }
    };
    check();
    const std::string s = d.authenticate({1, 2, 3});
    EXPECT_TRUE(d.outcome(s)->granted);
    check();
  }
}

struct SingleKey {
  DealerOutput key;
  Signature sign(const Bytes& msg, Rng& rng) const {
    ThresholdSigner signer(key.shares[0], key.public_key.group);
    const ShareIndex set[] = {key.shares[0].index};
    const std::vector<NonceCommitment> c{signer.commit("s", rng)};
    const Scalar ch = default_challenge()(c[0].R, key.public_key.y, msg, key.public_key.group);
    const std::vector<PartialSignature> p{signer.respond("s", ch, set)};
    return combine(c, p, key.public_key, msg);
  }
};

TEST(ServiceProviderTest, NonceCache) {
  Rng rng(9);
  const SingleKey k{keygen_dealer(ThresholdParams{0, 1}, groups::sim(), rng)};
  ServiceProvider sp("sp", rng);
  EXPECT_THROW(sp.issue_challenge("user", 0), RegistrationError);
  sp.register_user(SpRegistration{"user", k.key.public_key});

  const ChallengePayload a = sp.issue_challenge("user", 0);
  const ChallengePayload b = sp.issue_challenge("user", 0);
  EXPECT_EQ(a.nonce.size(), kChallengeNonceBytes);
  EXPECT_NE(a.nonce, b.nonce);

  const AuthResponsePayload good{"user", "sp", a.nonce, k.sign(challenge_message_bytes("sp", a.nonce), rng)};
  EXPECT_TRUE(sp.verify_response(good, 5).granted);
  const AuthResultPayload again = sp.verify_response(good, 6);
  EXPECT_FALSE(again.granted);
  EXPECT_EQ(again.reason, reasons::kReplay);

  const AuthResponsePayload wrong_sp{"user", "sp", b.nonce, k.sign(challenge_message_bytes("other", b.nonce), rng)};
  EXPECT_EQ(sp.verify_response(wrong_sp, 5).reason, reasons::kSignature);

  const ChallengePayload c = sp.issue_challenge("user", 10);
  const AuthResponsePayload late{"user", "sp", c.nonce, k.sign(challenge_message_bytes("sp", c.nonce), rng)};
  EXPECT_EQ(sp.verify_response(late, 10 + kDefaultNonceLifetime + 1).reason, reasons::kExpired);

  const ChallengePayload d = sp.issue_challenge("user", 10);
  const AuthResponsePayload on_time{"user", "sp", d.nonce, k.sign(challenge_message_bytes("sp", d.nonce), rng)};
  EXPECT_TRUE(sp.verify_response(on_time, 10 + kDefaultNonceLifetime).granted);

  EXPECT_EQ(sp.verify_response(AuthResponsePayload{"user", "sp", Bytes(32, 0), good.signature}, 0).reason,
            reasons::kUnknownNonce);
  EXPECT_EQ(sp.verify_response(AuthResponsePayload{"eve", "sp", a.nonce, good.signature}, 0).reason,
            reasons::kUnknownUser);
}

TEST(FaspTest, EncryptedRequestKnownAnswer) {
  Rng rng(1);
  const PheKeypair kp = phe_keygen(64, rng);
  Fasp fasp;
  FusionPolicy policy;
  policy.weights = {{Modality::gait, 0.005}, {Modality::location, 0.003}, {Modality::heartbeat, 0.002}};
  ScoreRequestPayload req{"user", ScoringMode::cloud_encrypted, {}, {}, kp.public_key.n};
  req.encrypted_scores = {{Modality::gait, phe_encrypt(80, kp.public_key, rng)},
                          {Modality::location, phe_encrypt(50, kp.public_key, rng)},
                          {Modality::heartbeat, phe_encrypt(0, kp.public_key, rng)}};
  EXPECT_THROW(fasp.score(req, 0), PolicyError);
  fasp.set_policy("user", policy);
  const ScoreResponsePayload resp = fasp.score(req, 0);
  EXPECT_FALSE(resp.value);
  ASSERT_TRUE(resp.encrypted_total);
  EXPECT_EQ(phe_decrypt(*resp.encrypted_total, kp), 550);
  EXPECT_EQ(fasp.plaintext_scores_seen(), 0u);
}

TEST(FaspTest, LocalModeSendsNothingToFasp) {
  DeploymentConfig config;
  config.strategy = CaseStrategy::case2;
  Rng rng(2);
  Deployment d(config, groups::sim(), rng);
  set_scores(d, 0.9);
  d.authenticate({1, 2, 3});
  for (const Message& m : d.network().transcript()) {
    EXPECT_NE(m.to, "fasp");
    EXPECT_NE(m.from, "fasp");
  }
}

TEST(FaspTest, CloudModesAgree) {
  for (ScoringMode mode : {ScoringMode::cloud_plain, ScoringMode::cloud_encrypted}) {
    DeploymentConfig config;
    config.strategy = CaseStrategy::case2;
    config.scoring = mode;
    Rng rng(2);
    Deployment d(config, groups::sim(), rng);
    d.dd(1)->set_sensed_reading(Modality::gait, 0.8);
    d.dd(2)->set_sensed_reading(Modality::location, 0.9);
    d.dd(3)->set_sensed_reading(Modality::heartbeat, 0.7);
    const std::string s = d.authenticate({1, 2, 3});
    EXPECT_TRUE(d.outcome(s)->granted) << scoring_mode_name(mode);
    EXPECT_NEAR(d.pd().session(s)->score->value, 0.5 * 0.8 + 0.3 * 0.9 + 0.2 * 0.7, 0.01);
    if (mode == ScoringMode::cloud_encrypted) {
      EXPECT_EQ(d.fasp().plaintext_scores_seen(), 0u);
      for (const auto& req : d.fasp().request_log()) EXPECT_FALSE(req.contains("readings"));
    } else {
      EXPECT_EQ(d.fasp().plaintext_scores_seen(), 3u);
    }
  }
}

TEST(DumbDeviceTest, TalksOnlyToGateway) {
  DeploymentConfig config;
  config.strategy = CaseStrategy::case2;
  Rng rng(2);
  Deployment d(config, groups::sim(), rng);
  const auto out = d.dd(1)->handle(Message{"sp", "dd1", "x", SignRound1Payload{RoundPhase::request, 1, {}, {}}}, 0);
  EXPECT_TRUE(out.empty());
  const auto ok = d.dd(1)->handle(Message{"pd", "dd1", "x", SignRound1Payload{RoundPhase::request, 1, {}, {}}}, 0);
  ASSERT_EQ(ok.size(), 1u);
  EXPECT_EQ(ok[0].as<SignRound1Payload>().phase, RoundPhase::reply);
}

TEST(PersonalDeviceTest, IgnoresUnknownSensors) {
  DeploymentConfig config;
  config.strategy = CaseStrategy::case2;
  Rng rng(2);
  Deployment d(config, groups::sim(), rng);
  d.pd().handle(Message{"rogue", "pd", "s", SensorReadingPayload{{"rogue", Modality::gait, 1.0, 0}}}, 0);
  d.pd().handle(Message{"dd1", "pd", "s", SensorReadingPayload{{"dd2", Modality::gait, 1.0, 0}}}, 0);
  EXPECT_TRUE(d.pd().reading_buffer().empty());
  EXPECT_EQ(d.pd().ignored_messages(), 2u);
}

TEST(Determinism, SameSeedSameTranscript) {
  auto run = [](std::uint64_t seed) {
    Rng rng(seed);
    Case3 c = make_case3(ThresholdParams{2, 5}, rng);
    c.deployment->authenticate({1, 2, 3, 4, 5});
    std::vector<std::string> lines;
    for (const Message& m : c.deployment->network().transcript()) lines.push_back(message_to_line(m));
    return lines;
  };
  EXPECT_EQ(run(4), run(4));
  EXPECT_NE(run(4), run(5));
}

}  // namespace
}  // namespace fas

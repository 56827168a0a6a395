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

#include "fas/auth_score.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fas/random.hpp"

namespace fas {
namespace {

ModalityReading r(const char* id, Modality m, double score, Tick ts = 0) { return ModalityReading{id, m, score, ts}; }

TEST(Fusion, WeightedMean) {
  const FusionPolicy p;
  const std::vector<ModalityReading> all{r("a", Modality::gait, 0.8), r("b", Modality::location, 0.5),
                                         r("c", Modality::heartbeat, 0.0)};
  const AuthScore s = fuse_local(all, p, 0);
  EXPECT_NEAR(s.value, 0.55, 1e-12);
  EXPECT_EQ(s.contributing.size(), 3u);
  EXPECT_FALSE(gate(s, p));
}

TEST(Fusion, RenormalisesOverPresentModalities) {
  const FusionPolicy p;
  const std::vector<ModalityReading> one{r("a", Modality::gait, 0.6)};
  EXPECT_NEAR(fuse_local(one, p, 0).value, 0.6, 1e-12);
  EXPECT_EQ(fuse_local(std::vector<ModalityReading>{}, p, 0).value, 0.0);
}

TEST(Fusion, AveragesRepeatedModality) {
  const FusionPolicy p;
  const std::vector<ModalityReading> v{r("a", Modality::gait, 0.8), r("b", Modality::gait, 0.4),
                                       r("c", Modality::location, 1.0)};
  EXPECT_NEAR(fuse_local(v, p, 0).value, (0.5 * 0.6 + 0.3 * 1.0) / 0.8, 1e-12);
}

TEST(Fusion, DropsStaleReadings) {
  const FusionPolicy p;
  const std::vector<ModalityReading> v{r("a", Modality::gait, 0.9, 0), r("b", Modality::location, 0.1, 5)};
  EXPECT_NEAR(fuse_local(v, p, 10).value, (0.9 * 0.5 + 0.1 * 0.3) / 0.8, 1e-12);
  EXPECT_NEAR(fuse_local(v, p, 11).value, 0.1, 1e-12);
  EXPECT_EQ(fuse_local(v, p, 16).value, 0.0);
}

TEST(Fusion, GateTiesPass) {
  FusionPolicy p;
  EXPECT_TRUE(gate(AuthScore{0.7, {}, ScoreMode::local}, p));
  EXPECT_FALSE(gate(AuthScore{0.6999, {}, ScoreMode::local}, p));
}

TEST(Fusion, PolicyValidation) {
  FusionPolicy p;
  p.theta = 1.5;
  EXPECT_THROW(p.validate(), ParameterError);
  FusionPolicy q;
  q.weights = {{Modality::gait, -1.0}};
  EXPECT_THROW(q.validate(), ParameterError);
  FusionPolicy z;
  z.weights = {{Modality::gait, 0.0}};
  EXPECT_THROW(z.validate(), ParameterError);
}

TEST(Quantize, RoundHalfUp) {
  EXPECT_EQ(quantize_score(0.8), 80u);
  EXPECT_EQ(quantize_score(0.555), 56u);
  EXPECT_EQ(quantize_score(0.0), 0u);
  EXPECT_EQ(quantize_score(1.0), 100u);
  const auto w = integer_weights(FusionPolicy{});
  EXPECT_EQ(w.at(Modality::gait), 500u);
  EXPECT_EQ(w.at(Modality::location), 300u);
  EXPECT_EQ(w.at(Modality::heartbeat), 200u);
}

TEST(EncryptedFusion, KnownAnswer) {
  Rng rng(1);
  const PheKeypair kp = phe_keygen(64, rng);
  const std::map<Modality, PheCiphertext> cts{{Modality::gait, phe_encrypt(80, kp.public_key, rng)},
                                              {Modality::location, phe_encrypt(50, kp.public_key, rng)},
                                              {Modality::heartbeat, phe_encrypt(0, kp.public_key, rng)}};
  const std::map<Modality, std::uint64_t> w{{Modality::gait, 5}, {Modality::location, 3}, {Modality::heartbeat, 2}};
  const BigInt total = phe_decrypt(fuse_encrypted(cts, w, kp.public_key), kp);
  EXPECT_EQ(total, 550);
  EXPECT_NEAR(normalize_encrypted_total(total, w, {Modality::gait, Modality::location, Modality::heartbeat}), 0.55,
              1e-12);
}

TEST(EncryptedFusion, ZeroWeightSumRejected) {
  Rng rng(1);
  const PheKeypair kp = phe_keygen(64, rng);
  const std::map<Modality, PheCiphertext> cts{{Modality::custom, phe_encrypt(80, kp.public_key, rng)}};
  EXPECT_THROW(fuse_encrypted(cts, integer_weights(FusionPolicy{}), kp.public_key), ParameterError);
}

TEST(EncryptedFusion, AgreesWithLocalFusion) {
  Rng rng(77);
  const PheKeypair kp = phe_keygen(128, rng);
  const FusionPolicy p;
  const Modality modalities[] = {Modality::gait, Modality::location, Modality::heartbeat};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ModalityReading> v;
    const int count = 1 + static_cast<int>(rng.next_u64() % 5);
    for (int i = 0; i < count; ++i) v.push_back(r("d", modalities[rng.next_u64() % 3], rng.uniform01()));
    const auto cts = encrypt_modality_scores(v, p, 0, kp.public_key, rng);
    std::set<Modality> present;
    for (const auto& [m, c] : cts) present.insert(m);
    const auto w = integer_weights(p);
    const double cloud = normalize_encrypted_total(phe_decrypt(fuse_encrypted(cts, w, kp.public_key), kp), w, present);
    EXPECT_NEAR(cloud, fuse_local(v, p, 0).value, 0.01);
  }
}

TEST(Readings, JsonRoundTrip) {
  const ModalityReading a = r("dd1", Modality::heartbeat, 0.25, 9);
  nlohmann::json j = a;
  const ModalityReading b = reading_from_json(j);
  EXPECT_EQ(b.device_id, "dd1");
  EXPECT_EQ(b.modality, Modality::heartbeat);
  EXPECT_EQ(b.score, 0.25);
  EXPECT_EQ(b.timestamp, 9);
  FusionPolicy p;
  p.theta = 0.6;
  nlohmann::json pj = p;
  EXPECT_EQ(policy_from_json(pj).theta, 0.6);
  EXPECT_THROW(modality_from_name("smell"), ParameterError);
}

}  // namespace
}  // namespace fas

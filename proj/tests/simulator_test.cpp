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

#include "fas/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fas {
namespace {

ScenarioConfig base(std::size_t trials = 20) {
  ScenarioConfig c;
  c.strategy = CaseStrategy::case3;
  c.params = ThresholdParams{2, 5};
  c.p_flip = 0.02;
  c.trials = trials;
  c.seed = 42;
  return c;
}

TEST(ScenarioConfigTest, ParsesAndEchoes) {
  const nlohmann::json j = nlohmann::json::parse(R"({
    "case": "CASE2", "t": 1, "n": 4, "present": [1, 3, 4], "p_flip": 0.1,
    "adversary": {"kind": "stolen", "k": 1}, "scoring": "cloud-encrypted",
    "policy": {"weights": {"gait": 1.0}, "theta": 0.5, "staleness_max": 5},
    "seed": 7, "trials": 3, "group": "test", "score_model": {"genuine": [0.8, 0.9]}
  })");
  const ScenarioConfig c = scenario_from_json(j);
  EXPECT_EQ(c.strategy, CaseStrategy::case2);
  EXPECT_EQ(c.params.n, 4u);
  EXPECT_EQ(c.present, (std::set<ShareIndex>{1, 3, 4}));
  EXPECT_EQ(c.adversary.kind, AdversaryKind::stolen);
  EXPECT_EQ(c.adversary.stolen_k, 1u);
  EXPECT_EQ(c.scoring, ScoringMode::cloud_encrypted);
  EXPECT_EQ(c.policy.theta, 0.5);
  EXPECT_EQ(c.score_model.genuine_low, 0.8);
  nlohmann::json echoed = c;
  const ScenarioConfig again = scenario_from_json(echoed);
  nlohmann::json echoed_again = again;
  EXPECT_EQ(echoed, echoed_again);
}

TEST(ScenarioConfigTest, ErrorsNameTheField) {
  auto field_of = [](const char* text) -> std::string {
    try {
      scenario_from_json(nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return e.field_path();
    }
    return "<none>";
  };
  EXPECT_EQ(field_of(R"({"p_flip": 0.6})"), "p_flip");
  EXPECT_EQ(field_of(R"({"t": 5, "n": 5})"), "t");
  EXPECT_EQ(field_of(R"({"n": "five"})"), "n");
  EXPECT_EQ(field_of(R"({"adversary": {"kind": "stolen", "k": 9}})"), "adversary.k");
  EXPECT_EQ(field_of(R"({"adversary": {"kind": "ddos"}})"), "adversary.kind");
  EXPECT_EQ(field_of(R"({"present": [1, 9]})"), "present");
  EXPECT_EQ(field_of(R"({"present": [1, 1]})"), "present[1]");
  EXPECT_EQ(field_of(R"({"case": "CASE4"})"), "case");
  EXPECT_EQ(field_of(R"({"group": "huge"})"), "group");
  EXPECT_EQ(field_of(R"({"colour": 1})"), "colour");
  EXPECT_EQ(field_of(R"({"score_model": {"genuine": [0.9, 0.1]}})"), "score_model.genuine");
  EXPECT_EQ(field_of(R"({"repetition": 4})"), "repetition");
  EXPECT_EQ(field_of(R"({"scores": [0.5]})"), "scores");
  EXPECT_EQ(field_of(R"({"policy": {"theta": 2}})"), "policy");
  EXPECT_EQ(field_of(R"({})"), "<none>");
}

TEST(RunScenario, ReportInvariants) {
  const SimReport r = run_scenario(base());
  EXPECT_EQ(r.granted + r.denied, 20u);
  EXPECT_EQ(r.outcomes.size(), 20u);
  EXPECT_EQ(r.genuine_trials, 20u);
  EXPECT_GE(r.grant_rate, 0.0);
  EXPECT_LE(r.grant_rate, 1.0);
  EXPECT_EQ(r.message_counts.at("AuthRequest"), 20u);
  EXPECT_EQ(r.out_of_scope, (std::vector<std::string>{"denial-of-service", "availability"}));
}

TEST(RunScenario, Deterministic) {
  const ScenarioRun a = run_scenario_with_transcript(base());
  const ScenarioRun b = run_scenario_with_transcript(base());
  EXPECT_EQ(a.transcript, b.transcript);
  EXPECT_EQ(nlohmann::json(a.report).dump(), nlohmann::json(b.report).dump());
  ScenarioConfig other = base();
  other.seed += 1;
  EXPECT_NE(run_scenario(other).transcript_digest, a.report.transcript_digest);
}

TEST(RunScenario, TrialSeedsAreIndependentOfTrialCount) {
  // Trial i draws from seed ^ i regardless of how many trials run.
  const ScenarioRun small = run_scenario_with_transcript(base(3));
  const ScenarioRun large = run_scenario_with_transcript(base(6));
  ASSERT_LT(small.transcript.size(), large.transcript.size());
  EXPECT_TRUE(std::equal(small.transcript.begin(), small.transcript.end(), large.transcript.begin()));
}

TEST(RunScenario, EmptyRun) {
  const SimReport r = run_scenario(base(0));
  EXPECT_EQ(bytes_to_hex(r.transcript_digest), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(r.transcript_digest, empty_transcript_digest());
  EXPECT_EQ(r.grant_rate, 0.0);
}

TEST(RunScenario, ImpostorIsDenied) {
  ScenarioConfig c = base(50);
  c.impostor = true;
  const SimReport r = run_scenario(c);
  EXPECT_EQ(r.adversarial_trials, 50u);
  EXPECT_EQ(r.far, 0.0);
}

TEST(RunScenario, ImpostorTemplatesFailTheExtractor) {
  // Impostor scores pass the gate here, so only the fuzzy extractor stands
  // between the impostor and a signature.
  ScenarioConfig c = base(50);
  c.impostor = true;
  c.score_model.impostor_low = 0.9;
  c.score_model.impostor_high = 1.0;
  const SimReport r = run_scenario(c);
  EXPECT_EQ(r.far, 0.0);
  EXPECT_EQ(r.denial_reasons.at("insufficient-devices"), 50u);
}

TEST(RunScenario, StolenDevicesBelowThreshold) {
  for (CaseStrategy strategy : {CaseStrategy::case2, CaseStrategy::case3}) {
    for (std::uint32_t n = 3; n <= 5; ++n) {
      for (std::uint32_t t = 1; t < n; ++t) {
        for (std::size_t k = 0; k <= t; ++k) {
          ScenarioConfig c = base(100);
          c.strategy = strategy;
          c.params = ThresholdParams{t, n};
          c.adversary = AdversaryConfig{AdversaryKind::stolen, k, strategy == CaseStrategy::case3};
          const SimReport r = run_scenario(c);
          ASSERT_EQ(r.adversarial_grants, 0u) << case_name(strategy) << " n=" << n << " t=" << t << " k=" << k;
        }
      }
    }
  }
}

TEST(RunScenario, StolenQuorumSucceedsInCase2) {
  ScenarioConfig c = base(20);
  c.strategy = CaseStrategy::case2;
  c.adversary = AdversaryConfig{AdversaryKind::stolen, 3, false};
  EXPECT_EQ(run_scenario(c).far, 1.0);
}

TEST(RunScenario, Attacks) {
  for (CaseStrategy strategy : {CaseStrategy::case1, CaseStrategy::case2, CaseStrategy::case3}) {
    ScenarioConfig c = base(30);
    c.strategy = strategy;
    c.adversary.kind = AdversaryKind::tamper_partial;
    SimReport r = run_scenario(c);
    EXPECT_EQ(r.adversarial_grants, 0u);
    EXPECT_EQ(r.denied, 30u);

    c.adversary.kind = AdversaryKind::replay;
    r = run_scenario(c);
    EXPECT_EQ(r.denial_reasons[reasons::kReplay], 30u) << case_name(strategy);

    c.adversary.kind = AdversaryKind::score_inflate;
    for (ScoringMode mode : {ScoringMode::local, ScoringMode::cloud_plain, ScoringMode::cloud_encrypted}) {
      c.scoring = mode;
      r = run_scenario(c);
      EXPECT_EQ(r.denial_reasons[reasons::kScore], 30u) << scoring_mode_name(mode);
    }
  }
}

TEST(RunScenario, EavesdropReport) {
  ScenarioConfig c = base(10);
  c.adversary.kind = AdversaryKind::eavesdrop;
  c.scoring = ScoringMode::cloud_plain;
  SimReport r = run_scenario(c);
  ASSERT_TRUE(r.eavesdrop);
  EXPECT_EQ(r.eavesdrop->plaintext_score_payloads, 20u);
  EXPECT_EQ(r.fasp_plaintext_scores, 50u);
  EXPECT_EQ(r.frr, 0.0);

  c.scoring = ScoringMode::cloud_encrypted;
  r = run_scenario(c);
  EXPECT_EQ(r.eavesdrop->plaintext_score_payloads, 0u);
  EXPECT_GT(r.eavesdrop->observed_messages, 0u);
  EXPECT_EQ(r.fasp_plaintext_scores, 0u);
}

TEST(RunScenario, FixedScoresBelowThreshold) {
  ScenarioConfig c = base(1);
  c.params = ThresholdParams{1, 3};
  c.scores = {0.8, 0.5, 0.0};
  const SimReport r = run_scenario(c);
  EXPECT_EQ(r.denial_reasons.at("score"), 1u);
  EXPECT_NEAR(*r.outcomes[0].score, 0.55, 1e-12);
  EXPECT_EQ(r.message_counts.count("HelperDelivery"), 0u);
}

TEST(Rates, MonotoneInNoise) {
  ScenarioConfig c = base(1000);
  c.params = ThresholdParams{2, 3};
  const double sweep[] = {0.0, 0.05, 0.15};
  const auto points = estimate_rates(c, sweep);
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[0].frr, 0.0);
  EXPECT_LE(points[0].frr, points[1].frr);
  EXPECT_LT(points[1].frr, points[2].frr);
  for (const RatePoint& p : points) EXPECT_EQ(p.far, 0.0);
  ScenarioConfig few = base(10);
  EXPECT_THROW(estimate_rates(few, sweep), ConfigError);
}

TEST(Replay, DigestMatch) {
  const ScenarioRun run = run_scenario_with_transcript(base(5));
  EXPECT_TRUE(replay_transcript(run.report.transcript_digest, base(5)));
  ScenarioConfig other = base(5);
  other.seed += 1;
  EXPECT_THROW(replay_transcript(run.report.transcript_digest, other), NondeterminismError);
  try {
    replay_transcript(run.report.transcript_digest, other, run.transcript);
    FAIL();
  } catch (const NondeterminismError& e) {
    EXPECT_NE(std::string(e.what()).find("first divergent message #"), std::string::npos);
  }
}

TEST(ShareRecovery, MatchesBinomialTail) {
  double block = 0.0;
  for (int j = 3; j <= 5; ++j) {
    const double choose = j == 3 ? 10 : (j == 4 ? 5 : 1);
    block += choose * std::pow(0.1, j) * std::pow(0.9, 5 - j);
  }
  const double oracle = 1 - std::pow(1 - block, 16);
  EXPECT_NEAR(estimate_share_recovery_failure(CodeParams{16, 5}, 0.1, 4000, 3), oracle, 0.03);
}

}  // namespace
}  // namespace fas

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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fas/auth_score.hpp"
#include "fas/fuzzy_extractor.hpp"
#include "fas/messages.hpp"
#include "fas/protocol.hpp"

namespace fas {

enum class AdversaryKind { none, stolen, tamper_partial, replay, eavesdrop, score_inflate };

const char* adversary_name(AdversaryKind kind);
AdversaryKind adversary_from_name(std::string_view name);

struct AdversaryConfig {
  AdversaryKind kind = AdversaryKind::none;
  // stolen: number of dumb devices whose persistent state the adversary holds.
  std::size_t stolen_k = 0;
  // stolen, CASE3: the adversary also obtained the PD's helper data.
  bool leak_helper_data = false;
};

// Behavioural score draws, uniform within each range.
struct ScoreModel {
  double genuine_low = 0.75;
  double genuine_high = 1.0;
  double impostor_low = 0.0;
  double impostor_high = 0.6;
};

struct ScenarioConfig {
  CaseStrategy strategy = CaseStrategy::case3;
  ThresholdParams params{2, 5};
  // Share indices whose device takes part. Empty means all of 1..n.
  std::set<ShareIndex> present;
  bool pd_holds_share = false;
  double p_flip = 0.0;
  bool impostor = false;
  AdversaryConfig adversary;
  FusionPolicy policy;
  ScoringMode scoring = ScoringMode::local;
  ScoreModel score_model;
  // Fixed behavioural score per share index 1..n; replaces the score draws.
  std::vector<double> scores;
  std::string group = "sim";
  std::size_t repetition = 5;
  std::size_t paillier_bits = 256;
  std::uint64_t seed = 0;
  std::size_t trials = 1;

  std::set<ShareIndex> present_devices() const;
  // Trials that are attacks rather than the genuine user.
  bool adversarial() const;
  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Missing fields keep their defaults; unknown fields are rejected.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const ScenarioConfig& config);

struct TrialOutcome {
  std::uint64_t trial = 0;
  bool adversarial = false;
  bool granted = false;
  std::string reason;
  std::optional<double> score;
  std::vector<ShareIndex> signers;
  std::size_t messages = 0;
};

struct EavesdropReport {
  std::size_t observed_messages = 0;
  std::size_t plaintext_score_payloads = 0;
  std::map<std::string, std::size_t> plaintext_by_type;
};

struct SimReport {
  ScenarioConfig config;
  std::vector<TrialOutcome> outcomes;
  std::size_t granted = 0;
  std::size_t denied = 0;
  std::size_t genuine_trials = 0;
  std::size_t genuine_denials = 0;
  std::size_t adversarial_trials = 0;
  std::size_t adversarial_grants = 0;
  double grant_rate = 0.0;
  double frr = 0.0;
  double far = 0.0;
  std::map<std::string, std::size_t> message_counts;
  std::map<std::string, std::size_t> denial_reasons;
  Digest transcript_digest{};
  std::optional<EavesdropReport> eavesdrop;
  // Plaintext score values found by inspecting FASP state after each trial.
  std::size_t fasp_plaintext_scores = 0;
  std::vector<std::string> out_of_scope;
};

void to_json(nlohmann::json& j, const SimReport& report);

struct ScenarioRun {
  SimReport report;
  // JSON-lines message log, in trial order.
  std::vector<std::string> transcript;
};

// Each trial draws from Rng(seed ^ trial) in this order: enrolment template
// bits, authentication noise (or impostor template) bits, behavioural scores,
// dealer polynomial and Paillier key, then protocol nonces.
ScenarioRun run_scenario_with_transcript(const ScenarioConfig& config);
SimReport run_scenario(const ScenarioConfig& config);

// SHA-256 over every line followed by '\n'.
Digest transcript_digest(std::span<const std::string> lines);
Digest empty_transcript_digest();

struct RatePoint {
  double p_flip = 0.0;
  double frr = 0.0;
  double far = 0.0;
  std::size_t genuine_trials = 0;
  std::size_t impostor_trials = 0;
};

// Genuine and impostor runs of `config` at each noise level. Requires at least
// 1000 trials.
std::vector<RatePoint> estimate_rates(const ScenarioConfig& config, std::span<const double> sweep);
void to_json(nlohmann::json& j, const RatePoint& point);

// Single-device share recovery failure rate under i.i.d. bit flips.
double estimate_share_recovery_failure(const CodeParams& code, double p_flip, std::size_t trials, std::uint64_t seed);

// Reruns `config` and compares digests. With `reference` lines, a mismatch
// names the first divergent message. Throws NondeterminismError on mismatch.
bool replay_transcript(const Digest& expected, const ScenarioConfig& config,
                       std::span<const std::string> reference = {});

}  // namespace fas

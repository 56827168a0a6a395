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

#include <algorithm>
#include <cmath>

namespace fas {

const char* modality_name(Modality m) {
  switch (m) {
    case Modality::gait:
      return "gait";
    case Modality::location:
      return "location";
    case Modality::heartbeat:
      return "heartbeat";
    case Modality::custom:
      return "custom";
  }
  return "custom";
}

Modality modality_from_name(std::string_view name) {
  if (name == "gait") return Modality::gait;
  if (name == "location") return Modality::location;
  if (name == "heartbeat") return Modality::heartbeat;
  if (name == "custom") return Modality::custom;
  throw ParameterError("unknown modality '" + std::string(name) + "'");
}

void FusionPolicy::validate() const {
  bool any_positive = false;
  for (const auto& [modality, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("fusion policy: weights must be finite and >= 0");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw ParameterError("fusion policy: at least one weight must be positive");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("fusion policy: theta must lie in [0, 1]");
  if (staleness_max < 0) throw ParameterError("fusion policy: staleness_max must be >= 0");
}

double FusionPolicy::weight(Modality m) const {
  auto it = weights.find(m);
  return it == weights.end() ? 0.0 : it->second;
}

std::map<Modality, std::vector<const ModalityReading*>> fresh_readings_by_modality(
    std::span<const ModalityReading> readings, const FusionPolicy& policy, Tick now) {
  std::map<Modality, std::vector<const ModalityReading*>> out;
  for (const ModalityReading& r : readings) {
    if (now - r.timestamp > policy.staleness_max) continue;
    if (policy.weight(r.modality) <= 0.0) continue;
    out[r.modality].push_back(&r);
  }
  return out;
}

namespace {

double mean_score(const std::vector<const ModalityReading*>& group) {
  double sum = 0.0;
  for (const ModalityReading* r : group) sum += r->score;
  return sum / static_cast<double>(group.size());
}

}  // namespace

AuthScore fuse_local(std::span<const ModalityReading> readings, const FusionPolicy& policy, Tick now) {
  AuthScore out;
  out.mode = ScoreMode::local;
  double weighted = 0.0;
  double total_weight = 0.0;
  for (const auto& [modality, group] : fresh_readings_by_modality(readings, policy, now)) {
    const double w = policy.weight(modality);
    weighted += w * mean_score(group);
    total_weight += w;
    for (const ModalityReading* r : group) out.contributing.insert(r->device_id);
  }
  if (total_weight > 0.0) out.value = std::clamp(weighted / total_weight, 0.0, 1.0);
  return out;
}

bool gate(const AuthScore& score, const FusionPolicy& policy) { return score.value >= policy.theta; }

std::uint32_t quantize_score(double score) {
  if (!(score >= 0.0 && score <= 1.0)) throw ParameterError("quantize_score: score outside [0, 1]");
  // The epsilon absorbs binary representation error, e.g. 0.285 * 100 = 28.4999...
  return static_cast<std::uint32_t>(std::floor(score * 100.0 + 0.5 + 1e-9));
}

std::map<Modality, std::uint64_t> integer_weights(const FusionPolicy& policy) {
  std::map<Modality, std::uint64_t> out;
  for (const auto& [modality, w] : policy.weights) {
    out[modality] = static_cast<std::uint64_t>(std::llround(w * 1000.0));
  }
  return out;
}

PheCiphertext fuse_encrypted(const std::map<Modality, PheCiphertext>& encrypted_scores,
                             const std::map<Modality, std::uint64_t>& weights, const PhePublicKey& key) {
  std::uint64_t weight_sum = 0;
  PheCiphertext acc{1};  // Enc(0; rho = 1)
  for (const auto& [modality, c] : encrypted_scores) {
    auto it = weights.find(modality);
    const std::uint64_t w = it == weights.end() ? 0 : it->second;
    if (w == 0) continue;
    weight_sum += w;
    acc = phe_add(acc, phe_scale(c, BigInt(static_cast<unsigned long>(w)), key), key);
  }
  if (weight_sum == 0) throw ParameterError("fuse_encrypted: weights of the present modalities sum to zero");
  return acc;
}

std::map<Modality, PheCiphertext> encrypt_modality_scores(std::span<const ModalityReading> readings,
                                                          const FusionPolicy& policy, Tick now,
                                                          const PhePublicKey& key, Rng& rng) {
  std::map<Modality, PheCiphertext> out;
  for (const auto& [modality, group] : fresh_readings_by_modality(readings, policy, now)) {
    out.emplace(modality, phe_encrypt(BigInt(quantize_score(mean_score(group))), key, rng));
  }
  return out;
}

double normalize_encrypted_total(const BigInt& total, const std::map<Modality, std::uint64_t>& weights,
                                 const std::set<Modality>& present) {
  std::uint64_t weight_sum = 0;
  for (Modality m : present) {
    auto it = weights.find(m);
    if (it != weights.end()) weight_sum += it->second;
  }
  if (weight_sum == 0) return 0.0;
  const double value = total.get_d() / (100.0 * static_cast<double>(weight_sum));
  return std::clamp(value, 0.0, 1.0);
}

void to_json(nlohmann::json& j, const ModalityReading& reading) {
  j = nlohmann::json{{"device", reading.device_id},
                     {"modality", modality_name(reading.modality)},
                     {"score", reading.score},
                     {"tick", reading.timestamp}};
}

ModalityReading reading_from_json(const nlohmann::json& j) {
  ModalityReading r;
  r.device_id = j.at("device").get<std::string>();
  r.modality = modality_from_name(j.at("modality").get<std::string>());
  r.score = j.at("score").get<double>();
  r.timestamp = j.at("tick").get<Tick>();
  if (!(r.score >= 0.0 && r.score <= 1.0)) throw ParameterError("reading: score outside [0, 1]");
  return r;
}

void to_json(nlohmann::json& j, const FusionPolicy& policy) {
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [modality, w] : policy.weights) weights[modality_name(modality)] = w;
  j = nlohmann::json{{"weights", weights}, {"theta", policy.theta}, {"staleness_max", policy.staleness_max}};
}

FusionPolicy policy_from_json(const nlohmann::json& j) {
  FusionPolicy policy;
  if (j.contains("weights")) {
    policy.weights.clear();
    for (const auto& [name, w] : j.at("weights").items()) policy.weights[modality_from_name(name)] = w.get<double>();
  }
  if (j.contains("theta")) policy.theta = j.at("theta").get<double>();
  if (j.contains("staleness_max")) policy.staleness_max = j.at("staleness_max").get<Tick>();
  policy.validate();
  return policy;
}

}  // namespace fas

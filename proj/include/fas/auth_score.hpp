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

#include "fas/paillier.hpp"

namespace fas {

using Tick = std::int64_t;

enum class Modality { gait, location, heartbeat, custom };

const char* modality_name(Modality m);
Modality modality_from_name(std::string_view name);

struct ModalityReading {
  std::string device_id;
  Modality modality = Modality::custom;
  double score = 0.0;  // [0, 1]
  Tick timestamp = 0;
};

struct FusionPolicy {
  std::map<Modality, double> weights{
      {Modality::gait, 0.5}, {Modality::location, 0.3}, {Modality::heartbeat, 0.2}};
  double theta = 0.7;
  Tick staleness_max = 10;

  // Throws ParameterError on negative weights, no positive weight or theta outside [0, 1].
  void validate() const;
  double weight(Modality m) const;
};

enum class ScoreMode { local, cloud };

struct AuthScore {
  double value = 0.0;
  std::set<std::string> contributing;
  ScoreMode mode = ScoreMode::local;
};

// Readings that are not stale at `now`, grouped by modality. Readings with a
// timestamp more than staleness_max ticks old are dropped.
std::map<Modality, std::vector<const ModalityReading*>> fresh_readings_by_modality(
    std::span<const ModalityReading> readings, const FusionPolicy& policy, Tick now);

// Weighted mean over the modalities present, renormalised by the weights of
// those modalities. Several readings of one modality are averaged first.
// No usable reading gives 0.
AuthScore fuse_local(std::span<const ModalityReading> readings, const FusionPolicy& policy, Tick now);

// value >= theta; ties pass.
bool gate(const AuthScore& score, const FusionPolicy& policy);

// round-half-up(score * 100)
std::uint32_t quantize_score(double score);

// Policy weights scaled to integers (x1000, rounded); used by the encrypted path.
std::map<Modality, std::uint64_t> integer_weights(const FusionPolicy& policy);

// Homomorphic sum_m w_m * c_m over the modalities present in encrypted_scores.
// Throws ParameterError if the weights of those modalities sum to zero.
PheCiphertext fuse_encrypted(const std::map<Modality, PheCiphertext>& encrypted_scores,
                             const std::map<Modality, std::uint64_t>& weights, const PhePublicKey& key);

// Client side of the encrypted path: quantised per-modality means, encrypted.
std::map<Modality, PheCiphertext> encrypt_modality_scores(std::span<const ModalityReading> readings,
                                                          const FusionPolicy& policy, Tick now,
                                                          const PhePublicKey& key, Rng& rng);

// Divides a decrypted weighted total by 100 * sum of the weights of `present`.
double normalize_encrypted_total(const BigInt& total, const std::map<Modality, std::uint64_t>& weights,
                                 const std::set<Modality>& present);

void to_json(nlohmann::json& j, const ModalityReading& reading);
ModalityReading reading_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const FusionPolicy& policy);
FusionPolicy policy_from_json(const nlohmann::json& j);

}  // namespace fas

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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fas/auth_score.hpp"
#include "fas/fuzzy_extractor.hpp"
#include "fas/paillier.hpp"
#include "fas/sharing.hpp"
#include "fas/threshold_signature.hpp"

namespace fas {

inline constexpr std::string_view kProtocolVersion = "FAS-v1";
inline constexpr std::size_t kChallengeNonceBytes = 32;

enum class MessageType {
  AuthRequest,
  Challenge,
  ScoreRequest,
  SensorReading,
  ScoreResponse,
  HelperDelivery,
  SignRound1,
  SignRound2,
  AuthResponse,
  AuthResult,
};

const char* message_type_name(MessageType type);
MessageType message_type_from_name(std::string_view name);

// Bytes the user signs: UTF-8 "FAS-v1" || sp_id || nonce.
Bytes challenge_message_bytes(std::string_view sp_id, std::span<const std::uint8_t> nonce);

struct AuthRequestPayload {
  std::string user_id;
  std::string sp_id;
};

struct ChallengePayload {
  std::string sp_id;
  std::string user_id;
  Bytes nonce;
};

enum class ScoringMode { local, cloud_plain, cloud_encrypted };

const char* scoring_mode_name(ScoringMode mode);
ScoringMode scoring_mode_from_name(std::string_view name);

// Deliberately carries no service-provider identifier.
struct ScoreRequestPayload {
  std::string user_id;
  ScoringMode mode = ScoringMode::cloud_plain;
  std::vector<ModalityReading> readings;                // cloud_plain
  std::map<Modality, PheCiphertext> encrypted_scores;   // cloud_encrypted
  std::optional<BigInt> paillier_n;                     // cloud_encrypted
};

struct SensorReadingPayload {
  ModalityReading reading;
};

struct ScoreResponsePayload {
  std::string user_id;
  std::optional<double> value;
  std::optional<PheCiphertext> encrypted_total;
};

struct HelperDeliveryPayload {
  ShareIndex index = 0;
  HelperData helper;
  FeldmanCommitments commitments;
};

enum class RoundPhase { request, reply, failed };

const char* round_phase_name(RoundPhase phase);
RoundPhase round_phase_from_name(std::string_view name);

struct SignRound1Payload {
  RoundPhase phase = RoundPhase::request;
  ShareIndex index = 0;
  std::optional<GroupElement> commitment;  // reply
  std::string reason;                      // failed
};

struct SignRound2Payload {
  RoundPhase phase = RoundPhase::request;
  ShareIndex index = 0;
  std::optional<Scalar> challenge;  // request
  std::vector<ShareIndex> signer_set;
  std::optional<Scalar> response;  // reply
};

struct AuthResponsePayload {
  std::string user_id;
  std::string sp_id;
  Bytes nonce;
  Signature signature;
};

struct AuthResultPayload {
  bool granted = false;
  std::string reason;
};

using Payload = std::variant<AuthRequestPayload, ChallengePayload, ScoreRequestPayload, SensorReadingPayload,
                             ScoreResponsePayload, HelperDeliveryPayload, SignRound1Payload, SignRound2Payload,
                             AuthResponsePayload, AuthResultPayload>;

struct Message {
  std::string from;
  std::string to;
  std::string session;
  Payload payload;

  MessageType type() const;

  template <typename T>
  const T& as() const {
    return std::get<T>(payload);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(payload);
  }
};

// {"v":"FAS-v1","type":...,"from":...,"to":...,"session":...,"payload":...}
nlohmann::json message_to_json(const Message& message);
Message message_from_json(const nlohmann::json& j);
// Compact single-line form used for transcripts.
std::string message_to_line(const Message& message);

// True if the payload carries a behavioural score in the clear.
bool carries_plaintext_score(const Message& message);

}  // namespace fas

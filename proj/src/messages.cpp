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

#include "fas/messages.hpp"

namespace fas {

using nlohmann::json;

namespace {

constexpr std::pair<MessageType, const char*> kTypeNames[] = {
    {MessageType::AuthRequest, "AuthRequest"},     {MessageType::Challenge, "Challenge"},
    {MessageType::ScoreRequest, "ScoreRequest"},   {MessageType::SensorReading, "SensorReading"},
    {MessageType::ScoreResponse, "ScoreResponse"}, {MessageType::HelperDelivery, "HelperDelivery"},
    {MessageType::SignRound1, "SignRound1"},       {MessageType::SignRound2, "SignRound2"},
    {MessageType::AuthResponse, "AuthResponse"},   {MessageType::AuthResult, "AuthResult"},
};

json indices_to_json(const std::vector<ShareIndex>& indices) {
  json out = json::array();
  for (ShareIndex i : indices) out.push_back(i);
  return out;
}

}  // namespace

const char* message_type_name(MessageType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "?";
}

MessageType message_type_from_name(std::string_view name) {
  for (const auto& [t, n] : kTypeNames) {
    if (name == n) return t;
  }
  throw ParameterError("unknown message type '" + std::string(name) + "'");
}

Bytes challenge_message_bytes(std::string_view sp_id, std::span<const std::uint8_t> nonce) {
  Bytes out(kProtocolVersion.begin(), kProtocolVersion.end());
  out.insert(out.end(), sp_id.begin(), sp_id.end());
  out.insert(out.end(), nonce.begin(), nonce.end());
  return out;
}

const char* scoring_mode_name(ScoringMode mode) {
  switch (mode) {
    case ScoringMode::local:
      return "local";
    case ScoringMode::cloud_plain:
      return "cloud-plain";
    case ScoringMode::cloud_encrypted:
      return "cloud-encrypted";
  }
  return "local";
}

ScoringMode scoring_mode_from_name(std::string_view name) {
  if (name == "local" || name == "local-bypass") return ScoringMode::local;
  if (name == "cloud-plain") return ScoringMode::cloud_plain;
  if (name == "cloud-encrypted") return ScoringMode::cloud_encrypted;
  throw ParameterError("unknown scoring mode '" + std::string(name) + "'");
}

const char* round_phase_name(RoundPhase phase) {
  switch (phase) {
    case RoundPhase::request:
      return "request";
    case RoundPhase::reply:
      return "reply";
    case RoundPhase::failed:
      return "failed";
  }
  return "request";
}

RoundPhase round_phase_from_name(std::string_view name) {
  if (name == "request") return RoundPhase::request;
  if (name == "reply") return RoundPhase::reply;
  if (name == "failed") return RoundPhase::failed;
  throw ParameterError("unknown round phase '" + std::string(name) + "'");
}

MessageType Message::type() const { return static_cast<MessageType>(payload.index()); }

namespace {

struct PayloadWriter {
  json operator()(const AuthRequestPayload& p) const { return {{"user", p.user_id}, {"sp", p.sp_id}}; }

  json operator()(const ChallengePayload& p) const {
    return {{"sp", p.sp_id}, {"user", p.user_id}, {"nonce", bytes_to_hex(p.nonce)}};
  }

  json operator()(const ScoreRequestPayload& p) const {
    json out{{"user", p.user_id}, {"mode", scoring_mode_name(p.mode)}};
    if (p.mode == ScoringMode::cloud_encrypted) {
      json scores = json::object();
      for (const auto& [m, c] : p.encrypted_scores) scores[modality_name(m)] = ciphertext_to_hex(c);
      out["encrypted"] = scores;
      if (p.paillier_n) out["n"] = to_hex(*p.paillier_n);
    } else {
      out["readings"] = p.readings;
    }
    return out;
  }

  json operator()(const SensorReadingPayload& p) const { return {{"reading", p.reading}}; }

  json operator()(const ScoreResponsePayload& p) const {
    json out{{"user", p.user_id}};
    if (p.value) out["value"] = *p.value;
    if (p.encrypted_total) out["encrypted"] = ciphertext_to_hex(*p.encrypted_total);
    return out;
  }

  json operator()(const HelperDeliveryPayload& p) const {
    return {{"index", p.index}, {"helper", p.helper}, {"commitments", p.commitments}};
  }

  json operator()(const SignRound1Payload& p) const {
    json out{{"phase", round_phase_name(p.phase)}, {"index", p.index}};
    if (p.commitment) out["R"] = to_hex(p.commitment->value);
    if (!p.reason.empty()) out["reason"] = p.reason;
    return out;
  }

  json operator()(const SignRound2Payload& p) const {
    json out{{"phase", round_phase_name(p.phase)}, {"index", p.index}};
    if (p.challenge) out["c"] = to_hex(p.challenge->value);
    if (!p.signer_set.empty()) out["signers"] = indices_to_json(p.signer_set);
    if (p.response) out["s"] = to_hex(p.response->value);
    return out;
  }

  json operator()(const AuthResponsePayload& p) const {
    return {{"user", p.user_id}, {"sp", p.sp_id}, {"nonce", bytes_to_hex(p.nonce)}, {"signature", p.signature}};
  }

  json operator()(const AuthResultPayload& p) const {
    json out{{"granted", p.granted}};
    if (!p.reason.empty()) out["reason"] = p.reason;
    return out;
  }
};

Payload payload_from_json(MessageType type, const json& j) {
  switch (type) {
    case MessageType::AuthRequest:
      return AuthRequestPayload{j.at("user").get<std::string>(), j.at("sp").get<std::string>()};
    case MessageType::Challenge:
      return ChallengePayload{j.at("sp").get<std::string>(), j.at("user").get<std::string>(),
                              bytes_from_hex(j.at("nonce").get<std::string>())};
    case MessageType::ScoreRequest: {
      ScoreRequestPayload p;
      p.user_id = j.at("user").get<std::string>();
      p.mode = scoring_mode_from_name(j.at("mode").get<std::string>());
      if (j.contains("readings")) {
        for (const auto& r : j.at("readings")) p.readings.push_back(reading_from_json(r));
      }
      if (j.contains("encrypted")) {
        for (const auto& item : j.at("encrypted").items()) {
          p.encrypted_scores.emplace(modality_from_name(item.key()),
                                     PheCiphertext{bigint_from_hex(item.value().get<std::string>())});
        }
      }
      if (j.contains("n")) p.paillier_n = bigint_from_hex(j.at("n").get<std::string>());
      return p;
    }
    case MessageType::SensorReading:
      return SensorReadingPayload{reading_from_json(j.at("reading"))};
    case MessageType::ScoreResponse: {
      ScoreResponsePayload p;
      p.user_id = j.at("user").get<std::string>();
      if (j.contains("value")) p.value = j.at("value").get<double>();
      if (j.contains("encrypted")) p.encrypted_total = PheCiphertext{bigint_from_hex(j.at("encrypted").get<std::string>())};
      return p;
    }
    case MessageType::HelperDelivery: {
      HelperDeliveryPayload p;
      p.index = j.at("index").get<ShareIndex>();
      p.helper = helper_data_from_json(j.at("helper"));
      for (const auto& c : j.at("commitments")) {
        p.commitments.commitments.push_back(GroupElement{bigint_from_hex(c.get<std::string>())});
      }
      return p;
    }
    case MessageType::SignRound1: {
      SignRound1Payload p;
      p.phase = round_phase_from_name(j.at("phase").get<std::string>());
      p.index = j.at("index").get<ShareIndex>();
      if (j.contains("R")) p.commitment = GroupElement{bigint_from_hex(j.at("R").get<std::string>())};
      if (j.contains("reason")) p.reason = j.at("reason").get<std::string>();
      return p;
    }
    case MessageType::SignRound2: {
      SignRound2Payload p;
      p.phase = round_phase_from_name(j.at("phase").get<std::string>());
      p.index = j.at("index").get<ShareIndex>();
      if (j.contains("c")) p.challenge = Scalar{bigint_from_hex(j.at("c").get<std::string>())};
      if (j.contains("signers")) p.signer_set = j.at("signers").get<std::vector<ShareIndex>>();
      if (j.contains("s")) p.response = Scalar{bigint_from_hex(j.at("s").get<std::string>())};
      return p;
    }
    case MessageType::AuthResponse:
      return AuthResponsePayload{j.at("user").get<std::string>(), j.at("sp").get<std::string>(),
                                 bytes_from_hex(j.at("nonce").get<std::string>()),
                                 signature_from_json(j.at("signature"))};
    case MessageType::AuthResult: {
      AuthResultPayload p;
      p.granted = j.at("granted").get<bool>();
      if (j.contains("reason")) p.reason = j.at("reason").get<std::string>();
      return p;
    }
  }
  throw ParameterError("unhandled message type");
}

}  // namespace

json message_to_json(const Message& message) {
  return json{{"v", kProtocolVersion},
              {"type", message_type_name(message.type())},
              {"from", message.from},
              {"to", message.to},
              {"session", message.session},
              {"payload", std::visit(PayloadWriter{}, message.payload)}};
}

Message message_from_json(const json& j) {
  if (j.at("v").get<std::string>() != kProtocolVersion) throw ParameterError("message: unsupported protocol version");
  const MessageType type = message_type_from_name(j.at("type").get<std::string>());
  return Message{j.at("from").get<std::string>(), j.at("to").get<std::string>(), j.at("session").get<std::string>(),
                 payload_from_json(type, j.at("payload"))};
}

std::string message_to_line(const Message& message) { return message_to_json(message).dump(); }

bool carries_plaintext_score(const Message& message) {
  if (message.is<SensorReadingPayload>()) return true;
  if (message.is<ScoreResponsePayload>()) return message.as<ScoreResponsePayload>().value.has_value();
  if (message.is<ScoreRequestPayload>()) return !message.as<ScoreRequestPayload>().readings.empty();
  return false;
}

}  // namespace fas

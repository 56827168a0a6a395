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

#include <algorithm>

namespace fas {

const char* case_name(CaseStrategy c) {
  switch (c) {
    case CaseStrategy::case1:
      return "CASE1";
    case CaseStrategy::case2:
      return "CASE2";
    case CaseStrategy::case3:
      return "CASE3";
  }
  return "CASE2";
}

CaseStrategy case_from_name(std::string_view name) {
  if (name == "CASE1" || name == "1" || name == "case1") return CaseStrategy::case1;
  if (name == "CASE2" || name == "2" || name == "case2") return CaseStrategy::case2;
  if (name == "CASE3" || name == "3" || name == "case3") return CaseStrategy::case3;
  throw ParameterError("unknown case strategy '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- enrolment

namespace {

void wipe(DealerOutput& dealt) {
  for (KeyShare& s : dealt.shares) s.value.value = 0;
}

}  // namespace

Enrolment enroll(EnrolmentRequest request, const GroupParams& group, Rng& rng) {
  const PrimeField field = group.field();
  const CodeParams code = CodeParams::for_field(field, request.repetition);

  Enrolment out{SpRegistration{request.user_id, GroupPublicKey{group.identity(), group, {}}},
                PdEnrolment{request.user_id, request.pd_id, request.strategy,
                            GroupPublicKey{group.identity(), group, {}}, {}, {}, {}, {}, {}},
                {}};

  for (const EnrolmentDevice& d : request.devices) out.pd.device_ids[d.index] = d.id;

  if (request.strategy == CaseStrategy::case1) {
    const ThresholdParams single{0, 1};
    DealerOutput dealt = request.coefficients
                             ? keygen_from_polynomial(std::span(request.coefficients->data(), 1), single, group)
                             : keygen_dealer(single, group, rng);
    out.pd.public_key = dealt.public_key;
    out.pd.commitments = dealt.commitments;
    out.pd.whole_key = dealt.shares.front();
    for (const EnrolmentDevice& d : request.devices) {
      if (d.id != request.pd_id) out.dds.push_back(DdEnrolment{d.id, d.index, std::nullopt});
    }
    wipe(dealt);
    out.registration.public_key = out.pd.public_key;
    return out;
  }

  request.params.validate(field);
  if (request.devices.size() != request.params.n) {
    throw ParameterError("enrol: " + std::to_string(request.devices.size()) + " devices supplied, n = " +
                         std::to_string(request.params.n));
  }
  std::set<ShareIndex> indices;
  for (const EnrolmentDevice& d : request.devices) {
    if (d.index < 1 || d.index > request.params.n || !indices.insert(d.index).second) {
      throw ParameterError("enrol: device share indices must be exactly 1..n");
    }
  }

  DealerOutput dealt = request.coefficients ? keygen_from_polynomial(*request.coefficients, request.params, group)
                                            : keygen_dealer(request.params, group, rng);
  out.pd.public_key = dealt.public_key;
  out.pd.commitments = dealt.commitments;

  for (EnrolmentDevice& d : request.devices) {
    const KeyShare& share = dealt.shares.at(d.index - 1);
    if (d.id == request.pd_id) {
      out.pd.own_share = share;
      continue;
    }
    DdEnrolment dd{d.id, d.index, std::nullopt};
    if (request.strategy == CaseStrategy::case2) {
      dd.stored_share = share;
    } else {
      if (!d.enrolment_template) throw ParameterError("enrol: CASE3 device '" + d.id + "' has no enrolment template");
      BitString key_bits = scalar_to_bits(share.value, code.m);
      out.pd.helper_store[d.index] = fe_enroll_and_erase(key_bits, *d.enrolment_template, code);
      d.enrolment_template.reset();
    }
    out.dds.push_back(std::move(dd));
  }
  wipe(dealt);
  out.registration.public_key = out.pd.public_key;
  return out;
}

// ---------------------------------------------------------- service provider

ServiceProvider::ServiceProvider(std::string id, Rng& rng, ChallengeFn challenge, Tick nonce_lifetime)
    : id_(std::move(id)), rng_(&rng), challenge_(std::move(challenge)), nonce_lifetime_(nonce_lifetime) {}

void ServiceProvider::register_user(const SpRegistration& registration) {
  users_.insert_or_assign(registration.user_id, registration.public_key);
}

ChallengePayload ServiceProvider::issue_challenge(const std::string& user_id, Tick now) {
  if (!is_registered(user_id)) throw RegistrationError("sp: unknown user '" + user_id + "'");
  for (;;) {
    Bytes nonce = rng_->bytes(kChallengeNonceBytes);
    const std::string key = bytes_to_hex(nonce);
    if (nonces_.count(key) != 0) continue;
    nonces_.emplace(key, NonceEntry{user_id, now, false});
    return ChallengePayload{id_, user_id, std::move(nonce)};
  }
}

AuthResultPayload ServiceProvider::verify_response(const AuthResponsePayload& response, Tick now) {
  auto user = users_.find(response.user_id);
  if (user == users_.end()) return {false, reasons::kUnknownUser};
  auto entry = nonces_.find(bytes_to_hex(response.nonce));
  if (entry == nonces_.end() || entry->second.user_id != response.user_id) return {false, reasons::kUnknownNonce};
  if (entry->second.used) return {false, reasons::kReplay};
  entry->second.used = true;
  if (now - entry->second.issued > nonce_lifetime_) return {false, reasons::kExpired};
  const Bytes message = challenge_message_bytes(id_, response.nonce);
  if (!verify(user->second, message, response.signature, challenge_)) return {false, reasons::kSignature};
  return {true, {}};
}

std::vector<Message> ServiceProvider::handle(const Message& message, Tick now) {
  log_.push_back(message);
  std::vector<Message> out;
  if (message.is<AuthRequestPayload>()) {
    const auto& req = message.as<AuthRequestPayload>();
    if (!is_registered(req.user_id)) {
      out.push_back(Message{id_, message.from, message.session, AuthResultPayload{false, reasons::kUnknownUser}});
    } else {
      out.push_back(Message{id_, message.from, message.session, issue_challenge(req.user_id, now)});
    }
  } else if (message.is<AuthResponsePayload>()) {
    out.push_back(Message{id_, message.from, message.session, verify_response(message.as<AuthResponsePayload>(), now)});
  }
  for (const Message& m : out) log_.push_back(m);
  return out;
}

// ---------------------------------------------------------------------- FASP

void Fasp::set_policy(const std::string& user_id, const FusionPolicy& policy) {
  policy.validate();
  policies_.insert_or_assign(user_id, policy);
}

ScoreResponsePayload Fasp::score(const ScoreRequestPayload& request, Tick now) {
  auto it = policies_.find(request.user_id);
  if (it == policies_.end()) throw PolicyError("fasp: no fusion policy for user '" + request.user_id + "'");
  const FusionPolicy& policy = it->second;
  ScoreResponsePayload out{request.user_id, std::nullopt, std::nullopt};
  if (request.mode == ScoringMode::cloud_encrypted) {
    if (!request.paillier_n) throw ParameterError("fasp: encrypted request without public key");
    const PhePublicKey key = phe_public_key(*request.paillier_n);
    out.encrypted_total = fuse_encrypted(request.encrypted_scores, integer_weights(policy), key);
  } else {
    plaintext_scores_seen_ += request.readings.size();
    out.value = fuse_local(request.readings, policy, now).value;
  }
  return out;
}

std::vector<Message> Fasp::handle(const Message& message, Tick now) {
  std::vector<Message> out;
  if (!message.is<ScoreRequestPayload>()) return out;
  request_log_.push_back(message_to_json(message).at("payload"));
  out.push_back(Message{id_, message.from, message.session, score(message.as<ScoreRequestPayload>(), now)});
  return out;
}

// ---------------------------------------------------------------- dumb device

DumbDevice::DumbDevice(const DdEnrolment& enrolment, std::string pd_id, const GroupParams& group, Rng& rng)
    : id_(enrolment.id),
      index_(enrolment.index),
      pd_id_(std::move(pd_id)),
      group_(group),
      rng_(&rng),
      stored_share_(enrolment.stored_share) {
  if (stored_share_) persistent_signer_.emplace(*stored_share_, group_);
}

void DumbDevice::set_sensed_reading(Modality modality, double score) {
  if (!(score >= 0.0 && score <= 1.0)) throw ParameterError("reading: score outside [0, 1]");
  modality_ = modality;
  sensed_score_ = score;
}

Message DumbDevice::emit_reading(const std::string& session, Tick now) const {
  return Message{id_, pd_id_, session, SensorReadingPayload{ModalityReading{id_, modality_, sensed_score_, now}}};
}

Message DumbDevice::start_round1(const Message& request, bool transient) {
  ThresholdSigner& signer = transient ? *transient_signer_ : *persistent_signer_;
  std::optional<Scalar> injected = nonce_override_ ? nonce_override_(index_) : std::nullopt;
  const NonceCommitment c =
      injected ? signer.commit_with_nonce(request.session, *injected) : signer.commit(request.session, *rng_);
  return Message{id_, pd_id_, request.session, SignRound1Payload{RoundPhase::reply, index_, c.R, {}}};
}

std::vector<Message> DumbDevice::handle(const Message& message, Tick now) {
  (void)now;
  log_.push_back(message);
  std::vector<Message> out;
  auto fail = [&](MessageType type, const std::string& reason) {
    if (type == MessageType::SignRound2) {
      out.push_back(Message{id_, pd_id_, message.session, SignRound2Payload{RoundPhase::failed, index_, {}, {}, {}}});
    } else {
      out.push_back(Message{id_, pd_id_, message.session, SignRound1Payload{RoundPhase::failed, index_, {}, reason}});
    }
  };

  if (message.from != pd_id_) return out;  // dumb devices talk to their gateway only

  if (message.is<HelperDeliveryPayload>()) {
    const auto& delivery = message.as<HelperDeliveryPayload>();
    transient_signer_.reset();
    if (!sensed_template_) {
      fail(MessageType::SignRound1, "no-template");
    } else {
      try {
        BitString bits = fe_reproduce(*sensed_template_, delivery.helper);
        KeyShare share{index_, bits_to_scalar(bits, group_.field())};
        bits.wipe();
        if (!verify_share(share.as_share(), delivery.commitments, group_)) {
          share.value.value = 0;
          fail(MessageType::SignRound1, "share-mismatch");
        } else {
          transient_signer_.emplace(share, group_);
          share.value.value = 0;
          out.push_back(start_round1(message, true));
        }
      } catch (const CorruptedShareError&) {
        fail(MessageType::SignRound1, "corrupted-share");
      } catch (const ParameterError&) {
        fail(MessageType::SignRound1, "malformed-helper");
      }
    }
  } else if (message.is<SignRound1Payload>()) {
    if (message.as<SignRound1Payload>().phase == RoundPhase::request) {
      if (!stored_share_) {
        fail(MessageType::SignRound1, "no-share");
      } else {
        try {
          out.push_back(start_round1(message, false));
        } catch (const SessionError&) {
          fail(MessageType::SignRound1, "session-reuse");
        }
      }
    }
  } else if (message.is<SignRound2Payload>()) {
    const auto& req = message.as<SignRound2Payload>();
    ThresholdSigner* signer = transient_signer_ ? &*transient_signer_ : (persistent_signer_ ? &*persistent_signer_ : nullptr);
    if (req.phase == RoundPhase::request && signer != nullptr && req.challenge) {
      try {
        const PartialSignature p = signer->respond(message.session, *req.challenge, req.signer_set);
        out.push_back(Message{id_, pd_id_, message.session, SignRound2Payload{RoundPhase::reply, index_, {}, {}, p.s}});
      } catch (const Error&) {
        fail(MessageType::SignRound2, "round2");
      }
    } else {
      fail(MessageType::SignRound2, "round2");
    }
    transient_signer_.reset();
  }
  for (const Message& m : out) log_.push_back(m);
  return out;
}

nlohmann::json DumbDevice::persistent_state() const {
  nlohmann::json j{{"id", id_}, {"index", index_}};
  if (stored_share_) j["share"] = stored_share_->as_share();
  return j;
}

// ----------------------------------------------------------- personal device

PersonalDevice::PersonalDevice(PdEnrolment enrolment, PdOptions options, Rng& rng)
    : enrolment_(std::move(enrolment)), options_(std::move(options)), rng_(&rng) {
  options_.policy.validate();
  if (enrolment_.whole_key) {
    own_signer_.emplace(*enrolment_.whole_key, enrolment_.public_key.group);
  } else if (enrolment_.own_share) {
    own_signer_.emplace(*enrolment_.own_share, enrolment_.public_key.group);
  }
  if (options_.scoring == ScoringMode::cloud_encrypted) paillier_ = phe_keygen(options_.paillier_bits, rng);
}

const PdSession* PersonalDevice::session(const std::string& id) const {
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::vector<Message> PersonalDevice::sent(std::vector<Message> out) {
  for (const Message& m : out) log_.push_back(m);
  return out;
}

Message PersonalDevice::begin_authentication(const std::string& session, Tick now) {
  (void)now;
  if (sessions_.count(session) != 0) throw SessionError("pd: session '" + session + "' already exists");
  PdSession& s = sessions_[session];
  s.sp_id = options_.sp_id;
  Message m{id(), options_.sp_id, session, AuthRequestPayload{user_id(), options_.sp_id}};
  log_.push_back(m);
  return m;
}

std::vector<ShareIndex> PersonalDevice::live_share_holders(Tick now) const {
  std::set<ShareIndex> live;
  if (enrolment_.own_share) live.insert(enrolment_.own_share->index);
  for (const ModalityReading& r : readings_) {
    if (now - r.timestamp > options_.policy.staleness_max) continue;
    for (const auto& [index, device_id] : enrolment_.device_ids) {
      if (device_id == r.device_id && device_id != id()) live.insert(index);
    }
  }
  return {live.begin(), live.end()};
}

Message PersonalDevice::deny(const std::string& session, PdSession& s, const std::string& reason) {
  s.result = AuthResultPayload{false, reason};
  s.state = SessionState::done;
  return Message{id(), s.sp_id, session, AuthResultPayload{false, reason}};
}

std::vector<Message> PersonalDevice::handle(const Message& message, Tick now) {
  log_.push_back(message);
  if (message.is<SensorReadingPayload>()) {
    bool known = false;
    for (const auto& [index, device_id] : enrolment_.device_ids) known = known || device_id == message.from;
    const ModalityReading& r = message.as<SensorReadingPayload>().reading;
    if (known && r.device_id == message.from) {
      readings_.push_back(r);
    } else {
      ++ignored_;
    }
    return {};
  }

  auto it = sessions_.find(message.session);
  if (it == sessions_.end()) {
    ++ignored_;
    return {};
  }
  PdSession& s = it->second;

  if (message.is<ChallengePayload>() && s.state == SessionState::awaiting_challenge && message.from == s.sp_id) {
    return sent(on_challenge(message, s, now));
  }
  if (message.is<ScoreResponsePayload>() && s.state == SessionState::awaiting_score &&
      message.from == options_.fasp_id) {
    return sent(on_score(message, s, now));
  }
  if (message.is<SignRound1Payload>() && s.state == SessionState::round1) {
    const auto& p = message.as<SignRound1Payload>();
    auto dev = enrolment_.device_ids.find(p.index);
    if (dev != enrolment_.device_ids.end() && dev->second == message.from && s.awaiting_round1.count(p.index) != 0) {
      return sent(on_round1(message, s, now));
    }
  }
  if (message.is<SignRound2Payload>() && s.state == SessionState::round2) {
    const auto& p = message.as<SignRound2Payload>();
    auto dev = enrolment_.device_ids.find(p.index);
    if (dev != enrolment_.device_ids.end() && dev->second == message.from) return sent(on_round2(message, s, now));
  }
  if (message.is<AuthResultPayload>() && message.from == s.sp_id) {
    s.result = message.as<AuthResultPayload>();
    s.state = SessionState::done;
    return {};
  }
  ++ignored_;
  return {};
}

std::vector<Message> PersonalDevice::on_challenge(const Message& m, PdSession& s, Tick now) {
  const auto& challenge = m.as<ChallengePayload>();
  s.nonce = challenge.nonce;
  s.message = challenge_message_bytes(challenge.sp_id, challenge.nonce);

  switch (options_.scoring) {
    case ScoringMode::local:
      s.score = fuse_local(readings_, options_.policy, now);
      return after_score(m.session, s, now);
    case ScoringMode::cloud_plain: {
      ScoreRequestPayload req{user_id(), ScoringMode::cloud_plain, {}, {}, std::nullopt};
      for (const ModalityReading& r : readings_) {
        if (now - r.timestamp <= options_.policy.staleness_max) req.readings.push_back(r);
      }
      s.state = SessionState::awaiting_score;
      return {Message{id(), options_.fasp_id, m.session, std::move(req)}};
    }
    case ScoringMode::cloud_encrypted: {
      const PhePublicKey& key = paillier_->public_key;
      ScoreRequestPayload req{user_id(), ScoringMode::cloud_encrypted, {}, {}, key.n};
      req.encrypted_scores = encrypt_modality_scores(readings_, options_.policy, now, key, *rng_);
      if (req.encrypted_scores.empty()) {
        s.score = AuthScore{0.0, {}, ScoreMode::cloud};
        return after_score(m.session, s, now);
      }
      for (const auto& [modality, c] : req.encrypted_scores) s.encrypted_modalities.insert(modality);
      s.state = SessionState::awaiting_score;
      return {Message{id(), options_.fasp_id, m.session, std::move(req)}};
    }
  }
  return {};
}

std::vector<Message> PersonalDevice::on_score(const Message& m, PdSession& s, Tick now) {
  const auto& resp = m.as<ScoreResponsePayload>();
  AuthScore score;
  score.mode = ScoreMode::cloud;
  for (const ModalityReading& r : readings_) {
    if (now - r.timestamp <= options_.policy.staleness_max) score.contributing.insert(r.device_id);
  }
  if (options_.scoring == ScoringMode::cloud_encrypted) {
    // A plaintext answer to an encrypted request is not trusted.
    if (!resp.encrypted_total) {
      ++ignored_;
      return {};
    }
    const BigInt total = phe_decrypt(*resp.encrypted_total, *paillier_);
    score.value = normalize_encrypted_total(total, integer_weights(options_.policy), s.encrypted_modalities);
  } else {
    if (!resp.value) {
      ++ignored_;
      return {};
    }
    score.value = std::clamp(*resp.value, 0.0, 1.0);
  }
  s.score = score;
  return after_score(m.session, s, now);
}

std::vector<Message> PersonalDevice::after_score(const std::string& session, PdSession& s, Tick now) {
  if (!gate(*s.score, options_.policy)) return {deny(session, s, reasons::kScore)};

  if (enrolment_.strategy == CaseStrategy::case1) {
    const ShareIndex index = enrolment_.whole_key->index;
    std::optional<Scalar> injected = options_.own_nonce_override ? options_.own_nonce_override(index) : std::nullopt;
    s.commitments.push_back(injected ? own_signer_->commit_with_nonce(session, *injected)
                                     : own_signer_->commit(session, *rng_));
    s.state = SessionState::round2;
    s.signer_set = {index};
    const GroupParams& group = public_key().group;
    const Scalar c = options_.challenge(aggregate_nonce(s.commitments, group), public_key().y, s.message, group);
    s.partials.push_back(own_signer_->respond(session, c, s.signer_set));
    return finish(session, s);
  }

  s.candidates = live_share_holders(now);
  if (s.candidates.size() < public_key().params.quorum()) return {deny(session, s, reasons::kInsufficientDevices)};
  s.state = SessionState::round1;
  return request_more_signers(session, s, now);
}

std::vector<Message> PersonalDevice::request_more_signers(const std::string& session, PdSession& s, Tick now) {
  (void)now;
  std::vector<Message> out;
  const std::size_t quorum = public_key().params.quorum();
  while (s.commitments.size() + s.awaiting_round1.size() < quorum && s.next_candidate < s.candidates.size()) {
    const ShareIndex index = s.candidates[s.next_candidate++];
    if (enrolment_.own_share && index == enrolment_.own_share->index) {
      std::optional<Scalar> injected = options_.own_nonce_override ? options_.own_nonce_override(index) : std::nullopt;
      s.commitments.push_back(injected ? own_signer_->commit_with_nonce(session, *injected)
                                       : own_signer_->commit(session, *rng_));
      continue;
    }
    const std::string& device = enrolment_.device_ids.at(index);
    if (enrolment_.strategy == CaseStrategy::case3) {
      out.push_back(Message{id(), device, session,
                            HelperDeliveryPayload{index, enrolment_.helper_store.at(index), enrolment_.commitments}});
    } else {
      out.push_back(Message{id(), device, session, SignRound1Payload{RoundPhase::request, index, {}, {}}});
    }
    s.awaiting_round1.insert(index);
    ++s.signing_messages;
  }
  if (s.commitments.size() == quorum) {
    auto round2 = start_round2(session, s);
    out.insert(out.end(), std::make_move_iterator(round2.begin()), std::make_move_iterator(round2.end()));
  } else if (s.awaiting_round1.empty()) {
    out.push_back(deny(session, s, reasons::kInsufficientDevices));
  }
  return out;
}

std::vector<Message> PersonalDevice::on_round1(const Message& m, PdSession& s, Tick now) {
  const auto& p = m.as<SignRound1Payload>();
  s.awaiting_round1.erase(p.index);
  if (p.phase == RoundPhase::reply && p.commitment && public_key().group.contains(p.commitment->value)) {
    s.commitments.push_back(NonceCommitment{p.index, *p.commitment, m.session});
  }
  return request_more_signers(m.session, s, now);
}

std::vector<Message> PersonalDevice::start_round2(const std::string& session, PdSession& s) {
  s.state = SessionState::round2;
  s.signer_set.clear();
  for (const NonceCommitment& c : s.commitments) s.signer_set.push_back(c.index);
  std::sort(s.signer_set.begin(), s.signer_set.end());
  const GroupParams& group = public_key().group;
  const Scalar c = options_.challenge(aggregate_nonce(s.commitments, group), public_key().y, s.message, group);

  std::vector<Message> out;
  for (ShareIndex index : s.signer_set) {
    if (enrolment_.own_share && index == enrolment_.own_share->index) {
      s.partials.push_back(own_signer_->respond(session, c, s.signer_set));
      continue;
    }
    out.push_back(Message{id(), enrolment_.device_ids.at(index), session,
                          SignRound2Payload{RoundPhase::request, index, c, s.signer_set, std::nullopt}});
    ++s.signing_messages;
  }
  if (s.partials.size() == s.signer_set.size()) {
    auto done = finish(session, s);
    out.insert(out.end(), std::make_move_iterator(done.begin()), std::make_move_iterator(done.end()));
  }
  return out;
}

std::vector<Message> PersonalDevice::on_round2(const Message& m, PdSession& s, Tick now) {
  (void)now;
  const auto& p = m.as<SignRound2Payload>();
  if (std::find(s.signer_set.begin(), s.signer_set.end(), p.index) == s.signer_set.end()) return {};
  for (const PartialSignature& existing : s.partials) {
    if (existing.index == p.index) return {};
  }
  if (p.phase != RoundPhase::reply || !p.response) return {deny(m.session, s, reasons::kInvalidPartial)};
  s.partials.push_back(PartialSignature{p.index, *p.response, m.session});
  if (s.partials.size() < s.signer_set.size()) return {};
  return finish(m.session, s);
}

std::vector<Message> PersonalDevice::finish(const std::string& session, PdSession& s) {
  try {
    s.signature = combine(s.commitments, s.partials, public_key(), s.message, options_.challenge);
  } catch (const InvalidPartialError&) {
    return {deny(session, s, reasons::kInvalidPartial)};
  } catch (const ParameterError&) {
    return {deny(session, s, reasons::kInvalidPartial)};
  }
  s.state = SessionState::awaiting_result;
  return {Message{id(), s.sp_id, session, AuthResponsePayload{user_id(), s.sp_id, s.nonce, *s.signature}}};
}

nlohmann::json PersonalDevice::persistent_state() const {
  nlohmann::json j{{"id", id()},
                   {"user", user_id()},
                   {"case", case_name(strategy())},
                   {"public_key", to_hex(public_key().y.value)},
                   {"commitments", commitments()}};
  if (enrolment_.whole_key) j["whole_key"] = enrolment_.whole_key->as_share();
  if (enrolment_.own_share) j["own_share"] = enrolment_.own_share->as_share();
  nlohmann::json helpers = nlohmann::json::object();
  for (const auto& [index, hd] : enrolment_.helper_store) helpers[std::to_string(index)] = hd;
  j["helper_data"] = helpers;
  return j;
}

// ------------------------------------------------------------------ network

void Network::attach(const std::string& id, Handler handler) { handlers_[id] = std::move(handler); }

void Network::send(Message message) {
  if (interceptor_) {
    std::optional<Message> passed = interceptor_(std::move(message));
    if (!passed) return;
    message = std::move(*passed);
  }
  for (const Observer& o : observers_) o(message);
  queue_.push_back(Pending{now_ + 1, seq_++, std::move(message)});
}

void Network::send_all(std::vector<Message> messages) {
  for (Message& m : messages) send(std::move(m));
}

Tick Network::run(Tick max_ticks) {
  const Tick limit = now_ + max_ticks;
  while (!queue_.empty()) {
    // Sends always schedule at now + 1, so the deque stays sorted by (due, seq).
    Pending next = std::move(queue_.front());
    queue_.pop_front();
    if (next.due > limit) throw InvariantViolation("network: tick budget exhausted");
    now_ = std::max(now_, next.due);
    transcript_.push_back(next.message);
    auto it = handlers_.find(next.message.to);
    if (it == handlers_.end()) continue;
    send_all(it->second(next.message, now_));
  }
  return now_;
}

// ---------------------------------------------------------------- deployment

namespace {

EnrolmentRequest deployment_request(const DeploymentConfig& config, std::map<ShareIndex, Template> templates) {
  EnrolmentRequest request;
  request.strategy = config.strategy;
  request.params = config.params;
  request.repetition = config.repetition;
  request.coefficients = config.coefficients;
  for (ShareIndex i = 1; i <= config.params.n; ++i) {
    EnrolmentDevice d;
    d.index = i;
    d.id = (config.pd_holds_share && i == 1) ? request.pd_id : "dd" + std::to_string(i);
    auto tpl = templates.find(i);
    if (tpl != templates.end()) d.enrolment_template = std::move(tpl->second);
    request.devices.push_back(std::move(d));
  }
  return request;
}

}  // namespace

Deployment::Deployment(DeploymentConfig config, const GroupParams& group, Rng& rng,
                       std::map<ShareIndex, Template> enrolment_templates)
    : config_(std::move(config)),
      enrolment_(enroll(deployment_request(config_, std::move(enrolment_templates)), group, rng)) {
  PdOptions options;
  options.scoring = config_.scoring;
  options.policy = config_.policy;
  options.paillier_bits = config_.paillier_bits;
  options.challenge = config_.challenge;
  pd_ = std::make_unique<PersonalDevice>(enrolment_.pd, options, rng);
  sp_ = std::make_unique<ServiceProvider>(options.sp_id, rng, config_.challenge);
  sp_->register_user(enrolment_.registration);
  fasp_ = std::make_unique<Fasp>(options.fasp_id);
  fasp_->set_policy(enrolment_.registration.user_id, config_.policy);
  for (const DdEnrolment& d : enrolment_.dds) {
    dds_.push_back(std::make_unique<DumbDevice>(d, pd_->id(), group, rng));
  }

  network_.attach(pd_->id(), [this](const Message& m, Tick now) { return pd_->handle(m, now); });
  network_.attach(sp_->id(), [this](const Message& m, Tick now) { return sp_->handle(m, now); });
  network_.attach(fasp_->id(), [this](const Message& m, Tick now) { return fasp_->handle(m, now); });
  for (auto& dd : dds_) {
    DumbDevice* device = dd.get();
    network_.attach(device->id(), [device](const Message& m, Tick now) { return device->handle(m, now); });
  }
}

DumbDevice* Deployment::dd(ShareIndex index) {
  for (auto& d : dds_) {
    if (d->index() == index) return d.get();
  }
  return nullptr;
}

std::string Deployment::authenticate(const std::set<ShareIndex>& present) {
  const std::string session = "s" + std::to_string(++session_counter_);
  const Tick now = network_.now();
  for (auto& d : dds_) {
    if (present.count(d->index()) != 0) network_.send(d->emit_reading(session, now));
  }
  network_.send(pd_->begin_authentication(session, now));
  network_.run();
  return session;
}

std::optional<AuthResultPayload> Deployment::outcome(const std::string& session) const {
  const PdSession* s = pd_->session(session);
  if (s == nullptr) return std::nullopt;
  return s->result;
}

}  // namespace fas

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

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fas/auth_score.hpp"
#include "fas/fuzzy_extractor.hpp"
#include "fas/messages.hpp"
#include "fas/paillier.hpp"
#include "fas/random.hpp"
#include "fas/sharing.hpp"
#include "fas/threshold_signature.hpp"

namespace fas {

// CASE1: whole key on the gateway PD.
// CASE2: threshold signing with a key share persisted on every device.
// CASE3: threshold signing; dumb devices regenerate their share from a fuzzy
//        extractor and persist nothing.
enum class CaseStrategy { case1, case2, case3 };

const char* case_name(CaseStrategy c);
CaseStrategy case_from_name(std::string_view name);

inline constexpr Tick kDefaultNonceLifetime = 100;

namespace reasons {
inline constexpr const char* kScore = "score";
inline constexpr const char* kInsufficientDevices = "insufficient-devices";
inline constexpr const char* kInvalidPartial = "invalid-partial";
inline constexpr const char* kSignature = "signature";
inline constexpr const char* kReplay = "replay";
inline constexpr const char* kExpired = "expired";
inline constexpr const char* kUnknownNonce = "unknown-nonce";
inline constexpr const char* kUnknownUser = "unknown-user";
}  // namespace reasons

// ---------------------------------------------------------------- enrolment

struct EnrolmentDevice {
  std::string id;
  ShareIndex index = 0;
  std::optional<Template> enrolment_template;  // CASE3 dumb devices only
};

struct SpRegistration {
  std::string user_id;
  GroupPublicKey public_key;
};

struct PdEnrolment {
  std::string user_id;
  std::string id;
  CaseStrategy strategy = CaseStrategy::case2;
  GroupPublicKey public_key;
  FeldmanCommitments commitments;
  std::optional<KeyShare> whole_key;  // CASE1
  std::optional<KeyShare> own_share;  // CASE2/3 when the gateway is a share holder
  std::map<ShareIndex, HelperData> helper_store;  // CASE3
  std::map<ShareIndex, std::string> device_ids;
};

struct DdEnrolment {
  std::string id;
  ShareIndex index = 0;
  std::optional<KeyShare> stored_share;  // CASE2 only
};

struct Enrolment {
  SpRegistration registration;
  PdEnrolment pd;
  std::vector<DdEnrolment> dds;
};

struct EnrolmentRequest {
  std::string user_id = "user";
  std::string pd_id = "pd";
  CaseStrategy strategy = CaseStrategy::case2;
  ThresholdParams params;
  // One entry per share holder. An entry whose id equals pd_id gives the
  // gateway itself a share. CASE1 ignores share indices.
  std::vector<EnrolmentDevice> devices;
  std::size_t repetition = 5;
  // Known-answer hook: explicit polynomial instead of dealer randomness.
  std::optional<std::vector<Scalar>> coefficients;
};

// Trusted-dealer enrolment run by the gateway PD. Throws ParameterError when
// the device count does not match n or a CASE3 device lacks a template.
Enrolment enroll(EnrolmentRequest request, const GroupParams& group, Rng& rng);

// ----------------------------------------------------------------- entities

class ServiceProvider {
 public:
  ServiceProvider(std::string id, Rng& rng, ChallengeFn challenge = default_challenge(),
                  Tick nonce_lifetime = kDefaultNonceLifetime);

  const std::string& id() const { return id_; }

  void register_user(const SpRegistration& registration);
  bool is_registered(const std::string& user_id) const { return users_.count(user_id) != 0; }

  // Throws RegistrationError for unknown users.
  ChallengePayload issue_challenge(const std::string& user_id, Tick now);
  // Grants iff the signature verifies and the nonce is cached, unexpired and
  // unused. Every nonce is consumed by its first verification attempt.
  AuthResultPayload verify_response(const AuthResponsePayload& response, Tick now);

  std::vector<Message> handle(const Message& message, Tick now);

  std::size_t cached_nonces() const { return nonces_.size(); }
  const std::vector<Message>& audit_log() const { return log_; }

 private:
  struct NonceEntry {
    std::string user_id;
    Tick issued = 0;
    bool used = false;
  };

  std::string id_;
  Rng* rng_;
  ChallengeFn challenge_;
  Tick nonce_lifetime_;
  std::map<std::string, GroupPublicKey> users_;
  std::map<std::string, NonceEntry> nonces_;  // keyed by nonce hex
  std::vector<Message> log_;
};

class Fasp {
 public:
  explicit Fasp(std::string id = "fasp") : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  void set_policy(const std::string& user_id, const FusionPolicy& policy);

  // Throws PolicyError when no policy is registered for the user.
  ScoreResponsePayload score(const ScoreRequestPayload& request, Tick now);
  std::vector<Message> handle(const Message& message, Tick now);

  // Count of plaintext score values that ever reached this entity.
  std::size_t plaintext_scores_seen() const { return plaintext_scores_seen_; }
  // Every request payload as received, for state inspection.
  const std::vector<nlohmann::json>& request_log() const { return request_log_; }

 private:
  std::string id_;
  std::map<std::string, FusionPolicy> policies_;
  std::size_t plaintext_scores_seen_ = 0;
  std::vector<nlohmann::json> request_log_;
};

// Signing-nonce injection used by known-answer tests.
using NonceOverride = std::function<std::optional<Scalar>(ShareIndex)>;

class DumbDevice {
 public:
  DumbDevice(const DdEnrolment& enrolment, std::string pd_id, const GroupParams& group, Rng& rng);

  const std::string& id() const { return id_; }
  ShareIndex index() const { return index_; }

  // What the sensor currently observes.
  void set_sensed_template(Template fresh) { sensed_template_ = std::move(fresh); }
  void set_sensed_reading(Modality modality, double score);
  Message emit_reading(const std::string& session, Tick now) const;

  void set_nonce_override(NonceOverride override) { nonce_override_ = std::move(override); }

  std::vector<Message> handle(const Message& message, Tick now);

  // Persistent share material (CASE2 stored share).
  bool persists_share() const { return stored_share_.has_value(); }
  // Any share material at all, persistent or transient.
  bool holds_share_material() const { return stored_share_.has_value() || transient_signer_.has_value(); }
  // Persistent state as it would be written to storage.
  nlohmann::json persistent_state() const;
  const std::vector<Message>& audit_log() const { return log_; }

 private:
  Message start_round1(const Message& request, bool transient);

  std::string id_;
  ShareIndex index_;
  std::string pd_id_;
  GroupParams group_;
  Rng* rng_;
  std::optional<KeyShare> stored_share_;
  std::optional<ThresholdSigner> persistent_signer_;
  std::optional<ThresholdSigner> transient_signer_;
  std::optional<Template> sensed_template_;
  Modality modality_ = Modality::custom;
  double sensed_score_ = 0.0;
  NonceOverride nonce_override_;
  std::vector<Message> log_;
};

struct PdOptions {
  std::string sp_id = "sp";
  std::string fasp_id = "fasp";
  ScoringMode scoring = ScoringMode::local;
  FusionPolicy policy;
  std::size_t paillier_bits = 256;
  ChallengeFn challenge = default_challenge();
  NonceOverride own_nonce_override;
};

enum class SessionState {
  awaiting_challenge,
  awaiting_score,
  round1,
  round2,
  awaiting_result,
  done,
};

struct PdSession {
  SessionState state = SessionState::awaiting_challenge;
  std::string sp_id;
  Bytes nonce;
  Bytes message;
  std::optional<AuthScore> score;
  std::set<Modality> encrypted_modalities;
  std::vector<ShareIndex> candidates;
  std::size_t next_candidate = 0;
  std::set<ShareIndex> awaiting_round1;
  std::vector<NonceCommitment> commitments;
  std::vector<ShareIndex> signer_set;
  std::vector<PartialSignature> partials;
  std::optional<Signature> signature;
  std::optional<AuthResultPayload> result;
  std::size_t signing_messages = 0;
};

class PersonalDevice {
 public:
  PersonalDevice(PdEnrolment enrolment, PdOptions options, Rng& rng);

  const std::string& id() const { return enrolment_.id; }
  const std::string& user_id() const { return enrolment_.user_id; }
  CaseStrategy strategy() const { return enrolment_.strategy; }
  const GroupPublicKey& public_key() const { return enrolment_.public_key; }
  const FeldmanCommitments& commitments() const { return enrolment_.commitments; }
  const std::map<ShareIndex, HelperData>& helper_store() const { return enrolment_.helper_store; }
  const PdOptions& options() const { return options_; }

  // The PD's own sensor contribution, buffered without a message.
  void add_own_reading(const ModalityReading& reading) { readings_.push_back(reading); }
  const std::vector<ModalityReading>& reading_buffer() const { return readings_; }

  Message begin_authentication(const std::string& session, Tick now);
  std::vector<Message> handle(const Message& message, Tick now);

  const PdSession* session(const std::string& id) const;
  bool holds_whole_key() const { return enrolment_.whole_key.has_value(); }
  std::optional<PheKeypair>& paillier() { return paillier_; }
  nlohmann::json persistent_state() const;
  std::size_t ignored_messages() const { return ignored_; }
  const std::vector<Message>& audit_log() const { return log_; }

 private:
  std::vector<Message> on_challenge(const Message& m, PdSession& s, Tick now);
  std::vector<Message> on_score(const Message& m, PdSession& s, Tick now);
  std::vector<Message> after_score(const std::string& session, PdSession& s, Tick now);
  std::vector<Message> on_round1(const Message& m, PdSession& s, Tick now);
  std::vector<Message> on_round2(const Message& m, PdSession& s, Tick now);
  std::vector<Message> request_more_signers(const std::string& session, PdSession& s, Tick now);
  std::vector<Message> start_round2(const std::string& session, PdSession& s);
  std::vector<Message> finish(const std::string& session, PdSession& s);
  Message deny(const std::string& session, PdSession& s, const std::string& reason);
  std::vector<ShareIndex> live_share_holders(Tick now) const;
  std::vector<Message> sent(std::vector<Message> out);

  PdEnrolment enrolment_;
  PdOptions options_;
  Rng* rng_;
  std::optional<ThresholdSigner> own_signer_;
  std::optional<PheKeypair> paillier_;
  std::vector<ModalityReading> readings_;
  std::map<std::string, PdSession> sessions_;
  std::size_t ignored_ = 0;
  std::vector<Message> log_;
};

// ------------------------------------------------------------------ network

// Lossless, ordered logical-tick network. Every hop takes one tick; messages
// due on the same tick are delivered in send order.
class Network {
 public:
  using Handler = std::function<std::vector<Message>(const Message&, Tick)>;
  // Returns the (possibly modified) message, or nullopt to drop it.
  using Interceptor = std::function<std::optional<Message>(Message)>;
  using Observer = std::function<void(const Message&)>;

  void attach(const std::string& id, Handler handler);
  void set_interceptor(Interceptor interceptor) { interceptor_ = std::move(interceptor); }
  void add_observer(Observer observer) { observers_.push_back(std::move(observer)); }

  void send(Message message);
  void send_all(std::vector<Message> messages);
  // Delivers until the queue drains or max_ticks elapse; returns the final tick.
  Tick run(Tick max_ticks = 100000);

  Tick now() const { return now_; }
  void advance(Tick ticks) { now_ += ticks; }
  const std::vector<Message>& transcript() const { return transcript_; }

 private:
  struct Pending {
    Tick due;
    std::uint64_t seq;
    Message message;
  };

  std::map<std::string, Handler> handlers_;
  Interceptor interceptor_;
  std::vector<Observer> observers_;
  std::deque<Pending> queue_;
  std::uint64_t seq_ = 0;
  Tick now_ = 0;
  std::vector<Message> transcript_;
};

// ---------------------------------------------------------------- deployment

// One user's devices plus an SP and a FASP wired to a network.
struct DeploymentConfig {
  CaseStrategy strategy = CaseStrategy::case2;
  ThresholdParams params{1, 3};
  bool pd_holds_share = false;
  ScoringMode scoring = ScoringMode::local;
  FusionPolicy policy;
  std::size_t repetition = 5;
  std::size_t paillier_bits = 256;
  ChallengeFn challenge = default_challenge();
  std::optional<std::vector<Scalar>> coefficients;
};

class Deployment {
 public:
  // Enrols the user. `enrolment_templates` maps share index to template and is
  // required for CASE3 dumb devices.
  Deployment(DeploymentConfig config, const GroupParams& group, Rng& rng,
             std::map<ShareIndex, Template> enrolment_templates = {});

  PersonalDevice& pd() { return *pd_; }
  ServiceProvider& sp() { return *sp_; }
  Fasp& fasp() { return *fasp_; }
  Network& network() { return network_; }
  std::vector<std::unique_ptr<DumbDevice>>& dds() { return dds_; }
  DumbDevice* dd(ShareIndex index);
  const Enrolment& enrolment_record() const { return enrolment_; }

  // Device readings are pushed at the current tick (for devices in `present`),
  // then the PD runs one authentication against the SP. Returns the session id.
  std::string authenticate(const std::set<ShareIndex>& present);

  // Outcome reported by the SP (or the PD's own abort) for a session.
  std::optional<AuthResultPayload> outcome(const std::string& session) const;

 private:
  DeploymentConfig config_;
  Enrolment enrolment_;
  std::unique_ptr<PersonalDevice> pd_;
  std::unique_ptr<ServiceProvider> sp_;
  std::unique_ptr<Fasp> fasp_;
  std::vector<std::unique_ptr<DumbDevice>> dds_;
  Network network_;
  std::uint64_t session_counter_ = 0;
};

}  // namespace fas

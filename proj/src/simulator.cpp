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

#include <algorithm>

#include "fas/algebra.hpp"
#include "fas/random.hpp"

namespace fas {

using nlohmann::json;

namespace {

constexpr const char* kAdversaryId = "adv";

constexpr std::pair<AdversaryKind, const char*> kAdversaryNames[] = {
    {AdversaryKind::none, "none"},
    {AdversaryKind::stolen, "stolen"},
    {AdversaryKind::tamper_partial, "tamper_partial"},
    {AdversaryKind::replay, "replay"},
    {AdversaryKind::eavesdrop, "eavesdrop"},
    {AdversaryKind::score_inflate, "score_inflate"},
};

constexpr Modality kModalityCycle[] = {Modality::gait, Modality::location, Modality::heartbeat};

Modality modality_for(ShareIndex index) { return kModalityCycle[(index - 1) % 3]; }

}  // namespace

const char* adversary_name(AdversaryKind kind) {
  for (const auto& [k, name] : kAdversaryNames) {
    if (k == kind) return name;
  }
  return "none";
}

AdversaryKind adversary_from_name(std::string_view name) {
  for (const auto& [k, n] : kAdversaryNames) {
    if (name == n) return k;
  }
  throw ParameterError("unknown adversary '" + std::string(name) + "'");
}

// ------------------------------------------------------------------ config

std::set<ShareIndex> ScenarioConfig::present_devices() const {
  if (!present.empty()) return present;
  std::set<ShareIndex> all;
  for (ShareIndex i = 1; i <= params.n; ++i) all.insert(i);
  return all;
}

bool ScenarioConfig::adversarial() const {
  return impostor || (adversary.kind != AdversaryKind::none && adversary.kind != AdversaryKind::eavesdrop);
}

void ScenarioConfig::validate() const {
  if (params.n < 1) throw ConfigError("n", "must be at least 1");
  if (params.t + 1 > params.n) throw ConfigError("t", "t + 1 must not exceed n");
  const GroupParams* g = nullptr;
  try {
    g = &groups::by_name(group);
  } catch (const ParameterError& e) {
    throw ConfigError("group", e.what());
  }
  if (BigInt(params.n) >= g->q()) throw ConfigError("n", "must be below the group order");
  for (ShareIndex i : present) {
    if (i < 1 || i > params.n) throw ConfigError("present", "index " + std::to_string(i) + " outside 1..n");
  }
  if (!(p_flip >= 0.0 && p_flip <= 0.5)) throw ConfigError("p_flip", "must lie in [0, 0.5]");
  const std::size_t dumb = params.n - (pd_holds_share ? 1 : 0);
  if (adversary.stolen_k > dumb) throw ConfigError("adversary.k", "exceeds the number of dumb devices");
  if (repetition == 0 || repetition % 2 == 0) throw ConfigError("repetition", "must be odd");
  if (paillier_bits < 32) throw ConfigError("paillier_bits", "must be at least 32");
  auto check_range = [](const char* field, double low, double high) {
    if (!(low >= 0.0 && high <= 1.0 && low <= high)) throw ConfigError(field, "range must satisfy 0 <= low <= high <= 1");
  };
  check_range("score_model.genuine", score_model.genuine_low, score_model.genuine_high);
  check_range("score_model.impostor", score_model.impostor_low, score_model.impostor_high);
  if (!scores.empty() && scores.size() != params.n) throw ConfigError("scores", "expected one score per device");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) throw ConfigError("scores[" + std::to_string(i) + "]", "outside [0, 1]");
  }
  try {
    policy.validate();
  } catch (const Error& e) {
    throw ConfigError("policy", e.what());
  }
}

namespace {

template <typename T>
T field_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
}

std::pair<double, double> range_from_json(const json& j, const std::string& path) {
  const auto values = field_as<std::vector<double>>(j, path);
  if (values.size() != 2) throw ConfigError(path, "expected [low, high]");
  return {values[0], values[1]};
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "$" : path, "expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
  }
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
  check_keys(j, "",
             {"case", "t", "n", "present", "pd_holds_share", "p_flip", "impostor", "adversary", "policy", "scoring",
              "score_model", "scores", "group", "repetition", "paillier_bits", "seed", "trials"});
  ScenarioConfig c;
  if (j.contains("case")) {
    try {
      c.strategy = case_from_name(field_as<std::string>(j.at("case"), "case"));
    } catch (const ParameterError& e) {
      throw ConfigError("case", e.what());
    }
  }
  if (j.contains("t")) c.params.t = field_as<std::uint32_t>(j.at("t"), "t");
  if (j.contains("n")) c.params.n = field_as<std::uint32_t>(j.at("n"), "n");
  if (j.contains("present")) {
    const json& p = j.at("present");
    if (!p.is_array()) throw ConfigError("present", "expected an array of share indices");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string path = "present[" + std::to_string(i) + "]";
      if (!c.present.insert(field_as<ShareIndex>(p[i], path)).second) throw ConfigError(path, "duplicate index");
    }
    if (c.present.empty()) throw ConfigError("present", "must not be empty");
  }
  if (j.contains("pd_holds_share")) c.pd_holds_share = field_as<bool>(j.at("pd_holds_share"), "pd_holds_share");
  if (j.contains("p_flip")) c.p_flip = field_as<double>(j.at("p_flip"), "p_flip");
  if (j.contains("impostor")) c.impostor = field_as<bool>(j.at("impostor"), "impostor");
  if (j.contains("adversary")) {
    const json& a = j.at("adversary");
    try {
      if (a.is_string()) {
        c.adversary.kind = adversary_from_name(a.get<std::string>());
      } else {
        check_keys(a, "adversary", {"kind", "k", "leak_helper_data"});
        c.adversary.kind = adversary_from_name(field_as<std::string>(a.at("kind"), "adversary.kind"));
        if (a.contains("k")) c.adversary.stolen_k = field_as<std::size_t>(a.at("k"), "adversary.k");
        if (a.contains("leak_helper_data")) {
          c.adversary.leak_helper_data = field_as<bool>(a.at("leak_helper_data"), "adversary.leak_helper_data");
        }
      }
    } catch (const ParameterError& e) {
      throw ConfigError("adversary.kind", e.what());
    } catch (const json::exception& e) {
      throw ConfigError("adversary.kind", e.what());
    }
  }
  if (j.contains("policy")) {
    try {
      c.policy = policy_from_json(j.at("policy"));
    } catch (const json::exception& e) {
      throw ConfigError("policy", e.what());
    } catch (const ParameterError& e) {
      throw ConfigError("policy", e.what());
    }
  }
  if (j.contains("scoring")) {
    try {
      c.scoring = scoring_mode_from_name(field_as<std::string>(j.at("scoring"), "scoring"));
    } catch (const ParameterError& e) {
      throw ConfigError("scoring", e.what());
    }
  }
  if (j.contains("score_model")) {
    const json& s = j.at("score_model");
    check_keys(s, "score_model", {"genuine", "impostor"});
    if (s.contains("genuine")) {
      std::tie(c.score_model.genuine_low, c.score_model.genuine_high) =
          range_from_json(s.at("genuine"), "score_model.genuine");
    }
    if (s.contains("impostor")) {
      std::tie(c.score_model.impostor_low, c.score_model.impostor_high) =
          range_from_json(s.at("impostor"), "score_model.impostor");
    }
  }
  if (j.contains("scores")) c.scores = field_as<std::vector<double>>(j.at("scores"), "scores");
  if (j.contains("group")) c.group = field_as<std::string>(j.at("group"), "group");
  if (j.contains("repetition")) c.repetition = field_as<std::size_t>(j.at("repetition"), "repetition");
  if (j.contains("paillier_bits")) c.paillier_bits = field_as<std::size_t>(j.at("paillier_bits"), "paillier_bits");
  if (j.contains("seed")) c.seed = field_as<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("trials")) c.trials = field_as<std::size_t>(j.at("trials"), "trials");
  c.validate();
  return c;
}

void to_json(json& j, const ScenarioConfig& c) {
  j = json{{"case", case_name(c.strategy)},
           {"t", c.params.t},
           {"n", c.params.n},
           {"present", c.present_devices()},
           {"pd_holds_share", c.pd_holds_share},
           {"p_flip", c.p_flip},
           {"impostor", c.impostor},
           {"adversary",
            {{"kind", adversary_name(c.adversary.kind)},
             {"k", c.adversary.stolen_k},
             {"leak_helper_data", c.adversary.leak_helper_data}}},
           {"policy", c.policy},
           {"scoring", scoring_mode_name(c.scoring)},
           {"score_model",
            {{"genuine", {c.score_model.genuine_low, c.score_model.genuine_high}},
             {"impostor", {c.score_model.impostor_low, c.score_model.impostor_high}}}},
           {"group", c.group},
           {"scores", c.scores},
           {"repetition", c.repetition},
           {"paillier_bits", c.paillier_bits},
           {"seed", c.seed},
           {"trials", c.trials}};
}

// ------------------------------------------------------------------ digest

Digest transcript_digest(std::span<const std::string> lines) {
  Sha256Stream stream;
  for (const std::string& line : lines) {
    stream.update(line);
    stream.update(std::string_view("\n"));
  }
  return stream.finish();
}

Digest empty_transcript_digest() { return transcript_digest({}); }

// ------------------------------------------------------------------ trials

namespace {

BitString random_bits(std::size_t length, Rng& rng) {
  BitString out(length);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    out.set(i, (word >> (63 - i % 64)) & 1U);
  }
  return out;
}

BitString noisy_copy(const BitString& source, double p_flip, Rng& rng) {
  BitString out = source;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.bernoulli(p_flip)) out.flip(i);
  }
  return out;
}

struct TrialResult {
  TrialOutcome outcome;
  std::vector<Message> transcript;
  EavesdropReport eavesdrop;
  std::size_t fasp_plaintext = 0;
};

// Forgery attempt from the persistent state of stolen devices only: the
// adversary signs with whatever shares it holds, Lagrange-weighted over its
// own index set, and submits the result straight to the SP.
class StolenDeviceAdversary {
 public:
  StolenDeviceAdversary(Deployment& deployment, const ScenarioConfig& config, const GroupParams& group, Rng& rng)
      : deployment_(deployment), group_(group), rng_(rng) {
    std::size_t taken = 0;
    for (auto& dd : deployment.dds()) {
      if (taken == config.adversary.stolen_k) break;
      ++taken;
      const json state = dd->persistent_state();
      if (state.contains("share")) {
        const Share s = share_from_json(state.at("share"), group.field());
        shares_.push_back(KeyShare{s.index, s.value});
      } else if (config.adversary.leak_helper_data) {
        recover_from_helper(dd->index());
      }
    }
  }

  std::vector<Message> handle(const Message& m, Tick) {
    if (m.is<AuthResultPayload>()) {
      result_ = m.as<AuthResultPayload>();
      return {};
    }
    if (!m.is<ChallengePayload>()) return {};
    const auto& challenge = m.as<ChallengePayload>();
    const Bytes message = challenge_message_bytes(challenge.sp_id, challenge.nonce);
    const GroupPublicKey& pk = deployment_.pd().public_key();
    const auto& ch = default_challenge();
    const PrimeField field = group_.field();

    Signature sig;
    if (shares_.empty()) {
      // No key material: sign under a key of its own choosing.
      const Scalar x{rng_.uniform_range(1, group_.q())};
      const Scalar k{rng_.uniform_range(1, group_.q())};
      sig.R = group_.exp_g(k);
      const Scalar c = ch(sig.R, pk.y, message, group_);
      sig.s = field.add(k, field.mul(c, x));
    } else {
      std::vector<ShareIndex> set;
      for (const KeyShare& s : shares_) set.push_back(s.index);
      std::sort(set.begin(), set.end());
      std::vector<ThresholdSigner> signers;
      std::vector<NonceCommitment> commitments;
      for (const KeyShare& s : shares_) {
        signers.emplace_back(s, group_);
        commitments.push_back(signers.back().commit(m.session, rng_));
      }
      sig.R = aggregate_nonce(commitments, group_);
      const Scalar c = ch(sig.R, pk.y, message, group_);
      sig.s = Scalar{0};
      for (ThresholdSigner& signer : signers) sig.s = field.add(sig.s, signer.respond(m.session, c, set).s);
    }
    signers_ = shares_.size();
    return {Message{kAdversaryId, m.from, m.session,
                    AuthResponsePayload{pk_user(), challenge.sp_id, challenge.nonce, sig}}};
  }

  const std::optional<AuthResultPayload>& result() const { return result_; }
  std::size_t shares_held() const { return signers_; }

 private:
  std::string pk_user() const { return deployment_.pd().user_id(); }

  void recover_from_helper(ShareIndex index) {
    auto helper = deployment_.pd().helper_store().find(index);
    if (helper == deployment_.pd().helper_store().end()) return;
    // Without the user's body, the best guess is a random template.
    const Template guess{random_bits(helper->second.code.length(), rng_)};
    try {
      const Scalar v = bits_to_scalar(fe_reproduce(guess, helper->second), group_.field());
      const KeyShare candidate{index, v};
      if (verify_share(candidate.as_share(), deployment_.pd().commitments(), group_)) shares_.push_back(candidate);
    } catch (const CorruptedShareError&) {
    }
  }

  Deployment& deployment_;
  const GroupParams& group_;
  Rng& rng_;
  std::vector<KeyShare> shares_;
  std::size_t signers_ = 0;
  std::optional<AuthResultPayload> result_;
};

Message flip_low_bit(Message m) {
  auto flip = [](Scalar& s) { s.value ^= 1; };
  if (m.is<SignRound2Payload>()) {
    auto p = m.as<SignRound2Payload>();
    flip(*p.response);
    m.payload = p;
  } else if (m.is<AuthResponsePayload>()) {
    auto p = m.as<AuthResponsePayload>();
    flip(p.signature.s);
    m.payload = p;
  }
  return m;
}

// Links that leave the user's personal area network.
bool is_wan(const Message& m, const std::string& sp, const std::string& fasp) {
  return m.from == sp || m.to == sp || m.from == fasp || m.to == fasp;
}

std::size_t inspect_fasp(const Fasp& fasp) {
  std::size_t found = 0;
  for (const json& request : fasp.request_log()) {
    if (request.contains("readings")) found += request.at("readings").size();
    if (request.contains("value")) ++found;
  }
  return found;
}

TrialResult run_trial(const ScenarioConfig& config, const GroupParams& group, std::uint64_t trial) {
  Rng rng(config.seed ^ trial);
  const CodeParams code = CodeParams::for_field(group.field(), config.repetition);
  const std::set<ShareIndex> present = config.present_devices();
  const bool inflate = config.adversary.kind == AdversaryKind::score_inflate;
  const bool impostor_scores = config.impostor || inflate;
  const ShareIndex first_dd = config.pd_holds_share ? 2 : 1;

  // 1. enrolment templates
  std::map<ShareIndex, Template> enrolment_templates;
  if (config.strategy == CaseStrategy::case3) {
    for (ShareIndex i = first_dd; i <= config.params.n; ++i) enrolment_templates[i] = Template{random_bits(code.length(), rng)};
  }
  // 2. authentication templates
  std::map<ShareIndex, Template> fresh_templates;
  for (const auto& [index, tpl] : enrolment_templates) {
    fresh_templates[index] = Template{config.impostor ? random_bits(code.length(), rng)
                                                      : noisy_copy(tpl.bits, config.p_flip, rng)};
  }
  // 3. behavioural scores
  std::map<ShareIndex, double> scores;
  for (ShareIndex i = 1; i <= config.params.n; ++i) {
    if (!config.scores.empty()) {
      scores[i] = config.scores[i - 1];
      continue;
    }
    scores[i] = impostor_scores ? rng.uniform_real(config.score_model.impostor_low, config.score_model.impostor_high)
                                : rng.uniform_real(config.score_model.genuine_low, config.score_model.genuine_high);
  }

  // 4. enrolment
  DeploymentConfig dc;
  dc.strategy = config.strategy;
  dc.params = config.params;
  dc.pd_holds_share = config.pd_holds_share;
  dc.scoring = config.scoring;
  dc.policy = config.policy;
  dc.repetition = config.repetition;
  dc.paillier_bits = config.paillier_bits;
  Deployment deployment(dc, group, rng, enrolment_templates);

  for (auto& dd : deployment.dds()) {
    const ShareIndex i = dd->index();
    dd->set_sensed_reading(modality_for(i), scores.at(i));
    auto tpl = fresh_templates.find(i);
    if (tpl != fresh_templates.end() && present.count(i) != 0) dd->set_sensed_template(tpl->second);
  }
  if (config.pd_holds_share && present.count(1) != 0) {
    deployment.pd().add_own_reading(ModalityReading{deployment.pd().id(), modality_for(1), scores.at(1), 0});
  }

  TrialResult result;
  result.outcome.trial = trial;
  result.outcome.adversarial = config.adversarial();
  Network& net = deployment.network();

  if (config.adversary.kind == AdversaryKind::eavesdrop) {
    net.add_observer([&result, sp = deployment.sp().id(), fasp = deployment.fasp().id()](const Message& m) {
      if (!is_wan(m, sp, fasp)) return;
      ++result.eavesdrop.observed_messages;
      if (carries_plaintext_score(m)) {
        ++result.eavesdrop.plaintext_score_payloads;
        ++result.eavesdrop.plaintext_by_type[message_type_name(m.type())];
      }
    });
  }

  if (config.adversary.kind == AdversaryKind::tamper_partial) {
    auto tampered = std::make_shared<bool>(false);
    net.set_interceptor([tampered](Message m) -> std::optional<Message> {
      if (*tampered) return m;
      const bool partial = m.is<SignRound2Payload>() && m.as<SignRound2Payload>().response.has_value();
      if (partial || m.is<AuthResponsePayload>()) {
        *tampered = true;
        return flip_low_bit(std::move(m));
      }
      return m;
    });
  }

  if (inflate) {
    const std::string pd_id = deployment.pd().id();
    const std::string user = deployment.pd().user_id();
    net.set_interceptor([&net, pd_id, user](Message m) -> std::optional<Message> {
      const bool trigger = (m.is<ChallengePayload>() && m.to == pd_id) || (m.is<ScoreRequestPayload>() && m.from == pd_id);
      if (trigger) {
        net.send(Message{kAdversaryId, pd_id, m.session, ScoreResponsePayload{user, 1.0, std::nullopt}});
      }
      return m;
    });
  }

  if (config.adversary.kind == AdversaryKind::stolen) {
    StolenDeviceAdversary adversary(deployment, config, group, rng);
    net.attach(kAdversaryId, [&adversary](const Message& m, Tick now) { return adversary.handle(m, now); });
    net.send(Message{kAdversaryId, deployment.sp().id(), "x1",
                     AuthRequestPayload{deployment.pd().user_id(), deployment.sp().id()}});
    net.run();
    const auto& r = adversary.result();
    result.outcome.granted = r && r->granted;
    result.outcome.reason = r ? r->reason : "no-result";
    result.outcome.signers.clear();
  } else {
    std::optional<Message> captured;
    if (config.adversary.kind == AdversaryKind::replay) {
      net.add_observer([&captured](const Message& m) {
        if (m.is<AuthResponsePayload>() && !captured) captured = m;
      });
    }
    const std::string session = deployment.authenticate(present);
    const PdSession* s = deployment.pd().session(session);
    if (s != nullptr) {
      if (s->score) result.outcome.score = s->score->value;
      result.outcome.signers = s->signer_set;
    }
    const auto outcome = deployment.outcome(session);

    if (config.adversary.kind == AdversaryKind::replay) {
      std::optional<AuthResultPayload> replayed;
      if (captured) {
        net.attach(kAdversaryId, [&replayed](const Message& m, Tick) -> std::vector<Message> {
          if (m.is<AuthResultPayload>()) replayed = m.as<AuthResultPayload>();
          return {};
        });
        net.send(Message{kAdversaryId, deployment.sp().id(), "x1", captured->payload});
        net.run();
      }
      result.outcome.granted = replayed && replayed->granted;
      result.outcome.reason = replayed ? replayed->reason : "nothing-to-replay";
    } else {
      result.outcome.granted = outcome && outcome->granted;
      result.outcome.reason = outcome ? outcome->reason : "no-result";
    }
  }
  if (result.outcome.granted) result.outcome.reason.clear();

  result.transcript = net.transcript();
  result.outcome.messages = result.transcript.size();
  result.fasp_plaintext = inspect_fasp(deployment.fasp());
  return result;
}

}  // namespace

ScenarioRun run_scenario_with_transcript(const ScenarioConfig& config) {
  config.validate();
  const GroupParams& group = groups::by_name(config.group);
  ScenarioRun run;
  SimReport& report = run.report;
  report.config = config;
  report.out_of_scope = {"denial-of-service", "availability"};
  if (config.adversary.kind == AdversaryKind::eavesdrop) report.eavesdrop = EavesdropReport{};

  for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
    TrialResult t = run_trial(config, group, trial);
    for (const Message& m : t.transcript) {
      ++report.message_counts[message_type_name(m.type())];
      run.transcript.push_back(message_to_line(m));
    }
    if (report.eavesdrop) {
      report.eavesdrop->observed_messages += t.eavesdrop.observed_messages;
      report.eavesdrop->plaintext_score_payloads += t.eavesdrop.plaintext_score_payloads;
      for (const auto& [type, count] : t.eavesdrop.plaintext_by_type) report.eavesdrop->plaintext_by_type[type] += count;
    }
    report.fasp_plaintext_scores += t.fasp_plaintext;

    const TrialOutcome& o = t.outcome;
    if (o.granted) {
      ++report.granted;
    } else {
      ++report.denied;
      ++report.denial_reasons[o.reason];
    }
    if (o.adversarial) {
      ++report.adversarial_trials;
      if (o.granted) ++report.adversarial_grants;
    } else {
      ++report.genuine_trials;
      if (!o.granted) ++report.genuine_denials;
    }
    report.outcomes.push_back(std::move(t.outcome));
  }

  auto rate = [](std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; };
  report.grant_rate = rate(report.granted, config.trials);
  report.frr = rate(report.genuine_denials, report.genuine_trials);
  report.far = rate(report.adversarial_grants, report.adversarial_trials);
  report.transcript_digest = transcript_digest(run.transcript);
  if (report.granted + report.denied != config.trials) throw InvariantViolation("simulator: outcome count mismatch");
  return run;
}

SimReport run_scenario(const ScenarioConfig& config) { return run_scenario_with_transcript(config).report; }

void to_json(json& j, const TrialOutcome& o) {
  j = json{{"trial", o.trial},
           {"kind", o.adversarial ? "adversarial" : "genuine"},
           {"granted", o.granted},
           {"messages", o.messages}};
  if (!o.reason.empty()) j["reason"] = o.reason;
  if (o.score) j["score"] = *o.score;
  if (!o.signers.empty()) j["signers"] = o.signers;
}

void to_json(json& j, const SimReport& r) {
  j = json{{"config", r.config},
           {"trials", r.config.trials},
           {"granted", r.granted},
           {"denied", r.denied},
           {"grant_rate", r.grant_rate},
           {"genuine_trials", r.genuine_trials},
           {"adversarial_trials", r.adversarial_trials},
           {"frr", r.frr},
           {"far", r.far},
           {"message_counts", r.message_counts},
           {"denial_reasons", r.denial_reasons},
           {"transcript_digest", bytes_to_hex(r.transcript_digest)},
           {"fasp_plaintext_scores", r.fasp_plaintext_scores},
           {"out_of_scope", r.out_of_scope},
           {"outcomes", r.outcomes}};
  if (r.eavesdrop) {
    j["eavesdrop"] = json{{"observed_messages", r.eavesdrop->observed_messages},
                          {"plaintext_score_payloads", r.eavesdrop->plaintext_score_payloads},
                          {"plaintext_by_type", r.eavesdrop->plaintext_by_type}};
  }
}

// ------------------------------------------------------------------ rates

std::vector<RatePoint> estimate_rates(const ScenarioConfig& config, std::span<const double> sweep) {
  if (config.trials < 1000) throw ConfigError("trials", "rate estimation needs at least 1000 trials");
  std::vector<RatePoint> out;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    ScenarioConfig genuine = config;
    genuine.p_flip = sweep[i];
    genuine.impostor = false;
    genuine.adversary = AdversaryConfig{};
    try {
      genuine.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sweep[" + std::to_string(i) + "]", e.what());
    }
    ScenarioConfig impostor = genuine;
    impostor.impostor = true;
    const SimReport g = run_scenario(genuine);
    const SimReport f = run_scenario(impostor);
    out.push_back(RatePoint{sweep[i], g.frr, f.far, g.genuine_trials, f.adversarial_trials});
  }
  return out;
}

void to_json(json& j, const RatePoint& p) {
  j = json{{"p_flip", p.p_flip},
           {"frr", p.frr},
           {"far", p.far},
           {"genuine_trials", p.genuine_trials},
           {"impostor_trials", p.impostor_trials}};
}

double estimate_share_recovery_failure(const CodeParams& code, double p_flip, std::size_t trials, std::uint64_t seed) {
  code.validate();
  if (!(p_flip >= 0.0 && p_flip <= 0.5)) throw ParameterError("p_flip must lie in [0, 0.5]");
  if (trials == 0) throw ParameterError("trials must be positive");
  Rng rng(seed);
  std::size_t failures = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const BitString key = random_bits(code.m, rng);
    const Template enrolment{random_bits(code.length(), rng)};
    const HelperData helper = fe_enroll(key, enrolment, code);
    const Template fresh{noisy_copy(enrolment.bits, p_flip, rng)};
    if (fe_reproduce(fresh, helper) != key) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(trials);
}

// ------------------------------------------------------------------ replay

bool replay_transcript(const Digest& expected, const ScenarioConfig& config, std::span<const std::string> reference) {
  const ScenarioRun run = run_scenario_with_transcript(config);
  if (run.report.transcript_digest == expected) return true;
  std::string detail;
  if (!reference.empty()) {
    const std::size_t common = std::min(reference.size(), run.transcript.size());
    std::size_t i = 0;
    while (i < common && reference[i] == run.transcript[i]) ++i;
    if (i < common) {
      detail = "; first divergent message #" + std::to_string(i) + ": " + run.transcript[i];
    } else {
      detail = "; transcripts diverge in length at message #" + std::to_string(i);
    }
  }
  throw NondeterminismError("transcript digest mismatch: expected " + bytes_to_hex(expected) + ", got " +
                            bytes_to_hex(run.report.transcript_digest) + detail);
}

}  // namespace fas

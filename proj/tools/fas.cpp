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

// fas: command-line front end for the toolkit and simulator.
//
// Exit status: 0 success, 1 authentication denied, 2 configuration or
// parameter error, 3 internal error. Machine output is one JSON document on
// stdout; the human summary goes to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fas/algebra.hpp"
#include "fas/known_answers.hpp"
#include "fas/protocol.hpp"
#include "fas/random.hpp"
#include "fas/simulator.hpp"
#include "fas/threshold_signature.hpp"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kDenied = 1, kConfig = 2, kInternal = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output_path;
  std::string case_name;
  int verbosity = 0;
  bool quiet = false;
  // keygen
  std::string group = "default";
  std::uint32_t t = 1;
  std::uint32_t n = 3;
  // simulate
  bool transcript = false;
  // rates
  std::vector<double> sweep{0.0, 0.02, 0.05, 0.1};
};

class Reporter {
 public:
  explicit Reporter(const Options& o) : options_(o) {}

  void summary(const std::string& line) const {
    if (!options_.quiet) std::cerr << line << "\n";
  }
  void detail(const std::string& line) const {
    if (!options_.quiet && options_.verbosity > 0) std::cerr << line << "\n";
  }

 private:
  const Options& options_;
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_output(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fas::ConfigError("output", "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw fas::ConfigError("output", "write to '" + path + "' failed");
}

fas::ScenarioConfig load_config(const Options& o, bool required) {
  json j = json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw fas::ConfigError("config", "cannot read '" + o.config_path + "'");
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw fas::ConfigError("config", e.what());
    }
  } else if (required) {
    throw fas::ConfigError("config", "this command needs --config");
  }
  if (!o.case_name.empty()) {
    std::string name = o.case_name;
    if (name.size() == 1) name = "CASE" + name;
    j["case"] = name;
  }
  if (o.seed) j["seed"] = *o.seed;
  return fas::scenario_from_json(j);
}

std::string rate(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << v;
  return out.str();
}

int cmd_keygen(const Options& o, const Reporter& log) {
  const fas::GroupParams* group = nullptr;
  try {
    group = &fas::groups::by_name(o.group);
  } catch (const fas::ParameterError& e) {
    throw fas::ConfigError("group", e.what());
  }
  fas::Rng rng(o.seed.value_or(0));
  const fas::ThresholdParams params{o.t, o.n};
  try {
    params.validate(group->field());
  } catch (const fas::ParameterError& e) {
    throw fas::ConfigError("t", e.what());
  }
  const fas::DealerOutput dealt = fas::keygen_dealer(params, *group, rng);
  json shares = json::array();
  for (const fas::KeyShare& s : dealt.shares) shares.push_back(s.as_share());
  const json out{{"group", *group},
                 {"group_name", o.group},
                 {"t", o.t},
                 {"n", o.n},
                 {"public_key", fas::to_hex(dealt.public_key.y.value)},
                 {"commitments", dealt.commitments},
                 {"shares", shares}};
  if (!o.output_path.empty()) write_output(o.output_path, out.dump(2) + "\n");
  emit(out);
  log.summary("keygen: " + std::to_string(o.t + 1) + "-of-" + std::to_string(o.n) + " key over group '" + o.group + "'");
  return kOk;
}

int cmd_enroll(const Options& o, const Reporter& log) {
  fas::ScenarioConfig c = load_config(o, false);
  const fas::GroupParams& group = fas::groups::by_name(c.group);
  fas::Rng rng(c.seed);
  const fas::CodeParams code = fas::CodeParams::for_field(group.field(), c.repetition);
  std::map<fas::ShareIndex, fas::Template> templates;
  if (c.strategy == fas::CaseStrategy::case3) {
    for (fas::ShareIndex i = c.pd_holds_share ? 2 : 1; i <= c.params.n; ++i) {
      fas::BitString bits(code.length());
      for (std::size_t b = 0; b < bits.size(); ++b) bits.set(b, rng.bernoulli(0.5));
      templates[i] = fas::Template{std::move(bits)};
    }
  }
  fas::DeploymentConfig dc;
  dc.strategy = c.strategy;
  dc.params = c.params;
  dc.pd_holds_share = c.pd_holds_share;
  dc.repetition = c.repetition;
  dc.policy = c.policy;
  fas::Deployment d(dc, group, rng, std::move(templates));
  json dds = json::array();
  for (auto& dd : d.dds()) dds.push_back(dd->persistent_state());
  const json out{{"case", fas::case_name(c.strategy)},
                 {"sp_record",
                  {{"user", d.enrolment_record().registration.user_id},
                   {"public_key", fas::to_hex(d.enrolment_record().registration.public_key.y.value)}}},
                 {"pd", d.pd().persistent_state()},
                 {"dds", dds}};
  if (!o.output_path.empty()) write_output(o.output_path, out.dump(2) + "\n");
  emit(out);
  log.summary(std::string("enroll: ") + fas::case_name(c.strategy) + ", " + std::to_string(d.dds().size()) +
              " dumb devices");
  return kOk;
}

int cmd_auth(const Options& o, const Reporter& log) {
  fas::ScenarioConfig c = load_config(o, false);
  c.trials = 1;
  const fas::ScenarioRun run = fas::run_scenario_with_transcript(c);
  const fas::TrialOutcome& t = run.report.outcomes.at(0);
  json out{{"case", fas::case_name(c.strategy)},
           {"granted", t.granted},
           {"messages", t.messages},
           {"transcript_digest", fas::bytes_to_hex(run.report.transcript_digest)}};
  if (!t.reason.empty()) out["reason"] = t.reason;
  if (t.score) out["score"] = *t.score;
  if (!t.signers.empty()) out["signers"] = t.signers;
  if (!o.output_path.empty()) {
    std::string lines;
    for (const std::string& l : run.transcript) lines += l + "\n";
    write_output(o.output_path, lines);
  }
  emit(out);
  log.summary(std::string("auth: ") + (t.granted ? "granted" : "denied (" + t.reason + ")"));
  for (const std::string& l : run.transcript) log.detail(l);
  return t.granted ? kOk : kDenied;
}

int cmd_simulate(const Options& o, const Reporter& log) {
  const fas::ScenarioConfig c = load_config(o, true);
  const fas::ScenarioRun run = fas::run_scenario_with_transcript(c);
  const json report = run.report;
  if (!o.output_path.empty()) {
    if (o.transcript) {
      std::string lines;
      for (const std::string& l : run.transcript) lines += l + "\n";
      write_output(o.output_path, lines);
    } else {
      write_output(o.output_path, report.dump(2) + "\n");
    }
  }
  emit(report);
  const fas::SimReport& r = run.report;
  log.summary("simulate: " + std::to_string(c.trials) + " trials, grant rate " + rate(r.grant_rate) + ", FRR " +
              rate(r.frr) + ", FAR " + rate(r.far));
  log.detail("transcript digest " + fas::bytes_to_hex(r.transcript_digest));
  return kOk;
}

int cmd_rates(const Options& o, const Reporter& log) {
  const fas::ScenarioConfig c = load_config(o, true);
  const auto points = fas::estimate_rates(c, o.sweep);
  const json out{{"config", c}, {"rates", points}};
  if (!o.output_path.empty()) write_output(o.output_path, out.dump(2) + "\n");
  emit(out);
  for (const fas::RatePoint& p : points) {
    log.summary("p_flip " + rate(p.p_flip) + ": FRR " + rate(p.frr) + ", FAR " + rate(p.far));
  }
  return kOk;
}

int cmd_verify_kat(const Options& o, const Reporter& log) {
  const auto results = fas::run_known_answer_tests();
  json list = json::array();
  std::size_t failed = 0;
  for (const fas::KatResult& r : results) {
    list.push_back({{"name", r.name}, {"expected", r.expected}, {"actual", r.actual}, {"passed", r.passed}});
    if (!r.passed) {
      ++failed;
      log.summary("FAIL " + r.name + ": expected '" + r.expected + "', got '" + r.actual + "'");
    } else {
      log.detail("ok   " + r.name);
    }
  }
  const json out{{"passed", results.size() - failed}, {"failed", failed}, {"results", list}};
  if (!o.output_path.empty()) write_output(o.output_path, out.dump(2) + "\n");
  emit(out);
  log.summary("verify-kat: " + std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) +
              " passed");
  return failed == 0 ? kOk : kInternal;
}

int fail(int code, const std::string& kind, const std::string& message, const std::string& field = {}) {
  json out{{"error", kind}, {"message", message}};
  if (!field.empty()) out["field"] = field;
  emit(out);
  std::cerr << "fas: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Frictionless multi-device authentication toolkit"};
  app.require_subcommand(1, 1);
  app.add_option("-c,--config", o.config_path, "Scenario configuration (JSON)");
  app.add_option("-s,--seed", o.seed, "Seed; overrides the configuration");
  app.add_option("-o,--output", o.output_path, "Output file");
  app.add_option("--case", o.case_name, "Case strategy: 1, 2, 3 or CASE1..CASE3");
  app.add_flag("-v,--verbose", o.verbosity, "More detail on stderr (repeatable)");
  app.add_flag("-q,--quiet", o.quiet, "No summary on stderr");

  auto* keygen = app.add_subcommand("keygen", "Deal a threshold key over a named group");
  keygen->add_option("--group", o.group, "Group parameter set")->capture_default_str();
  keygen->add_option("-t", o.t, "Threshold t (t+1 signers needed)")->capture_default_str();
  keygen->add_option("-n", o.n, "Number of shares")->capture_default_str();
  auto* enroll = app.add_subcommand("enroll", "Enrol a user and print every entity's persistent state");
  auto* auth = app.add_subcommand("auth", "Run one authentication; exit 1 when denied");
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and print the report");
  simulate->add_flag("--transcript", o.transcript, "Write the JSON-lines transcript to --output instead of the report");
  auto* rates = app.add_subcommand("rates", "Sweep FRR/FAR over noise levels");
  rates->add_option("--sweep", o.sweep, "Bit-flip probabilities")->delimiter(',');
  auto* kat = app.add_subcommand("verify-kat", "Run the known-answer suite");

  for (auto* sub : {keygen, enroll, auth, simulate, rates, kat}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kConfig, "usage", e.what());
  }

  const Reporter log(o);
  try {
    if (*keygen) return cmd_keygen(o, log);
    if (*enroll) return cmd_enroll(o, log);
    if (*auth) return cmd_auth(o, log);
    if (*simulate) return cmd_simulate(o, log);
    if (*rates) return cmd_rates(o, log);
    if (*kat) return cmd_verify_kat(o, log);
  } catch (const fas::ConfigError& e) {
    return fail(kConfig, "config", e.what(), e.field_path());
  } catch (const fas::InvariantViolation& e) {
    return fail(kInternal, "internal", e.what());
  } catch (const fas::NondeterminismError& e) {
    return fail(kInternal, "internal", e.what());
  } catch (const fas::Error& e) {
    return fail(kConfig, "parameter", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
  return fail(kInternal, "internal", "no command");
}

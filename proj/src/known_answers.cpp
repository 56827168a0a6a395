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

#include "fas/known_answers.hpp"

#include <sstream>

#include "fas/algebra.hpp"
#include "fas/auth_score.hpp"
#include "fas/fuzzy_extractor.hpp"
#include "fas/paillier.hpp"
#include "fas/protocol.hpp"
#include "fas/sharing.hpp"
#include "fas/threshold_signature.hpp"

namespace fas {

namespace {

class Suite {
 public:
  template <typename Fn>
  void run(const std::string& name, const std::string& expected, Fn&& fn) {
    KatResult r{name, expected, {}, false};
    try {
      r.actual = fn();
      r.passed = r.actual == expected;
    } catch (const std::exception& e) {
      r.actual = std::string("exception: ") + e.what();
    }
    results_.push_back(std::move(r));
  }

  std::vector<KatResult> take() { return std::move(results_); }

 private:
  std::vector<KatResult> results_;
};

std::string str(const BigInt& v) { return v.get_str(); }
std::string str(bool b) { return b ? "true" : "false"; }

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

std::string shares_str(const std::vector<Share>& shares) {
  std::string out;
  for (const Share& s : shares) {
    if (!out.empty()) out += ",";
    out += "(" + std::to_string(s.index) + "," + str(s.value.value) + ")";
  }
  return out;
}

Scalar stub_challenge(const GroupElement&, const GroupElement&, std::span<const std::uint8_t>, const GroupParams&) {
  return Scalar{2};
}

std::vector<Scalar> scalars(std::initializer_list<int> values) {
  std::vector<Scalar> out;
  for (int v : values) out.push_back(Scalar{v});
  return out;
}

}  // namespace

std::vector<KatResult> run_known_answer_tests() {
  Suite suite;
  const GroupParams& g = groups::test();
  const PrimeField f11 = g.field();
  const PrimeField f17(17);

  suite.run("mod_exp(2,11,23)", "1", [] { return str(mod_exp(2, 11, 23)); });
  suite.run("mod_exp(2,7,23)", "13", [] { return str(mod_exp(2, 7, 23)); });
  suite.run("mod_inv(15,17)", "8", [] { return str(mod_inv(15, 17)); });
  suite.run("mod_inv(4,15)", "4", [] { return str(mod_inv(4, 15)); });
  suite.run("lagrange({1,3},1,q=17)", "10", [&] {
    const ShareIndex set[] = {1, 3};
    return str(lagrange_coefficient(set, 1, f17).value);
  });
  suite.run("lagrange({2,3},3,q=11)", "9", [&] {
    const ShareIndex set[] = {2, 3};
    return str(lagrange_coefficient(set, 3, f11).value);
  });

  suite.run("shamir f=5+3x q=17", "(1,8),(2,11),(3,14)", [&] {
    const auto coeffs = scalars({5, 3});
    return shares_str(shamir_split(coeffs, ThresholdParams{1, 3}, f17));
  });
  suite.run("feldman f=7+4x p=23", "13,16", [&] {
    const auto coeffs = scalars({7, 4});
    const FeldmanCommitments c = feldman_commit(coeffs, g);
    return str(c.commitments.at(0).value) + "," + str(c.commitments.at(1).value);
  });
  const FeldmanCommitments kat_commitments{{GroupElement{13}, GroupElement{16}}};
  suite.run("feldman verify (2,4)", "true",
            [&] { return str(verify_share(Share{2, Scalar{4}}, kat_commitments, g)); });
  suite.run("feldman verify (2,5)", "false",
            [&] { return str(verify_share(Share{2, Scalar{5}}, kat_commitments, g)); });
  suite.run("reconstruct (1,8),(3,14) q=17", "5", [&] {
    const std::vector<Share> s{{1, Scalar{8}}, {3, Scalar{14}}};
    return str(reconstruct(s, f17).value);
  });
  suite.run("reconstruct (1,8),(2,11),(3,14) q=17", "5", [&] {
    const std::vector<Share> s{{1, Scalar{8}}, {2, Scalar{11}}, {3, Scalar{14}}};
    return str(reconstruct(s, f17).value);
  });

  const auto kat_poly = scalars({7, 4});
  suite.run("keygen f=7+4x test group", "y=13 (1,0),(2,4),(3,8)", [&] {
    const DealerOutput d = keygen_from_polynomial(kat_poly, ThresholdParams{1, 3}, g);
    std::vector<Share> shares;
    for (const KeyShare& k : d.shares) shares.push_back(k.as_share());
    return "y=" + str(d.public_key.y.value) + " " + shares_str(shares);
  });
  suite.run("round1 k=3,5", "8,9", [&] {
    return str(g.exp_g(Scalar{3}).value) + "," + str(g.exp_g(Scalar{5}).value);
  });
  suite.run("threshold schnorr {2,3} stub c=2", "s2=5 s3=6 R=3 s=0 verify=true", [&] {
    const DealerOutput d = keygen_from_polynomial(kat_poly, ThresholdParams{1, 3}, g);
    const ShareIndex set[] = {2, 3};
    const Bytes msg{'k', 'a', 't'};
    ThresholdSigner a(d.shares[1], g);
    ThresholdSigner b(d.shares[2], g);
    const std::vector<NonceCommitment> commitments{a.commit_with_nonce("kat", Scalar{3}),
                                                   b.commit_with_nonce("kat", Scalar{5})};
    const std::vector<PartialSignature> partials{a.respond("kat", Scalar{2}, set), b.respond("kat", Scalar{2}, set)};
    const Signature sig = combine(commitments, partials, d.public_key, msg, stub_challenge);
    return "s2=" + str(partials[0].s.value) + " s3=" + str(partials[1].s.value) + " R=" + str(sig.R.value) +
           " s=" + str(sig.s.value) + " verify=" + str(verify(d.public_key, msg, sig, stub_challenge));
  });
  suite.run("threshold schnorr all pairs of {1,2,3}", "true,true,true", [&] {
    const DealerOutput d = keygen_from_polynomial(kat_poly, ThresholdParams{1, 3}, g);
    const Bytes msg{'k', 'a', 't'};
    std::string out;
    const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& [i, j] : pairs) {
      const ShareIndex set[] = {d.shares[i].index, d.shares[j].index};
      ThresholdSigner a(d.shares[i], g);
      ThresholdSigner b(d.shares[j], g);
      const std::vector<NonceCommitment> c{a.commit_with_nonce("kat", Scalar{3}), b.commit_with_nonce("kat", Scalar{5})};
      const std::vector<PartialSignature> p{a.respond("kat", Scalar{2}, set), b.respond("kat", Scalar{2}, set)};
      const Signature sig = combine(c, p, d.public_key, msg, stub_challenge);
      if (!out.empty()) out += ",";
      out += str(verify(d.public_key, msg, sig, stub_challenge));
    }
    return out;
  });

  suite.run("decode 111001 r=3", "10", [] {
    return decode(BitString::from_string("111001"), CodeParams{2, 3}).to_string();
  });
  suite.run("decode 11000 r=5", "0", [] { return decode(BitString::from_string("11000"), CodeParams{1, 5}).to_string(); });
  suite.run("fe_enroll key=10 w=110100", "001100", [] {
    return fe_enroll(BitString::from_string("10"), Template{BitString::from_string("110100")}, CodeParams{2, 3})
        .bits.to_string();
  });
  suite.run("fe_reproduce HD=001100 w'=110101", "10", [] {
    const HelperData hd{BitString::from_string("001100"), CodeParams{2, 3}};
    return fe_reproduce(Template{BitString::from_string("110101")}, hd).to_string();
  });
  suite.run("block failure r=5 p=0.1", "0.00856", [] { return fixed(block_failure_probability(5, 0.1), 5); });
  suite.run("reproduction failure r=5 p=0.1 m=16", "0.1285",
            [] { return fixed(reproduction_failure_probability(CodeParams{16, 5}, 0.1), 4); });

  FusionPolicy policy;
  auto reading = [](const char* id, Modality m, double s) { return ModalityReading{id, m, s, 0}; };
  suite.run("fuse (0.8,0.5,0.0)", "0.55", [&] {
    const std::vector<ModalityReading> r{reading("a", Modality::gait, 0.8), reading("b", Modality::location, 0.5),
                                         reading("c", Modality::heartbeat, 0.0)};
    return fixed(fuse_local(r, policy, 0).value, 2);
  });
  suite.run("fuse gait only 0.6", "0.60", [&] {
    const std::vector<ModalityReading> r{reading("a", Modality::gait, 0.6)};
    return fixed(fuse_local(r, policy, 0).value, 2);
  });
  suite.run("gate 0.55 theta 0.7", "false", [&] { return str(gate(AuthScore{0.55, {}, ScoreMode::local}, policy)); });

  const PheKeypair toy = phe_keypair_from_primes(3, 5);
  suite.run("paillier keypair p=3 q=5", "n=15 g=16 lambda=4 mu=4", [&] {
    return "n=" + str(toy.public_key.n) + " g=" + str(toy.public_key.g) + " lambda=" + str(toy.private_key.lambda) +
           " mu=" + str(toy.private_key.mu);
  });
  suite.run("paillier Enc(2;2) Enc(3;4) sum", "158 154 32 5", [&] {
    const PheCiphertext a = phe_encrypt_with(2, 2, toy.public_key);
    const PheCiphertext b = phe_encrypt_with(3, 4, toy.public_key);
    const PheCiphertext sum = phe_add(a, b, toy.public_key);
    return str(a.value) + " " + str(b.value) + " " + str(sum.value) + " " + str(phe_decrypt(sum, toy));
  });
  suite.run("paillier scale Enc(2;2) by 3", "6", [&] {
    return str(phe_decrypt(phe_scale(phe_encrypt_with(2, 2, toy.public_key), 3, toy.public_key), toy));
  });
  suite.run("paillier Dec(Enc(m)) m in [0,15)", "15/15", [&] {
    int ok = 0;
    for (int m = 0; m < 15; ++m) ok += phe_decrypt(phe_encrypt_with(m, 2, toy.public_key), toy) == m;
    return std::to_string(ok) + "/15";
  });
  suite.run("encrypted fusion weights (5,3,2) scores (80,50,0)", "550 0.55", [&] {
    Rng rng(1);
    const PheKeypair kp = phe_keygen(64, rng);
    const std::map<Modality, PheCiphertext> cts{{Modality::gait, phe_encrypt(80, kp.public_key, rng)},
                                                {Modality::location, phe_encrypt(50, kp.public_key, rng)},
                                                {Modality::heartbeat, phe_encrypt(0, kp.public_key, rng)}};
    const std::map<Modality, std::uint64_t> w{{Modality::gait, 5}, {Modality::location, 3}, {Modality::heartbeat, 2}};
    const BigInt total = phe_decrypt(fuse_encrypted(cts, w, kp.public_key), kp);
    const std::set<Modality> present{Modality::gait, Modality::location, Modality::heartbeat};
    return str(total) + " " + fixed(normalize_encrypted_total(total, w, present), 2);
  });

  suite.run("protocol CASE2 live={2,3} stub c=2", "granted R=3 s=0", [&] {
    DeploymentConfig config;
    config.strategy = CaseStrategy::case2;
    config.params = ThresholdParams{1, 3};
    config.challenge = stub_challenge;
    config.coefficients = kat_poly;
    Rng rng(7);
    Deployment d(config, g, rng);
    d.dd(2)->set_sensed_reading(Modality::gait, 0.9);
    d.dd(3)->set_sensed_reading(Modality::location, 0.9);
    d.dd(2)->set_nonce_override([](ShareIndex) { return std::optional<Scalar>(Scalar{3}); });
    d.dd(3)->set_nonce_override([](ShareIndex) { return std::optional<Scalar>(Scalar{5}); });
    const std::string session = d.authenticate({2, 3});
    const auto result = d.outcome(session);
    const PdSession* s = d.pd().session(session);
    if (!result || !s || !s->signature) return std::string("no signature");
    return std::string(result->granted ? "granted" : "denied") + " R=" + str(s->signature->R.value) +
           " s=" + str(s->signature->s.value);
  });
  suite.run("protocol score 0.55 below theta", "denied score round1=0", [&] {
    DeploymentConfig config;
    config.strategy = CaseStrategy::case2;
    config.params = ThresholdParams{1, 3};
    Rng rng(7);
    Deployment d(config, g, rng);
    d.dd(1)->set_sensed_reading(Modality::gait, 0.8);
    d.dd(2)->set_sensed_reading(Modality::location, 0.5);
    d.dd(3)->set_sensed_reading(Modality::heartbeat, 0.0);
    const std::string session = d.authenticate({1, 2, 3});
    const auto result = d.outcome(session);
    std::size_t round1 = 0;
    for (const Message& m : d.network().transcript()) round1 += m.is<SignRound1Payload>() || m.is<HelperDeliveryPayload>();
    if (!result) return std::string("no result");
    return std::string(result->granted ? "granted " : "denied ") + result->reason + " round1=" + std::to_string(round1);
  });

  return suite.take();
}

}  // namespace fas

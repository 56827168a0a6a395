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

#include "fas/algebra.hpp"

#include <algorithm>
#include <set>

namespace fas {

BigInt mod_exp(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
  if (modulus < 2) throw ParameterError("mod_exp: modulus must be at least 2");
  if (sgn(exponent) < 0) throw ParameterError("mod_exp: negative exponent");
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

BigInt mod_inv(const BigInt& a, const BigInt& m) {
  if (m < 2) throw ParameterError("mod_inv: modulus must be at least 2");
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw NonInvertibleError("mod_inv: " + a.get_str() + " has no inverse modulo " + m.get_str());
  }
  return out;
}

bool is_probable_prime(const BigInt& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

PrimeField::PrimeField(BigInt q) : q_(std::move(q)) {
  if (q_ < 3 || !is_probable_prime(q_)) throw ParameterError("prime field: modulus must be a prime >= 3");
}

Scalar PrimeField::scalar(const BigInt& value) const {
  if (!contains(value)) throw ParameterError("scalar out of range [0, q)");
  return Scalar{value};
}

Scalar PrimeField::reduce(const BigInt& value) const {
  BigInt r;
  mpz_mod(r.get_mpz_t(), value.get_mpz_t(), q_.get_mpz_t());
  return Scalar{r};
}

GroupParams::GroupParams(BigInt p, BigInt q, BigInt g) : p_(std::move(p)), q_(std::move(q)), g_(std::move(g)) {
  if (q_ < 3 || !is_probable_prime(q_)) throw ParameterError("group: q must be a prime >= 3");
  if (p_ <= q_ || !is_probable_prime(p_)) throw ParameterError("group: p must be a prime larger than q");
  if (BigInt((p_ - 1) % q_) != 0) throw ParameterError("group: q must divide p - 1");
  if (g_ <= 1 || g_ >= p_) throw ParameterError("group: generator must lie in (1, p)");
  if (mod_exp(g_, q_, p_) != 1) throw ParameterError("group: g does not have order q");
}

GroupElement GroupParams::exp_g(const Scalar& exponent) const { return GroupElement{mod_exp(g_, exponent.value, p_)}; }

GroupElement GroupParams::exp(const GroupElement& base, const BigInt& exponent) const {
  return GroupElement{mod_exp(base.value, exponent, p_)};
}

GroupElement GroupParams::mul(const GroupElement& a, const GroupElement& b) const {
  return GroupElement{BigInt((a.value * b.value) % p_)};
}

bool GroupParams::contains(const BigInt& value) const {
  return value >= 1 && value < p_ && mod_exp(value, q_, p_) == 1;
}

GroupElement GroupParams::element(const BigInt& value) const {
  if (!contains(value)) throw ParameterError("value is not an element of the order-q subgroup");
  return GroupElement{value};
}

Scalar lagrange_coefficient(std::span<const ShareIndex> index_set, ShareIndex j, const PrimeField& field) {
  std::set<BigInt> seen;
  bool found = false;
  for (ShareIndex i : index_set) {
    const BigInt reduced = field.reduce(BigInt(i)).value;
    if (reduced == 0) throw ParameterError("lagrange: index is zero modulo q");
    if (!seen.insert(reduced).second) throw ParameterError("lagrange: duplicate index " + std::to_string(i));
    found = found || i == j;
  }
  if (!found) throw ParameterError("lagrange: index " + std::to_string(j) + " not in set");

  BigInt num = 1;
  BigInt den = 1;
  for (ShareIndex i : index_set) {
    if (i == j) continue;
    num = field.reduce(num * BigInt(i)).value;
    den = field.reduce(den * (BigInt(i) - BigInt(j))).value;
  }
  return field.mul(Scalar{num}, field.inv(Scalar{den}));
}

namespace groups {

namespace {

GroupParams from_hex(const char* p, const char* q, const char* g) {
  return GroupParams(bigint_from_hex(p), bigint_from_hex(q), bigint_from_hex(g));
}

}  // namespace

const GroupParams& test() {
  static const GroupParams group(23, 11, 2);
  return group;
}

const GroupParams& sim() {
  static const GroupParams group =
      from_hex("8071407458eff61c937b93452f9eca79", "afbd67f9", "45e47982a6f69a9242bf199ec89098ce");
  return group;
}

const GroupParams& medium() {
  static const GroupParams group = from_hex(
      "b0bdefc3097f810ce93455a4a8e2570512af3138bae5abf286f1e0f5f59522c10ace2edfe109084ee68f7f41fdd486ba60b20e7f58cbaea"
      "dbd72aabaf94bfcf3",
      "da94e3e8ab73738f",
      "a6844ad50aacb53c3f9cc2cd53d117f8bc9c98b5255ed67d8789e6bb14edffa8e65e012c1ec06dfc9fef221e24cfd30e65a79a20e91a3dae"
      "c74847165f5788fb");
  return group;
}

const GroupParams& production() {
  static const GroupParams group = from_hex(
      "81e0637a3780c9437caae3d12c3f3e21e10a410e008940d5e68cd90fe4b48b5fdd24d15c65fe56ff2f9a7ccf8d30c395802efda8f8c5b68f"
      "a22c74372166fa1ea3fe21f573e74ef20f5e10174950da1a8fa1f54e6411ee13eb22776774c1ed581b3d0ef7f62a355f2982db49a83cf2f3"
      "cce80b11ba6003170abfc12c085b64b2681634983b8352dd2a0ee25f5380042c344d3e89e74a6d521253e157f3312c89f22bfeffd0c929d8"
      "08a0d6149b2ad579a21894c8b4af54f5a521659cf5dfa9e056e413fa3b57349e956fc571e9b70edbc0072ee4b427e8023a306efe38ac22cf"
      "2a1f4657994af260f782d3a234a68e2dec5f3a105893eae86bbce2d3a6447bbd",
      "b5dcb348a62df832d269ff1f14b525a173489de91c319ab04fb2de1a91a31201",
      "207df1b571d2bf568bf032a82765fb77fd271d2dce6fc682818eadc4a38f2b257bcc37170216f503f9eb94d6b6cd9b4f14ccbd2ea4c867a2"
      "de30342fe6449b0af3b59d4704dc06cfd6aa98e7f042e27c49567c70dfef61c52710ada6eb4c0a6ca183df3c3225b670a60e256bf73a2c8f"
      "13f1e9e3bb75ce712cc3548a938ed7e36cd31e109d64708dd26b1c89cc00c49ef2aa0b8ed72cc95a4c1ac2fe0bbf92699ce874b83e2c23fe"
      "1f38ce96e2d8f285d2f83a6b51c2cc5ec111f1f2507d1302fb964594d67621ad768f018cd93617163dedb6ee451a226d0714cd5a7199fa86"
      "12a162d549f41a246de9ed92d386e8d6d8c0bf09cdbf2bb0f7b4f6e80e2a5475");
  return group;
}

const GroupParams& by_name(std::string_view name) {
  if (name == "test") return test();
  if (name == "sim") return sim();
  if (name == "medium") return medium();
  if (name == "default" || name == "production") return production();
  throw ParameterError("unknown group parameter set '" + std::string(name) + "'");
}

std::vector<std::string> names() { return {"test", "sim", "medium", "default"}; }

}  // namespace groups

void to_json(nlohmann::json& j, const GroupParams& group) {
  j = nlohmann::json{{"p", to_hex(group.p())}, {"q", to_hex(group.q())}, {"g", to_hex(group.g())}};
}

GroupParams group_from_json(const nlohmann::json& j) {
  return GroupParams(bigint_from_hex(j.at("p").get<std::string>()), bigint_from_hex(j.at("q").get<std::string>()),
                     bigint_from_hex(j.at("g").get<std::string>()));
}

}  // namespace fas

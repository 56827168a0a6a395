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

#include <json.hpp>

#include "fas/common.hpp"
#include "fas/random.hpp"

namespace fas {

// Paillier encryption with g = n + 1.
//   Enc(m; rho) = g^m * rho^n mod n^2
//   Dec(c)      = L(c^lambda mod n^2) * mu mod n,  L(u) = (u - 1) / n

struct PhePublicKey {
  BigInt n;
  BigInt g;
  BigInt n_squared;

  friend bool operator==(const PhePublicKey& a, const PhePublicKey& b) { return a.n == b.n; }
};

struct PhePrivateKey {
  BigInt lambda;
  BigInt mu;
};

struct PheKeypair {
  PhePublicKey public_key;
  PhePrivateKey private_key;
};

struct PheCiphertext {
  BigInt value;

  friend bool operator==(const PheCiphertext& a, const PheCiphertext& b) { return a.value == b.value; }
};

// Two random primes of bits/2 bits each; bits >= 16.
PheKeypair phe_keygen(std::size_t bits, Rng& rng);
// Throws ParameterError if p == q or gcd(pq, (p-1)(q-1)) != 1.
PheKeypair phe_keypair_from_primes(const BigInt& p, const BigInt& q);

PhePublicKey phe_public_key(const BigInt& n);

// rho drawn from [1, n), resampled until coprime to n.
PheCiphertext phe_encrypt(const BigInt& m, const PhePublicKey& key, Rng& rng);
PheCiphertext phe_encrypt_with(const BigInt& m, const BigInt& rho, const PhePublicKey& key);

PheCiphertext phe_add(const PheCiphertext& a, const PheCiphertext& b, const PhePublicKey& key);
PheCiphertext phe_scale(const PheCiphertext& c, const BigInt& k, const PhePublicKey& key);
BigInt phe_decrypt(const PheCiphertext& c, const PheKeypair& keypair);

std::string ciphertext_to_hex(const PheCiphertext& c);
PheCiphertext ciphertext_from_hex(std::string_view hex, const PhePublicKey& key);

}  // namespace fas

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

#include "fas/paillier.hpp"

#include "fas/algebra.hpp"

namespace fas {

namespace {

BigInt random_prime(std::size_t bits, Rng& rng) {
  for (;;) {
    BigInt candidate = rng.uniform_bits_exact(bits);
    // Top two bits set so the product of two such primes has exactly 2*bits bits.
    if (bits >= 2) mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate)) return candidate;
  }
}

}  // namespace

PhePublicKey phe_public_key(const BigInt& n) {
  if (n < 6) throw ParameterError("paillier: modulus too small");
  return PhePublicKey{n, n + 1, n * n};
}

PheKeypair phe_keypair_from_primes(const BigInt& p, const BigInt& q) {
  if (p == q) throw ParameterError("paillier: p and q must differ");
  if (!is_probable_prime(p) || !is_probable_prime(q)) throw ParameterError("paillier: p and q must be prime");
  const BigInt n = p * q;
  if (gcd(n, BigInt((p - 1) * (q - 1))) != 1) throw ParameterError("paillier: gcd(pq, (p-1)(q-1)) != 1");
  PheKeypair out;
  out.public_key = phe_public_key(n);
  out.private_key.lambda = lcm(BigInt(p - 1), BigInt(q - 1));
  const BigInt u = mod_exp(out.public_key.g, out.private_key.lambda, out.public_key.n_squared);
  const BigInt l = (u - 1) / n;
  out.private_key.mu = mod_inv(l, n);
  return out;
}

PheKeypair phe_keygen(std::size_t bits, Rng& rng) {
  if (bits < 16) throw ParameterError("paillier: modulus must have at least 16 bits");
  const std::size_t half = bits / 2;
  for (;;) {
    const BigInt p = random_prime(half, rng);
    const BigInt q = random_prime(bits - half, rng);
    if (p == q) continue;
    const BigInt n = p * q;
    if (gcd(n, BigInt((p - 1) * (q - 1))) != 1) continue;
    return phe_keypair_from_primes(p, q);
  }
}

PheCiphertext phe_encrypt_with(const BigInt& m, const BigInt& rho, const PhePublicKey& key) {
  if (sgn(m) < 0 || m >= key.n) throw ParameterError("paillier: plaintext out of range [0, n)");
  if (rho <= 0 || rho >= key.n || gcd(rho, key.n) != 1) throw ParameterError("paillier: rho must be a unit mod n");
  const BigInt gm = mod_exp(key.g, m, key.n_squared);
  const BigInt rn = mod_exp(rho, key.n, key.n_squared);
  return PheCiphertext{BigInt((gm * rn) % key.n_squared)};
}

PheCiphertext phe_encrypt(const BigInt& m, const PhePublicKey& key, Rng& rng) {
  for (;;) {
    const BigInt rho = rng.uniform_range(1, key.n);
    if (gcd(rho, key.n) == 1) return phe_encrypt_with(m, rho, key);
  }
}

PheCiphertext phe_add(const PheCiphertext& a, const PheCiphertext& b, const PhePublicKey& key) {
  return PheCiphertext{BigInt((a.value * b.value) % key.n_squared)};
}

PheCiphertext phe_scale(const PheCiphertext& c, const BigInt& k, const PhePublicKey& key) {
  if (sgn(k) < 0) throw ParameterError("paillier: negative scale factor");
  return PheCiphertext{mod_exp(c.value, k, key.n_squared)};
}

BigInt phe_decrypt(const PheCiphertext& c, const PheKeypair& keypair) {
  const PhePublicKey& pub = keypair.public_key;
  if (sgn(c.value) <= 0 || c.value >= pub.n_squared) throw ParameterError("paillier: ciphertext out of range");
  const BigInt u = mod_exp(c.value, keypair.private_key.lambda, pub.n_squared);
  const BigInt l = (u - 1) / pub.n;
  return BigInt((l * keypair.private_key.mu) % pub.n);
}

std::string ciphertext_to_hex(const PheCiphertext& c) { return to_hex(c.value); }

PheCiphertext ciphertext_from_hex(std::string_view hex, const PhePublicKey& key) {
  PheCiphertext c{bigint_from_hex(hex)};
  if (sgn(c.value) <= 0 || c.value >= key.n_squared) throw ParameterError("paillier: ciphertext out of range");
  return c;
}

}  // namespace fas

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

#include "fas/common.hpp"

#include <openssl/evp.h>

#include <cctype>

namespace fas {

std::string to_hex(const BigInt& value) {
  if (sgn(value) < 0) throw ParameterError("to_hex: negative integer");
  return value.get_str(16);
}

BigInt bigint_from_hex(std::string_view hex) {
  if (hex.empty()) throw ParameterError("hex integer: empty string");
  for (char ch : hex) {
    if (!std::isxdigit(static_cast<unsigned char>(ch))) {
      throw ParameterError("hex integer: invalid digit in '" + std::string(hex) + "'");
    }
  }
  return BigInt(std::string(hex), 16);
}

std::string bytes_to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {

int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

Bytes bytes_from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw ParameterError("hex bytes: odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ParameterError("hex bytes: invalid digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Bytes to_bytes_be(const BigInt& value, std::size_t width) {
  if (sgn(value) < 0) throw ParameterError("to_bytes_be: negative integer");
  const std::size_t needed = (bit_length(value) + 7) / 8;
  if (needed > width) throw ParameterError("to_bytes_be: value wider than encoding");
  Bytes out(width, 0);
  std::size_t count = 0;
  mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0, value.get_mpz_t());
  return out;
}

BigInt bigint_from_bytes_be(std::span<const std::uint8_t> bytes) {
  BigInt out;
  if (!bytes.empty()) mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

std::size_t bit_length(const BigInt& value) {
  if (sgn(value) == 0) return 0;
  return mpz_sizeinbase(value.get_mpz_t(), 2);
}

Digest sha256(std::span<const std::uint8_t> data) {
  Sha256Stream stream;
  stream.update(data);
  return stream.finish();
}

Sha256Stream::Sha256Stream() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
    throw InvariantViolation("sha256: context initialisation failed");
  }
}

Sha256Stream::~Sha256Stream() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256Stream::update(std::span<const std::uint8_t> data) {
  if (finished_) throw InvariantViolation("sha256: update after finish");
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
}

void Sha256Stream::update(std::string_view text) {
  update(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Digest Sha256Stream::finish() {
  if (finished_) throw InvariantViolation("sha256: finish called twice");
  finished_ = true;
  Digest out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len);
  return out;
}

}  // namespace fas

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

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fas {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

// Error hierarchy. Every failure raised by the library derives from Error so
// callers can map it to an exit status in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class NonInvertibleError : public Error {
 public:
  using Error::Error;
};

class SessionError : public Error {
 public:
  using Error::Error;
};

class InsufficientSharesError : public Error {
 public:
  using Error::Error;
};

class InvalidPartialError : public Error {
 public:
  using Error::Error;
};

class CorruptedShareError : public Error {
 public:
  using Error::Error;
};

class RegistrationError : public Error {
 public:
  using Error::Error;
};

class PolicyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field_path, const std::string& what)
      : Error(field_path + ": " + what), field_path_(std::move(field_path)) {}

  const std::string& field_path() const noexcept { return field_path_; }

 private:
  std::string field_path_;
};

class NondeterminismError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Lowercase big-endian hex without leading zeros; zero encodes as "0".
std::string to_hex(const BigInt& value);
BigInt bigint_from_hex(std::string_view hex);

std::string bytes_to_hex(std::span<const std::uint8_t> bytes);
Bytes bytes_from_hex(std::string_view hex);

// Fixed-width big-endian encoding; throws ParameterError if value does not fit.
Bytes to_bytes_be(const BigInt& value, std::size_t width);
BigInt bigint_from_bytes_be(std::span<const std::uint8_t> bytes);

std::size_t bit_length(const BigInt& value);

Digest sha256(std::span<const std::uint8_t> data);

// Incremental SHA-256 used for transcript digests.
class Sha256Stream {
 public:
  Sha256Stream();
  ~Sha256Stream();
  Sha256Stream(const Sha256Stream&) = delete;
  Sha256Stream& operator=(const Sha256Stream&) = delete;

  void update(std::span<const std::uint8_t> data);
  void update(std::string_view text);
  Digest finish();

 private:
  void* ctx_;
  bool finished_ = false;
};

}  // namespace fas

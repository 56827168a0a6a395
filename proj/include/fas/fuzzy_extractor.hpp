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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fas/algebra.hpp"

namespace fas {

// Fixed-length bit string, bit 0 first. Stored one bit per byte.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : bits_(length, 0) {}
  explicit BitString(std::vector<std::uint8_t> bits);

  // Parses "0101..."; throws ParameterError on any other character.
  static BitString from_string(std::string_view text);
  // Inverse of to_hex(); `length` bits are taken from the front.
  static BitString from_hex(std::string_view hex, std::size_t length);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool value) { bits_.at(i) = value ? 1 : 0; }
  void flip(std::size_t i) { bits_.at(i) ^= 1; }

  std::size_t popcount() const;
  bool all_zero() const { return popcount() == 0; }

  std::string to_string() const;
  // Bit 0 is the most significant bit of the first hex digit; the tail is
  // zero-padded to a whole digit.
  std::string to_hex() const;

  // Overwrites every bit with zero and releases storage.
  void wipe();

  friend BitString operator^(const BitString& a, const BitString& b);
  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const BitString& a, const BitString& b);

// Repetition code: m message bits, each repeated r times (r odd).
struct CodeParams {
  std::size_t m = 0;
  std::size_t r = 1;

  std::size_t length() const { return m * r; }
  std::size_t correctable_per_block() const { return r / 2; }
  // Throws ParameterError unless m >= 1 and r is odd.
  void validate() const;

  // m = bit length of q, so every share value fits.
  static CodeParams for_field(const PrimeField& field, std::size_t r);

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

struct Template {
  BitString bits;
};

// Public offset between a codeword and the enrolment template.
struct HelperData {
  BitString bits;
  CodeParams code;

  friend bool operator==(const HelperData&, const HelperData&) = default;
};

BitString encode(const BitString& key_bits, const CodeParams& params);
// Per-block majority vote.
BitString decode(const BitString& noisy, const CodeParams& params);

// HD = encode(key) XOR w.
HelperData fe_enroll(const BitString& key_share_bits, const Template& enrolment, const CodeParams& params);
// Same as above, then wipes the caller's key and template.
HelperData fe_enroll_and_erase(BitString& key_share_bits, Template& enrolment, const CodeParams& params);

// decode(HD XOR w'). A wrong result is not detectable here.
BitString fe_reproduce(const Template& fresh, const HelperData& helper);

// Big-endian integer value; throws CorruptedShareError if the value is >= q.
Scalar bits_to_scalar(const BitString& key_bits, const PrimeField& field);
// Big-endian, zero-padded to m bits; throws ParameterError if value >= 2^m.
BitString scalar_to_bits(const Scalar& value, std::size_t m);

// Probability that a single r-block decodes wrongly at per-bit flip rate p.
double block_failure_probability(std::size_t r, double p_flip);
// Probability that at least one of the m blocks decodes wrongly.
double reproduction_failure_probability(const CodeParams& params, double p_flip);

void to_json(nlohmann::json& j, const HelperData& helper);
HelperData helper_data_from_json(const nlohmann::json& j);

}  // namespace fas

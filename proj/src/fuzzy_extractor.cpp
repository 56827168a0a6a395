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

#include "fas/fuzzy_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fas {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::uint8_t& b : bits_) {
    if (b > 1) throw ParameterError("bit string: element is not 0 or 1");
  }
}

BitString BitString::from_string(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw ParameterError("bit string: expected only '0' and '1'");
    out.bits_[i] = text[i] == '1' ? 1 : 0;
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t length) {
  if (hex.size() != (length + 3) / 4) throw ParameterError("bit string: hex length does not match bit length");
  BitString out(length);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char ch = hex[d];
    int v = -1;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
    if (v < 0) throw ParameterError("bit string: invalid hex digit");
    for (int b = 0; b < 4; ++b) {
      const std::size_t i = 4 * d + static_cast<std::size_t>(b);
      const bool bit = ((v >> (3 - b)) & 1) != 0;
      if (i < length) {
        out.bits_[i] = bit ? 1 : 0;
      } else if (bit) {
        throw ParameterError("bit string: non-zero padding");
      }
    }
  }
  return out;
}

std::size_t BitString::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (std::uint8_t b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits_.size(); i += 4) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      v <<= 1;
      if (i + b < bits_.size()) v |= bits_[i + b];
    }
    out.push_back(kDigits[v]);
  }
  return out;
}

void BitString::wipe() {
  std::fill(bits_.begin(), bits_.end(), std::uint8_t{0});
  bits_.clear();
  bits_.shrink_to_fit();
}

BitString operator^(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw ParameterError("bit string xor: length mismatch");
  BitString out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.bits_[i] = a.bits_[i] ^ b.bits_[i];
  return out;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) { return (a ^ b).popcount(); }

void CodeParams::validate() const {
  if (m == 0) throw ParameterError("code: message length must be positive");
  if (r % 2 == 0) throw ParameterError("code: repetition factor must be odd");
}

CodeParams CodeParams::for_field(const PrimeField& field, std::size_t r) {
  CodeParams out{field.bits(), r};
  out.validate();
  return out;
}

BitString encode(const BitString& key_bits, const CodeParams& params) {
  params.validate();
  if (key_bits.size() != params.m) throw ParameterError("encode: key length does not match m");
  BitString out(params.length());
  for (std::size_t i = 0; i < params.m; ++i) {
    for (std::size_t k = 0; k < params.r; ++k) out.set(i * params.r + k, key_bits[i] != 0);
  }
  return out;
}

BitString decode(const BitString& noisy, const CodeParams& params) {
  params.validate();
  if (noisy.size() != params.length()) throw ParameterError("decode: codeword length does not match m*r");
  BitString out(params.m);
  for (std::size_t i = 0; i < params.m; ++i) {
    std::size_t ones = 0;
    for (std::size_t k = 0; k < params.r; ++k) ones += noisy[i * params.r + k];
    out.set(i, 2 * ones > params.r);
  }
  return out;
}

HelperData fe_enroll(const BitString& key_share_bits, const Template& enrolment, const CodeParams& params) {
  if (enrolment.bits.size() != params.length()) throw ParameterError("fe_enroll: template length does not match m*r");
  return HelperData{encode(key_share_bits, params) ^ enrolment.bits, params};
}

HelperData fe_enroll_and_erase(BitString& key_share_bits, Template& enrolment, const CodeParams& params) {
  HelperData out = fe_enroll(key_share_bits, enrolment, params);
  key_share_bits.wipe();
  enrolment.bits.wipe();
  return out;
}

BitString fe_reproduce(const Template& fresh, const HelperData& helper) {
  if (fresh.bits.size() != helper.code.length() || helper.bits.size() != helper.code.length()) {
    throw ParameterError("fe_reproduce: template or helper length does not match m*r");
  }
  return decode(helper.bits ^ fresh.bits, helper.code);
}

Scalar bits_to_scalar(const BitString& key_bits, const PrimeField& field) {
  BigInt value = 0;
  for (std::size_t i = 0; i < key_bits.size(); ++i) {
    value <<= 1;
    value += key_bits[i];
  }
  if (value >= field.modulus()) throw CorruptedShareError("recovered share is not below q");
  return Scalar{value};
}

BitString scalar_to_bits(const Scalar& value, std::size_t m) {
  if (sgn(value.value) < 0 || bit_length(value.value) > m) throw ParameterError("scalar_to_bits: value >= 2^m");
  BitString out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.set(m - 1 - i, mpz_tstbit(value.value.get_mpz_t(), static_cast<mp_bitcnt_t>(i)) != 0);
  }
  return out;
}

double block_failure_probability(std::size_t r, double p_flip) {
  // P(more than floor(r/2) of r bits flip).
  double total = 0.0;
  double binom = 1.0;  // C(r, k), built incrementally
  for (std::size_t k = 0; k <= r; ++k) {
    if (k > 0) binom = binom * static_cast<double>(r - k + 1) / static_cast<double>(k);
    if (2 * k > r) {
      total += binom * std::pow(p_flip, static_cast<double>(k)) * std::pow(1.0 - p_flip, static_cast<double>(r - k));
    }
  }
  return total;
}

double reproduction_failure_probability(const CodeParams& params, double p_flip) {
  return 1.0 - std::pow(1.0 - block_failure_probability(params.r, p_flip), static_cast<double>(params.m));
}

void to_json(nlohmann::json& j, const HelperData& helper) {
  j = nlohmann::json{{"bits", helper.bits.to_hex()}, {"m", helper.code.m}, {"r", helper.code.r}};
}

HelperData helper_data_from_json(const nlohmann::json& j) {
  CodeParams code{j.at("m").get<std::size_t>(), j.at("r").get<std::size_t>()};
  code.validate();
  return HelperData{BitString::from_hex(j.at("bits").get<std::string>(), code.length()), code};
}

}  // namespace fas

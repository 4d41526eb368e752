//------------------------------------------------------------------------------
//
//   Copyright 2026 The walreq authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace walreq {

/// Exact rational number. All solver arithmetic runs on this type; there is
/// deliberately no floating-point path anywhere in the library.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Renders a rational as "p" or "p/q" with q > 0 and gcd(p,q)=1.
inline std::string to_string(const Rational& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

/// Strict parser for "p" or "p/q" with an optional leading minus sign.
/// Returns std::nullopt on anything else (including q = 0, embedded spaces,
/// decimal points, or a signed denominator).
inline std::optional<Rational> parse_rational(std::string_view text) {
  std::size_t pos = 0;
  if (pos < text.size() && text[pos] == '-') ++pos;
  std::size_t num_begin = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos == num_begin) return std::nullopt;
  std::string numerator(text.substr(0, pos));
  if (pos == text.size()) return Rational(Integer(numerator));
  if (text[pos] != '/') return std::nullopt;
  ++pos;
  std::size_t den_begin = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos == den_begin || pos != text.size()) return std::nullopt;
  Integer den(std::string(text.substr(den_begin)));
  if (den == 0) return std::nullopt;
  return Rational(Integer(numerator), den);
}

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

/// Exact inner product of a price-like rational vector with an integer bundle.
inline Rational dot(const std::vector<Rational>& prices, const std::vector<int>& amounts) {
  Rational sum = 0;
  for (std::size_t j = 0; j < amounts.size(); ++j) {
    if (amounts[j] != 0) sum += prices[j] * amounts[j];
  }
  return sum;
}

}  // namespace walreq

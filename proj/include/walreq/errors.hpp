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

#include <stdexcept>
#include <string>

namespace walreq {

/// Distinct reason codes so callers (and the CLI exit-status mapping) can
/// react without parsing messages.
enum class ValidationCode {
  dimension_mismatch,
  negative_entry,
  missing_zero_bundle,
  nonzero_zero_valuation,
  duplicate_bundle,
  bundle_exceeds_capacity,
  invalid_profile,
  infeasible_profile,
  invalid_prices,
  not_market_clearing,
  not_monotone,
  missing_extension_bundle,
  bad_schema,
  bad_number,
  bad_parameter,
  weights_not_probability,
  not_simplex,
};

inline const char* validation_code_name(ValidationCode code) {
  switch (code) {
    case ValidationCode::dimension_mismatch: return "dimension_mismatch";
    case ValidationCode::negative_entry: return "negative_entry";
    case ValidationCode::missing_zero_bundle: return "missing_zero_bundle";
    case ValidationCode::nonzero_zero_valuation: return "nonzero_zero_valuation";
    case ValidationCode::duplicate_bundle: return "duplicate_bundle";
    case ValidationCode::bundle_exceeds_capacity: return "bundle_exceeds_capacity";
    case ValidationCode::invalid_profile: return "invalid_profile";
    case ValidationCode::infeasible_profile: return "infeasible_profile";
    case ValidationCode::invalid_prices: return "invalid_prices";
    case ValidationCode::not_market_clearing: return "not_market_clearing";
    case ValidationCode::not_monotone: return "not_monotone";
    case ValidationCode::missing_extension_bundle: return "missing_extension_bundle";
    case ValidationCode::bad_schema: return "bad_schema";
    case ValidationCode::bad_number: return "bad_number";
    case ValidationCode::bad_parameter: return "bad_parameter";
    case ValidationCode::weights_not_probability: return "weights_not_probability";
    case ValidationCode::not_simplex: return "not_simplex";
  }
  return "unknown";
}

/// Malformed input: instances, profiles, prices, documents, parameters.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationCode code, const std::string& message)
      : std::runtime_error(std::string(validation_code_name(code)) + ": " + message),
        code_(code) {}

  ValidationCode code() const { return code_; }

 private:
  ValidationCode code_;
};

/// A configured enumeration or size cap was hit. The result would require
/// brute force beyond the cap; nothing was computed.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& message) : std::runtime_error(message) {}
};

/// A certified inequality failed to hold. This means a proved statement was
/// falsified on concrete data and should never fire outside of broken builds.
class BoundViolationError : public std::logic_error {
 public:
  explicit BoundViolationError(const std::string& bound) : std::logic_error("bound violated: " + bound) {}
};

}  // namespace walreq

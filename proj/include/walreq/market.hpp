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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "walreq/errors.hpp"
#include "walreq/rational.hpp"

namespace walreq {

/// Integer amounts per resource. Every bundle lives in Z_+^m.
using Bundle = std::vector<int>;

/// A combinatorial market: n players choose bundles of m resources that are
/// available at integer multiplicity. Strategy spaces are explicit finite
/// lists; the all-zero bundle must be present with value exactly zero, and
/// every listed bundle fits the capacities on its own. Instances are value
/// objects: construct, validate once, then treat as immutable.
struct MarketInstance {
  int n = 0;  // players
  int m = 0;  // resources
  std::vector<int> capacities;
  std::vector<std::vector<Bundle>> strategy_spaces;     // bundles per player
  std::vector<std::vector<Rational>> valuations;        // aligned with bundles
  std::string name;                                     // optional metadata
  std::vector<std::string> notes;                       // optional metadata

  int bundles_of(int player) const { return static_cast<int>(strategy_spaces[player].size()); }

  /// Total number of listed bundles across all players.
  int bundle_count() const {
    int k = 0;
    for (const auto& space : strategy_spaces) k += static_cast<int>(space.size());
    return k;
  }

  int max_capacity() const {
    int u_max = 0;
    for (int u_j : capacities) u_max = std::max(u_max, u_j);
    return u_max;
  }

  friend bool operator==(const MarketInstance&, const MarketInstance&) = default;
};

/// One chosen bundle index per player.
struct StrategyProfile {
  std::vector<int> choices;

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
  friend auto operator<=>(const StrategyProfile& a, const StrategyProfile& b) {
    return a.choices <=> b.choices;
  }
};

/// Nonnegative per-resource prices.
struct PriceVector {
  std::vector<Rational> prices;

  friend bool operator==(const PriceVector&, const PriceVector&) = default;
};

struct RegretBreakdown {
  std::vector<Rational> per_player;
  Rational total = 0;
};

struct BestResponse {
  int bundle = 0;      // index into the player's strategy space
  Rational utility = 0;
};

/// Throws ValidationError with a specific code when the instance breaks any
/// structural rule. Passing instances are safe inputs for every operation in
/// the library.
inline void validate(const MarketInstance& instance) {
  if (instance.n < 1 || instance.m < 1) {
    throw ValidationError(ValidationCode::dimension_mismatch, "need at least one player and one resource");
  }
  if (static_cast<int>(instance.capacities.size()) != instance.m) {
    throw ValidationError(ValidationCode::dimension_mismatch, "capacity vector length != resource count");
  }
  for (int u_j : instance.capacities) {
    if (u_j < 0) throw ValidationError(ValidationCode::negative_entry, "negative capacity");
  }
  if (static_cast<int>(instance.strategy_spaces.size()) != instance.n ||
      static_cast<int>(instance.valuations.size()) != instance.n) {
    throw ValidationError(ValidationCode::dimension_mismatch, "per-player lists do not match player count");
  }
  for (int i = 0; i < instance.n; ++i) {
    const auto& space = instance.strategy_spaces[i];
    const auto& values = instance.valuations[i];
    const std::string player = "player " + std::to_string(i + 1);
    if (space.empty() || space.size() != values.size()) {
      throw ValidationError(ValidationCode::dimension_mismatch, player + ": bundle/value lists misaligned");
    }
    bool has_zero = false;
    for (std::size_t l = 0; l < space.size(); ++l) {
      const Bundle& bundle = space[l];
      if (static_cast<int>(bundle.size()) != instance.m) {
        throw ValidationError(ValidationCode::dimension_mismatch,
                              player + " bundle " + std::to_string(l) + ": wrong length");
      }
      bool all_zero = true;
      for (int j = 0; j < instance.m; ++j) {
        if (bundle[j] < 0) {
          throw ValidationError(ValidationCode::negative_entry,
                                player + " bundle " + std::to_string(l) + ": negative amount");
        }
        if (bundle[j] > instance.capacities[j]) {
          throw ValidationError(ValidationCode::bundle_exceeds_capacity,
                                player + " bundle " + std::to_string(l) + ": amount over capacity on resource " +
                                    std::to_string(j + 1));
        }
        if (bundle[j] != 0) all_zero = false;
      }
      if (all_zero) {
        has_zero = true;
        if (values[l] != 0) {
          throw ValidationError(ValidationCode::nonzero_zero_valuation,
                                player + ": zero bundle must have value 0");
        }
      }
    }
    if (!has_zero) {
      throw ValidationError(ValidationCode::missing_zero_bundle, "missing zero bundle, " + player);
    }
    std::set<Bundle> seen;
    for (std::size_t l = 0; l < space.size(); ++l) {
      if (!seen.insert(space[l]).second) {
        throw ValidationError(ValidationCode::duplicate_bundle,
                              player + " bundle " + std::to_string(l) + ": duplicate");
      }
    }
  }
}

inline void validate_profile(const MarketInstance& instance, const StrategyProfile& profile) {
  if (static_cast<int>(profile.choices.size()) != instance.n) {
    throw ValidationError(ValidationCode::invalid_profile, "profile length != player count");
  }
  for (int i = 0; i < instance.n; ++i) {
    if (profile.choices[i] < 0 || profile.choices[i] >= instance.bundles_of(i)) {
      throw ValidationError(ValidationCode::invalid_profile,
                            "player " + std::to_string(i + 1) + ": bundle index out of range");
    }
  }
}

inline void validate_prices(const MarketInstance& instance, const PriceVector& prices) {
  if (static_cast<int>(prices.prices.size()) != instance.m) {
    throw ValidationError(ValidationCode::invalid_prices, "price vector length != resource count");
  }
  for (const Rational& p : prices.prices) {
    if (p < 0) throw ValidationError(ValidationCode::invalid_prices, "negative price");
  }
}

inline const Bundle& chosen_bundle(const MarketInstance& instance, const StrategyProfile& profile, int player) {
  return instance.strategy_spaces[player][profile.choices[player]];
}

/// Componentwise total consumption of the profile.
inline std::vector<int> load(const MarketInstance& instance, const StrategyProfile& profile) {
  validate_profile(instance, profile);
  std::vector<int> result(instance.m, 0);
  for (int i = 0; i < instance.n; ++i) {
    const Bundle& bundle = chosen_bundle(instance, profile, i);
    for (int j = 0; j < instance.m; ++j) result[j] += bundle[j];
  }
  return result;
}

inline bool is_capacity_feasible(const MarketInstance& instance, const StrategyProfile& profile) {
  std::vector<int> usage = load(instance, profile);
  for (int j = 0; j < instance.m; ++j) {
    if (usage[j] > instance.capacities[j]) return false;
  }
  return true;
}

inline void require_capacity_feasible(const MarketInstance& instance, const StrategyProfile& profile) {
  if (!is_capacity_feasible(instance, profile)) {
    throw ValidationError(ValidationCode::infeasible_profile, "profile overloads a resource");
  }
}

/// Complementarity test: positive prices are allowed only on resources whose
/// load equals the capacity. Rejects capacity-infeasible profiles.
inline bool is_market_clearing(const MarketInstance& instance, const StrategyProfile& profile,
                               const PriceVector& prices) {
  validate_prices(instance, prices);
  require_capacity_feasible(instance, profile);
  std::vector<int> usage = load(instance, profile);
  for (int j = 0; j < instance.m; ++j) {
    if (usage[j] < instance.capacities[j] && prices.prices[j] != 0) return false;
  }
  return true;
}

/// Demand oracle: the utility-maximizing bundle of one player under the given
/// prices, by linear scan. Ties break toward the lowest bundle index, so the
/// zero bundle beats any equally good alternative when listed first.
inline BestResponse best_response(const MarketInstance& instance, int player, const PriceVector& prices) {
  validate_prices(instance, prices);
  if (player < 0 || player >= instance.n) {
    throw ValidationError(ValidationCode::bad_parameter, "player index out of range");
  }
  const auto& space = instance.strategy_spaces[player];
  const auto& values = instance.valuations[player];
  BestResponse best{0, values[0] - dot(prices.prices, space[0])};
  for (int l = 1; l < static_cast<int>(space.size()); ++l) {
    Rational utility = values[l] - dot(prices.prices, space[l]);
    if (utility > best.utility) best = BestResponse{l, utility};
  }
  return best;
}

inline Rational welfare_value(const MarketInstance& instance, const StrategyProfile& profile) {
  validate_profile(instance, profile);
  Rational total = 0;
  for (int i = 0; i < instance.n; ++i) total += instance.valuations[i][profile.choices[i]];
  return total;
}

/// Per-player and total regret of (profile, prices). Defined for any profile
/// with valid indices; capacity feasibility is checked by the optimizers, not
/// here. Every entry is nonnegative because the best response dominates the
/// held bundle by construction.
inline RegretBreakdown regret(const MarketInstance& instance, const StrategyProfile& profile,
                              const PriceVector& prices) {
  validate_profile(instance, profile);
  validate_prices(instance, prices);
  RegretBreakdown breakdown;
  breakdown.per_player.reserve(instance.n);
  for (int i = 0; i < instance.n; ++i) {
    Rational held = instance.valuations[i][profile.choices[i]] -
                    dot(prices.prices, chosen_bundle(instance, profile, i));
    Rational gap = best_response(instance, i, prices).utility - held;
    breakdown.per_player.push_back(gap);
    breakdown.total += gap;
  }
  return breakdown;
}

/// Structural report on valuation monotonicity and strategy-space closure
/// under adding items up to capacity. Witnesses identify the first violation
/// found in index order.
struct StructureReport {
  bool monotone = true;
  bool upward_closed = true;

  struct MonotoneWitness {
    int player;
    int low_bundle;
    int high_bundle;
  };
  struct ClosureWitness {
    int player;
    int bundle;
    Bundle missing;
  };
  std::optional<MonotoneWitness> monotone_witness;
  std::optional<ClosureWitness> closure_witness;
};

namespace detail {

inline bool leq_componentwise(const Bundle& a, const Bundle& b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] > b[j]) return false;
  }
  return true;
}

}  // namespace detail

/// Checks both structural properties. The closure check walks the integer box
/// between each bundle and the capacity vector, so it is exponential in m in
/// the worst case; box_cap bounds the number of visited lattice points.
inline StructureReport check_monotone_upward_closed(const MarketInstance& instance,
                                                    std::uint64_t box_cap = 10'000'000) {
  StructureReport report;
  for (int i = 0; i < instance.n && report.monotone; ++i) {
    const auto& space = instance.strategy_spaces[i];
    const auto& values = instance.valuations[i];
    for (std::size_t a = 0; a < space.size() && report.monotone; ++a) {
      for (std::size_t b = 0; b < space.size(); ++b) {
        if (a == b) continue;
        if (detail::leq_componentwise(space[a], space[b]) && values[a] > values[b]) {
          report.monotone = false;
          report.monotone_witness =
              StructureReport::MonotoneWitness{i, static_cast<int>(a), static_cast<int>(b)};
          break;
        }
      }
    }
  }
  std::uint64_t visited = 0;
  for (int i = 0; i < instance.n && report.upward_closed; ++i) {
    const auto& space = instance.strategy_spaces[i];
    std::set<Bundle> members(space.begin(), space.end());
    for (std::size_t l = 0; l < space.size() && report.upward_closed; ++l) {
      Bundle probe = space[l];
      // odometer walk over { y : bundle <= y <= u }
      while (true) {
        if (++visited > box_cap) {
          throw CapExceededError("closure check: lattice box too large");
        }
        if (!members.count(probe)) {
          report.upward_closed = false;
          report.closure_witness = StructureReport::ClosureWitness{i, static_cast<int>(l), probe};
          break;
        }
        int j = 0;
        while (j < instance.m && probe[j] == instance.capacities[j]) {
          probe[j] = space[l][j];
          ++j;
        }
        if (j == instance.m) break;
        ++probe[j];
      }
    }
  }
  return report;
}

/// Adds all leftover capacity to player 1's bundle so that the result loads
/// every resource exactly at capacity. Requires the enlarged bundle to be
/// listed in player 1's strategy space; on upward-closed instances it always
/// is.
inline StrategyProfile extend_to_full_load(const MarketInstance& instance, const StrategyProfile& profile) {
  require_capacity_feasible(instance, profile);
  std::vector<int> usage = load(instance, profile);
  Bundle enlarged = chosen_bundle(instance, profile, 0);
  bool changed = false;
  for (int j = 0; j < instance.m; ++j) {
    int slack = instance.capacities[j] - usage[j];
    if (slack > 0) {
      enlarged[j] += slack;
      changed = true;
    }
  }
  if (!changed) return profile;
  const auto& space = instance.strategy_spaces[0];
  for (int l = 0; l < static_cast<int>(space.size()); ++l) {
    if (space[l] == enlarged) {
      StrategyProfile extended = profile;
      extended.choices[0] = l;
      return extended;
    }
  }
  throw ValidationError(ValidationCode::missing_extension_bundle,
                        "player 1 lacks the bundle absorbing all slack; space is not upward closed");
}

}  // namespace walreq

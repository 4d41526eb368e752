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

//  Black-box pipelines that turn any welfare algorithm into low-regret
//  clearing prices, with the certified bound depending on whether the
//  instance is monotone and upward closed.

#pragma once

#include <functional>
#include <string>

#include "walreq/market.hpp"
#include "walreq/pricing.hpp"
#include "walreq/welfare.hpp"

namespace walreq {

/// A pluggable welfare algorithm: must return a capacity-feasible profile on
/// every instance it accepts.
struct WelfareAlg {
  std::string name;
  std::function<StrategyProfile(const MarketInstance&)> produce;
  std::string behavior;
};

struct AlgOutcome {
  StrategyProfile profile;
  PriceVector prices;
  Rational regret = 0;
  Rational alpha = 0;   // integrality gap certified by the algorithm's output
  Rational bound = 0;   // guarantee the pipeline asserts against the regret
  bool bound_holds = false;
};

inline StrategyProfile alg_exact(const MarketInstance& instance) {
  return solve_welfare_exact(instance).profile;
}

/// Players in index order grab the best bundle still fitting the remaining
/// capacity: highest value first, then the larger bundle, then the lower
/// index. Deliberately myopic; exists to exercise nonzero-gap paths.
inline StrategyProfile alg_greedy(const MarketInstance& instance) {
  validate(instance);
  std::vector<int> remaining = instance.capacities;
  StrategyProfile profile;
  profile.choices.assign(instance.n, 0);
  for (int i = 0; i < instance.n; ++i) {
    int pick = -1;
    int pick_size = 0;
    for (int l = 0; l < instance.bundles_of(i); ++l) {
      const Bundle& bundle = instance.strategy_spaces[i][l];
      bool fits = true;
      int size = 0;
      for (int j = 0; j < instance.m; ++j) {
        size += bundle[j];
        if (bundle[j] > remaining[j]) fits = false;
      }
      if (!fits) continue;
      if (pick < 0 || instance.valuations[i][l] > instance.valuations[i][pick] ||
          (instance.valuations[i][l] == instance.valuations[i][pick] && size > pick_size)) {
        pick = l;
        pick_size = size;
      }
    }
    profile.choices[i] = pick;  // the zero bundle always fits
    const Bundle& taken = instance.strategy_spaces[i][pick];
    for (int j = 0; j < instance.m; ++j) remaining[j] -= taken[j];
  }
  return profile;
}

inline WelfareAlg exact_alg() {
  return WelfareAlg{"exact", [](const MarketInstance& i) { return alg_exact(i); },
                    "exhaustive welfare optimum"};
}

inline WelfareAlg greedy_alg() {
  return WelfareAlg{"greedy", [](const MarketInstance& i) { return alg_greedy(i); },
                    "index-order greedy, no guarantee"};
}

/// The integrality gap certified by this particular output.
inline Rational verified_alpha(const MarketInstance& instance, const StrategyProfile& profile) {
  return integrality_gap(instance, profile);
}

namespace detail {

inline StrategyProfile run_alg_checked(const MarketInstance& instance, const WelfareAlg& alg) {
  StrategyProfile profile = alg.produce(instance);
  require_capacity_feasible(instance, profile);
  return profile;
}

}  // namespace detail

/// Monotone pipeline: extend the algorithm's output to full load, price it
/// with the optimal dual prices, and certify regret <= the integrality gap of
/// the extended output. Requires a monotone, upward-closed instance.
inline AlgOutcome algorithm3(const MarketInstance& instance, const WelfareAlg& alg) {
  validate(instance);
  StructureReport structure = check_monotone_upward_closed(instance);
  if (!structure.monotone || !structure.upward_closed) {
    throw ValidationError(ValidationCode::not_monotone,
                          "pipeline requires monotone valuations and upward-closed strategy spaces");
  }
  StrategyProfile produced = detail::run_alg_checked(instance, alg);
  StrategyProfile extended = extend_to_full_load(instance, produced);
  DualResult dual = solve_dual_prices(instance);

  AlgOutcome outcome;
  outcome.profile = extended;
  outcome.prices = dual.lambda;
  outcome.regret = regret(instance, extended, dual.lambda).total;
  outcome.alpha = verified_alpha(instance, extended);
  outcome.bound = outcome.alpha;
  outcome.bound_holds = outcome.regret <= outcome.bound;
  if (!is_market_clearing(instance, extended, dual.lambda)) {
    throw BoundViolationError("full-load prices clear the market");
  }
  if (!outcome.bound_holds) throw BoundViolationError("regret<=verified_alpha");
  return outcome;
}

/// General pipeline: price the algorithm's output with the optimal dual
/// prices masked to zero on slack resources. The regret is certified against
/// both the duality-gap form and the verified-alpha form of the guarantee,
/// which coincide when the dual prices are optimal.
inline AlgOutcome algorithm4(const MarketInstance& instance, const WelfareAlg& alg) {
  validate(instance);
  StrategyProfile produced = detail::run_alg_checked(instance, alg);
  DualResult dual = solve_dual_prices(instance);
  std::vector<int> usage = load(instance, produced);

  PriceVector masked;
  masked.prices.assign(instance.m, Rational(0));
  for (int j = 0; j < instance.m; ++j) {
    if (usage[j] == instance.capacities[j]) masked.prices[j] = dual.lambda.prices[j];
  }

  AlgOutcome outcome;
  outcome.profile = produced;
  outcome.prices = masked;
  outcome.regret = regret(instance, produced, masked).total;
  outcome.alpha = verified_alpha(instance, produced);
  const Rational factor = 1 + Rational(instance.n - 1) * instance.max_capacity();
  outcome.bound = outcome.alpha * factor;
  outcome.bound_holds = outcome.regret <= outcome.bound;
  if (!is_market_clearing(instance, produced, masked)) {
    throw BoundViolationError("masked prices clear the market");
  }
  Rational gamma = duality_gap(instance, produced, dual.lambda);
  if (outcome.regret > gamma * factor) {
    throw BoundViolationError("regret<=duality_gap*(1+(n-1)u_max)");
  }
  if (!outcome.bound_holds) throw BoundViolationError("regret<=verified_alpha*(1+(n-1)u_max)");
  return outcome;
}

}  // namespace walreq

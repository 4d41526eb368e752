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

//  Regret-minimal prices for a fixed allocation and the gap machinery around
//  them: the lift mapping on right-hand sides, sensitivity and lifted
//  integrality gaps, weight conversions between profile distributions and
//  per-player bundle weights, the exact global regret minimizer, and the
//  certificate tying all measured gaps to their proved inequalities.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "walreq/lp.hpp"
#include "walreq/market.hpp"
#include "walreq/welfare.hpp"

namespace walreq {

/// Regret-minimal market-clearing prices for one fixed allocation, the
/// minimal total regret delta, and its per-player split.
struct PricingResult {
  PriceVector lambda;
  Rational delta = 0;
  std::vector<Rational> per_player_delta;
};

namespace detail {

inline std::vector<int> tight_resources(const MarketInstance& instance, const std::vector<int>& usage) {
  std::vector<int> tight;
  for (int j = 0; j < instance.m; ++j) {
    if (usage[j] == instance.capacities[j]) tight.push_back(j);
  }
  return tight;
}

}  // namespace detail

/// Minimizes total regret over prices that clear the market for the given
/// allocation. Prices on slack resources are pinned to zero; the rest enter a
/// per-player epigraph LP with one row per listed bundle, which is the exact
/// separable form of the one-row-per-profile program (the regret maximum
/// splits across players). The returned delta equals the recomputed regret of
/// (profile, lambda) by construction, and that identity is asserted.
inline PricingResult optimal_prices_for(const MarketInstance& instance, const StrategyProfile& profile) {
  require_capacity_feasible(instance, profile);
  std::vector<int> usage = load(instance, profile);
  std::vector<int> tight = detail::tight_resources(instance, usage);

  LinearProgram lp;
  lp.sense = Sense::minimize;
  std::vector<int> d_var(instance.n);
  for (int i = 0; i < instance.n; ++i) {
    d_var[i] = lp.add_variable("d_" + std::to_string(i + 1));
    lp.set_objective(d_var[i], 1);
  }
  std::vector<int> lambda_var(tight.size());
  for (std::size_t t = 0; t < tight.size(); ++t) {
    lambda_var[t] = lp.add_variable("lambda_" + std::to_string(tight[t] + 1));
  }
  for (int i = 0; i < instance.n; ++i) {
    const Bundle& held = chosen_bundle(instance, profile, i);
    const Rational& held_value = instance.valuations[i][profile.choices[i]];
    for (int l = 0; l < instance.bundles_of(i); ++l) {
      // d_i + lambda^T (z - held) >= pi_i(z) - pi_i(held)
      std::vector<Rational> row(lp.num_vars(), Rational(0));
      row[d_var[i]] = 1;
      for (std::size_t t = 0; t < tight.size(); ++t) {
        row[lambda_var[t]] = instance.strategy_spaces[i][l][tight[t]] - held[tight[t]];
      }
      lp.add_row(std::move(row), Relation::greater_equal, instance.valuations[i][l] - held_value,
                 "envy_p" + std::to_string(i + 1) + "_" + std::to_string(l));
    }
  }
  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::optimal) {
    throw std::logic_error("price program is always solvable: zero prices are feasible");
  }

  PricingResult result;
  result.per_player_delta.assign(sol.primal.begin(), sol.primal.begin() + instance.n);
  result.delta = sol.value;
  result.lambda.prices.assign(instance.m, Rational(0));
  for (std::size_t t = 0; t < tight.size(); ++t) {
    result.lambda.prices[tight[t]] = sol.primal[instance.n + t];
  }
  if (!is_market_clearing(instance, profile, result.lambda) ||
      regret(instance, profile, result.lambda).total != result.delta) {
    throw std::logic_error("price program optimum does not reproduce its own regret");
  }
  return result;
}

/// The one-row-per-profile form of the same minimization, kept as a
/// brute-force cross-check for the separable program above. Row count is the
/// product of the strategy-space sizes, so a hard cap applies.
inline Rational price_lp_monolithic(const MarketInstance& instance, const StrategyProfile& profile,
                                    std::uint64_t row_cap = 10'000) {
  require_capacity_feasible(instance, profile);
  std::uint64_t rows = 1;
  for (int i = 0; i < instance.n; ++i) {
    rows *= static_cast<std::uint64_t>(instance.bundles_of(i));
    if (rows > row_cap) {
      throw CapExceededError("monolithic price program: profile count exceeds cap " + std::to_string(row_cap));
    }
  }
  std::vector<int> usage = load(instance, profile);
  std::vector<int> tight = detail::tight_resources(instance, usage);
  const Rational held_welfare = welfare_value(instance, profile);

  LinearProgram lp;
  lp.sense = Sense::minimize;
  int delta_var = lp.add_variable("delta", std::nullopt, std::nullopt);
  lp.set_objective(delta_var, 1);
  std::vector<int> lambda_var(tight.size());
  for (std::size_t t = 0; t < tight.size(); ++t) {
    lambda_var[t] = lp.add_variable("lambda_" + std::to_string(tight[t] + 1));
  }

  std::vector<int> choices(instance.n, 0);
  int row_id = 0;
  auto emit = [&](auto&& self, int player, Rational value) -> void {
    if (player == instance.n) {
      // delta + lambda^T (l(x) - l(held)) >= pi(x) - pi(held)
      std::vector<Rational> row(lp.num_vars(), Rational(0));
      row[delta_var] = 1;
      for (std::size_t t = 0; t < tight.size(); ++t) {
        int diff = -usage[tight[t]];
        for (int i = 0; i < instance.n; ++i) diff += instance.strategy_spaces[i][choices[i]][tight[t]];
        row[lambda_var[t]] = diff;
      }
      lp.add_row(std::move(row), Relation::greater_equal, value - held_welfare,
                 "profile_" + std::to_string(row_id++));
      return;
    }
    for (int l = 0; l < instance.bundles_of(player); ++l) {
      choices[player] = l;
      self(self, player + 1, value + instance.valuations[player][l]);
    }
  };
  emit(emit, 0, Rational(0));

  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::optimal) {
    throw std::logic_error("monolithic price program is always solvable");
  }
  return sol.value;
}

/// Right-hand-side lift: slack components jump to n * u_max, components at or
/// above capacity stay.
inline std::vector<int> lift(const MarketInstance& instance, const std::vector<int>& v) {
  if (static_cast<int>(v.size()) != instance.m) {
    throw ValidationError(ValidationCode::bad_parameter, "lift: vector length != resource count");
  }
  const int ceiling = instance.n * instance.max_capacity();
  std::vector<int> lifted(instance.m);
  for (int j = 0; j < instance.m; ++j) {
    if (v[j] < 0) throw ValidationError(ValidationCode::bad_parameter, "lift: negative component");
    lifted[j] = v[j] < instance.capacities[j] ? ceiling : v[j];
  }
  return lifted;
}

/// Optimal value of the relaxation with load rows kept only on resources the
/// profile fills to capacity, measured relative to the profile's welfare.
/// Equals the lifted-rhs relaxation value minus the welfare; both routes are
/// computed and must agree exactly.
inline Rational support_relaxed_lp_value(const MarketInstance& instance, const StrategyProfile& profile) {
  require_capacity_feasible(instance, profile);
  std::vector<int> usage = load(instance, profile);
  std::vector<int> tight = detail::tight_resources(instance, usage);

  LinearProgram lp = build_config_lp(instance, instance.capacities);
  LinearProgram restricted;
  restricted.sense = Sense::maximize;
  restricted.objective = lp.objective;
  restricted.lower = lp.lower;
  restricted.upper = lp.upper;
  restricted.var_labels = lp.var_labels;
  for (int j : tight) restricted.rows.push_back(lp.rows[j]);
  for (std::size_t i = instance.m; i < lp.rows.size(); ++i) restricted.rows.push_back(lp.rows[i]);

  LpSolution sol = solve(restricted);
  if (sol.status != LpStatus::optimal) {
    throw std::logic_error("support-relaxed program must be solvable");
  }
  Rational relative = sol.value - welfare_value(instance, profile);
  Rational via_lift = rho(instance, lift(instance, usage)) - welfare_value(instance, profile);
  if (relative != via_lift) {
    throw BoundViolationError("support_relaxed_value == lifted_rhs_value");
  }
  return relative;
}

/// Profile distribution: finitely supported weights over full profiles.
using ProfileDistribution = std::map<std::vector<int>, Rational>;

/// Marginal per-player weights of a profile distribution. Objective and load
/// are preserved exactly in both conversion directions.
inline std::vector<std::vector<Rational>> dp_to_lp_weights(const MarketInstance& instance,
                                                           const ProfileDistribution& z) {
  Rational mass = 0;
  for (const auto& [choices, weight] : z) {
    validate_profile(instance, StrategyProfile{choices});
    if (weight < 0) {
      throw ValidationError(ValidationCode::weights_not_probability, "negative profile weight");
    }
    mass += weight;
  }
  if (mass != 1) {
    throw ValidationError(ValidationCode::weights_not_probability, "profile weights must sum to 1");
  }
  std::vector<std::vector<Rational>> alpha(instance.n);
  for (int i = 0; i < instance.n; ++i) alpha[i].assign(instance.bundles_of(i), Rational(0));
  for (const auto& [choices, weight] : z) {
    for (int i = 0; i < instance.n; ++i) alpha[i][choices[i]] += weight;
  }
  return alpha;
}

/// Product distribution induced by per-player weights. The support can reach
/// the product of the space sizes, so a cap applies. Zero-weight profiles are
/// omitted from the result.
inline ProfileDistribution lp_to_dp_weights(const MarketInstance& instance,
                                            const std::vector<std::vector<Rational>>& alpha,
                                            std::uint64_t support_cap = 10'000) {
  if (static_cast<int>(alpha.size()) != instance.n) {
    throw ValidationError(ValidationCode::not_simplex, "weights: player count mismatch");
  }
  std::uint64_t support = 1;
  for (int i = 0; i < instance.n; ++i) {
    if (static_cast<int>(alpha[i].size()) != instance.bundles_of(i)) {
      throw ValidationError(ValidationCode::not_simplex, "weights: bundle count mismatch");
    }
    Rational mass = 0;
    for (const Rational& w : alpha[i]) {
      if (w < 0) throw ValidationError(ValidationCode::not_simplex, "negative bundle weight");
      mass += w;
    }
    if (mass != 1) throw ValidationError(ValidationCode::not_simplex, "bundle weights must sum to 1");
    support *= static_cast<std::uint64_t>(instance.bundles_of(i));
    if (support > support_cap) {
      throw CapExceededError("product distribution support exceeds cap " + std::to_string(support_cap));
    }
  }
  ProfileDistribution z;
  std::vector<int> choices(instance.n, 0);
  auto expand = [&](auto&& self, int player, Rational weight) -> void {
    if (weight == 0) return;
    if (player == instance.n) {
      z[choices] = weight;
      return;
    }
    for (int l = 0; l < instance.bundles_of(player); ++l) {
      choices[player] = l;
      self(self, player + 1, weight * alpha[player][l]);
    }
    choices[player] = 0;
  };
  expand(expand, 0, Rational(1));
  return z;
}

/// Difference of relaxation optima under two right-hand sides.
inline Rational sensitivity_gap(const MarketInstance& instance, const std::vector<int>& rhs_hi,
                                const std::vector<int>& rhs_lo) {
  return rho(instance, rhs_hi) - rho(instance, rhs_lo);
}

/// Integrality gap of the lifted-rhs relaxation with respect to the profile.
inline Rational lifted_integrality_gap(const MarketInstance& instance, const StrategyProfile& profile) {
  require_capacity_feasible(instance, profile);
  std::vector<int> usage = load(instance, profile);
  return rho(instance, lift(instance, usage)) - welfare_value(instance, profile);
}

struct MinRegretResult {
  StrategyProfile profile;
  PriceVector prices;
  Rational delta = 0;
};

namespace detail {

// Shared scan: optimal prices per candidate profile, lexicographically first
// strict minimizer wins. The relaxation optimum at capacity gives a free
// lower bound on each candidate's minimal regret (its price optimum equals
// the lifted integrality gap, which dominates the plain one), so candidates
// that cannot strictly improve skip their LP solve.
template <typename Filter>
MinRegretResult min_regret_scan(const MarketInstance& instance, std::uint64_t node_cap, Filter&& admit) {
  validate(instance);
  const Rational relaxed = rho(instance, instance.capacities);
  bool found = false;
  MinRegretResult best;
  for_each_feasible_profile(instance, node_cap,
                            [&](const std::vector<int>& choices, const std::vector<int>& usage,
                                const Rational& value) {
                              if (!admit(usage)) return;
                              if (found && relaxed - value >= best.delta) return;
                              StrategyProfile profile{choices};
                              PricingResult priced = optimal_prices_for(instance, profile);
                              if (!found || priced.delta < best.delta) {
                                best = MinRegretResult{profile, priced.lambda, priced.delta};
                                found = true;
                              }
                            });
  if (!found) {
    throw ValidationError(ValidationCode::bad_parameter, "no admissible profile");
  }
  return best;
}

}  // namespace detail

/// Exact global minimum of total regret over all capacity-feasible profiles
/// paired with their optimal clearing prices.
inline MinRegretResult min_regret_exact(const MarketInstance& instance, std::uint64_t node_cap = 10'000'000) {
  return detail::min_regret_scan(instance, node_cap, [](const std::vector<int>&) { return true; });
}

/// Same scan restricted to profiles loading every resource exactly at
/// capacity. On monotone, upward-closed instances the restriction loses
/// nothing; exposing it separately makes that claim testable. Throws when no
/// full-load profile exists.
inline MinRegretResult min_regret_exact_full_load(const MarketInstance& instance,
                                                  std::uint64_t node_cap = 10'000'000) {
  return detail::min_regret_scan(instance, node_cap, [&](const std::vector<int>& usage) {
    return usage == instance.capacities;
  });
}

/// All measured gaps for one market-clearing pair, with every certified
/// inequality listed and evaluated. Construction fails if any bound reads
/// false, so a returned certificate is self-consistent by construction.
struct GapCertificate {
  Rational gamma = 0;      // dual value minus welfare at the given prices
  Rational iota = 0;       // relaxation optimum minus welfare
  Rational beta = 0;       // relaxation sensitivity between lifted rhs and capacity
  Rational iota_lift = 0;  // lifted relaxation optimum minus welfare
  Rational regret = 0;     // total regret at the given prices

  struct Bound {
    std::string name;
    Rational lhs;
    std::string relation;
    Rational rhs;
    bool holds = false;
  };
  std::vector<Bound> bounds_checked;
};

/// Evaluates every gap for (profile, prices) and asserts the relationships
/// they must satisfy: the duality and integrality gaps never exceed the
/// regret; the price-optimal regret decomposes exactly into sensitivity plus
/// integrality gap and equals the lifted integrality gap; clearing prices put
/// zero weight on slack resources; and on monotone instances at full load the
/// regret coincides with the duality gap. Throws BoundViolationError naming
/// the first failed bound.
inline GapCertificate certify(const MarketInstance& instance, const StrategyProfile& profile,
                              const PriceVector& prices) {
  require_capacity_feasible(instance, profile);
  if (!is_market_clearing(instance, profile, prices)) {
    throw ValidationError(ValidationCode::not_market_clearing,
                          "certificate requires market-clearing prices");
  }

  GapCertificate cert;
  cert.regret = regret(instance, profile, prices).total;
  cert.gamma = duality_gap(instance, profile, prices);
  const Rational welfare = welfare_value(instance, profile);
  const Rational relaxed = rho(instance, instance.capacities);
  cert.iota = relaxed - welfare;
  std::vector<int> usage = load(instance, profile);
  const Rational lifted = rho(instance, lift(instance, usage));
  cert.beta = lifted - relaxed;
  cert.iota_lift = lifted - welfare;
  PricingResult priced = optimal_prices_for(instance, profile);

  auto check = [&cert](std::string name, const Rational& lhs, std::string relation, const Rational& rhs) {
    bool holds = relation == "<=" ? lhs <= rhs : lhs == rhs;
    cert.bounds_checked.push_back({name, lhs, relation, rhs, holds});
    if (!holds) throw BoundViolationError(name);
  };
  check("duality_gap<=regret", cert.gamma, "<=", cert.regret);
  check("integrality_gap<=regret", cert.iota, "<=", cert.regret);
  check("price_optimum==sensitivity_gap+integrality_gap", priced.delta, "==", cert.beta + cert.iota);
  check("price_optimum==lifted_integrality_gap", priced.delta, "==", cert.iota_lift);

  Rational slack_prices = 0;
  for (int j = 0; j < instance.m; ++j) {
    if (usage[j] < instance.capacities[j]) slack_prices += prices.prices[j];
  }
  check("slack_price_sum<=duality_gap", slack_prices, "<=", cert.gamma);

  StructureReport structure = check_monotone_upward_closed(instance);
  if (structure.monotone && structure.upward_closed && usage == instance.capacities) {
    check("full_load_regret==duality_gap", cert.regret, "==", cert.gamma);
  }
  return cert;
}

/// Sensitivity bound through the relaxation's condition number: the measured
/// sensitivity gap between the lifted rhs and capacity is certified against
/// valuation mass * bundle count * max submatrix determinant * largest rhs
/// change. Only available while the constraint matrix stays under the
/// brute-force cell cap.
struct SensitivityBound {
  Rational beta;
  Rational bound;
  Rational condition_number;
};

inline SensitivityBound sensitivity_bound(const MarketInstance& instance, const StrategyProfile& profile,
                                          std::size_t kappa_cell_cap = 64) {
  require_capacity_feasible(instance, profile);
  std::vector<int> usage = load(instance, profile);
  std::vector<int> lifted_rhs = lift(instance, usage);

  SensitivityBound result;
  result.condition_number = kappa(config_constraint_matrix(instance), kappa_cell_cap);
  result.beta = sensitivity_gap(instance, lifted_rhs, instance.capacities);

  Rational valuation_mass = 0;
  for (const auto& values : instance.valuations) {
    for (const Rational& v : values) valuation_mass += abs(v);
  }
  int max_change = 0;
  for (int j = 0; j < instance.m; ++j) {
    max_change = std::max(max_change, lifted_rhs[j] - instance.capacities[j]);
  }
  result.bound = valuation_mass * instance.bundle_count() * result.condition_number * max_change;
  if (result.beta > result.bound) {
    throw BoundViolationError("sensitivity_gap<=mass*k*kappa*rhs_change");
  }
  return result;
}

}  // namespace walreq

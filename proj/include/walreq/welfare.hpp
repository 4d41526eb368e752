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

//  Welfare maximization, its convex relaxation over per-player bundle
//  weights, the associated dual prices, and the two gap functions measured
//  against them.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "walreq/lp.hpp"
#include "walreq/market.hpp"

namespace walreq {

struct WelfareResult {
  StrategyProfile profile;
  Rational value = 0;
  bool exhaustive = false;  // true when produced by exact enumeration
};

/// Prices plus per-player payoff ceilings solving the dual of the relaxed
/// welfare problem. value = sum(mu) + lambda^T u and matches the relaxation
/// optimum exactly.
struct DualResult {
  PriceVector lambda;
  std::vector<Rational> mu;
  Rational value = 0;
};

namespace detail {

// Depth-first walk over all profiles with componentwise load <= cap.
// Visits in lexicographic choice order; visit() sees (profile, load, value).
// Counts every partial assignment as a node against the cap.
template <typename Visit>
void for_each_feasible_profile(const MarketInstance& instance, std::uint64_t node_cap, Visit&& visit) {
  std::vector<int> choices(instance.n, 0);
  std::vector<int> usage(instance.m, 0);
  std::uint64_t nodes = 0;
  Rational value = 0;

  auto descend = [&](auto&& self, int player, Rational value_so_far) -> void {
    if (player == instance.n) {
      visit(choices, usage, value_so_far);
      return;
    }
    const auto& space = instance.strategy_spaces[player];
    for (int l = 0; l < static_cast<int>(space.size()); ++l) {
      if (++nodes > node_cap) {
        throw CapExceededError("profile enumeration: node cap " + std::to_string(node_cap) + " exceeded");
      }
      const Bundle& bundle = space[l];
      bool fits = true;
      for (int j = 0; j < instance.m; ++j) {
        if (usage[j] + bundle[j] > instance.capacities[j]) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      for (int j = 0; j < instance.m; ++j) usage[j] += bundle[j];
      choices[player] = l;
      self(self, player + 1, value_so_far + instance.valuations[player][l]);
      for (int j = 0; j < instance.m; ++j) usage[j] -= bundle[j];
    }
    choices[player] = 0;
  };
  descend(descend, 0, value);
}

}  // namespace detail

/// Globally optimal welfare over capacity-feasible profiles by depth-first
/// enumeration with load pruning and an optimistic value bound. The first
/// optimum in lexicographic choice order wins, so ties are deterministic.
inline WelfareResult solve_welfare_exact(const MarketInstance& instance,
                                         std::uint64_t node_cap = 10'000'000) {
  validate(instance);
  std::vector<Rational> tail_best(instance.n + 1, Rational(0));
  for (int i = instance.n - 1; i >= 0; --i) {
    Rational best = instance.valuations[i][0];
    for (const Rational& v : instance.valuations[i]) best = std::max(best, v);
    tail_best[i] = tail_best[i + 1] + best;
  }

  WelfareResult result;
  bool found = false;
  std::vector<int> choices(instance.n, 0);
  std::vector<int> usage(instance.m, 0);
  std::uint64_t nodes = 0;

  auto descend = [&](auto&& self, int player, Rational value_so_far) -> void {
    if (found && value_so_far + tail_best[player] <= result.value) return;  // cannot strictly improve
    if (player == instance.n) {
      result.profile.choices = choices;
      result.value = value_so_far;
      found = true;
      return;
    }
    const auto& space = instance.strategy_spaces[player];
    for (int l = 0; l < static_cast<int>(space.size()); ++l) {
      if (++nodes > node_cap) {
        throw CapExceededError("welfare enumeration: node cap " + std::to_string(node_cap) + " exceeded");
      }
      const Bundle& bundle = space[l];
      bool fits = true;
      for (int j = 0; j < instance.m; ++j) {
        if (usage[j] + bundle[j] > instance.capacities[j]) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      for (int j = 0; j < instance.m; ++j) usage[j] += bundle[j];
      choices[player] = l;
      self(self, player + 1, value_so_far + instance.valuations[player][l]);
      for (int j = 0; j < instance.m; ++j) usage[j] -= bundle[j];
    }
    choices[player] = 0;
  };
  descend(descend, 0, Rational(0));

  result.exhaustive = true;
  return result;
}

/// Relaxation of the welfare problem: one weight per listed bundle, weights
/// of each player summing to one, weighted loads bounded by rhs.
inline LinearProgram build_config_lp(const MarketInstance& instance, const std::vector<int>& rhs) {
  if (static_cast<int>(rhs.size()) != instance.m) {
    throw ValidationError(ValidationCode::bad_parameter, "config lp: rhs length != resource count");
  }
  for (int b : rhs) {
    if (b < 0) throw ValidationError(ValidationCode::bad_parameter, "config lp: negative rhs");
  }
  LinearProgram lp;
  lp.sense = Sense::maximize;
  for (int i = 0; i < instance.n; ++i) {
    for (int l = 0; l < instance.bundles_of(i); ++l) {
      int var = lp.add_variable("a_" + std::to_string(i + 1) + "_" + std::to_string(l));
      lp.set_objective(var, instance.valuations[i][l]);
    }
  }
  const int k = lp.num_vars();
  for (int j = 0; j < instance.m; ++j) {
    std::vector<Rational> row(k, Rational(0));
    int var = 0;
    for (int i = 0; i < instance.n; ++i) {
      for (int l = 0; l < instance.bundles_of(i); ++l, ++var) {
        row[var] = instance.strategy_spaces[i][l][j];
      }
    }
    lp.add_row(std::move(row), Relation::less_equal, Rational(rhs[j]), "cap_r" + std::to_string(j + 1));
  }
  int var = 0;
  for (int i = 0; i < instance.n; ++i) {
    std::vector<Rational> row(k, Rational(0));
    for (int l = 0; l < instance.bundles_of(i); ++l, ++var) row[var] = 1;
    lp.add_row(std::move(row), Relation::equal, Rational(1), "simplex_p" + std::to_string(i + 1));
  }
  return lp;
}

/// Constraint matrix of the relaxation in the stacked form used for the
/// sensitivity condition number: load rows first, then the per-player weight
/// rows.
inline std::vector<std::vector<Rational>> config_constraint_matrix(const MarketInstance& instance) {
  LinearProgram lp = build_config_lp(instance, instance.capacities);
  std::vector<std::vector<Rational>> matrix;
  matrix.reserve(lp.rows.size());
  for (const LpRow& row : lp.rows) matrix.push_back(row.coeffs);
  return matrix;
}

/// Optimal value of the relaxation under an arbitrary right-hand side. Always
/// solvable: putting all weight on each zero bundle is feasible, and weights
/// are bounded, so the optimum exists.
inline Rational rho(const MarketInstance& instance, const std::vector<int>& rhs) {
  LpSolution sol = solve(build_config_lp(instance, rhs));
  if (sol.status != LpStatus::optimal) {
    throw std::logic_error("relaxation must be solvable; zero bundles are always feasible");
  }
  return sol.value;
}

/// Value of the dual function at given prices: lambda^T u plus each player's
/// best achievable utility, exploiting per-player separability.
inline Rational mu_of_lambda(const MarketInstance& instance, const PriceVector& prices) {
  validate_prices(instance, prices);
  Rational value = dot(prices.prices, instance.capacities);
  for (int i = 0; i < instance.n; ++i) value += best_response(instance, i, prices).utility;
  return value;
}

enum class DualSolveMode { dense, row_generation };

/// Optimal dual prices. Dense mode materializes all k payoff constraints.
/// Row generation starts from the zero bundles and adds the most violated
/// constraint per player, using the demand oracle as separator, until the
/// relaxed optimum is feasible for the full system; both modes agree exactly.
inline DualResult solve_dual_prices(const MarketInstance& instance,
                                    DualSolveMode mode = DualSolveMode::dense) {
  validate(instance);
  std::vector<std::vector<int>> active(instance.n);  // bundle rows present per player
  if (mode == DualSolveMode::dense) {
    for (int i = 0; i < instance.n; ++i) {
      active[i].resize(instance.bundles_of(i));
      for (int l = 0; l < instance.bundles_of(i); ++l) active[i][l] = l;
    }
  } else {
    for (int i = 0; i < instance.n; ++i) {
      for (int l = 0; l < instance.bundles_of(i); ++l) {
        bool zero = true;
        for (int amount : instance.strategy_spaces[i][l]) zero &= amount == 0;
        if (zero) {
          active[i].push_back(l);
          break;
        }
      }
    }
  }

  auto build_and_solve = [&]() {
    LinearProgram lp;
    lp.sense = Sense::minimize;
    std::vector<int> mu_var(instance.n);
    std::vector<int> lambda_var(instance.m);
    for (int i = 0; i < instance.n; ++i) {
      mu_var[i] = lp.add_variable("mu_" + std::to_string(i + 1), std::nullopt, std::nullopt);
      lp.set_objective(mu_var[i], 1);
    }
    for (int j = 0; j < instance.m; ++j) {
      lambda_var[j] = lp.add_variable("lambda_" + std::to_string(j + 1));
      lp.set_objective(lambda_var[j], instance.capacities[j]);
    }
    for (int i = 0; i < instance.n; ++i) {
      for (int l : active[i]) {
        std::vector<Rational> row(lp.num_vars(), Rational(0));
        row[mu_var[i]] = 1;
        for (int j = 0; j < instance.m; ++j) row[lambda_var[j]] = instance.strategy_spaces[i][l][j];
        lp.add_row(std::move(row), Relation::greater_equal, instance.valuations[i][l],
                   "payoff_p" + std::to_string(i + 1) + "_" + std::to_string(l));
      }
    }
    return solve(lp);
  };

  LpSolution sol = build_and_solve();
  if (mode == DualSolveMode::row_generation) {
    while (true) {
      PriceVector prices;
      prices.prices.assign(sol.primal.begin() + instance.n, sol.primal.end());
      bool added = false;
      for (int i = 0; i < instance.n; ++i) {
        BestResponse response = best_response(instance, i, prices);
        if (sol.primal[i] < response.utility) {
          bool present = false;
          for (int l : active[i]) present |= l == response.bundle;
          if (!present) {
            active[i].push_back(response.bundle);
            added = true;
          }
        }
      }
      if (!added) break;
      sol = build_and_solve();
    }
  }

  DualResult result;
  result.mu.assign(sol.primal.begin(), sol.primal.begin() + instance.n);
  result.lambda.prices.assign(sol.primal.begin() + instance.n, sol.primal.end());
  result.value = sol.value;
  return result;
}

/// Gap between the dual value at the given prices and the welfare of the
/// profile. Defined only for capacity-feasible profiles; never negative.
inline Rational duality_gap(const MarketInstance& instance, const StrategyProfile& profile,
                            const PriceVector& prices) {
  require_capacity_feasible(instance, profile);
  Rational gap = mu_of_lambda(instance, prices) - welfare_value(instance, profile);
  if (gap < 0) throw std::logic_error("weak duality violated");
  return gap;
}

/// Gap between the relaxation optimum at capacity and the welfare of the
/// profile. Defined only for capacity-feasible profiles; never negative.
inline Rational integrality_gap(const MarketInstance& instance, const StrategyProfile& profile) {
  require_capacity_feasible(instance, profile);
  Rational gap = rho(instance, instance.capacities) - welfare_value(instance, profile);
  if (gap < 0) throw std::logic_error("relaxation dominated by a feasible profile");
  return gap;
}

}  // namespace walreq

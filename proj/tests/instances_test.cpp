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

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "walreq/instances.hpp"
#include "walreq/pricing.hpp"

using namespace walreq;

namespace {

FlowMarketSpec crossing_two_commodity_spec() {
  // player 1 routes 0 -> 5 along one of two rails; player 2's only path
  // crosses both rails, so serving anyone integrally blocks the other side,
  // while the relaxation splits half-half for a total of 3/2
  FlowMarketSpec spec;
  spec.vertex_count = 6;
  spec.arcs = {
      {0, 1, 1},  // approach to the first rail
      {1, 2, 1},  // first rail, shared with player 2
      {2, 5, 1},  // exit from the first rail
      {2, 3, 1},  // crossover used only by player 2 and the long detour
      {0, 3, 1},  // approach to the second rail
      {3, 4, 1},  // second rail, shared with player 2
      {4, 5, 1},  // exit from the second rail
  };
  spec.players = {{0, 5, 1}, {1, 4, 1}};
  return spec;
}

}  // namespace

TEST_CASE("serialize and parse are exact inverses") {
  std::vector<MarketInstance> shipped = {gen_example1(Example1Variant::superset),
                                         gen_example1(Example1Variant::strict),
                                         gen_proposition_instance()};
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    shipped.push_back(gen_random({.n = 3,
                                  .m = 3,
                                  .u_max = 2,
                                  .bundles_per_player = 4,
                                  .value_min = -3,
                                  .value_max = 9,
                                  .value_denominator = 6,
                                  .seed = seed}));
  }
  FlowMarketSpec single;
  single.vertex_count = 2;
  single.arcs = {{0, 1, 1}};
  single.players = {{0, 1, 1}};
  shipped.push_back(gen_flow_market(single));

  for (const MarketInstance& instance : shipped) {
    std::string document = serialize(instance);
    MarketInstance back = parse(document);
    CHECK(back == instance);
    CHECK(serialize(back) == document);
  }
}

TEST_CASE("rationals survive the document format without rounding") {
  MarketInstance strict = gen_example1(Example1Variant::strict);
  strict.valuations[0][1] = Rational(3, 2);
  std::string document = serialize(strict);
  CHECK(document.find("value 3/2") != std::string::npos);
  MarketInstance back = parse(document);
  CHECK(back.valuations[0][1] == Rational(3, 2));
  CHECK(back.valuations[0][1] * 2 == 3);
}

TEST_CASE("parser reports specific failure codes") {
  const std::string good = serialize(gen_example1(Example1Variant::strict));

  auto expect_code = [](const std::string& text, ValidationCode code) {
    try {
      parse(text);
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(e.code() == code);
    }
  };

  expect_code("nonsense 3\n", ValidationCode::bad_schema);
  expect_code(good + "trailing\n", ValidationCode::bad_schema);

  std::string wrong_count = good;
  wrong_count.replace(wrong_count.find("capacities 1 1 1"), 16, "capacities 1 1");
  expect_code(wrong_count, ValidationCode::bad_schema);

  std::string bad_value = good;
  bad_value.replace(bad_value.find("value 1"), 7, "value x");
  expect_code(bad_value, ValidationCode::bad_number);

  std::string zero_denominator = good;
  zero_denominator.replace(zero_denominator.find("value 1"), 7, "value 1/0");
  expect_code(zero_denominator, ValidationCode::bad_number);

  std::string no_zero_bundle = good;
  no_zero_bundle.replace(no_zero_bundle.find("player 1 bundles 2"), 18, "player 1 bundles 1");
  no_zero_bundle.erase(no_zero_bundle.find("bundle 0 0 0 value 0\n"), 21);
  try {
    parse(no_zero_bundle);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(e.code() == ValidationCode::missing_zero_bundle);
    CHECK(std::string(e.what()).find("player 1") != std::string::npos);
  }

  std::string duplicate = good;
  duplicate.replace(duplicate.find("player 1 bundles 2"), 18, "player 1 bundles 3");
  duplicate.insert(duplicate.find("player 2"), "bundle 1 1 0 value 1\n");
  expect_code(duplicate, ValidationCode::duplicate_bundle);

  std::string heavy = good;
  heavy.replace(heavy.find("bundle 1 1 0"), 12, "bundle 2 1 0");
  expect_code(heavy, ValidationCode::bundle_exceeds_capacity);
}

TEST_CASE("worked examples have their documented shape") {
  MarketInstance mono = gen_example1(Example1Variant::superset);
  for (int i = 0; i < 3; ++i) CHECK(mono.bundles_of(i) == 8);
  StructureReport mono_report = check_monotone_upward_closed(mono);
  CHECK(mono_report.monotone);
  CHECK(mono_report.upward_closed);

  MarketInstance strict = gen_example1(Example1Variant::strict);
  for (int i = 0; i < 3; ++i) CHECK(strict.bundles_of(i) == 2);
  CHECK_FALSE(check_monotone_upward_closed(strict).upward_closed);

  // both variants share the same relaxation optimum
  CHECK(rho(mono, mono.capacities) == Rational(3, 2));
  CHECK(rho(strict, strict.capacities) == Rational(3, 2));
}

TEST_CASE("crossing market reconstruction passes its gate") {
  MarketInstance prop = gen_proposition_instance();
  CHECK(min_regret_exact(prop).delta <= 2);
  CHECK(optimal_prices_for(prop, {{1, 0, 0, 0}}).delta == Rational(10, 4));
  MinRegretResult best = min_regret_exact(prop);
  CHECK(best.profile != solve_welfare_exact(prop).profile);
  CHECK(welfare_value(prop, best.profile) < solve_welfare_exact(prop).value);

  // the crossing prices from the construction give total regret 2
  PriceVector crossing{{1, Rational(1, 2), 0, 0, Rational(1, 2), 0, 0}};
  CHECK(regret(prop, {{0, 1, 0, 0}}, crossing).total == 2);
}

TEST_CASE("random generation is deterministic per seed") {
  RandomSpec spec{.n = 3, .m = 3, .u_max = 2, .bundles_per_player = 4, .seed = 7};
  CHECK(serialize(gen_random(spec)) == serialize(gen_random(spec)));

  RandomSpec other = spec;
  other.seed = 8;
  CHECK(serialize(gen_random(spec)) != serialize(gen_random(other)));
}

TEST_CASE("random generation golden document for seed 1") {
  MarketInstance instance = gen_random({.n = 2, .m = 2, .u_max = 1, .bundles_per_player = 3, .seed = 1});
  const std::string expected =
      "walreq-instance 1\n"
      "name random-seed-1\n"
      "players 2\n"
      "resources 2\n"
      "capacities 1 1\n"
      "player 1 bundles 3\n"
      "bundle 0 0 value 0\n"
      "bundle 0 1 value 3/2\n"
      "bundle 1 0 value 2\n"
      "player 2 bundles 3\n"
      "bundle 0 0 value 0\n"
      "bundle 0 1 value 1\n"
      "bundle 1 0 value 3/2\n";
  CHECK(serialize(instance) == expected);
}

TEST_CASE("random generation reduces the bundle count when the box is spent") {
  // capacities of 1 over one resource leave only two distinct bundles
  MarketInstance instance = gen_random({.n = 1, .m = 1, .u_max = 1, .bundles_per_player = 5, .seed = 3});
  CHECK(instance.bundles_of(0) == 2);
  REQUIRE_FALSE(instance.notes.empty());
  CHECK(instance.notes[0].find("player 1") != std::string::npos);
}

TEST_CASE("all-zero value range makes every gap vanish") {
  MarketInstance instance = gen_random(
      {.n = 2, .m = 2, .u_max = 1, .bundles_per_player = 3, .value_min = 0, .value_max = 0, .seed = 4});
  CHECK(min_regret_exact(instance).delta == 0);
  CHECK(rho(instance, instance.capacities) == 0);
}

TEST_CASE("single-arc flow market") {
  FlowMarketSpec spec;
  spec.vertex_count = 2;
  spec.arcs = {{0, 1, 1}};
  spec.players = {{0, 1, 1}};
  MarketInstance market = gen_flow_market(spec);
  CHECK(market.n == 1);
  CHECK(market.m == 1);
  REQUIRE(market.bundles_of(0) == 2);
  CHECK(market.strategy_spaces[0][0] == Bundle{0});
  CHECK(market.strategy_spaces[0][1] == Bundle{1});
  CHECK(market.valuations[0][1] == 1);
  CHECK(solve_welfare_exact(market).value == 1);
  CHECK(oracles::flows_conserve(spec, market));
}

TEST_CASE("two players sharing a unit arc leave no relaxation gap") {
  FlowMarketSpec spec;
  spec.vertex_count = 2;
  spec.arcs = {{0, 1, 1}};
  spec.players = {{0, 1, 1}, {0, 1, 1}};
  MarketInstance market = gen_flow_market(spec);
  CHECK(solve_welfare_exact(market).value == 1);
  CHECK(rho(market, market.capacities) == 1);
  CHECK(integrality_gap(market, solve_welfare_exact(market).profile) == 0);
  CHECK(oracles::flows_conserve(spec, market));
}

TEST_CASE("triangle of crossing commodities splits fractionally") {
  // three commodities on a directed triangle, each path using two arcs, every
  // pair of paths sharing exactly one arc
  FlowMarketSpec spec;
  spec.vertex_count = 3;
  spec.arcs = {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
  spec.players = {{1, 0, 1}, {2, 1, 1}, {0, 2, 1}};
  MarketInstance market = gen_flow_market(spec);
  CHECK(oracles::flows_conserve(spec, market));
  WelfareResult integral = solve_welfare_exact(market);
  CHECK(integral.value == 1);
  CHECK(rho(market, market.capacities) == Rational(3, 2));
  CHECK(integrality_gap(market, integral.profile) == Rational(1, 2));
}

TEST_CASE("crossing two-commodity market keeps a relaxation gap") {
  FlowMarketSpec spec = crossing_two_commodity_spec();
  MarketInstance market = gen_flow_market(spec);
  CHECK(oracles::flows_conserve(spec, market));
  WelfareResult integral = solve_welfare_exact(market);
  CHECK(integral.value == 1);
  CHECK(rho(market, market.capacities) == Rational(3, 2));
  CHECK(integrality_gap(market, integral.profile) == Rational(1, 2));
  // every listed bundle is cycle-free on its support
  for (int i = 0; i < market.n; ++i) {
    for (const Bundle& flow : market.strategy_spaces[i]) {
      CHECK(detail::support_is_acyclic(spec, flow));
    }
  }
}

TEST_CASE("flow enumeration respects its cap and validates its spec") {
  FlowMarketSpec spec = crossing_two_commodity_spec();
  CHECK_THROWS_AS(gen_flow_market(spec, 5), CapExceededError);

  FlowMarketSpec self_loop = spec;
  self_loop.arcs.push_back({1, 1, 1});
  CHECK_THROWS_AS(gen_flow_market(self_loop), ValidationError);

  FlowMarketSpec parallel = spec;
  parallel.arcs.push_back({0, 1, 2});
  CHECK_THROWS_AS(gen_flow_market(parallel), ValidationError);

  FlowMarketSpec same_terminals = spec;
  same_terminals.players[0].sink = same_terminals.players[0].source;
  CHECK_THROWS_AS(gen_flow_market(same_terminals), ValidationError);
}

TEST_CASE("demand caps bound the enumerated flow values") {
  FlowMarketSpec spec;
  spec.vertex_count = 2;
  spec.arcs = {{0, 1, 3}};
  spec.players = {{0, 1, 2}};
  MarketInstance market = gen_flow_market(spec);
  REQUIRE(market.bundles_of(0) == 3);  // flow 0, 1, 2 but not 3
  for (int l = 0; l < market.bundles_of(0); ++l) {
    CHECK(market.valuations[0][l] == market.strategy_spaces[0][l][0]);
  }
}

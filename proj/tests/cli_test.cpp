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

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "walreq/cli.hpp"

using namespace walreq;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("walreq-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_example(const TempDir& dir, const std::string& name, const MarketInstance& instance) {
  std::string path = dir.file(name);
  std::ofstream(path) << serialize(instance);
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("check reports validity and structure flags") {
  TempDir dir;
  std::string mono = write_example(dir, "mono.wr", gen_example1(Example1Variant::superset));
  CliRun result = run({"check", mono, "--json"});
  REQUIRE(result.code == 0);
  auto doc = nlohmann::json::parse(result.out);
  CHECK(doc["schema"] == "walreq-report 1");
  CHECK(doc["results"]["valid"] == true);
  CHECK(doc["results"]["monotone"] == true);
  CHECK(doc["results"]["upward_closed"] == true);
  CHECK(doc["instance"]["players"] == 3);
  CHECK(doc["instance"]["bundles"] == 24);

  std::string strict = write_example(dir, "strict.wr", gen_example1(Example1Variant::strict));
  auto strict_doc = nlohmann::json::parse(run({"check", strict, "--json"}).out);
  CHECK(strict_doc["results"]["upward_closed"] == false);
}

TEST_CASE("check rejects broken documents with exit 1") {
  TempDir dir;
  std::string path = dir.file("broken.wr");
  std::string text = serialize(gen_example1(Example1Variant::strict));
  text.replace(text.find("player 1 bundles 2"), 18, "player 1 bundles 1");
  text.erase(text.find("bundle 0 0 0 value 0\n"), 21);
  std::ofstream(path) << text;
  CliRun result = run({"check", path});
  CHECK(result.code == 1);
  CHECK(result.err.find("missing_zero_bundle") != std::string::npos);

  CHECK(run({"check", dir.file("missing.wr")}).code == 1);
}

TEST_CASE("welfare command reports value and gap") {
  TempDir dir;
  std::string mono = write_example(dir, "mono.wr", gen_example1(Example1Variant::superset));
  auto doc = nlohmann::json::parse(run({"welfare", mono, "--json"}).out);
  CHECK(doc["results"]["value"] == "1");
  CHECK(doc["results"]["integrality_gap"] == "1/2");

  std::string prop = write_example(dir, "prop.wr", gen_proposition_instance());
  auto prop_doc = nlohmann::json::parse(run({"welfare", prop, "--json"}).out);
  CHECK(prop_doc["results"]["value"] == "3/2");

  auto greedy_doc = nlohmann::json::parse(run({"welfare", mono, "--alg", "greedy", "--json"}).out);
  CHECK(greedy_doc["results"]["value"] == "1");
  CHECK(greedy_doc["results"]["exhaustive"] == false);
}

TEST_CASE("min-regret command emits the full certificate") {
  TempDir dir;
  std::string mono = write_example(dir, "mono.wr", gen_example1(Example1Variant::superset));
  CliRun result = run({"min-regret", mono, "--json"});
  REQUIRE(result.code == 0);
  auto doc = nlohmann::json::parse(result.out);
  CHECK(doc["results"]["delta"] == "1/2");
  CHECK(doc["results"]["profile_welfare_optimal"] == true);
  bool all_hold = true;
  for (const auto& bound : doc["certificate"]) all_hold &= bound["holds"].get<bool>();
  CHECK(all_hold);
  CHECK(doc["certificate"].size() >= 5);

  std::string strict = write_example(dir, "strict.wr", gen_example1(Example1Variant::strict));
  auto strict_doc = nlohmann::json::parse(run({"min-regret", strict, "--json"}).out);
  CHECK(strict_doc["results"]["delta"] == "1");

  std::string prop = write_example(dir, "prop.wr", gen_proposition_instance());
  auto prop_doc = nlohmann::json::parse(run({"min-regret", prop, "--json"}).out);
  CHECK(prop_doc["results"]["delta"] == "3/2");
  CHECK(prop_doc["results"]["profile_welfare_optimal"] == false);

  auto restricted = nlohmann::json::parse(run({"min-regret", mono, "--restrict-full-load", "--json"}).out);
  CHECK(restricted["results"]["delta"] == "1/2");
}

TEST_CASE("price command decomposes the optimum") {
  TempDir dir;
  std::string strict = write_example(dir, "strict.wr", gen_example1(Example1Variant::strict));
  auto doc = nlohmann::json::parse(run({"price", strict, "--allocation", "1,0,0", "--json"}).out);
  CHECK(doc["results"]["delta"] == "1");
  CHECK(doc["results"]["sensitivity_gap"] == "1/2");
  CHECK(doc["results"]["integrality_gap"] == "1/2");
  CHECK(doc["results"]["lifted_integrality_gap"] == "1");

  auto idle = nlohmann::json::parse(run({"price", strict, "--allocation", "0,0,0", "--json"}).out);
  CHECK(idle["results"]["delta"] == "3");

  std::string mono = write_example(dir, "mono.wr", gen_example1(Example1Variant::superset));
  auto grand = nlohmann::json::parse(run({"price", mono, "--allocation", "7,0,0", "--json"}).out);
  CHECK(grand["results"]["delta"] == "1/2");

  CHECK(run({"price", strict, "--allocation", "1,1,0"}).code == 1);  // infeasible
  CHECK(run({"price", strict, "--allocation", "1,0"}).code == 1);
}

TEST_CASE("run-alg prints the achieved regret against the certified bound") {
  TempDir dir;
  std::string mono = write_example(dir, "mono.wr", gen_example1(Example1Variant::superset));
  auto three = nlohmann::json::parse(run({"run-alg", "3", mono, "--json"}).out);
  CHECK(three["results"]["regret"] == "1/2");
  CHECK(three["results"]["bound"] == "1/2");
  CHECK(three["results"]["bound_holds"] == true);

  std::string strict = write_example(dir, "strict.wr", gen_example1(Example1Variant::strict));
  auto four = nlohmann::json::parse(run({"run-alg", "4", strict, "--json"}).out);
  CHECK(four["results"]["regret"] == "1");
  CHECK(four["results"]["bound"] == "3/2");
  CHECK(four["results"]["bound_holds"] == true);

  CHECK(run({"run-alg", "3", strict}).code == 1);  // not monotone, refused
}

TEST_CASE("gen writes deterministic documents") {
  TempDir dir;
  std::string a = dir.file("a.wr");
  std::string b = dir.file("b.wr");
  CHECK(run({"gen", "random", "--seed", "7", "-o", a}).code == 0);
  CHECK(run({"gen", "random", "--seed", "7", "-o", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());

  CHECK(run({"gen", "example1", "-o", dir.file("e1.wr")}).code == 0);
  auto doc = nlohmann::json::parse(run({"min-regret", dir.file("e1.wr"), "--json"}).out);
  CHECK(doc["results"]["delta"] == "1/2");

  CHECK(run({"gen", "example1-strict", "-o", dir.file("e1s.wr")}).code == 0);
  CHECK(run({"check", dir.file("e1s.wr")}).code == 0);
}

TEST_CASE("gen flow consumes a json spec") {
  TempDir dir;
  std::string spec_path = dir.file("flow.json");
  std::ofstream(spec_path) << R"({"vertices": 2, "arcs": [[0, 1, 1]], "players": [[0, 1, 1]]})";
  std::string out_path = dir.file("flow.wr");
  CHECK(run({"gen", "flow", "--spec", spec_path, "-o", out_path}).code == 0);
  MarketInstance market = parse(slurp(out_path));
  CHECK(market.n == 1);
  CHECK(market.bundles_of(0) == 2);

  CHECK(run({"gen", "flow"}).code == 1);  // --spec required

  std::string big_path = dir.file("big.json");
  std::ofstream(big_path) <<
      R"({"vertices": 10, "arcs": [[0,1,3],[1,2,3],[2,3,3],[3,4,3],[4,5,3],[5,6,3],[6,7,3],[7,8,3],[8,9,3],[0,2,3],[1,3,3],[2,4,3],[3,5,3],[4,6,3],[5,7,3],[6,8,3]], "players": [[0, 9, 3]]})";
  CHECK(run({"gen", "flow", "--spec", big_path}).code == 2);  // enumeration cap
}

TEST_CASE("machine reports re-parse and reproduce exactly") {
  TempDir dir;
  std::string strict = write_example(dir, "strict.wr", gen_example1(Example1Variant::strict));
  CliRun result = run({"price", strict, "--allocation", "1,0,0", "--json"});
  REQUIRE(result.code == 0);
  auto doc = nlohmann::json::parse(result.out);

  MarketInstance instance = parse(slurp(strict));
  StrategyProfile profile{{1, 0, 0}};
  PricingResult priced = optimal_prices_for(instance, profile);
  CHECK(to_string(priced.delta) == doc["results"]["delta"].get<std::string>());
  for (int j = 0; j < instance.m; ++j) {
    CHECK(to_string(priced.lambda.prices[j]) == doc["results"]["prices"][j].get<std::string>());
  }
  for (const auto& bound : doc["certificate"]) {
    auto lhs = parse_rational(bound["lhs"].get<std::string>());
    auto rhs = parse_rational(bound["rhs"].get<std::string>());
    REQUIRE(lhs.has_value());
    REQUIRE(rhs.has_value());
    std::string relation = bound["relation"].get<std::string>();
    bool holds = relation == "<=" ? *lhs <= *rhs : *lhs == *rhs;
    CHECK(holds == bound["holds"].get<bool>());
    CHECK(holds);
  }
}

TEST_CASE("repeated invocations render byte-identical reports") {
  TempDir dir;
  std::string mono = write_example(dir, "mono.wr", gen_example1(Example1Variant::superset));
  CliRun first = run({"min-regret", mono, "--json"});
  CliRun second = run({"min-regret", mono, "--json"});
  CHECK(first.out == second.out);
  CHECK(first.code == 0);

  CliRun text = run({"welfare", mono});
  CHECK(text.out == run({"welfare", mono}).out);
  CHECK(text.out.find("value: 1") != std::string::npos);
}

TEST_CASE("help is reachable") {
  CliRun result = run({"--help"});
  CHECK(result.code == 0);
  CHECK(result.out.find("min-regret") != std::string::npos);
}

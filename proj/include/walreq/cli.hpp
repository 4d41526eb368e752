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

//  Command-line front end. Every solver and certifier is reachable as a
//  subcommand; results render either as a human table or, with --json, as a
//  versioned machine report in which every rational is an exact p/q string.
//
//  Exit codes: 0 success and all asserted bounds hold, 1 validation error,
//  2 a resource cap was exceeded, 3 a certified bound failed.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "walreq/algos.hpp"
#include "walreq/instances.hpp"
#include "walreq/market.hpp"
#include "walreq/pricing.hpp"
#include "walreq/welfare.hpp"

namespace walreq {

using ReportValue = std::variant<std::string, bool, int, std::vector<int>, std::vector<std::string>>;

struct Report {
  std::string command;
  struct Digest {
    int players = 0;
    int resources = 0;
    int bundles = 0;
    int max_capacity = 0;
  } digest;
  std::vector<std::pair<std::string, ReportValue>> results;
  std::vector<GapCertificate::Bound> certificate;
  int exit_status = 0;

  void digest_of(const MarketInstance& instance) {
    digest = Digest{instance.n, instance.m, instance.bundle_count(), instance.max_capacity()};
  }
  void add(std::string key, ReportValue value) { results.emplace_back(std::move(key), std::move(value)); }
  void add_rational(std::string key, const Rational& value) { add(std::move(key), to_string(value)); }
  void add_prices(std::string key, const PriceVector& prices) {
    std::vector<std::string> rendered;
    for (const Rational& p : prices.prices) rendered.push_back(to_string(p));
    add(std::move(key), std::move(rendered));
  }
  void add_certificate(const GapCertificate& cert) {
    add_rational("duality_gap", cert.gamma);
    add_rational("integrality_gap", cert.iota);
    add_rational("sensitivity_gap", cert.beta);
    add_rational("lifted_integrality_gap", cert.iota_lift);
    add_rational("regret", cert.regret);
    certificate = cert.bounds_checked;
  }
};

inline nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["schema"] = "walreq-report 1";
  doc["command"] = report.command;
  doc["instance"] = {{"players", report.digest.players},
                     {"resources", report.digest.resources},
                     {"bundles", report.digest.bundles},
                     {"max_capacity", report.digest.max_capacity}};
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.results) {
    std::visit([&](const auto& v) { results[key] = v; }, value);
  }
  doc["results"] = results;
  nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
  for (const auto& bound : report.certificate) {
    bounds.push_back({{"name", bound.name},
                      {"lhs", to_string(bound.lhs)},
                      {"relation", bound.relation},
                      {"rhs", to_string(bound.rhs)},
                      {"holds", bound.holds}});
  }
  doc["certificate"] = bounds;
  doc["exit_status"] = report.exit_status;
  return doc;
}

inline std::string render_text(const Report& report) {
  std::ostringstream out;
  out << "command: " << report.command << "\n";
  out << "instance: players=" << report.digest.players << " resources=" << report.digest.resources
      << " bundles=" << report.digest.bundles << " max_capacity=" << report.digest.max_capacity << "\n";
  for (const auto& [key, value] : report.results) {
    out << "  " << key << ": ";
    std::visit(
        [&out](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) {
            out << v;
          } else if constexpr (std::is_same_v<T, bool>) {
            out << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, int>) {
            out << v;
          } else {
            bool first = true;
            for (const auto& item : v) {
              out << (first ? "" : " ") << item;
              first = false;
            }
          }
        },
        value);
    out << "\n";
  }
  if (!report.certificate.empty()) {
    out << "  certified bounds:\n";
    for (const auto& bound : report.certificate) {
      out << "    " << (bound.holds ? "[ok] " : "[VIOLATED] ") << bound.name << ": " << to_string(bound.lhs)
          << " " << bound.relation << " " << to_string(bound.rhs) << "\n";
    }
  }
  return out.str();
}

namespace cli_detail {

inline MarketInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(ValidationCode::bad_parameter, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

inline std::vector<int> parse_allocation(const std::string& text, const MarketInstance& instance) {
  std::vector<int> indices;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    indices.push_back(detail::parse_int_field(token, "allocation index"));
  }
  if (static_cast<int>(indices.size()) != instance.n) {
    throw ValidationError(ValidationCode::invalid_profile, "allocation needs one bundle index per player");
  }
  return indices;
}

inline WelfareAlg pick_alg(const std::string& name) {
  if (name == "exact") return exact_alg();
  if (name == "greedy") return greedy_alg();
  throw ValidationError(ValidationCode::bad_parameter, "unknown algorithm '" + name + "'");
}

inline FlowMarketSpec load_flow_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(ValidationCode::bad_parameter, "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(ValidationCode::bad_schema, std::string("flow spec: ") + e.what());
  }
  FlowMarketSpec spec;
  try {
    spec.vertex_count = doc.at("vertices").get<int>();
    for (const auto& arc : doc.at("arcs")) {
      spec.arcs.push_back({arc.at(0).get<int>(), arc.at(1).get<int>(), arc.at(2).get<int>()});
    }
    for (const auto& player : doc.at("players")) {
      spec.players.push_back({player.at(0).get<int>(), player.at(1).get<int>(), player.at(2).get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(ValidationCode::bad_schema, std::string("flow spec: ") + e.what());
  }
  return spec;
}

inline void emit_document(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError(ValidationCode::bad_parameter, "cannot write '" + path + "'");
  file << text;
}

}  // namespace cli_detail

/// Runs one CLI invocation. args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact minimal-regret pricing toolkit for combinatorial markets"};
  app.fallthrough();
  bool machine = false;
  app.add_flag("--json", machine, "machine-readable report (rationals as p/q strings)");

  std::string file;
  std::string alg_name = "exact";
  std::string allocation;
  std::string output_path;
  bool restrict_full_load = false;
  int which_alg = 3;
  std::string gen_kind;
  RandomSpec random_spec;
  std::string flow_spec_path;

  CLI::App* check = app.add_subcommand("check", "validate an instance file and report its structure");
  check->add_option("file", file)->required();

  CLI::App* welfare = app.add_subcommand("welfare", "maximize welfare and report the output's gap");
  welfare->add_option("file", file)->required();
  welfare->add_option("--alg", alg_name)->check(CLI::IsMember({"exact", "greedy"}));

  CLI::App* minreg = app.add_subcommand("min-regret", "exact minimal-regret allocation and prices");
  minreg->add_option("file", file)->required();
  minreg->add_flag("--restrict-full-load", restrict_full_load,
                   "search only profiles loading every resource at capacity");

  CLI::App* price = app.add_subcommand("price", "regret-minimal clearing prices for a fixed allocation");
  price->add_option("file", file)->required();
  price->add_option("--allocation", allocation, "comma-separated bundle indices, one per player (0-based)")
      ->required();

  CLI::App* runalg = app.add_subcommand("run-alg", "run a pricing pipeline (3 monotone, 4 general)");
  runalg->add_option("which", which_alg)->check(CLI::IsMember({3, 4}))->required();
  runalg->add_option("file", file)->required();
  runalg->add_option("--alg", alg_name)->check(CLI::IsMember({"exact", "greedy"}));

  CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("kind", gen_kind)
      ->check(CLI::IsMember({"example1", "example1-strict", "prop", "random", "flow"}))
      ->required();
  gen->add_option("-o,--output", output_path, "output path (default stdout)");
  gen->add_option("--seed", random_spec.seed);
  gen->add_option("--players", random_spec.n);
  gen->add_option("--resources", random_spec.m);
  gen->add_option("--umax", random_spec.u_max);
  gen->add_option("--bundles", random_spec.bundles_per_player);
  gen->add_option("--vmin", random_spec.value_min);
  gen->add_option("--vmax", random_spec.value_max);
  gen->add_option("--vden", random_spec.value_denominator);
  gen->add_option("--spec", flow_spec_path, "flow spec JSON for kind=flow");

  app.require_subcommand(1);

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  std::string program = "walreq";
  argv.push_back(program.data());
  for (std::string& arg : storage) argv.push_back(arg.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  Report report;
  try {
    if (check->parsed()) {
      report.command = "check " + file;
      MarketInstance instance = cli_detail::load_instance(file);
      report.digest_of(instance);
      StructureReport structure = check_monotone_upward_closed(instance);
      if (!instance.name.empty()) report.add("name", instance.name);
      report.add("valid", true);
      report.add("monotone", structure.monotone);
      report.add("upward_closed", structure.upward_closed);
    } else if (welfare->parsed()) {
      report.command = "welfare " + file + " --alg " + alg_name;
      MarketInstance instance = cli_detail::load_instance(file);
      report.digest_of(instance);
      WelfareAlg alg = cli_detail::pick_alg(alg_name);
      StrategyProfile profile = alg.produce(instance);
      require_capacity_feasible(instance, profile);
      report.add("algorithm", alg.name);
      report.add("profile", profile.choices);
      report.add_rational("value", welfare_value(instance, profile));
      report.add_rational("integrality_gap", integrality_gap(instance, profile));
      report.add("exhaustive", alg_name == "exact");
    } else if (minreg->parsed()) {
      report.command = "min-regret " + file + (restrict_full_load ? " --restrict-full-load" : "");
      MarketInstance instance = cli_detail::load_instance(file);
      report.digest_of(instance);
      MinRegretResult result = restrict_full_load ? min_regret_exact_full_load(instance)
                                                  : min_regret_exact(instance);
      report.add_rational("delta", result.delta);
      report.add("profile", result.profile.choices);
      report.add_prices("prices", result.prices);
      report.add_rational("welfare", welfare_value(instance, result.profile));
      WelfareResult best = solve_welfare_exact(instance);
      report.add("profile_welfare_optimal", welfare_value(instance, result.profile) == best.value);
      report.add_certificate(certify(instance, result.profile, result.prices));
    } else if (price->parsed()) {
      report.command = "price " + file + " --allocation " + allocation;
      MarketInstance instance = cli_detail::load_instance(file);
      report.digest_of(instance);
      StrategyProfile profile{cli_detail::parse_allocation(allocation, instance)};
      validate_profile(instance, profile);
      PricingResult priced = optimal_prices_for(instance, profile);
      report.add("allocation", profile.choices);
      report.add_rational("delta", priced.delta);
      report.add_prices("prices", priced.lambda);
      report.add_certificate(certify(instance, profile, priced.lambda));
    } else if (runalg->parsed()) {
      report.command = "run-alg " + std::to_string(which_alg) + " " + file + " --alg " + alg_name;
      MarketInstance instance = cli_detail::load_instance(file);
      report.digest_of(instance);
      WelfareAlg alg = cli_detail::pick_alg(alg_name);
      AlgOutcome outcome = which_alg == 3 ? algorithm3(instance, alg) : algorithm4(instance, alg);
      report.add("algorithm", alg.name);
      report.add("profile", outcome.profile.choices);
      report.add_prices("prices", outcome.prices);
      report.add_rational("regret", outcome.regret);
      report.add_rational("verified_alpha", outcome.alpha);
      report.add_rational("bound", outcome.bound);
      report.add("bound_holds", outcome.bound_holds);
    } else if (gen->parsed()) {
      report.command = "gen " + gen_kind;
      MarketInstance instance;
      if (gen_kind == "example1") {
        instance = gen_example1(Example1Variant::superset);
      } else if (gen_kind == "example1-strict") {
        instance = gen_example1(Example1Variant::strict);
      } else if (gen_kind == "prop") {
        instance = gen_proposition_instance();
      } else if (gen_kind == "random") {
        instance = gen_random(random_spec);
      } else {
        if (flow_spec_path.empty()) {
          throw ValidationError(ValidationCode::bad_parameter, "gen flow requires --spec <file>");
        }
        instance = gen_flow_market(cli_detail::load_flow_spec(flow_spec_path));
      }
      report.digest_of(instance);
      std::string document = serialize(instance);
      if (machine) {
        report.add("document", document);
        if (!output_path.empty() && output_path != "-") {
          cli_detail::emit_document(document, output_path, out);
          report.add("written_to", output_path);
        }
      } else {
        cli_detail::emit_document(document, output_path, out);
        if (!output_path.empty() && output_path != "-") out << "wrote " << output_path << "\n";
        return 0;
      }
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceededError& e) {
    err << "resource cap: " << e.what() << "\n";
    return 2;
  } catch (const BoundViolationError& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    err << "internal check failed: " << e.what() << "\n";
    return 3;
  }

  report.exit_status = 0;
  if (machine) {
    out << to_json(report).dump(2) << "\n";
  } else {
    out << render_text(report);
  }
  return 0;
}

}  // namespace walreq

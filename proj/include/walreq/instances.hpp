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

//  Instance I/O and construction.
//
//  The document format is line-oriented and versioned; rationals are written
//  as p/q (or a bare integer) and survive a round trip bit-exactly:
//
//      walreq-instance 1
//      name <free text>                  (optional)
//      note <free text>                  (zero or more)
//      players <n>
//      resources <m>
//      capacities <u_1> ... <u_m>
//      player 1 bundles <k_1>
//      bundle <x_1> ... <x_m> value <p/q>
//      ...                               (k_1 bundle lines, then player 2 ...)

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "walreq/market.hpp"

namespace walreq {

inline std::string serialize(const MarketInstance& instance) {
  std::ostringstream out;
  out << "walreq-instance 1\n";
  if (!instance.name.empty()) out << "name " << instance.name << "\n";
  for (const std::string& note : instance.notes) out << "note " << note << "\n";
  out << "players " << instance.n << "\n";
  out << "resources " << instance.m << "\n";
  out << "capacities";
  for (int u_j : instance.capacities) out << " " << u_j;
  out << "\n";
  for (int i = 0; i < instance.n; ++i) {
    out << "player " << i + 1 << " bundles " << instance.bundles_of(i) << "\n";
    for (int l = 0; l < instance.bundles_of(i); ++l) {
      out << "bundle";
      for (int amount : instance.strategy_spaces[i][l]) out << " " << amount;
      out << " value " << to_string(instance.valuations[i][l]) << "\n";
    }
  }
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

inline int parse_int_field(const std::string& field, const std::string& context) {
  if (field.empty()) throw ValidationError(ValidationCode::bad_number, context + ": empty number");
  std::size_t pos = field[0] == '-' ? 1 : 0;
  if (pos == field.size()) throw ValidationError(ValidationCode::bad_number, context + ": '" + field + "'");
  for (; pos < field.size(); ++pos) {
    if (field[pos] < '0' || field[pos] > '9') {
      throw ValidationError(ValidationCode::bad_number, context + ": '" + field + "'");
    }
  }
  try {
    return std::stoi(field);
  } catch (const std::exception&) {
    throw ValidationError(ValidationCode::bad_number, context + ": '" + field + "' out of range");
  }
}

}  // namespace detail

/// Parses an instance document. Structural problems raise bad_schema or
/// bad_number; the assembled instance then passes full validation, so errors
/// like a missing zero bundle or an over-capacity bundle keep their own
/// codes.
inline MarketInstance parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) return true;
    return false;
  };
  if (!next_line() || line != "walreq-instance 1") {
    throw ValidationError(ValidationCode::bad_schema, "expected header 'walreq-instance 1'");
  }
  MarketInstance instance;
  bool have = next_line();
  if (have && line.rfind("name ", 0) == 0) {
    instance.name = line.substr(5);
    have = next_line();
  }
  while (have && line.rfind("note ", 0) == 0) {
    instance.notes.push_back(line.substr(5));
    have = next_line();
  }
  auto expect_keyword_int = [&](const std::string& keyword) {
    if (!have) throw ValidationError(ValidationCode::bad_schema, "unexpected end, wanted '" + keyword + "'");
    auto fields = detail::split_fields(line);
    if (fields.size() != 2 || fields[0] != keyword) {
      throw ValidationError(ValidationCode::bad_schema, "expected '" + keyword + " <count>', got '" + line + "'");
    }
    int value = detail::parse_int_field(fields[1], keyword);
    have = next_line();
    return value;
  };
  instance.n = expect_keyword_int("players");
  instance.m = expect_keyword_int("resources");

  if (!have) throw ValidationError(ValidationCode::bad_schema, "missing capacities line");
  {
    auto fields = detail::split_fields(line);
    if (fields.empty() || fields[0] != "capacities" ||
        static_cast<int>(fields.size()) != instance.m + 1) {
      throw ValidationError(ValidationCode::bad_schema, "expected 'capacities' with one entry per resource");
    }
    for (int j = 0; j < instance.m; ++j) {
      instance.capacities.push_back(detail::parse_int_field(fields[j + 1], "capacity"));
    }
    have = next_line();
  }

  instance.strategy_spaces.resize(std::max(instance.n, 0));
  instance.valuations.resize(std::max(instance.n, 0));
  for (int i = 0; i < instance.n; ++i) {
    if (!have) throw ValidationError(ValidationCode::bad_schema, "missing player block " + std::to_string(i + 1));
    auto fields = detail::split_fields(line);
    if (fields.size() != 4 || fields[0] != "player" || fields[2] != "bundles" ||
        detail::parse_int_field(fields[1], "player index") != i + 1) {
      throw ValidationError(ValidationCode::bad_schema,
                            "expected 'player " + std::to_string(i + 1) + " bundles <k>', got '" + line + "'");
    }
    int count = detail::parse_int_field(fields[3], "bundle count");
    have = next_line();
    for (int l = 0; l < count; ++l) {
      if (!have) throw ValidationError(ValidationCode::bad_schema, "missing bundle line");
      auto bundle_fields = detail::split_fields(line);
      if (static_cast<int>(bundle_fields.size()) != instance.m + 3 || bundle_fields[0] != "bundle" ||
          bundle_fields[instance.m + 1] != "value") {
        throw ValidationError(ValidationCode::bad_schema,
                              "expected 'bundle <" + std::to_string(instance.m) + " amounts> value <p/q>'");
      }
      Bundle bundle(instance.m);
      for (int j = 0; j < instance.m; ++j) {
        bundle[j] = detail::parse_int_field(bundle_fields[j + 1], "bundle amount");
      }
      auto value = parse_rational(bundle_fields[instance.m + 2]);
      if (!value) {
        throw ValidationError(ValidationCode::bad_number,
                              "bad rational '" + bundle_fields[instance.m + 2] + "'");
      }
      instance.strategy_spaces[i].push_back(std::move(bundle));
      instance.valuations[i].push_back(*value);
      have = next_line();
    }
  }
  if (have) throw ValidationError(ValidationCode::bad_schema, "trailing content: '" + line + "'");
  validate(instance);
  return instance;
}

enum class Example1Variant { superset, strict };

/// Three players, three unit-capacity resources, each player after one
/// critical pair of resources. The superset variant values every superset of
/// the pair (monotone, upward closed over all 0/1 bundles); the strict
/// variant values only the pair itself.
inline MarketInstance gen_example1(Example1Variant variant) {
  const std::vector<Bundle> critical = {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
  MarketInstance instance;
  instance.n = 3;
  instance.m = 3;
  instance.capacities = {1, 1, 1};
  instance.name = variant == Example1Variant::superset ? "example1-superset" : "example1-strict";
  for (int i = 0; i < 3; ++i) {
    std::vector<Bundle> space;
    std::vector<Rational> values;
    if (variant == Example1Variant::superset) {
      for (int mask = 0; mask < 8; ++mask) {
        Bundle bundle = {mask & 1, (mask >> 1) & 1, (mask >> 2) & 1};
        bool covers = true;
        for (int j = 0; j < 3; ++j) covers &= bundle[j] >= critical[i][j];
        values.push_back(covers ? 1 : 0);
        space.push_back(std::move(bundle));
      }
    } else {
      space = {{0, 0, 0}, critical[i]};
      values = {0, 1};
    }
    instance.strategy_spaces.push_back(std::move(space));
    instance.valuations.push_back(std::move(values));
  }
  validate(instance);
  return instance;
}

/// Four players, seven unit-capacity resources. Player 1 owns two non-trivial
/// bundles (a three-pack worth 3/2 and a four-pack worth 1); players 2-4 own
/// one three-pack each worth 1. Every pair of non-trivial bundles of
/// different players overlaps, so at most one can be served; the welfare
/// optimum and the regret optimum end up at different profiles.
inline MarketInstance gen_proposition_instance() {
  MarketInstance instance;
  instance.n = 4;
  instance.m = 7;
  instance.capacities.assign(7, 1);
  instance.name = "prop";
  instance.strategy_spaces = {
      {{0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1, 1}, {1, 1, 1, 1, 0, 0, 0}},
      {{0, 0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 1, 0, 0}},
      {{0, 0, 0, 0, 0, 0, 0}, {1, 0, 1, 0, 0, 1, 0}},
      {{0, 0, 0, 0, 0, 0, 0}, {1, 0, 0, 1, 0, 0, 1}},
  };
  instance.valuations = {
      {0, Rational(3, 2), 1},
      {0, 1},
      {0, 1},
      {0, 1},
  };
  validate(instance);
  return instance;
}

struct RandomSpec {
  int n = 2;
  int m = 2;
  int u_max = 1;
  int bundles_per_player = 3;  // including the zero bundle
  int value_min = 0;           // numerator range, inclusive
  int value_max = 4;
  int value_denominator = 2;
  std::uint64_t seed = 1;
};

/// Deterministic pseudo-random instance: capacities in [1, u_max], distinct
/// random bundles below capacity plus the mandatory zero bundle, values drawn
/// as numerator/denominator with the numerator uniform in the given range.
/// When a player's box of distinct bundles runs out, the count shrinks to
/// what exists and a note records the reduction. Equal seeds give equal
/// instances byte for byte.
inline MarketInstance gen_random(const RandomSpec& spec) {
  if (spec.n < 1 || spec.m < 1 || spec.u_max < 1 || spec.bundles_per_player < 1 ||
      spec.value_denominator < 1 || spec.value_min > spec.value_max) {
    throw ValidationError(ValidationCode::bad_parameter, "random spec out of range");
  }
  std::mt19937_64 engine(spec.seed);
  auto draw = [&engine](int lo, int hi) {  // uniform-ish, engine-stable across platforms
    return lo + static_cast<int>(engine() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  MarketInstance instance;
  instance.n = spec.n;
  instance.m = spec.m;
  instance.name = "random-seed-" + std::to_string(spec.seed);
  for (int j = 0; j < spec.m; ++j) instance.capacities.push_back(draw(1, spec.u_max));

  std::uint64_t box = 1;
  for (int j = 0; j < spec.m; ++j) box *= static_cast<std::uint64_t>(instance.capacities[j]) + 1;

  for (int i = 0; i < spec.n; ++i) {
    std::vector<Bundle> space = {Bundle(spec.m, 0)};
    std::vector<Rational> values = {Rational(0)};
    std::set<Bundle> seen = {space[0]};
    const int wanted = spec.bundles_per_player - 1;
    int produced = 0;
    std::uint64_t attempts = 0;
    const std::uint64_t attempt_cap = 200 * static_cast<std::uint64_t>(wanted) + 200;
    while (produced < wanted && static_cast<std::uint64_t>(seen.size()) < box &&
           attempts < attempt_cap) {
      ++attempts;
      Bundle bundle(spec.m);
      for (int j = 0; j < spec.m; ++j) bundle[j] = draw(0, instance.capacities[j]);
      if (!seen.insert(bundle).second) continue;
      space.push_back(std::move(bundle));
      values.push_back(Rational(draw(spec.value_min, spec.value_max), spec.value_denominator));
      ++produced;
    }
    if (produced < wanted) {
      instance.notes.push_back("player " + std::to_string(i + 1) + ": bundle space exhausted, kept " +
                               std::to_string(produced + 1) + " of " +
                               std::to_string(spec.bundles_per_player));
    }
    instance.strategy_spaces.push_back(std::move(space));
    instance.valuations.push_back(std::move(values));
  }
  validate(instance);
  return instance;
}

/// A multi-commodity routing market: resources are arcs of a directed graph,
/// players are terminal pairs, bundles are the integral cycle-free flows of
/// value up to the player's demand, valued at their flow value.
struct FlowMarketSpec {
  int vertex_count = 0;
  struct Arc {
    int from = 0;
    int to = 0;
    int capacity = 0;
  };
  std::vector<Arc> arcs;
  struct Commodity {
    int source = 0;
    int sink = 0;
    int demand = 0;
  };
  std::vector<Commodity> players;
};

inline void validate_flow_spec(const FlowMarketSpec& spec) {
  if (spec.vertex_count < 1 || spec.arcs.empty() || spec.players.empty()) {
    throw ValidationError(ValidationCode::bad_parameter, "flow spec: empty graph or player list");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& arc : spec.arcs) {
    if (arc.from < 0 || arc.from >= spec.vertex_count || arc.to < 0 || arc.to >= spec.vertex_count) {
      throw ValidationError(ValidationCode::bad_parameter, "flow spec: arc endpoint out of range");
    }
    if (arc.from == arc.to) {
      throw ValidationError(ValidationCode::bad_parameter, "flow spec: self-loop");
    }
    if (arc.capacity < 0) {
      throw ValidationError(ValidationCode::bad_parameter, "flow spec: negative capacity");
    }
    if (!seen.insert({arc.from, arc.to}).second) {
      throw ValidationError(ValidationCode::bad_parameter, "flow spec: parallel arc");
    }
  }
  for (const auto& player : spec.players) {
    if (player.source < 0 || player.source >= spec.vertex_count || player.sink < 0 ||
        player.sink >= spec.vertex_count || player.source == player.sink) {
      throw ValidationError(ValidationCode::bad_parameter, "flow spec: bad terminal pair");
    }
    if (player.demand < 0) {
      throw ValidationError(ValidationCode::bad_parameter, "flow spec: negative demand");
    }
  }
}

namespace detail {

// True when the arcs carrying positive flow contain no directed cycle.
inline bool support_is_acyclic(const FlowMarketSpec& spec, const Bundle& flow) {
  std::vector<std::vector<int>> out(spec.vertex_count);
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
    if (flow[a] > 0) out[spec.arcs[a].from].push_back(spec.arcs[a].to);
  }
  std::vector<int> state(spec.vertex_count, 0);  // 0 fresh, 1 on stack, 2 done
  auto visit = [&](auto&& self, int v) -> bool {
    state[v] = 1;
    for (int w : out[v]) {
      if (state[w] == 1) return false;
      if (state[w] == 0 && !self(self, w)) return false;
    }
    state[v] = 2;
    return true;
  };
  for (int v = 0; v < spec.vertex_count; ++v) {
    if (state[v] == 0 && !visit(visit, v)) return false;
  }
  return true;
}

}  // namespace detail

/// Enumerates each player's integral cycle-free flows by depth-first arc
/// assignment, pruning on conservation as soon as a vertex has all incident
/// arcs assigned. Enumeration effort counts against node_cap.
inline MarketInstance gen_flow_market(const FlowMarketSpec& spec, std::uint64_t node_cap = 100'000) {
  validate_flow_spec(spec);
  const int m = static_cast<int>(spec.arcs.size());

  // vertices whose incident arcs are all assigned once arc a is set
  std::vector<std::vector<int>> completed_at(m);
  {
    std::vector<int> last_touch(spec.vertex_count, -1);
    for (int a = 0; a < m; ++a) {
      last_touch[spec.arcs[a].from] = a;
      last_touch[spec.arcs[a].to] = a;
    }
    for (int v = 0; v < spec.vertex_count; ++v) {
      if (last_touch[v] >= 0) completed_at[last_touch[v]].push_back(v);
    }
  }

  MarketInstance instance;
  instance.n = static_cast<int>(spec.players.size());
  instance.m = m;
  instance.name = "flow-market";
  for (const auto& arc : spec.arcs) instance.capacities.push_back(arc.capacity);

  std::uint64_t nodes = 0;
  for (const auto& player : spec.players) {
    std::vector<Bundle> space;
    std::vector<Rational> values;
    Bundle flow(m, 0);
    std::vector<int> balance(spec.vertex_count, 0);  // outflow minus inflow

    auto assign = [&](auto&& self, int a) -> void {
      if (a == m) {
        int value = balance[player.source];
        if (value < 0 || value > player.demand) return;
        if (!detail::support_is_acyclic(spec, flow)) return;
        space.push_back(flow);
        values.push_back(Rational(value));
        return;
      }
      for (int f = 0; f <= spec.arcs[a].capacity; ++f) {
        if (++nodes > node_cap) {
          throw CapExceededError("flow enumeration: node cap " + std::to_string(node_cap) + " exceeded");
        }
        flow[a] = f;
        balance[spec.arcs[a].from] += f;
        balance[spec.arcs[a].to] -= f;
        bool viable = true;
        for (int v : completed_at[a]) {
          if (v == player.source) {
            if (balance[v] < 0 || balance[v] > player.demand) viable = false;
          } else if (v == player.sink) {
            // sink balance is minus the flow value; bounded via the source
          } else if (balance[v] != 0) {
            viable = false;
          }
          if (!viable) break;
        }
        if (viable) self(self, a + 1);
        balance[spec.arcs[a].from] -= f;
        balance[spec.arcs[a].to] += f;
        flow[a] = 0;
      }
    };
    assign(assign, 0);
    instance.strategy_spaces.push_back(std::move(space));
    instance.valuations.push_back(std::move(values));
  }
  validate(instance);
  return instance;
}

}  // namespace walreq

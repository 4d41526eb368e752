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

#include <random>

#include "oracles.hpp"
#include "walreq/lp.hpp"

using namespace walreq;

TEST_CASE("one-variable maximum with a binding row") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  lp.set_objective(x, 1);
  lp.add_row({1}, Relation::less_equal, 1, "cap");
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == 1);
  CHECK(sol.primal == std::vector<Rational>{1});
  CHECK(sol.dual == std::vector<Rational>{1});
}

TEST_CASE("two-phase start on equality and surplus rows") {
  // min x + y, x + y = 2, x - y >= 0, both vars free
  LinearProgram lp;
  lp.sense = Sense::minimize;
  int x = lp.add_variable("x", std::nullopt, std::nullopt);
  int y = lp.add_variable("y", std::nullopt, std::nullopt);
  lp.set_objective(x, 1);
  lp.set_objective(y, 1);
  lp.add_row({1, 1}, Relation::equal, 2, "sum");
  lp.add_row({1, -1}, Relation::greater_equal, 0, "order");
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == 2);
  CHECK(sol.primal[x] + sol.primal[y] == 2);
}

TEST_CASE("fractional optimum with exact duals") {
  // max 3a + 2b st a + b <= 4, a <= 2, b <= 3
  LinearProgram lp;
  int a = lp.add_variable("a");
  int b = lp.add_variable("b");
  lp.set_objective(a, 3);
  lp.set_objective(b, 2);
  lp.add_row({1, 1}, Relation::less_equal, 4, "joint");
  lp.add_row({1, 0}, Relation::less_equal, 2, "a_cap");
  lp.add_row({0, 1}, Relation::less_equal, 3, "b_cap");
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == 10);
  CHECK(sol.primal == std::vector<Rational>{2, 2});
  Rational dual_value = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) dual_value += sol.dual[i] * lp.rows[i].rhs;
  CHECK(dual_value == sol.value);  // all variables at zero lower bounds
}

TEST_CASE("infeasible program carries a contradiction certificate") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  lp.set_objective(x, 1);
  lp.add_row({1}, Relation::greater_equal, 2, "floor");
  lp.add_row({1}, Relation::less_equal, 1, "ceiling");
  LpSolution sol = solve(lp);
  CHECK(sol.status == LpStatus::infeasible);  // certificate verified inside solve
}

TEST_CASE("crossed variable bounds are infeasible") {
  LinearProgram lp;
  lp.add_variable("x", Rational(2), Rational(1));
  LpSolution sol = solve(lp);
  CHECK(sol.status == LpStatus::infeasible);
}

TEST_CASE("unbounded program returns an improving ray") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  int y = lp.add_variable("y");
  lp.set_objective(x, 1);
  lp.set_objective(y, -1);
  lp.add_row({-1, 1}, Relation::less_equal, 1, "tilt");
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::unbounded);
  Rational gain = 0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) gain += lp.objective[j] * sol.certificate[j];
  CHECK(gain > 0);
}

TEST_CASE("finite bounds on both sides") {
  // max x + y with -3 <= x <= 5 and y <= 2 (no lower bound)
  LinearProgram lp;
  int x = lp.add_variable("x", Rational(-3), Rational(5));
  int y = lp.add_variable("y", std::nullopt, Rational(2));
  lp.set_objective(x, 1);
  lp.set_objective(y, 1);
  lp.add_row({1, 1}, Relation::less_equal, 6, "joint");
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == 6);

  // minimization against a lower bound
  LinearProgram lp2;
  int z = lp2.add_variable("z", Rational(-7), std::nullopt);
  lp2.sense = Sense::minimize;
  lp2.set_objective(z, 1);
  LpSolution sol2 = solve(lp2);
  REQUIRE(sol2.status == LpStatus::optimal);
  CHECK(sol2.value == -7);
}

TEST_CASE("degenerate and redundant rows still produce certificates") {
  LinearProgram lp;
  int x = lp.add_variable("x");
  lp.add_variable("y");
  lp.set_objective(x, 1);
  lp.add_row({1, 1}, Relation::equal, 1, "sum");
  lp.add_row({2, 2}, Relation::equal, 2, "sum_doubled");  // redundant
  lp.add_row({1, 0}, Relation::less_equal, 1, "cap");
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == 1);
}

TEST_CASE("repeated solves are bit-identical") {
  LinearProgram lp;
  int a = lp.add_variable("a");
  int b = lp.add_variable("b");
  int c = lp.add_variable("c");
  lp.set_objective(a, Rational(2, 3));
  lp.set_objective(b, Rational(2, 3));
  lp.set_objective(c, Rational(2, 3));
  lp.add_row({1, 1, 0}, Relation::less_equal, 1, "r1");  // symmetric, so ties abound
  lp.add_row({0, 1, 1}, Relation::less_equal, 1, "r2");
  lp.add_row({1, 0, 1}, Relation::less_equal, 1, "r3");
  LpSolution first = solve(lp);
  LpSolution second = solve(lp);
  CHECK(first.basis == second.basis);
  CHECK(first.primal == second.primal);
  CHECK(first.dual == second.dual);
  CHECK(first.value == 1);
}

TEST_CASE("explicitly built dual reproduces the primal value") {
  // max c^T x, Ax <= b, x >= 0 against min b^T y, A^T y >= c, y >= 0
  std::mt19937_64 engine(3);
  for (int round = 0; round < 20; ++round) {
    const int n = 1 + static_cast<int>(engine() % 3);
    const int m = 1 + static_cast<int>(engine() % 3);
    LinearProgram primal;
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n));
    std::vector<Rational> b(m), c(n);
    for (int j = 0; j < n; ++j) {
      c[j] = Rational(static_cast<int>(engine() % 5), 2);
      int var = primal.add_variable("x" + std::to_string(j));
      primal.set_objective(var, c[j]);
    }
    for (int i = 0; i < m; ++i) {
      b[i] = Rational(static_cast<int>(engine() % 4) + 1, 2);
      for (int j = 0; j < n; ++j) a[i][j] = Rational(static_cast<int>(engine() % 3));
      primal.add_row(a[i], Relation::less_equal, b[i], "r" + std::to_string(i));
    }
    LpSolution psol = solve(primal);
    if (psol.status != LpStatus::optimal) continue;  // unbounded when a column is all zero

    LinearProgram dual;
    dual.sense = Sense::minimize;
    for (int i = 0; i < m; ++i) {
      int var = dual.add_variable("y" + std::to_string(i));
      dual.set_objective(var, b[i]);
    }
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> column(m);
      for (int i = 0; i < m; ++i) column[i] = a[i][j];
      dual.add_row(column, Relation::greater_equal, c[j], "c" + std::to_string(j));
    }
    LpSolution dsol = solve(dual);
    REQUIRE(dsol.status == LpStatus::optimal);
    CHECK(dsol.value == psol.value);
    // the reported multipliers themselves are a feasible dual point
    Rational from_multipliers = 0;
    for (int i = 0; i < m; ++i) from_multipliers += psol.dual[i] * b[i];
    CHECK(from_multipliers == psol.value);
  }
}

TEST_CASE("random mixed programs pass their internal verification") {
  std::mt19937_64 engine(17);
  int optimal_seen = 0;
  for (int round = 0; round < 60; ++round) {
    const int n = 1 + static_cast<int>(engine() % 3);
    const int m = 1 + static_cast<int>(engine() % 4);
    LinearProgram lp;
    lp.sense = engine() % 2 == 0 ? Sense::maximize : Sense::minimize;
    for (int j = 0; j < n; ++j) {
      std::optional<Rational> lower = Rational(0);
      std::optional<Rational> upper;
      switch (engine() % 4) {
        case 0: break;
        case 1: lower = std::nullopt; upper = Rational(static_cast<int>(engine() % 3) + 1); break;
        case 2: lower = std::nullopt; break;  // free
        case 3: upper = Rational(static_cast<int>(engine() % 3) + 2); break;
      }
      int var = lp.add_variable("x" + std::to_string(j), lower, upper);
      lp.set_objective(var, Rational(static_cast<int>(engine() % 7) - 3, 2));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<Rational> row(n);
      for (int j = 0; j < n; ++j) row[j] = Rational(static_cast<int>(engine() % 5) - 2);
      const int pick = static_cast<int>(engine() % 3);
      Relation rel = pick == 0 ? Relation::less_equal
                   : pick == 1 ? Relation::greater_equal
                               : Relation::equal;
      lp.add_row(std::move(row), rel, Rational(static_cast<int>(engine() % 7) - 3), "r" + std::to_string(i));
    }
    LpSolution sol = solve(lp);  // verify_solution runs on every path
    if (sol.status == LpStatus::optimal) {
      ++optimal_seen;
      LpSolution again = solve(lp);
      CHECK(again.basis == sol.basis);
      CHECK(again.value == sol.value);
    }
  }
  CHECK(optimal_seen > 10);
}

TEST_CASE("condition number by exhaustive submatrix determinants") {
  std::vector<std::vector<Rational>> identity = {{1, 0}, {0, 1}};
  CHECK(kappa(identity) == 1);

  std::vector<std::vector<Rational>> mixed = {{1, 1}, {1, -1}};
  CHECK(kappa(mixed) == 2);

  std::mt19937_64 engine(29);
  for (int round = 0; round < 8; ++round) {
    std::vector<std::vector<Rational>> matrix(3, std::vector<Rational>(4));
    for (auto& row : matrix) {
      for (Rational& cell : row) cell = Rational(static_cast<int>(engine() % 7) - 3);
    }
    CHECK(kappa(matrix) == oracles::naive_kappa(matrix));
  }

  std::vector<std::vector<Rational>> large(9, std::vector<Rational>(9, Rational(1)));
  CHECK_THROWS_AS(kappa(large), CapExceededError);
  CHECK_NOTHROW(kappa(large, 81));
}

TEST_CASE("shape violations are rejected before solving") {
  LinearProgram lp;
  lp.add_variable("x");
  lp.add_row({1, 2}, Relation::less_equal, 1, "bad");
  CHECK_THROWS_AS(solve(lp), ValidationError);
}

TEST_CASE("debug dump mentions every variable and row") {
  LinearProgram lp;
  int x = lp.add_variable("alpha");
  lp.set_objective(x, Rational(1, 2));
  lp.add_row({1}, Relation::less_equal, 1, "capacity");
  std::string text = lp.dump();
  CHECK(text.find("alpha") != std::string::npos);
  CHECK(text.find("capacity") != std::string::npos);
  CHECK(text.find("1/2") != std::string::npos);
}

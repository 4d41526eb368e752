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

//  Exact rational LP kernel.
//
//  Dense two-phase primal simplex over arbitrary-precision rationals with
//  Bland's anti-cycling rule. Every optimal solve carries a dual vector and
//  reduced costs and is verified internally: rows hold exactly, duals are
//  sign-feasible, complementary slackness is exact, and the primal and dual
//  objectives coincide. Infeasible solves return row multipliers proving the
//  contradiction; unbounded solves return an improving ray. There is no
//  scaling, no presolve, and no floating point.

#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "walreq/errors.hpp"
#include "walreq/rational.hpp"

namespace walreq {

enum class Sense { maximize, minimize };
enum class Relation { less_equal, equal, greater_equal };

inline const char* relation_symbol(Relation rel) {
  switch (rel) {
    case Relation::less_equal: return "<=";
    case Relation::equal: return "=";
    case Relation::greater_equal: return ">=";
  }
  return "?";
}

struct LpRow {
  std::vector<Rational> coeffs;
  Relation rel = Relation::less_equal;
  Rational rhs = 0;
  std::string label;
};

/// General-form LP. Variables carry optional bounds; a missing lower bound
/// means unbounded below, a missing upper bound unbounded above. Rows keep
/// their stated relation; equalities are not split, so each row owns exactly
/// one dual multiplier.
struct LinearProgram {
  Sense sense = Sense::maximize;
  std::vector<Rational> objective;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;
  std::vector<std::string> var_labels;
  std::vector<LpRow> rows;

  int add_variable(std::string label, std::optional<Rational> lower_bound = Rational(0),
                   std::optional<Rational> upper_bound = std::nullopt) {
    objective.push_back(0);
    lower.push_back(std::move(lower_bound));
    upper.push_back(std::move(upper_bound));
    var_labels.push_back(std::move(label));
    return static_cast<int>(objective.size()) - 1;
  }

  void set_objective(int var, Rational coeff) { objective[var] = std::move(coeff); }

  void add_row(std::vector<Rational> coeffs, Relation rel, Rational rhs, std::string label) {
    rows.push_back(LpRow{std::move(coeffs), rel, std::move(rhs), std::move(label)});
  }

  std::size_t num_vars() const { return objective.size(); }

  void check_shape() const {
    if (lower.size() != num_vars() || upper.size() != num_vars() || var_labels.size() != num_vars()) {
      throw ValidationError(ValidationCode::dimension_mismatch, "lp: variable metadata misaligned");
    }
    for (const LpRow& row : rows) {
      if (row.coeffs.size() != num_vars()) {
        throw ValidationError(ValidationCode::dimension_mismatch,
                              "lp: row '" + row.label + "' has wrong coefficient count");
      }
    }
  }

  /// Human-readable dump for debugging. Not a stable interchange format.
  std::string dump() const {
    std::ostringstream out;
    out << (sense == Sense::maximize ? "max" : "min");
    for (std::size_t j = 0; j < num_vars(); ++j) {
      out << (j == 0 ? " " : " + ") << to_string(objective[j]) << "*" << var_labels[j];
    }
    out << "\n";
    for (const LpRow& row : rows) {
      out << "  " << row.label << ":";
      for (std::size_t j = 0; j < num_vars(); ++j) {
        if (row.coeffs[j] == 0) continue;
        out << " " << to_string(row.coeffs[j]) << "*" << var_labels[j];
      }
      out << " " << relation_symbol(row.rel) << " " << to_string(row.rhs) << "\n";
    }
    for (std::size_t j = 0; j < num_vars(); ++j) {
      out << "  " << (lower[j] ? to_string(*lower[j]) : "-inf") << " <= " << var_labels[j] << " <= "
          << (upper[j] ? to_string(*upper[j]) : "+inf") << "\n";
    }
    return out.str();
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

/// Solution with certificates.
///
/// For status == optimal:
///   * primal satisfies every row and bound exactly;
///   * dual holds one multiplier per row. For a maximization, multipliers on
///     "<=" rows are >= 0, on ">=" rows <= 0, and free on "=" rows; for a
///     minimization all signs flip;
///   * reduced_costs[j] = c_j - dual^T A_j - upper_bound_duals[j];
///   * value equals dual^T rhs + sum_j upper_bound_duals[j]*U_j
///     + sum_j reduced_costs[j]*primal[j], which collapses to dual^T rhs for
///     problems whose variables sit at zero lower bounds or are free.
///
/// For status == infeasible, certificate holds row multipliers y with
/// y^T A x <= y^T b impossible for any feasible-signed x; for unbounded it
/// holds an improving feasible ray in the original variables.
struct LpSolution {
  LpStatus status = LpStatus::optimal;
  Rational value = 0;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
  std::vector<Rational> reduced_costs;
  std::vector<Rational> upper_bound_duals;
  std::vector<std::string> basis;
  std::vector<Rational> certificate;
};

namespace detail {

// Equality-form translation of a LinearProgram:
//   maximize obj^T t + obj_const   s.t.   mat t (rel) rhs,  t >= 0
// where every original variable maps to one or two nonnegative columns and
// finite upper bounds become extra rows appended after the original ones.
struct Standardized {
  enum class VarKind { shifted, mirrored, free_pair };
  struct ColOrigin {
    int var;        // original variable
    bool negated;   // column enters the original variable with factor -1
  };

  explicit Standardized(const LinearProgram& lp) : lp_(&lp) {
    const std::size_t n = lp.num_vars();
    kinds.resize(n);
    offsets.assign(n, Rational(0));
    first_col.assign(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.lower[j]) {
        kinds[j] = VarKind::shifted;
        offsets[j] = *lp.lower[j];
        first_col[j] = add_col(static_cast<int>(j), false);
      } else if (lp.upper[j]) {
        kinds[j] = VarKind::mirrored;
        offsets[j] = *lp.upper[j];
        first_col[j] = add_col(static_cast<int>(j), true);
      } else {
        kinds[j] = VarKind::free_pair;
        first_col[j] = add_col(static_cast<int>(j), false);
        add_col(static_cast<int>(j), true);
      }
    }
    const Rational sign = lp.sense == Sense::maximize ? 1 : -1;
    obj.assign(cols.size(), Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      Rational c = sign * lp.objective[j];
      obj_const += c * offsets[j];
      obj[first_col[j]] += c * (kinds[j] == VarKind::mirrored ? -1 : 1);
      if (kinds[j] == VarKind::free_pair) obj[first_col[j] + 1] -= c;
    }
    for (const LpRow& row : lp.rows) append_row(row.coeffs, row.rel, row.rhs);
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.lower[j] && lp.upper[j]) {
        // shifted variable with a ceiling: t_j <= U - L
        std::vector<Rational> coeffs(n, Rational(0));
        coeffs[j] = 1;
        append_row(coeffs, Relation::less_equal, *lp.upper[j]);
        ub_row_var.push_back(static_cast<int>(j));
      }
    }
  }

  int add_col(int var, bool negated) {
    cols.push_back(ColOrigin{var, negated});
    return static_cast<int>(cols.size()) - 1;
  }

  // Expresses an original-variable row over the nonnegative columns and
  // normalizes the right-hand side to be >= 0.
  void append_row(const std::vector<Rational>& coeffs, Relation rel, const Rational& rhs_in) {
    std::vector<Rational> r(cols.size(), Rational(0));
    Rational b = rhs_in;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] == 0) continue;
      b -= coeffs[j] * offsets[j];
      r[first_col[j]] += coeffs[j] * (kinds[j] == VarKind::mirrored ? -1 : 1);
      if (kinds[j] == VarKind::free_pair) r[first_col[j] + 1] -= coeffs[j];
    }
    bool flip = b < 0;
    if (flip) {
      for (Rational& v : r) v = -v;
      b = -b;
      rel = rel == Relation::less_equal ? Relation::greater_equal
            : rel == Relation::greater_equal ? Relation::less_equal
                                             : Relation::equal;
    }
    mat.push_back(std::move(r));
    rhs.push_back(std::move(b));
    rels.push_back(rel);
    flipped.push_back(flip);
  }

  const LinearProgram* lp_;
  std::vector<VarKind> kinds;
  std::vector<Rational> offsets;
  std::vector<int> first_col;
  std::vector<ColOrigin> cols;
  std::vector<Rational> obj;
  Rational obj_const = 0;
  std::vector<std::vector<Rational>> mat;  // original rows then upper-bound rows
  std::vector<Rational> rhs;               // normalized >= 0
  std::vector<Relation> rels;
  std::vector<bool> flipped;
  std::vector<int> ub_row_var;             // variable guarded by each extra row
};

// Dense Bland-rule simplex over the standardized system.
class Simplex {
 public:
  explicit Simplex(const Standardized& s) : s_(&s) {
    const std::size_t m = s.mat.size();
    num_structural_ = s.cols.size();
    std::size_t cols = num_structural_;
    slack_col_.assign(m, -1);
    art_col_.assign(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
      if (s.rels[i] != Relation::equal) slack_col_[i] = static_cast<int>(cols++);
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (s.rels[i] != Relation::less_equal) art_col_[i] = static_cast<int>(cols++);
    }
    num_cols_ = cols;
    tableau_.assign(m, std::vector<Rational>(cols, Rational(0)));
    rhs_ = s.rhs;
    basis_.assign(m, -1);
    init_basic_col_.assign(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < num_structural_; ++j) tableau_[i][j] = s.mat[i][j];
      if (slack_col_[i] >= 0) {
        tableau_[i][slack_col_[i]] = s.rels[i] == Relation::less_equal ? 1 : -1;
      }
      if (art_col_[i] >= 0) {
        tableau_[i][art_col_[i]] = 1;
        basis_[i] = art_col_[i];
      } else {
        basis_[i] = slack_col_[i];
      }
      init_basic_col_[i] = basis_[i];
    }
  }

  LpStatus run() {
    if (has_artificials()) {
      std::vector<Rational> phase1 = phase1_costs();
      iterate(phase1, /*allow_artificial=*/true);
      if (objective_value(phase1) != 0) return LpStatus::infeasible;
      expel_artificials();
    }
    std::vector<Rational> phase2(num_cols_, Rational(0));
    for (std::size_t j = 0; j < num_structural_; ++j) phase2[j] = s_->obj[j];
    if (!iterate(phase2, /*allow_artificial=*/false)) return LpStatus::unbounded;
    final_obj_ = std::move(phase2);
    return LpStatus::optimal;
  }

  // Values of the nonnegative columns at the current basis.
  std::vector<Rational> column_values() const {
    std::vector<Rational> x(num_cols_, Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i) x[basis_[i]] = rhs_[i];
    return x;
  }

  // Row multipliers of the current basis for the given cost vector. Each
  // row's initial basic column (its slack or artificial) is a +1 unit column
  // of the constraint matrix, so its reduced tableau column is the matching
  // column of the basis inverse.
  std::vector<Rational> row_multipliers(const std::vector<Rational>& costs) const {
    std::vector<Rational> y(basis_.size(), Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      Rational v = 0;
      for (std::size_t r = 0; r < basis_.size(); ++r) {
        if (costs[basis_[r]] != 0) v += costs[basis_[r]] * tableau_[r][init_basic_col_[i]];
      }
      y[i] = v;
    }
    return y;
  }

  const std::vector<Rational>& final_costs() const { return final_obj_; }

  Rational objective_value(const std::vector<Rational>& costs) const {
    Rational v = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (costs[basis_[i]] != 0) v += costs[basis_[i]] * rhs_[i];
    }
    return v;
  }

  std::vector<int> basis() const { return basis_; }
  int unbounded_col() const { return unbounded_col_; }

  // Direction of unbounded improvement over all columns.
  std::vector<Rational> unbounded_ray() const {
    std::vector<Rational> d(num_cols_, Rational(0));
    d[unbounded_col_] = 1;
    for (std::size_t i = 0; i < basis_.size(); ++i) d[basis_[i]] = -tableau_[i][unbounded_col_];
    return d;
  }

  std::size_t num_structural() const { return num_structural_; }
  bool is_artificial(int col) const {
    for (int a : art_col_) {
      if (a == col) return true;
    }
    return false;
  }

  std::vector<Rational> phase1_costs() const {
    std::vector<Rational> costs(num_cols_, Rational(0));
    for (int col : art_col_) {
      if (col >= 0) costs[col] = -1;
    }
    return costs;
  }

 private:
  bool has_artificials() const {
    for (int a : art_col_) {
      if (a >= 0) return true;
    }
    return false;
  }

  Rational reduced_cost(const std::vector<Rational>& costs, int col) const {
    Rational rc = costs[col];
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (costs[basis_[i]] != 0 && tableau_[i][col] != 0) rc -= costs[basis_[i]] * tableau_[i][col];
    }
    return rc;
  }

  void pivot(std::size_t row, int col) {
    Rational p = tableau_[row][col];
    for (Rational& v : tableau_[row]) {
      if (v != 0) v /= p;
    }
    rhs_[row] /= p;
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      if (i == row) continue;
      Rational f = tableau_[i][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        if (tableau_[row][j] != 0) tableau_[i][j] -= f * tableau_[row][j];
      }
      rhs_[i] -= f * rhs_[row];
    }
    basis_[row] = col;
  }

  // Bland: entering = lowest-index column with positive reduced cost; leaving
  // = tightest ratio, ties by lowest basic column index. Returns false when
  // an improving column has no blocking row (unbounded).
  bool iterate(const std::vector<Rational>& costs, bool allow_artificial) {
    while (true) {
      int enter = -1;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        if (!allow_artificial && is_artificial(static_cast<int>(j))) continue;
        if (is_basic(static_cast<int>(j))) continue;
        if (reduced_cost(costs, static_cast<int>(j)) > 0) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best_ratio = 0;
      for (std::size_t i = 0; i < tableau_.size(); ++i) {
        if (tableau_[i][enter] <= 0) continue;
        Rational ratio = rhs_[i] / tableau_[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = static_cast<int>(i);
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        unbounded_col_ = enter;
        return false;
      }
      pivot(static_cast<std::size_t>(leave), enter);
    }
  }

  bool is_basic(int col) const {
    for (int b : basis_) {
      if (b == col) return true;
    }
    return false;
  }

  // After a feasible phase one, swap any artificial still basic (at value 0)
  // for a non-artificial column. Rows without such a column are redundant;
  // their reduced row is zero everywhere outside artificials, so phase two
  // never touches them.
  void expel_artificials() {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        if (is_artificial(static_cast<int>(j)) || is_basic(static_cast<int>(j))) continue;
        if (tableau_[i][j] != 0) {
          pivot(i, static_cast<int>(j));
          break;
        }
      }
    }
  }

  const Standardized* s_;
  std::size_t num_structural_ = 0;
  std::size_t num_cols_ = 0;
  std::vector<int> slack_col_;
  std::vector<int> art_col_;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  std::vector<int> init_basic_col_;
  std::vector<Rational> final_obj_;
  int unbounded_col_ = -1;
};

}  // namespace detail

/// Exact feasibility, optimality, and certificate check. Throws
/// std::logic_error on the first violated condition; silent on success.
/// Called internally after every solve and usable directly from tests.
inline void verify_solution(const LinearProgram& lp, const LpSolution& sol) {
  const std::size_t n = lp.num_vars();
  auto fail = [](const std::string& what) { throw std::logic_error("lp verification: " + what); };
  const Rational sign = lp.sense == Sense::maximize ? 1 : -1;

  if (sol.status == LpStatus::optimal) {
    if (sol.primal.size() != n || sol.dual.size() != lp.rows.size() || sol.reduced_costs.size() != n ||
        sol.upper_bound_duals.size() != n) {
      fail("certificate vectors misaligned");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.lower[j] && sol.primal[j] < *lp.lower[j]) fail("primal below lower bound");
      if (lp.upper[j] && sol.primal[j] > *lp.upper[j]) fail("primal above upper bound");
    }
    Rational primal_value = 0;
    for (std::size_t j = 0; j < n; ++j) primal_value += lp.objective[j] * sol.primal[j];
    if (primal_value != sol.value) fail("reported value != objective at primal point");

    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      const LpRow& row = lp.rows[i];
      Rational activity = 0;
      for (std::size_t j = 0; j < n; ++j) activity += row.coeffs[j] * sol.primal[j];
      Rational residual = row.rhs - activity;
      bool ok = row.rel == Relation::less_equal   ? residual >= 0
                : row.rel == Relation::greater_equal ? residual <= 0
                                                     : residual == 0;
      if (!ok) fail("row '" + row.label + "' violated");
      Rational y = sign * sol.dual[i];  // sign-normalized to maximization
      if (row.rel == Relation::less_equal && y < 0) fail("dual sign on '" + row.label + "'");
      if (row.rel == Relation::greater_equal && y > 0) fail("dual sign on '" + row.label + "'");
      if (sol.dual[i] * residual != 0) fail("complementary slackness on '" + row.label + "'");
    }

    // reduced costs: rc_j = c_j - dual^T A_j - w_j, with bound-side sign and
    // exact complementarity against the active bound
    for (std::size_t j = 0; j < n; ++j) {
      Rational rc = lp.objective[j];
      for (std::size_t i = 0; i < lp.rows.size(); ++i) rc -= sol.dual[i] * lp.rows[i].coeffs[j];
      rc -= sol.upper_bound_duals[j];
      if (rc != sol.reduced_costs[j]) fail("reduced cost mismatch on variable " + lp.var_labels[j]);
      Rational rcx = sign * rc;
      Rational w = sign * sol.upper_bound_duals[j];
      if (w < 0) fail("upper bound dual sign on " + lp.var_labels[j]);
      if (w != 0 && (!lp.upper[j] || sol.primal[j] != *lp.upper[j])) {
        fail("upper bound dual off inactive bound on " + lp.var_labels[j]);
      }
      if (lp.lower[j]) {
        if (rcx > 0) fail("reduced cost sign on " + lp.var_labels[j]);
        if (rcx * (sol.primal[j] - *lp.lower[j]) != 0) fail("bound slackness on " + lp.var_labels[j]);
      } else if (lp.upper[j]) {
        if (rcx < 0) fail("reduced cost sign on " + lp.var_labels[j]);
        if (rcx * (*lp.upper[j] - sol.primal[j]) != 0) fail("bound slackness on " + lp.var_labels[j]);
      } else if (rc != 0) {
        fail("nonzero reduced cost on free variable " + lp.var_labels[j]);
      }
    }

    // strong duality: value = y^T b + sum w_j U_j + sum rc_j x_j
    Rational dual_value = 0;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) dual_value += sol.dual[i] * lp.rows[i].rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (sol.upper_bound_duals[j] != 0) dual_value += sol.upper_bound_duals[j] * *lp.upper[j];
      if (sol.reduced_costs[j] != 0) dual_value += sol.reduced_costs[j] * sol.primal[j];
    }
    if (dual_value != sol.value) fail("strong duality");
    return;
  }

  if (sol.status == LpStatus::unbounded) {
    if (sol.certificate.size() != n) fail("ray length");
    Rational gain = 0;
    for (std::size_t j = 0; j < n; ++j) gain += lp.objective[j] * sol.certificate[j];
    if (sign * gain <= 0) fail("ray does not improve objective");
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      const LpRow& row = lp.rows[i];
      Rational drift = 0;
      for (std::size_t j = 0; j < n; ++j) drift += row.coeffs[j] * sol.certificate[j];
      bool ok = row.rel == Relation::less_equal   ? drift <= 0
                : row.rel == Relation::greater_equal ? drift >= 0
                                                     : drift == 0;
      if (!ok) fail("ray leaves row '" + row.label + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.lower[j] && sol.certificate[j] < 0) fail("ray leaves lower bound");
      if (lp.upper[j] && sol.certificate[j] > 0) fail("ray leaves upper bound");
    }
    return;
  }

  // Infeasible. A crossed bound pair is its own certificate.
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j] && lp.upper[j] && *lp.lower[j] > *lp.upper[j]) return;
  }
  // Otherwise the multipliers must aggregate the rows into combo^T x <= bound
  // with y_i >= 0 on <= rows and y_i <= 0 on >= rows, while even the smallest
  // value of combo^T x over the bound box exceeds bound.
  if (sol.certificate.size() != lp.rows.size()) fail("farkas length");
  Rational bound = 0;
  std::vector<Rational> combo(n, Rational(0));
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Rational& y = sol.certificate[i];
    if (lp.rows[i].rel == Relation::less_equal && y < 0) fail("farkas sign");
    if (lp.rows[i].rel == Relation::greater_equal && y > 0) fail("farkas sign");
    if (y == 0) continue;
    bound += y * lp.rows[i].rhs;
    for (std::size_t j = 0; j < n; ++j) combo[j] += y * lp.rows[i].coeffs[j];
  }
  Rational floor = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (combo[j] > 0) {
      if (!lp.lower[j]) fail("farkas combination open below");
      floor += combo[j] * *lp.lower[j];
    } else if (combo[j] < 0) {
      if (!lp.upper[j]) fail("farkas combination open below");
      floor += combo[j] * *lp.upper[j];
    }
  }
  if (floor <= bound) fail("farkas combination not contradictory");
}

/// Solves the LP exactly. Deterministic: identical inputs produce identical
/// bases and certificates. Throws ValidationError on malformed input and
/// std::logic_error if self-verification ever fails.
inline LpSolution solve(const LinearProgram& lp) {
  lp.check_shape();
  detail::Standardized std_form(lp);
  detail::Simplex simplex(std_form);
  LpSolution sol;
  sol.status = simplex.run();
  const std::size_t n = lp.num_vars();
  const Rational sense_sign = lp.sense == Sense::maximize ? 1 : -1;

  if (sol.status == LpStatus::optimal) {
    std::vector<Rational> columns = simplex.column_values();
    sol.primal.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) sol.primal[j] = std_form.offsets[j];
    for (std::size_t col = 0; col < std_form.cols.size(); ++col) {
      const auto& origin = std_form.cols[col];
      sol.primal[origin.var] += origin.negated ? -columns[col] : columns[col];
    }
    sol.value = sense_sign * (simplex.objective_value(simplex.final_costs()) + std_form.obj_const);

    std::vector<Rational> y = simplex.row_multipliers(simplex.final_costs());
    sol.dual.assign(lp.rows.size(), Rational(0));
    sol.upper_bound_duals.assign(n, Rational(0));
    for (std::size_t i = 0; i < y.size(); ++i) {
      Rational multiplier = std_form.flipped[i] ? -y[i] : y[i];
      multiplier *= sense_sign;
      if (i < lp.rows.size()) {
        sol.dual[i] = multiplier;
      } else {
        sol.upper_bound_duals[std_form.ub_row_var[i - lp.rows.size()]] = multiplier;
      }
    }
    sol.reduced_costs.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
      Rational rc = lp.objective[j];
      for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        if (lp.rows[i].coeffs[j] != 0) rc -= sol.dual[i] * lp.rows[i].coeffs[j];
      }
      rc -= sol.upper_bound_duals[j];
      sol.reduced_costs[j] = rc;
    }
    for (int col : simplex.basis()) {
      const auto& labels = lp.var_labels;
      if (col < static_cast<int>(std_form.cols.size())) {
        const auto& origin = std_form.cols[col];
        sol.basis.push_back((origin.negated ? "-" : "") + labels[origin.var]);
      } else {
        sol.basis.push_back("aux" + std::to_string(col));
      }
    }
  } else if (sol.status == LpStatus::unbounded) {
    std::vector<Rational> ray = simplex.unbounded_ray();
    sol.certificate.assign(n, Rational(0));
    for (std::size_t col = 0; col < std_form.cols.size(); ++col) {
      const auto& origin = std_form.cols[col];
      if (ray[col] != 0) sol.certificate[origin.var] += origin.negated ? -ray[col] : ray[col];
    }
  } else {
    // Phase-one multipliers prove the contradiction. Multipliers living on a
    // variable's internal upper-bound row are not reported; the public check
    // closes over the bound box instead.
    std::vector<Rational> y = simplex.row_multipliers(simplex.phase1_costs());
    sol.certificate.assign(lp.rows.size(), Rational(0));
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      sol.certificate[i] = std_form.flipped[i] ? -y[i] : y[i];
    }
  }

  verify_solution(lp, sol);
  return sol;
}

/// Maximum absolute determinant over all square submatrices, by exhaustive
/// expansion. Guarded by a cell cap because the submatrix count explodes;
/// callers wanting larger inputs must raise the cap explicitly.
inline Rational kappa(const std::vector<std::vector<Rational>>& matrix, std::size_t max_cells = 64) {
  const std::size_t rows = matrix.size();
  const std::size_t cols = rows == 0 ? 0 : matrix[0].size();
  for (const auto& row : matrix) {
    if (row.size() != cols) {
      throw ValidationError(ValidationCode::dimension_mismatch, "kappa: ragged matrix");
    }
  }
  if (rows * cols > max_cells) {
    throw CapExceededError("kappa: matrix too large for brute force (" + std::to_string(rows * cols) +
                           " cells > cap " + std::to_string(max_cells) + ")");
  }
  auto determinant = [](std::vector<std::vector<Rational>> a) {
    Rational det = 1;
    const std::size_t r = a.size();
    for (std::size_t col = 0; col < r; ++col) {
      std::size_t pivot = col;
      while (pivot < r && a[pivot][col] == 0) ++pivot;
      if (pivot == r) return Rational(0);
      if (pivot != col) {
        std::swap(a[pivot], a[col]);
        det = -det;
      }
      det *= a[col][col];
      for (std::size_t i = col + 1; i < r; ++i) {
        if (a[i][col] == 0) continue;
        Rational f = a[i][col] / a[col][col];
        for (std::size_t j = col; j < r; ++j) a[i][j] -= f * a[col][j];
      }
    }
    return det;
  };

  Rational best = 0;
  std::size_t max_order = std::min(rows, cols);
  std::vector<std::size_t> row_pick, col_pick;
  // iterate all (row subset, column subset) pairs of equal size
  for (std::size_t order = 1; order <= max_order; ++order) {
    row_pick.resize(order);
    for (std::size_t i = 0; i < order; ++i) row_pick[i] = i;
    while (true) {
      col_pick.resize(order);
      for (std::size_t i = 0; i < order; ++i) col_pick[i] = i;
      while (true) {
        std::vector<std::vector<Rational>> sub(order, std::vector<Rational>(order));
        for (std::size_t i = 0; i < order; ++i) {
          for (std::size_t j = 0; j < order; ++j) sub[i][j] = matrix[row_pick[i]][col_pick[j]];
        }
        Rational d = abs(determinant(std::move(sub)));
        if (d > best) best = d;
        // next column combination
        std::size_t t = order;
        while (t > 0 && col_pick[t - 1] == cols - order + t - 1) --t;
        if (t == 0) break;
        ++col_pick[t - 1];
        for (std::size_t i = t; i < order; ++i) col_pick[i] = col_pick[i - 1] + 1;
      }
      std::size_t t = order;
      while (t > 0 && row_pick[t - 1] == rows - order + t - 1) --t;
      if (t == 0) break;
      ++row_pick[t - 1];
      for (std::size_t i = t; i < order; ++i) row_pick[i] = row_pick[i - 1] + 1;
    }
  }
  return best;
}

}  // namespace walreq

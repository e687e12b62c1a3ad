#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gcbp/error.hpp"
#include "gcbp/rational.hpp"

namespace gcbp {

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class SolveStatus { Optimal, Infeasible, Unbounded, BudgetExceeded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

/// min objective.x subject to the constraints and x >= 0.
struct LpModel {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<LinearConstraint> constraints;

  LpModel() = default;
  explicit LpModel(std::size_t n) : num_vars(n), objective(n) {}

  /// Appends a zero row and returns it for filling in.
  LinearConstraint& add_row(Relation relation, Rational rhs) {
    constraints.push_back(LinearConstraint{std::vector<Rational>(num_vars), relation, std::move(rhs)});
    return constraints.back();
  }

  void validate() const {
    if (objective.size() != num_vars) throw Error(ErrorKind::BadModel, "objective length differs from num_vars");
    for (const auto& row : constraints) {
      if (row.coeffs.size() != num_vars) throw Error(ErrorKind::BadModel, "constraint length differs from num_vars");
    }
  }
};

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<Rational> values;
  Rational objective_value;
  bool is_basic = false;
};

/// True when `x` satisfies every row of `m` and x >= 0, exactly.
inline bool satisfies(const LpModel& m, const std::vector<Rational>& x) {
  if (x.size() != m.num_vars) return false;
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (const auto& row : m.constraints) {
    Rational lhs(0);
    for (std::size_t j = 0; j < m.num_vars; ++j) {
      if (sgn(row.coeffs[j]) != 0) lhs += row.coeffs[j] * x[j];
    }
    const int c = cmp(lhs, row.rhs);
    if ((row.relation == Relation::LessEqual && c > 0) || (row.relation == Relation::GreaterEqual && c < 0) ||
        (row.relation == Relation::Equal && c != 0)) {
      return false;
    }
  }
  return true;
}

namespace detail {

/// Dense two-phase primal simplex over exact rationals with Bland's rule.
class Simplex {
 public:
  explicit Simplex(const LpModel& model) : n_(model.num_vars) {
    model.validate();
    const std::size_t m = model.constraints.size();
    std::size_t slacks = 0;
    std::size_t artificials = 0;
    std::vector<Relation> rel(m);
    for (std::size_t i = 0; i < m; ++i) {
      rel[i] = model.constraints[i].relation;
      if (model.constraints[i].rhs < 0) {
        rel[i] = rel[i] == Relation::LessEqual ? Relation::GreaterEqual
                 : rel[i] == Relation::GreaterEqual ? Relation::LessEqual
                                                    : Relation::Equal;
      }
      if (rel[i] != Relation::Equal) ++slacks;
      if (rel[i] != Relation::LessEqual) ++artificials;
    }
    first_artificial_ = n_ + slacks;
    cols_ = first_artificial_ + artificials;
    rows_.assign(m, std::vector<Rational>(cols_ + 1));
    basis_.assign(m, 0);

    std::size_t next_slack = n_;
    std::size_t next_art = first_artificial_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& src = model.constraints[i];
      const bool flip = src.rhs < 0;
      auto& row = rows_[i];
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(src.coeffs[j]) != 0) row[j] = flip ? Rational(-src.coeffs[j]) : src.coeffs[j];
      }
      row[cols_] = flip ? Rational(-src.rhs) : src.rhs;
      if (rel[i] == Relation::LessEqual) {
        row[next_slack] = 1;
        basis_[i] = next_slack++;
      } else {
        if (rel[i] == Relation::GreaterEqual) row[next_slack++] = -1;
        row[next_art] = 1;
        basis_[i] = next_art++;
      }
    }
  }

  /// Phase 1. Returns false when the constraints admit no x >= 0.
  bool make_feasible() {
    std::vector<Rational> cost(cols_);
    for (std::size_t j = first_artificial_; j < cols_; ++j) cost[j] = 1;
    price(cost);
    run(cols_);
    if (sgn(objective_row_[cols_]) != 0) return false;

    // Pivot zero-valued artificials out of the basis, dropping redundant rows.
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < first_artificial_) {
        ++i;
        continue;
      }
      std::size_t enter = first_artificial_;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          enter = j;
          break;
        }
      }
      if (enter == first_artificial_) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, enter);
      ++i;
    }
    return true;
  }

  /// Phase 2 on the original objective. Returns false when unbounded.
  bool optimize(const std::vector<Rational>& objective) {
    std::vector<Rational> cost(cols_);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = objective[j];
    price(cost);
    return run(first_artificial_);
  }

  std::vector<Rational> values() const {
    std::vector<Rational> x(n_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rows_[i][cols_];
    }
    return x;
  }

  std::size_t num_rows() const { return rows_.size(); }

 private:
  // Reduced costs d_j = c_j - c_B B^-1 A_j, objective value stored negated in
  // the last slot.
  void price(const std::vector<Rational>& cost) {
    objective_row_.assign(cols_ + 1, Rational(0));
    for (std::size_t j = 0; j < cols_; ++j) objective_row_[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sgn(rows_[i][j]) != 0) objective_row_[j] -= cb * rows_[i][j];
      }
    }
  }

  // Columns >= `limit` never enter.
  bool run(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(objective_row_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;

      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][enter]) <= 0) continue;
        Rational ratio = rows_[i][cols_] / rows_[i][enter];
        const int c = leave ? cmp(ratio, best_ratio) : -1;
        if (c < 0 || (c == 0 && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    const Rational inv = 1 / prow[c];
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        support.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[c]) == 0) return;
      const Rational factor = row[c];
      for (std::size_t j : support) row[j] -= factor * prow[j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    eliminate(objective_row_);
    basis_[r] = c;
  }

  std::size_t n_;
  std::size_t cols_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> objective_row_;
};

inline Rational evaluate(const std::vector<Rational>& objective, const std::vector<Rational>& x) {
  Rational total(0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (sgn(x[j]) != 0) total += objective[j] * x[j];
  }
  return total;
}

}  // namespace detail

/// Exact optimum at a vertex, or an Infeasible/Unbounded verdict.
inline LpSolution solve_lp(const LpModel& m) {
  detail::Simplex simplex(m);
  LpSolution out;
  if (!simplex.make_feasible()) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (!simplex.optimize(m.objective)) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.values = simplex.values();
  out.objective_value = detail::evaluate(m.objective, out.values);
  out.is_basic = true;
  return out;
}

/// Any basic feasible point; the objective is ignored for the search and
/// only evaluated at the point found.
inline LpSolution find_basic_feasible(const LpModel& m) {
  detail::Simplex simplex(m);
  LpSolution out;
  if (!simplex.make_feasible()) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.values = simplex.values();
  out.objective_value = detail::evaluate(m.objective, out.values);
  out.is_basic = true;
  return out;
}

/// Debug dump in CPLEX LP text. Fractional coefficients are printed as
/// decimals, so the dump is for inspection only.
inline void write_lp_text(const LpModel& m, std::ostream& out) {
  auto term = [&](const Rational& c, std::size_t j, bool first) {
    const bool neg = sgn(c) < 0;
    Rational a = neg ? Rational(-c) : c;
    out << (neg ? " - " : (first ? " " : " + "));
    if (is_integral(a)) {
      out << a;
    } else {
      out << a.get_d();
    }
    out << " x" << j;
  };
  auto row = [&](const std::vector<Rational>& coeffs) {
    bool first = true;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (sgn(coeffs[j]) == 0) continue;
      term(coeffs[j], j, first);
      first = false;
    }
    if (first) out << " 0 x0";
  };
  out << "Minimize\n obj:";
  row(m.objective);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    const auto& c = m.constraints[i];
    out << " c" << i << ":";
    row(c.coeffs);
    out << (c.relation == Relation::LessEqual ? " <= " : c.relation == Relation::Equal ? " = " : " >= ");
    if (is_integral(c.rhs)) {
      out << c.rhs;
    } else {
      out << c.rhs.get_d();
    }
    out << "\n";
  }
  out << "End\n";
}

}  // namespace gcbp

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "gcbp/lp.hpp"

namespace gcbp {

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000;

struct MilpModel {
  LpModel base;
  std::vector<std::size_t> integer_vars;
  /// Parallel to integer_vars; nullopt means no upper bound.
  std::vector<std::optional<Rational>> upper_bounds;

  void validate() const {
    base.validate();
    if (!upper_bounds.empty() && upper_bounds.size() != integer_vars.size()) {
      throw Error(ErrorKind::BadModel, "upper_bounds must be empty or parallel to integer_vars");
    }
    for (std::size_t v : integer_vars) {
      if (v >= base.num_vars) throw Error(ErrorKind::BadModel, "integer variable index out of range");
    }
  }
};

struct MilpSolution : LpSolution {
  /// LP relaxations solved, including pruned and infeasible nodes.
  std::uint64_t nodes = 0;
};

namespace detail {

struct BranchBound {
  std::size_t var;
  bool upper;  // x <= value when true, x >= value otherwise
  Integer value;
};

inline LpModel with_bounds(const LpModel& base, const std::vector<BranchBound>& bounds) {
  LpModel m = base;
  for (const auto& b : bounds) {
    auto& row = m.add_row(b.upper ? Relation::LessEqual : Relation::GreaterEqual, Rational(b.value));
    row.coeffs[b.var] = 1;
  }
  return m;
}

}  // namespace detail

/// Branch-and-bound over the exact LP relaxation: depth-first, branching on
/// the lowest-index fractional integer variable (floor side first), pruning
/// nodes whose relaxation is no better than the incumbent. When the node
/// budget runs out the status is BudgetExceeded and `values` holds the
/// incumbent, if any.
inline MilpSolution solve_milp(const MilpModel& model, std::uint64_t node_budget = kDefaultNodeBudget) {
  model.validate();
  LpModel root = model.base;
  for (std::size_t k = 0; k < model.upper_bounds.size(); ++k) {
    if (!model.upper_bounds[k]) continue;
    auto& row = root.add_row(Relation::LessEqual, *model.upper_bounds[k]);
    row.coeffs[model.integer_vars[k]] = 1;
  }

  std::vector<std::size_t> ints = model.integer_vars;
  std::sort(ints.begin(), ints.end());
  ints.erase(std::unique(ints.begin(), ints.end()), ints.end());

  MilpSolution out;
  std::optional<LpSolution> incumbent;
  std::vector<std::vector<detail::BranchBound>> stack{{}};
  bool root_node = true;

  while (!stack.empty()) {
    if (out.nodes >= node_budget) {
      out.status = SolveStatus::BudgetExceeded;
      if (incumbent) {
        out.values = incumbent->values;
        out.objective_value = incumbent->objective_value;
      }
      return out;
    }
    auto bounds = std::move(stack.back());
    stack.pop_back();
    ++out.nodes;
    LpSolution relax = solve_lp(detail::with_bounds(root, bounds));
    if (relax.status == SolveStatus::Unbounded) {
      if (root_node) {
        out.status = SolveStatus::Unbounded;
        return out;
      }
      continue;
    }
    root_node = false;
    if (relax.status != SolveStatus::Optimal) continue;
    if (incumbent && relax.objective_value >= incumbent->objective_value) continue;

    std::optional<std::size_t> branch;
    for (std::size_t v : ints) {
      if (!is_integral(relax.values[v])) {
        branch = v;
        break;
      }
    }
    if (!branch) {
      incumbent = std::move(relax);
      continue;
    }
    const Integer down = floor(relax.values[*branch]);
    auto up_bounds = bounds;
    up_bounds.push_back({*branch, false, Integer(down + 1)});
    bounds.push_back({*branch, true, down});
    stack.push_back(std::move(up_bounds));
    stack.push_back(std::move(bounds));
  }

  if (!incumbent) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.values = std::move(incumbent->values);
  out.objective_value = std::move(incumbent->objective_value);
  out.is_basic = ints.empty();
  return out;
}

/// Pure integer program: every variable is integral.
inline MilpSolution solve_ip(const MilpModel& model, std::uint64_t node_budget = kDefaultNodeBudget) {
  if (model.integer_vars.size() != model.base.num_vars) {
    throw Error(ErrorKind::BadModel, "solve_ip needs every variable integral");
  }
  return solve_milp(model, node_budget);
}

}  // namespace gcbp

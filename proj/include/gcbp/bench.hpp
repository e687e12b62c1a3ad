#pragma once

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gcbp/io.hpp"
#include "gcbp/solve.hpp"

namespace gcbp {

struct BenchCase {
  std::string name;
  Instance instance;
};

struct BenchOptions {
  std::vector<std::string> algorithms{"greedy", "aptas", "oracle"};
  std::vector<Rational> epsilons{make_rational(1, 2)};
  std::uint64_t budget = kDefaultNodeBudget;
  std::size_t oracle_limit = kDefaultOracleLimit;
  bool timing = false;
};

struct BenchRow {
  std::string instance;
  std::size_t n = 0;
  std::string algorithm;             // "aptas(1/2)" for the scheme
  std::string status = "ok";         // or the error kind
  std::string message;
  std::optional<Rational> cost;      // normalized scale
  std::optional<Rational> oracle;
  Rational lower_bound;              // n F(k)
  std::optional<Rational> bound_rhs;
  std::optional<bool> within_bound;
  std::uint64_t guesses = 0;
  std::uint64_t milp_nodes = 0;
  bool degraded = false;
  std::optional<double> wall_ms;

  std::optional<Rational> ratio_to_oracle() const {
    if (!cost || !oracle || *oracle == 0) return std::nullopt;
    return Rational(*cost / *oracle);
  }
  std::optional<Rational> ratio_to_lower_bound() const {
    if (!cost || lower_bound == 0) return std::nullopt;
    return Rational(*cost / lower_bound);
  }
};

/// One row per (instance, algorithm) and per epsilon for the scheme. Errors
/// are recorded in the row and the run continues.
inline std::vector<BenchRow> run_bench(const std::vector<BenchCase>& cases, const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  for (const auto& bc : cases) {
    const Instance& inst = bc.instance;
    std::optional<Rational> oracle;
    if (inst.size() <= opts.oracle_limit) {
      oracle = packing_cost(inst, brute_force_opt(inst, opts.oracle_limit));
    }
    const Rational lower = average_cost_lower_bound(inst);

    for (const auto& name : opts.algorithms) {
      std::vector<std::optional<Rational>> eps_list{std::nullopt};
      if (name == "aptas") eps_list.assign(opts.epsilons.begin(), opts.epsilons.end());
      for (const auto& eps : eps_list) {
        BenchRow row;
        row.instance = bc.name;
        row.n = inst.size();
        row.algorithm = eps ? name + "(" + to_string(*eps) + ")" : name;
        row.oracle = oracle;
        row.lower_bound = lower;
        const auto start = std::chrono::steady_clock::now();
        try {
          SolveOptions so;
          so.algorithm = parse_algorithm(name);
          if (eps) so.epsilon = *eps;
          so.budget = opts.budget;
          so.oracle_limit = opts.oracle_limit;
          so.reference = oracle;
          const SolveOutcome outcome = solve(inst, so);
          const auto report = verify_packing(inst, outcome.packing);
          if (!report.ok()) throw Error(ErrorKind::InternalInfeasible, "infeasible output: " + report.describe());
          row.cost = packing_cost(inst, outcome.packing);
          if (outcome.certificate) {
            row.bound_rhs = outcome.certificate->bound_rhs;
            row.within_bound = *row.cost <= *row.bound_rhs;
            row.guesses = outcome.certificate->guesses_examined;
            row.milp_nodes = outcome.certificate->milp_nodes;
            row.degraded = outcome.certificate->degraded;
          }
        } catch (const Error& e) {
          row.status = to_string(e.kind());
          row.message = e.what();
        }
        if (opts.timing) {
          row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

inline Json bench_row_to_json(const BenchRow& r) {
  auto opt = [](const std::optional<Rational>& v) { return v ? Json(to_string(*v)) : Json(nullptr); };
  Json j;
  j["instance"] = r.instance;
  j["n"] = r.n;
  j["algorithm"] = r.algorithm;
  j["status"] = r.status;
  if (!r.message.empty()) j["message"] = r.message;
  j["cost"] = opt(r.cost);
  j["oracle"] = opt(r.oracle);
  j["lower_bound"] = to_string(r.lower_bound);
  j["ratio_to_oracle"] = opt(r.ratio_to_oracle());
  j["ratio_to_lower_bound"] = opt(r.ratio_to_lower_bound());
  j["bound_rhs"] = opt(r.bound_rhs);
  j["within_bound"] = r.within_bound ? Json(*r.within_bound) : Json(nullptr);
  j["guesses"] = r.guesses;
  j["milp_nodes"] = r.milp_nodes;
  j["degraded"] = r.degraded;
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  return j;
}

/// One JSON record per line.
inline void write_bench_jsonl(const std::vector<BenchRow>& rows, std::ostream& out) {
  for (const auto& r : rows) out << bench_row_to_json(r).dump() << '\n';
}

inline void write_bench_table(const std::vector<BenchRow>& rows, std::ostream& out) {
  auto dec = [](const std::optional<Rational>& v) -> std::string {
    if (!v) return "-";
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v->get_d();
    return s.str();
  };
  std::size_t name_width = 10;
  for (const auto& r : rows) name_width = std::max(name_width, r.instance.size() + 2);
  const int nw = static_cast<int>(name_width);
  out << std::left << std::setw(nw) << "instance" << std::setw(5) << "n" << std::setw(14) << "algorithm"
      << std::setw(12) << "status" << std::setw(10) << "cost" << std::setw(10) << "oracle" << std::setw(10)
      << "ratio" << std::setw(10) << "bound" << std::setw(8) << "within" << std::setw(9) << "guesses";
  const bool timing = !rows.empty() && rows.front().wall_ms.has_value();
  if (timing) out << "ms";
  out << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(nw) << r.instance << std::setw(5) << r.n << std::setw(14) << r.algorithm
        << std::setw(12) << r.status << std::setw(10) << dec(r.cost) << std::setw(10) << dec(r.oracle) << std::setw(10)
        << dec(r.ratio_to_oracle()) << std::setw(10) << dec(r.bound_rhs) << std::setw(8)
        << (r.within_bound ? (*r.within_bound ? "yes" : "NO") : "-") << std::setw(9) << r.guesses;
    if (timing && r.wall_ms) out << std::fixed << std::setprecision(1) << *r.wall_ms;
    out << '\n';
  }
}

}  // namespace gcbp

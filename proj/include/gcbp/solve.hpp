#pragma once

#include <optional>
#include <string>

#include "gcbp/aptas.hpp"
#include "gcbp/classify.hpp"
#include "gcbp/exact_poly.hpp"
#include "gcbp/oracle.hpp"

namespace gcbp {

enum class Algorithm { Auto, K1, K2, Aptas, Oracle, Greedy };

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "auto") return Algorithm::Auto;
  if (name == "k1") return Algorithm::K1;
  if (name == "k2") return Algorithm::K2;
  if (name == "aptas") return Algorithm::Aptas;
  if (name == "oracle") return Algorithm::Oracle;
  if (name == "greedy") return Algorithm::Greedy;
  throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + name + "'");
}

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Auto: return "auto";
    case Algorithm::K1: return "k1";
    case Algorithm::K2: return "k2";
    case Algorithm::Aptas: return "aptas";
    case Algorithm::Oracle: return "oracle";
    case Algorithm::Greedy: return "greedy";
  }
  return "?";
}

struct SolveOptions {
  Algorithm algorithm = Algorithm::Auto;
  Rational epsilon = make_rational(1, 2);
  std::uint64_t budget = kDefaultNodeBudget;
  bool force = false;
  std::size_t oracle_limit = kDefaultOracleLimit;
  std::optional<Rational> reference;  // passed to the certificate bound
};

struct SolveOutcome {
  Packing packing;
  Algorithm used = Algorithm::Auto;
  std::optional<AptasCertificate> certificate;
};

/// Auto picks the exact algorithm when the cost function allows one (k = 1
/// or 2) and the approximation scheme otherwise.
inline SolveOutcome solve(const Instance& inst, const SolveOptions& opts) {
  SolveOutcome out;
  out.used = opts.algorithm;
  if (out.used == Algorithm::Auto) {
    const auto verdict = minimizer_k(inst.cost()).verdict;
    out.used = verdict == Verdict::PolyK1 ? Algorithm::K1 : verdict == Verdict::PolyK2 ? Algorithm::K2 : Algorithm::Aptas;
  }
  switch (out.used) {
    case Algorithm::K1: out.packing = solve_k1(inst, opts.force); break;
    case Algorithm::K2: out.packing = solve_k2(inst, opts.force); break;
    case Algorithm::Oracle: out.packing = brute_force_opt(inst, opts.oracle_limit); break;
    case Algorithm::Greedy: out.packing = greedy_baseline(inst); break;
    case Algorithm::Aptas:
    case Algorithm::Auto: {
      auto result = aptas(inst, opts.epsilon, opts.budget, opts.reference);
      out.packing = std::move(result.packing);
      out.certificate = std::move(result.certificate);
      break;
    }
  }
  return out;
}

}  // namespace gcbp

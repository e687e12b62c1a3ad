#pragma once

#include <optional>
#include <vector>

#include "gcbp/classify.hpp"
#include "gcbp/core.hpp"
#include "gcbp/matching.hpp"

namespace gcbp {

/// One guess of the k=2 algorithm: rho_s singleton bins, one bin of odd
/// cardinality rho_ell (0 when absent, otherwise >= 3), rho_p items in pairs.
struct K2Guess {
  std::size_t rho_s = 0;
  std::size_t rho_ell = 0;
  std::size_t rho_p = 0;
};

/// Every item in its own bin. Optimal when the minimizer k of F is 1.
inline Packing solve_k1(const Instance& inst, bool force = false) {
  if (!force) {
    const auto cls = minimizer_k(inst.cost());
    if (cls.verdict != Verdict::PolyK1) {
      throw Error(ErrorKind::WrongClass, "solve_k1 needs k=1, instance has k=" + std::to_string(cls.k));
    }
  }
  Packing p;
  for (const auto& item : inst.items()) p.bins.push_back({item.id});
  return p;
}

/// All admissible (rho_s, rho_ell, rho_p) triples for n items.
inline std::vector<K2Guess> enumerate_k2_guesses(std::size_t n) {
  std::vector<K2Guess> out;
  for (std::size_t rho_s = 0; rho_s <= n; ++rho_s) {
    for (std::size_t rho_ell = 0; rho_s + rho_ell <= n; rho_ell = rho_ell == 0 ? 3 : rho_ell + 2) {
      const std::size_t rho_p = n - rho_s - rho_ell;
      if (rho_p % 2 == 0) out.push_back(K2Guess{rho_s, rho_ell, rho_p});
    }
  }
  return out;
}

/// Exact solver for k=2: some optimum uses singletons, pairs and at most one
/// odd bin of cardinality >= 3. Each guess keeps the rho_s largest items as
/// singletons, pairs the rest by a maximum-weight matching with rho_p/2 edges
/// and puts the unmatched items in one bin if they fit.
inline Packing solve_k2(const Instance& inst, bool force = false) {
  if (!force) {
    const auto cls = minimizer_k(inst.cost());
    if (cls.verdict != Verdict::PolyK2) {
      throw Error(ErrorKind::WrongClass, "solve_k2 needs k=2, instance has k=" + std::to_string(cls.k));
    }
  }
  const std::size_t n = inst.size();
  const auto& f = inst.cost();
  const auto all = inst.all_ids();
  const auto order = sorted_by_size_desc(inst, all);

  std::optional<Rational> best_cost;
  Packing best;
  std::size_t current_rho_s = n + 1;
  std::optional<MatchingGraph> graph;
  std::optional<detail::ExactSizeMatcher> matcher;

  for (const auto& guess : enumerate_k2_guesses(n)) {
    Rational cost = Rational(static_cast<unsigned long>(guess.rho_s)) * f(1) + f(guess.rho_ell) +
                    Rational(static_cast<unsigned long>(guess.rho_p / 2)) * (n >= 2 ? f(2) : Rational(0));
    if (best_cost && cost >= *best_cost) continue;

    const std::vector<ItemId> rest(order.begin() + static_cast<std::ptrdiff_t>(guess.rho_s), order.end());
    if (guess.rho_s != current_rho_s) {
      current_rho_s = guess.rho_s;
      matcher.reset();
      graph = build_matching_graph(inst, rest);
      matcher.emplace(*graph);
    }
    const auto matching = matcher->solve(guess.rho_p / 2);
    if (!matching) continue;

    std::vector<char> matched(n, 0);
    for (const auto& [u, v] : matching->edges) matched[static_cast<std::size_t>(u)] = matched[static_cast<std::size_t>(v)] = 1;
    std::vector<ItemId> leftover;
    for (ItemId id : rest) {
      if (!matched[static_cast<std::size_t>(id)]) leftover.push_back(id);
    }
    if (bin_load(inst, leftover) > 1) continue;

    Packing p;
    for (std::size_t i = 0; i < guess.rho_s; ++i) p.bins.push_back({order[i]});
    for (const auto& [u, v] : matching->edges) p.bins.push_back({u, v});
    if (!leftover.empty()) p.bins.push_back(leftover);
    best_cost = std::move(cost);
    best = std::move(p);
  }
  return best;
}

}  // namespace gcbp

#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "gcbp/classify.hpp"
#include "gcbp/core.hpp"

namespace gcbp {

inline constexpr std::size_t kDefaultOracleLimit = 12;

/// Exact optimum by dynamic programming over item subsets:
///   OPT[S] = min over feasible B in S holding the lowest item of S of
///            f(|B|) + OPT[S \ B].
/// Roughly 3^n transitions; refuses instances above `limit_n` (hard cap 24).
inline Packing brute_force_opt(const Instance& inst, std::size_t limit_n = kDefaultOracleLimit) {
  const std::size_t n = inst.size();
  if (n > limit_n || n > 24) {
    throw Error(ErrorKind::TooLarge,
                "oracle limited to n <= " + std::to_string(limit_n) + ", instance has n=" + std::to_string(n));
  }
  const std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  const std::size_t states = std::size_t{1} << n;

  std::vector<char> fits(states, 0);
  {
    std::vector<Rational> load(states);
    fits[0] = 1;
    for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
      const int low = std::countr_zero(mask);
      load[mask] = load[mask & (mask - 1)] + inst.size_of(low);
      fits[mask] = load[mask] <= 1;
      if (mask == full) break;
    }
  }

  std::vector<Rational> opt(states);
  std::vector<std::uint32_t> choice(states, 0);
  for (std::uint32_t set = 1; set <= full && set != 0; ++set) {
    const std::uint32_t low = set & (~set + 1);
    const std::uint32_t rest = set ^ low;
    std::optional<Rational> best;
    // all submasks of `rest`, including the empty one
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t bin = sub | low;
      if (fits[bin]) {
        Rational candidate = inst.cost()(static_cast<std::size_t>(std::popcount(bin))) + opt[set ^ bin];
        if (!best || candidate < *best) {
          best = std::move(candidate);
          choice[set] = bin;
        }
      }
      if (sub == 0) break;
    }
    // a singleton always fits, so `best` is set
    opt[set] = std::move(*best);
    if (set == full) break;
  }

  Packing p;
  for (std::uint32_t set = full; set != 0; set ^= choice[set]) {
    std::vector<ItemId> bin;
    for (std::uint32_t bits = choice[set]; bits != 0; bits &= bits - 1) bin.push_back(std::countr_zero(bits));
    p.bins.push_back(std::move(bin));
  }
  return p;
}

/// First fit on sizes sorted non-increasing, capping each bin at k* items
/// where k* is the minimizer of the per-item average cost.
inline Packing greedy_baseline(const Instance& inst) {
  const std::size_t cap = minimizer_k(inst.cost()).k;
  const auto order = sorted_by_size_desc(inst, inst.all_ids());
  Packing p;
  std::vector<Rational> residual;
  for (ItemId id : order) {
    const Rational& s = inst.size_of(id);
    bool placed = false;
    for (std::size_t b = 0; b < p.bins.size(); ++b) {
      if (p.bins[b].size() < cap && residual[b] >= s) {
        p.bins[b].push_back(id);
        residual[b] -= s;
        placed = true;
        break;
      }
    }
    if (!placed) {
      p.bins.push_back({id});
      residual.push_back(Rational(1 - s));
    }
  }
  return p;
}

}  // namespace gcbp

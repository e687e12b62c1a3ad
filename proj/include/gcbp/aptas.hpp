#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcbp/classify.hpp"
#include "gcbp/core.hpp"
#include "gcbp/stage1.hpp"
#include "gcbp/stage2.hpp"

namespace gcbp {

struct AptasCertificate {
  Rational epsilon;
  std::string signature;  // class signature of the chosen sparse guess
  std::size_t pi = 0;
  Rational stage1_cost;
  std::optional<Rational> omega;  // unset when the chosen dense instance was empty
  Rational stage2_cost;
  Rational total_cost;
  Rational reference_cost;  // oracle value if given, else the n F(k) lower bound
  bool reference_is_oracle = false;
  Rational bound_rhs;       // (1 + 10 eps) reference + 2 + g(1/eps)
  Rational sparse_ip_objective;
  Rational milp_objective;
  Rational supplementary_cost;
  std::size_t overflow_bins = 0;
  std::size_t first_class_size = 0;
  std::uint64_t guesses_examined = 0;
  std::uint64_t sparse_ip_solves = 0;
  std::uint64_t dense_solves = 0;  // (dense instance, omega) pairs packed
  std::uint64_t milp_nodes = 0;
  bool degraded = false;           // budget ran out before the sweep finished
};

struct AptasResult {
  Packing packing;
  AptasCertificate certificate;
};

namespace detail {

struct SparseIpEntry {
  std::vector<SparseConfiguration> configs;
  SparseIpResult result;
};

struct DenseEntry {
  std::optional<Stage2Result> best;
  Rational cost;
};

/// Key for the stage-1 cache: the IP depends only on class cardinalities and
/// rounded sizes.
inline std::string sparse_ip_key(const SparseGuess& g) {
  std::string key;
  for (std::size_t c = 0; c < g.classes.size(); ++c) {
    key += std::to_string(g.class_cards[c]);
    if (g.class_cards[c] > 0) key += '@' + g.rounded_sizes[c]->get_str();
    key += ';';
  }
  return key;
}

inline std::string id_key(const std::vector<ItemId>& ids) {
  std::string key;
  for (ItemId id : ids) key += std::to_string(id) + ',';
  return key;
}

}  // namespace detail

/// Lower bound n F(k): every item pays at least the smallest per-item average.
inline Rational average_cost_lower_bound(const Instance& inst) {
  if (inst.empty()) return Rational(0);
  const auto cls = minimizer_k(inst.cost());
  return Rational(static_cast<unsigned long>(inst.size()) * cls.f_over_j[cls.k - 1]);
}

/// Sweeps every sparse guess; the sparse instance goes through the
/// configuration IP and the rest through the dense MILP for each omega. The
/// cheapest verified union wins, the first one found among equal costs. The
/// budget counts guesses plus branch-and-bound nodes; when it runs out the
/// best packing so far is returned with `degraded` set. The two corner
/// guesses (all dense, all sparse) run first and are not cut off, so there
/// is always an incumbent.
inline AptasResult aptas(const Instance& inst, const Rational& epsilon, std::uint64_t budget = kDefaultNodeBudget,
                         std::optional<Rational> reference = std::nullopt) {
  inverse_epsilon(epsilon);
  const RoundedCost rc = round_cost_function(inst.cost(), epsilon);
  const auto all_ids = inst.all_ids();

  AptasResult best;
  std::optional<Rational> best_cost;
  AptasCertificate& cert = best.certificate;
  std::uint64_t used = 0;
  std::uint64_t nodes = 0;
  std::uint64_t guesses = 0;
  std::uint64_t ip_solves = 0;
  std::uint64_t dense_solves = 0;
  bool degraded = false;

  std::map<std::string, detail::SparseIpEntry> ip_cache;
  std::map<std::string, detail::DenseEntry> dense_cache;
  bool corner = false;
  auto remaining = [&] {
    if (corner) return kDefaultNodeBudget;
    return used >= budget ? std::uint64_t{0} : budget - used;
  };

  for_each_sparse_guess(inst, epsilon, [&](const SparseGuess& guess) {
    corner = guess.pi == 0 || guess.pi == inst.size();
    if (remaining() == 0) {
      degraded = true;
      return false;
    }
    ++used;
    ++guesses;

    // stage 1
    const std::string ip_key = detail::sparse_ip_key(guess);
    auto ip_it = ip_cache.find(ip_key);
    if (ip_it == ip_cache.end()) {
      detail::SparseIpEntry entry;
      entry.configs = enumerate_sparse_configurations(guess, epsilon, inst.cost());
      entry.result = solve_sparse_ip(entry.configs, guess.class_cards, remaining());
      used += entry.result.nodes;
      nodes += entry.result.nodes;
      ++ip_solves;
      if (entry.result.status == SolveStatus::BudgetExceeded) {
        degraded = true;
        return false;
      }
      ip_it = ip_cache.emplace(ip_key, std::move(entry)).first;
    }
    const auto& ip = ip_it->second;
    if (ip.result.status != SolveStatus::Optimal) return true;
    const Packing sparse_packing = pack_sparse(guess, ip.configs, ip.result.multiplicity);

    // stage 2
    std::vector<bool> in_sparse(inst.size(), false);
    for (const auto& cls : guess.classes) {
      for (ItemId id : cls) in_sparse[static_cast<std::size_t>(id)] = true;
    }
    std::vector<ItemId> dense;
    for (ItemId id : all_ids) {
      if (!in_sparse[static_cast<std::size_t>(id)]) dense.push_back(id);
    }
    const std::string dense_key = detail::id_key(dense);
    auto dense_it = dense_cache.find(dense_key);
    if (dense_it == dense_cache.end()) {
      detail::DenseEntry entry;
      std::vector<Rational> omegas;
      if (dense.empty()) {
        omegas.push_back(Rational(0));
      } else {
        omegas = rc.levels;
      }
      for (const Rational& omega : omegas) {
        if (remaining() == 0) {
          degraded = true;
          return false;
        }
        Stage2Result r = pack_dense(inst, dense, omega, epsilon, rc, remaining());
        used += r.nodes;
        nodes += r.nodes;
        ++dense_solves;
        if (r.status == SolveStatus::BudgetExceeded) {
          degraded = true;
          return false;
        }
        if (r.status != SolveStatus::Optimal) continue;
        const auto report = verify_packing(inst, r.packing, dense);
        if (!report.ok()) throw Error(ErrorKind::InternalInfeasible, "dense packing failed verification: " + report.describe());
        const Rational cost = packing_cost(inst, r.packing);
        if (!entry.best || cost < entry.cost) {
          entry.cost = cost;
          entry.best = std::move(r);
        }
      }
      dense_it = dense_cache.emplace(dense_key, std::move(entry)).first;
    }
    const auto& dense_entry = dense_it->second;
    if (!dense_entry.best) return true;

    Packing combined = sparse_packing;
    for (const auto& bin : dense_entry.best->packing.bins) combined.bins.push_back(bin);
    const auto report = verify_packing(inst, combined);
    if (!report.ok()) throw Error(ErrorKind::InternalInfeasible, "combined packing failed verification: " + report.describe());
    const Rational stage1_cost = packing_cost(inst, sparse_packing);
    const Rational total = stage1_cost + dense_entry.cost;
    if (best_cost && total >= *best_cost) return true;

    best_cost = total;
    best.packing = std::move(combined);
    const Stage2Result& s2 = *dense_entry.best;
    cert.signature = guess.signature();
    cert.pi = guess.pi;
    cert.stage1_cost = stage1_cost;
    cert.sparse_ip_objective = ip.result.cost;
    cert.omega = dense.empty() ? std::nullopt : std::optional<Rational>(s2.omega);
    cert.stage2_cost = dense_entry.cost;
    cert.total_cost = total;
    cert.milp_objective = s2.milp_objective;
    cert.supplementary_cost = s2.supplementary_cost;
    cert.overflow_bins = s2.overflow_bins;
    cert.first_class_size = s2.first_class_size;
    return true;
  });

  if (!best_cost) {
    throw Error(degraded ? ErrorKind::BudgetExceeded : ErrorKind::InternalInfeasible,
                "no feasible packing found by any guess");
  }
  cert.epsilon = epsilon;
  cert.reference_is_oracle = reference.has_value();
  cert.reference_cost = reference ? *reference : average_cost_lower_bound(inst);
  const auto inv = static_cast<std::size_t>(inverse_epsilon(epsilon));
  cert.bound_rhs = (1 + 10 * epsilon) * cert.reference_cost + 2 + rc.at(inv);
  cert.guesses_examined = guesses;
  cert.sparse_ip_solves = ip_solves;
  cert.dense_solves = dense_solves;
  cert.milp_nodes = nodes;
  cert.degraded = degraded;
  return best;
}

}  // namespace gcbp

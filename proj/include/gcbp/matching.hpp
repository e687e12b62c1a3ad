#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gcbp/core.hpp"

namespace gcbp {

struct MatchingEdge {
  ItemId u = 0;
  ItemId v = 0;
  Rational weight;
};

/// Compatibility graph over items: an edge joins two items whose sizes sum to
/// at most 1, weighted by that sum.
struct MatchingGraph {
  std::vector<ItemId> node_ids;
  std::vector<MatchingEdge> edges;
};

struct Matching {
  std::vector<std::pair<ItemId, ItemId>> edges;
  Rational weight;
};

inline MatchingGraph build_matching_graph(const Instance& inst, std::span<const ItemId> nodes) {
  MatchingGraph g;
  g.node_ids.assign(nodes.begin(), nodes.end());
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      Rational w = inst.size_of(nodes[a]) + inst.size_of(nodes[b]);
      if (w <= 1) g.edges.push_back(MatchingEdge{nodes[a], nodes[b], std::move(w)});
    }
  }
  return g;
}

/// Largest DP the exact matcher accepts.
inline constexpr std::size_t kMaxMatchingNodes = 22;

namespace detail {

class ExactSizeMatcher {
 public:
  explicit ExactSizeMatcher(const MatchingGraph& g) : graph_(g), n_(g.node_ids.size()) {
    if (n_ > kMaxMatchingNodes) {
      throw Error(ErrorKind::TooLarge, "matching DP limited to " + std::to_string(kMaxMatchingNodes) + " nodes");
    }
    adjacency_.assign(n_ * n_, -1);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const int a = local(g.edges[e].u);
      const int b = local(g.edges[e].v);
      if (a < 0 || b < 0 || a == b) throw Error(ErrorKind::InvalidArgument, "edge endpoint not a graph node");
      // parallel edges: keep the heavier
      auto& slot = adjacency_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
      if (slot < 0 || g.edges[static_cast<std::size_t>(slot)].weight < g.edges[e].weight) {
        slot = static_cast<int>(e);
        adjacency_[static_cast<std::size_t>(b) * n_ + static_cast<std::size_t>(a)] = static_cast<int>(e);
      }
    }
  }

  std::optional<Matching> solve(std::size_t m) {
    const std::uint32_t full = n_ == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << n_) - 1);
    const auto best = value(full, m);
    if (!best) return std::nullopt;
    Matching out;
    out.weight = *best;
    std::uint32_t mask = full;
    std::size_t left = m;
    while (left > 0) {
      const int i = std::countr_zero(mask);
      const std::uint32_t rest = mask & ~(1u << i);
      const auto skip = value(rest, left);
      const Rational target = *value(mask, left);
      if (skip && *skip == target) {
        mask = rest;
        continue;
      }
      for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1) {
        const int j = std::countr_zero(bits);
        const int e = edge(i, j);
        if (e < 0) continue;
        const auto sub = value(rest & ~(1u << j), left - 1);
        if (sub && *sub + graph_.edges[static_cast<std::size_t>(e)].weight == target) {
          out.edges.emplace_back(graph_.node_ids[static_cast<std::size_t>(i)],
                                 graph_.node_ids[static_cast<std::size_t>(j)]);
          mask = rest & ~(1u << j);
          --left;
          break;
        }
      }
    }
    return out;
  }

 private:
  int local(ItemId id) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (graph_.node_ids[i] == id) return static_cast<int>(i);
    }
    return -1;
  }

  int edge(int a, int b) const { return adjacency_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)]; }

  // Maximum weight of an m-edge matching inside `mask`, decided on the lowest
  // node first: either it stays unmatched or it pairs with a neighbour.
  std::optional<Rational> value(std::uint32_t mask, std::size_t m) {
    if (m == 0) return Rational(0);
    if (static_cast<std::size_t>(std::popcount(mask)) < 2 * m) return std::nullopt;
    const std::uint64_t key = (static_cast<std::uint64_t>(mask) << 6) | m;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << i);
    std::optional<Rational> best = value(rest, m);
    for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1) {
      const int j = std::countr_zero(bits);
      const int e = edge(i, j);
      if (e < 0) continue;
      auto sub = value(rest & ~(1u << j), m - 1);
      if (!sub) continue;
      Rational candidate = *sub + graph_.edges[static_cast<std::size_t>(e)].weight;
      if (!best || candidate > *best) best = std::move(candidate);
    }
    memo_.emplace(key, best);
    return best;
  }

  const MatchingGraph& graph_;
  std::size_t n_;
  std::vector<int> adjacency_;
  std::unordered_map<std::uint64_t, std::optional<Rational>> memo_;
};

}  // namespace detail

/// Maximum-weight matching with exactly `m` edges, or nullopt when no
/// matching of that size exists. Exact DP over node subsets.
inline std::optional<Matching> max_weight_matching_exact_size(const MatchingGraph& g, std::size_t m) {
  detail::ExactSizeMatcher matcher(g);
  return matcher.solve(m);
}

}  // namespace gcbp

#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcbp/core.hpp"
#include "gcbp/milp.hpp"

namespace gcbp {

/// A breakpoint names the largest item of its group: size plus id.
struct Breakpoint {
  Rational size;
  ItemId item = 0;
};

/// Component i (0-based) holds the breakpoint of group i; group 0 is the
/// auxiliary group whose items always go to the dense instance.
using BreakpointGuess = std::vector<std::optional<Breakpoint>>;

/// One enumeration point of the first stage: breakpoints, sparse cardinality
/// and the classes they induce.
struct SparseGuess {
  BreakpointGuess theta;
  std::size_t pi = 0;
  std::vector<std::size_t> class_cards;           // one per class, non-increasing
  std::vector<std::vector<ItemId>> classes;       // largest class_cards[i] items of group i
  std::vector<std::optional<Rational>> rounded_sizes;  // size of the group's breakpoint

  /// Items of all classes, i.e. the sparse instance.
  std::vector<ItemId> sparse_items() const {
    std::vector<ItemId> out;
    for (const auto& c : classes) out.insert(out.end(), c.begin(), c.end());
    return out;
  }

  /// Identifies the induced sparse instance: class members and the rounded
  /// size of every non-empty class.
  std::string signature() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (classes[i].empty()) continue;
      out << i << ':' << *rounded_sizes[i] << '[';
      for (ItemId id : classes[i]) out << id << ',';
      out << ']';
    }
    return out.str();
  }
};

struct SparseConfiguration {
  std::vector<std::size_t> counts;  // items per class
  std::size_t cardinality = 0;
  Rational cost;                    // f(cardinality)
};

struct SparseIpResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<Integer> multiplicity;  // y_c per configuration
  Rational cost;
  std::uint64_t nodes = 0;
};

/// Number of classes, 1/eps^3.
inline std::size_t num_sparse_classes(const Rational& epsilon) {
  const auto inv = static_cast<std::size_t>(inverse_epsilon(epsilon));
  return inv * inv * inv;
}

/// Largest sparse bin, 1/eps^2.
inline std::size_t sparse_cardinality_cap(const Rational& epsilon) {
  const auto inv = static_cast<std::size_t>(inverse_epsilon(epsilon));
  return inv * inv;
}

/// Class cardinalities for Pi sparse items: ceil(eps^3 Pi) on the lowest
/// classes, floor(eps^3 Pi) on the rest.
inline std::vector<std::size_t> sparse_class_cards(std::size_t pi, std::size_t num_classes) {
  const std::size_t base = pi / num_classes;
  const std::size_t ceilings = pi - base * num_classes;
  std::vector<std::size_t> cards(num_classes, base);
  for (std::size_t i = 0; i < ceilings; ++i) ++cards[i];
  return cards;
}

/// Groups the items by the breakpoints and takes the largest items of each
/// group as its class. Returns nullopt when a group is too small for its
/// class cardinality.
inline std::optional<SparseGuess> build_classes(const Instance& inst, const BreakpointGuess& theta, std::size_t pi,
                                                const Rational& epsilon) {
  const std::size_t num_classes = num_sparse_classes(epsilon);
  if (theta.size() != num_classes + 1) {
    throw Error(ErrorKind::InvalidArgument, "breakpoint guess needs " + std::to_string(num_classes + 1) + " components");
  }
  if (pi > inst.size()) throw Error(ErrorKind::InvalidArgument, "sparse cardinality exceeds n");

  const auto order = sorted_by_size_desc(inst, inst.all_ids());
  std::vector<std::size_t> position(inst.size());
  for (std::size_t p = 0; p < order.size(); ++p) position[static_cast<std::size_t>(order[p])] = p;

  std::vector<std::optional<std::size_t>> start(theta.size());
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!theta[i]) continue;
    const ItemId id = theta[i]->item;
    if (id < 0 || static_cast<std::size_t>(id) >= inst.size() || inst.size_of(id) != theta[i]->size) {
      throw Error(ErrorKind::InvalidArgument, "breakpoint does not name an item of the instance");
    }
    start[i] = position[static_cast<std::size_t>(id)];
    if (last && *start[i] < *last) throw Error(ErrorKind::InvalidArgument, "breakpoints must be non-increasing");
    last = start[i];
  }

  SparseGuess guess;
  guess.theta = theta;
  guess.pi = pi;
  guess.class_cards = sparse_class_cards(pi, num_classes);
  guess.classes.assign(num_classes, {});
  guess.rounded_sizes.assign(num_classes, std::nullopt);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const std::size_t component = c + 1;
    if (theta[component]) guess.rounded_sizes[c] = theta[component]->size;
    const std::size_t want = guess.class_cards[c];
    if (want == 0) continue;
    if (!start[component]) return std::nullopt;
    std::size_t end = inst.size();
    for (std::size_t j = component + 1; j < theta.size(); ++j) {
      if (start[j]) {
        end = *start[j];
        break;
      }
    }
    if (end - *start[component] < want) return std::nullopt;
    guess.classes[c].assign(order.begin() + static_cast<std::ptrdiff_t>(*start[component]),
                            order.begin() + static_cast<std::ptrdiff_t>(*start[component] + want));
  }
  return guess;
}

/// Visits one guess per distinct induced sparse instance. Only class starts
/// matter for the classes and their rounded sizes, and a start vector is
/// realizable iff consecutive starts leave room for each class. Each
/// realizable vector is emitted with a canonical breakpoint guess. Order:
/// Pi = 0, Pi = n, then Pi = 1..n-1; starts in lexicographic order.
inline void for_each_sparse_guess(const Instance& inst, const Rational& epsilon,
                                  const std::function<bool(const SparseGuess&)>& visit) {
  const std::size_t num_classes = num_sparse_classes(epsilon);
  const std::size_t n = inst.size();
  const auto order = sorted_by_size_desc(inst, inst.all_ids());

  std::vector<std::size_t> pis{0};
  if (n > 0) pis.push_back(n);
  for (std::size_t pi = 1; pi < n; ++pi) pis.push_back(pi);

  for (std::size_t pi : pis) {
    const auto cards = sparse_class_cards(pi, num_classes);
    std::size_t used = 0;
    while (used < num_classes && cards[used] > 0) ++used;
    std::vector<std::size_t> suffix(used + 1, 0);  // items the classes from i on need
    for (std::size_t i = used; i-- > 0;) suffix[i] = suffix[i + 1] + cards[i];

    std::vector<std::size_t> starts(used);
    bool stop = false;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t lowest) {
      if (stop) return;
      if (c == used) {
        BreakpointGuess theta(num_classes + 1);
        if (n > 0 && (used == 0 || starts[0] > 0)) theta[0] = Breakpoint{inst.size_of(order[0]), order[0]};
        for (std::size_t i = 0; i < used; ++i) {
          const ItemId id = order[starts[i]];
          theta[i + 1] = Breakpoint{inst.size_of(id), id};
        }
        auto guess = build_classes(inst, theta, pi, epsilon);
        if (!guess) throw Error(ErrorKind::InternalInfeasible, "canonical breakpoint guess is not realizable");
        if (!visit(*guess)) stop = true;
        return;
      }
      for (std::size_t s = lowest; s + suffix[c] <= n && !stop; ++s) {
        starts[c] = s;
        rec(c + 1, s + cards[c]);
      }
    };
    rec(0, 0);
    if (stop) return;
  }
}

inline std::vector<SparseGuess> enumerate_sparse_guesses(const Instance& inst, const Rational& epsilon) {
  std::vector<SparseGuess> out;
  for_each_sparse_guess(inst, epsilon, [&](const SparseGuess& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

/// The guess built from a reference packing: Pi counts the items of its
/// sparse bins and class i starts at the (tau_i + 1)-th largest of those
/// items, where tau_i = Pi_1 + ... + Pi_{i-1}.
inline SparseGuess guess_from_packing(const Instance& inst, const Packing& reference, const Rational& epsilon) {
  const std::size_t num_classes = num_sparse_classes(epsilon);
  std::vector<ItemId> sparse;
  for (const auto& bin : reference.bins) {
    if (!bin.empty() && bin_density_class(bin.size(), epsilon) == Density::Sparse) {
      sparse.insert(sparse.end(), bin.begin(), bin.end());
    }
  }
  const auto ranked = sorted_by_size_desc(inst, sparse);
  const auto cards = sparse_class_cards(ranked.size(), num_classes);
  const auto order = sorted_by_size_desc(inst, inst.all_ids());

  BreakpointGuess theta(num_classes + 1);
  std::size_t tau = 0;
  for (std::size_t c = 0; c < num_classes && cards[c] > 0; ++c) {
    const ItemId id = ranked[tau];
    theta[c + 1] = Breakpoint{inst.size_of(id), id};
    tau += cards[c];
  }
  if (!order.empty() && (ranked.empty() || order[0] != ranked[0])) {
    theta[0] = Breakpoint{inst.size_of(order[0]), order[0]};
  }
  auto guess = build_classes(inst, theta, ranked.size(), epsilon);
  if (!guess) throw Error(ErrorKind::InternalInfeasible, "reference packing does not induce a realizable guess");
  return *guess;
}

/// Every count vector over the non-empty classes with 1..1/eps^2 items whose
/// rounded sizes fit in one bin.
inline std::vector<SparseConfiguration> enumerate_sparse_configurations(const SparseGuess& guess,
                                                                        const Rational& epsilon,
                                                                        const CostFunction& f) {
  const std::size_t cap = sparse_cardinality_cap(epsilon);
  const std::size_t k = guess.classes.size();
  std::vector<SparseConfiguration> out;
  std::vector<std::size_t> counts(k, 0);
  std::function<void(std::size_t, std::size_t, const Rational&)> rec = [&](std::size_t c, std::size_t items,
                                                                           const Rational& load) {
    if (c == k) {
      if (items == 0) return;
      SparseConfiguration config;
      config.counts = counts;
      config.cardinality = items;
      config.cost = items <= f.max_cardinality() ? f(items) : f(f.max_cardinality());
      out.push_back(std::move(config));
      return;
    }
    if (guess.classes[c].empty()) {
      rec(c + 1, items, load);
      return;
    }
    const Rational& size = *guess.rounded_sizes[c];
    Rational next = load;
    for (std::size_t x = 0; items + x <= cap && next <= 1; ++x) {
      counts[c] = x;
      rec(c + 1, items + x, next);
      next += size;
    }
    counts[c] = 0;
  };
  rec(0, 0, Rational(0));
  return out;
}

/// min sum f(c) y_c  s.t.  sum_c c_i y_c = Pi_i for every class, y integral.
/// Columns with c_i > Pi_i are dropped first since the equalities force them
/// to zero.
inline SparseIpResult solve_sparse_ip(const std::vector<SparseConfiguration>& configs,
                                      const std::vector<std::size_t>& class_cards,
                                      std::uint64_t node_budget = kDefaultNodeBudget) {
  SparseIpResult out;
  out.multiplicity.assign(configs.size(), Integer(0));
  std::size_t total = 0;
  for (std::size_t c : class_cards) total += c;
  if (total == 0) {
    out.status = SolveStatus::Optimal;
    out.cost = 0;
    return out;
  }

  std::vector<std::size_t> columns;
  for (std::size_t j = 0; j < configs.size(); ++j) {
    bool fits = true;
    for (std::size_t i = 0; i < class_cards.size() && fits; ++i) fits = configs[j].counts[i] <= class_cards[i];
    if (fits) columns.push_back(j);
  }

  MilpModel ip;
  ip.base = LpModel(columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    ip.base.objective[k] = configs[columns[k]].cost;
    ip.integer_vars.push_back(k);
  }
  for (std::size_t i = 0; i < class_cards.size(); ++i) {
    if (class_cards[i] == 0) continue;
    auto& row = ip.base.add_row(Relation::Equal, Rational(static_cast<unsigned long>(class_cards[i])));
    for (std::size_t k = 0; k < columns.size(); ++k) {
      row.coeffs[k] = static_cast<unsigned long>(configs[columns[k]].counts[i]);
    }
  }
  const MilpSolution sol = solve_ip(ip, node_budget);
  out.status = sol.status;
  out.nodes = sol.nodes;
  if (sol.status != SolveStatus::Optimal) return out;
  for (std::size_t k = 0; k < columns.size(); ++k) out.multiplicity[columns[k]] = sol.values[k].get_num();
  out.cost = sol.objective_value;
  return out;
}

/// Opens y_c bins per configuration and fills each with c_i items of class i.
inline Packing pack_sparse(const SparseGuess& guess, const std::vector<SparseConfiguration>& configs,
                           const std::vector<Integer>& multiplicity) {
  Packing p;
  std::vector<std::size_t> next(guess.classes.size(), 0);
  for (std::size_t j = 0; j < configs.size(); ++j) {
    for (Integer copy = 0; copy < multiplicity[j]; ++copy) {
      std::vector<ItemId> bin;
      for (std::size_t i = 0; i < guess.classes.size(); ++i) {
        for (std::size_t x = 0; x < configs[j].counts[i]; ++x) {
          if (next[i] >= guess.classes[i].size()) {
            throw Error(ErrorKind::InternalInfeasible, "configuration multiplicities exceed class " + std::to_string(i + 1));
          }
          bin.push_back(guess.classes[i][next[i]++]);
        }
      }
      p.bins.push_back(std::move(bin));
    }
  }
  for (std::size_t i = 0; i < guess.classes.size(); ++i) {
    if (next[i] != guess.classes[i].size()) {
      throw Error(ErrorKind::InternalInfeasible, "class " + std::to_string(i + 1) + " not fully packed");
    }
  }
  return p;
}

}  // namespace gcbp

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gcbp/classify.hpp"
#include "gcbp/io.hpp"

namespace gcbp {

/// Deterministic draws from mt19937_64. Bounded draws use rejection sampling
/// directly so the stream does not depend on the standard library's
/// distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorKind::InvalidArgument, "empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline long positive_parameter(const std::string& text, const std::string& model) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::BadModel, "model '" + model + "' needs a positive integer, got '" + text + "'");
}

}  // namespace detail

/// Size models: "uniform:D" draws k/D with k in 1..D; "discrete:a,b,..."
/// draws uniformly from the listed sizes.
inline std::vector<Rational> generate_sizes(std::size_t n, const std::string& model, SeededRng& rng) {
  const auto parts = detail::split(model, ':');
  std::vector<Rational> sizes;
  if (parts[0] == "uniform" && parts.size() == 2) {
    const long den = detail::positive_parameter(parts[1], model);
    for (std::size_t i = 0; i < n; ++i) sizes.push_back(make_rational(rng.range(1, den), den));
    return sizes;
  }
  if (parts[0] == "discrete" && parts.size() == 2) {
    std::vector<Rational> choices;
    for (const auto& token : detail::split(parts[1], ',')) {
      try {
        choices.push_back(parse_rational(token));
      } catch (const Error&) {
        throw Error(ErrorKind::BadModel, "bad size '" + token + "' in model '" + model + "'");
      }
      if (choices.back() < 0 || choices.back() > 1) throw Error(ErrorKind::BadModel, "size outside [0,1]: " + token);
    }
    for (std::size_t i = 0; i < n; ++i) sizes.push_back(choices[rng.below(choices.size())]);
    return sizes;
  }
  throw Error(ErrorKind::BadModel, "unknown size model '" + model + "'");
}

/// Cost models, all with f(0)=0 and f(1)=1:
///   flat            f(j) = 1
///   linear          f(j) = j
///   concave         random non-increasing increments in {0, 1/4, ..., 1}
///   step:K[:x]      1 up to K items, x beyond (x defaults to n)
///   random-monotone random increments in {0, 1/4, ..., 2}
inline std::vector<Rational> generate_cost(std::size_t n, const std::string& model, SeededRng& rng) {
  const auto parts = detail::split(model, ':');
  std::vector<Rational> f{Rational(0)};
  if (n == 0) return f;
  if (parts[0] == "flat" && parts.size() == 1) {
    f.resize(n + 1, Rational(1));
    return f;
  }
  if (parts[0] == "linear" && parts.size() == 1) {
    for (std::size_t j = 1; j <= n; ++j) f.push_back(Rational(static_cast<unsigned long>(j)));
    return f;
  }
  if (parts[0] == "concave" && parts.size() == 1) {
    std::vector<long> steps;
    for (std::size_t j = 2; j <= n; ++j) steps.push_back(rng.range(0, 4));
    std::sort(steps.rbegin(), steps.rend());
    f.push_back(Rational(1));
    for (long s : steps) f.push_back(f.back() + make_rational(s, 4));
    return f;
  }
  if (parts[0] == "step" && (parts.size() == 2 || parts.size() == 3)) {
    const auto cap = static_cast<std::size_t>(detail::positive_parameter(parts[1], model));
    Rational penalty(static_cast<unsigned long>(n));
    if (parts.size() == 3) {
      try {
        penalty = parse_rational(parts[2]);
      } catch (const Error&) {
        throw Error(ErrorKind::BadModel, "bad penalty in model '" + model + "'");
      }
      if (penalty < 1) throw Error(ErrorKind::BadModel, "step penalty must be at least 1");
    }
    for (std::size_t j = 1; j <= n; ++j) f.push_back(j <= cap ? Rational(1) : penalty);
    return f;
  }
  if (parts[0] == "random-monotone" && parts.size() == 1) {
    f.push_back(Rational(1));
    for (std::size_t j = 2; j <= n; ++j) f.push_back(f.back() + make_rational(rng.range(0, 8), 4));
    return f;
  }
  throw Error(ErrorKind::BadModel, "unknown cost model '" + model + "'");
}

inline InstanceFile generate_random_instance(std::size_t n, const std::string& size_model,
                                             const std::string& cost_model, std::uint64_t seed) {
  SeededRng rng(seed);
  InstanceFile file;
  file.sizes = generate_sizes(n, size_model, rng);
  file.cost = generate_cost(n, cost_model, rng);
  file.metadata["generator"] = "random";
  file.metadata["size_model"] = size_model;
  file.metadata["cost_model"] = cost_model;
  file.metadata["seed"] = seed;
  file.to_instance();  // validates
  return file;
}

struct ThreePartitionInput {
  std::vector<long> integers;
  long bound = 0;
  std::size_t k = 3;
};

inline void validate_three_partition(const ThreePartitionInput& tp) {
  const auto bad = [](const std::string& why) { throw Error(ErrorKind::InvalidThreePartition, why); };
  if (tp.integers.empty() || tp.integers.size() % 3 != 0) bad("need 3m integers with m >= 1");
  if (tp.bound <= 0) bad("bound must be positive");
  if (tp.k < 3) bad("target cardinality k must be at least 3");
  long sum = 0;
  for (long a : tp.integers) {
    if (4 * a <= tp.bound || 2 * a >= tp.bound) {
      bad(std::to_string(a) + " is not strictly between " + std::to_string(tp.bound) + "/4 and " +
          std::to_string(tp.bound) + "/2");
    }
    sum += a;
  }
  const long m = static_cast<long>(tp.integers.size() / 3);
  if (sum != m * tp.bound) bad("integers sum to " + std::to_string(sum) + ", expected m*bound = " + std::to_string(m * tp.bound));
}

struct Reduction {
  InstanceFile file;
  Rational threshold;  // m f(k), on the file's cost scale
};

/// Items a_i / bound plus m(k-3) zero-size items; f(j) = j below k and
/// j (1 - 1/(2k)) from k on, so F has its first minimum at k. A packing costs
/// at most m f(k) iff the integers split into m triples of sum `bound`.
inline Reduction reduce_3partition(const ThreePartitionInput& tp) {
  validate_three_partition(tp);
  const std::size_t m = tp.integers.size() / 3;
  const std::size_t k = tp.k;
  Reduction out;
  for (long a : tp.integers) out.file.sizes.push_back(make_rational(a, tp.bound));
  out.file.sizes.resize(out.file.sizes.size() + m * (k - 3), Rational(0));
  const std::size_t n = out.file.sizes.size();
  const Rational discount = 1 - make_rational(1, static_cast<long>(2 * k));
  out.file.cost.push_back(Rational(0));
  for (std::size_t j = 1; j <= n; ++j) {
    const Rational jj(static_cast<unsigned long>(j));
    out.file.cost.push_back(j < k ? jj : Rational(jj * discount));
  }
  out.threshold = Rational(static_cast<unsigned long>(m)) * out.file.cost[k];

  const auto cls = minimizer_k(out.file.to_instance().cost());
  if (cls.k != k) throw Error(ErrorKind::InternalInfeasible, "reduction cost does not have its minimizer at k");
  out.file.metadata["generator"] = "reduce-3partition";
  out.file.metadata["m"] = m;
  out.file.metadata["k"] = k;
  out.file.metadata["bound"] = tp.bound;
  out.file.metadata["cost_template"] = "f(j)=j for j<k; f(j)=j*(1-1/(2k)) for j>=k";
  out.file.metadata["minimizer_k"] = cls.k;
  out.file.metadata["threshold"] = to_string(out.threshold);
  return out;
}

}  // namespace gcbp

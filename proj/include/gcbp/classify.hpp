#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gcbp/core.hpp"

namespace gcbp {

enum class Verdict { PolyK1, PolyK2, NpHard };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PolyK1: return "PolyK1";
    case Verdict::PolyK2: return "PolyK2";
    case Verdict::NpHard: return "NpHard";
  }
  return "?";
}

struct Classification {
  std::size_t k = 1;
  std::vector<Rational> f_over_j;  // F(1..n); index 0 holds F(1)
  Verdict verdict = Verdict::PolyK1;
};

/// F(j) = f(j)/j, the per-item cost inside a bin of cardinality j.
inline Rational average_cost(const CostFunction& f, std::size_t j) {
  if (j < 1 || j > f.max_cardinality()) {
    throw Error(ErrorKind::IndexOutOfRange, "average cost needs 1 <= j <= " + std::to_string(f.max_cardinality()));
  }
  return Rational(f(j) / static_cast<unsigned long>(j));
}

/// Smallest minimizer k of F over [1, n]. With n = 0 the table has no F
/// values and the instance is trivially PolyK1.
inline Classification minimizer_k(const CostFunction& f) {
  Classification out;
  const std::size_t n = f.max_cardinality();
  for (std::size_t j = 1; j <= n; ++j) {
    out.f_over_j.push_back(average_cost(f, j));
    if (out.f_over_j.back() < out.f_over_j[out.k - 1]) out.k = j;
  }
  out.verdict = out.k == 1 ? Verdict::PolyK1 : out.k == 2 ? Verdict::PolyK2 : Verdict::NpHard;
  return out;
}

}  // namespace gcbp

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "gcbp/error.hpp"

namespace gcbp {

// gmpxx arithmetic returns expression templates; always bind results to a
// named Rational, never to `auto`.
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

inline Integer parse_integer(std::string_view s) {
  std::string text(s[0] == '+' ? s.substr(1) : s);
  return Integer(text, 10);
}

}  // namespace detail

/// Parses "p/q" or "p" into a canonical rational. Rejects zero denominators,
/// embedded whitespace and anything that is not a plain decimal integer.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) || den[0] == '-' ||
      den[0] == '+') {
    throw Error(ErrorKind::ParseError, "malformed rational '" + std::string(text) + "'");
  }
  Integer d = detail::parse_integer(den);
  if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  Rational r(detail::parse_integer(num), d);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline Integer floor(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline Integer ceil(const Rational& r) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational out(1);
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// Integer value of r; throws if r is fractional or does not fit in int64.
inline std::int64_t to_int64(const Rational& r) {
  if (!is_integral(r) || !r.get_num().fits_slong_p()) {
    throw Error(ErrorKind::InvalidArgument, "not a machine integer: " + to_string(r));
  }
  return r.get_num().get_si();
}

/// 1/epsilon as an integer. Valid epsilons are 1, 1/2, 1/3, ...
inline int inverse_epsilon(const Rational& epsilon) {
  if (epsilon <= 0 || epsilon > 1 || epsilon.get_num() != 1 || !epsilon.get_den().fits_sint_p()) {
    throw Error(ErrorKind::BadEpsilon, "1/epsilon must be a positive integer, got epsilon=" + to_string(epsilon));
  }
  return static_cast<int>(epsilon.get_den().get_si());
}

}  // namespace gcbp

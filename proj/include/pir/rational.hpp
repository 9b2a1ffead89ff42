#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "pir/errors.hpp"

namespace pir {

using Int = boost::multiprecision::cpp_int;

// Exact rational arithmetic. Values are kept in lowest terms with a positive
// denominator by the backend; no floating point anywhere on paths that feed
// LP optima or capacities.
using Rational = boost::multiprecision::cpp_rational;

inline Int num(const Rational& r) { return numerator(r); }
inline Int den(const Rational& r) { return denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

/// r^e with the convention 0^0 = 1.
Rational pow_rational(const Rational& r, unsigned e);

/// "8/3", or just "2" when the denominator is 1.
std::string to_fraction(const Rational& r);

/// Parses "8/3", "-5", "0". Throws Errc::parse_error on malformed input.
Rational parse_fraction(const std::string& s);

/// Decimal rendering, rounded half away from zero. The rational form stays
/// authoritative; this is for human-readable output only.
std::string to_decimal(const Rational& r, int places);

std::string format_vector(const std::vector<Rational>& v);

/// Least common multiple of the denominators (all entries in lowest terms).
Int lcm_of_denominators(const std::vector<Rational>& v);

/// Fits-in-check conversion for quantities that must be machine integers.
long long to_int64(const Int& v);

}  // namespace pir

#include "pir/rational.hpp"

#include <boost/multiprecision/integer.hpp>

#include <sstream>

namespace pir {

Rational pow_rational(const Rational& r, unsigned e) {
  Rational acc(1);
  Rational base = r;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::string to_fraction(const Rational& r) {
  std::ostringstream os;
  os << num(r);
  if (den(r) != 1) os << "/" << den(r);
  return os.str();
}

Rational parse_fraction(const std::string& s) {
  auto parse_int = [](const std::string& t) -> Int {
    if (t.empty()) throw Error(Errc::parse_error, "empty integer");
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw Error(Errc::parse_error, "bad integer '" + t + "'");
    for (; i < t.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(t[i])))
        throw Error(Errc::parse_error, "bad integer '" + t + "'");
    return Int(t);
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(s));
  Int n = parse_int(s.substr(0, slash));
  Int d = parse_int(s.substr(slash + 1));
  if (d == 0) throw Error(Errc::parse_error, "zero denominator in '" + s + "'");
  return Rational(n, d);
}

std::string to_decimal(const Rational& r, int places) {
  Int scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  Int n = num(r) * scale * 2;
  Int d = den(r);
  bool neg = n < 0;
  if (neg) n = -n;
  Int scaled = (n / d + 1) / 2;  // round half away from zero
  Int whole = scaled / scale;
  Int frac = scaled % scale;
  std::ostringstream os;
  if (neg && (whole != 0 || frac != 0)) os << '-';
  os << whole;
  if (places > 0) {
    std::string f = frac.str();
    os << '.' << std::string(static_cast<size_t>(places) - f.size(), '0') << f;
  }
  return os.str();
}

std::string format_vector(const std::vector<Rational>& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << to_fraction(v[i]);
  os << ")";
  return os.str();
}

Int lcm_of_denominators(const std::vector<Rational>& v) {
  Int l = 1;
  for (const auto& r : v) l = boost::multiprecision::lcm(l, den(r));
  return l;
}

long long to_int64(const Int& v) {
  if (v > Int(INT64_MAX) || v < Int(INT64_MIN))
    throw Error(Errc::too_large, "value does not fit in 64 bits: " + v.str());
  return static_cast<long long>(v);
}

}  // namespace pir

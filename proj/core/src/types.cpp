#include "bratteli/types.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <iomanip>
#include <sstream>

namespace bratteli {

Int int_pow(const Int& base, unsigned exp) {
  Int result = 1;
  Int b = base;
  while (exp > 0) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1u;
  }
  return result;
}

Rat rat_pow(const Rat& base, long exp) {
  if (exp == 0) return Rat(1);
  if (exp < 0) {
    if (base == 0) throw Error("rat_pow: zero base with negative exponent");
    Rat inv(boost::multiprecision::denominator(base), boost::multiprecision::numerator(base));
    return rat_pow(inv, -exp);
  }
  Int num = int_pow(boost::multiprecision::numerator(base), static_cast<unsigned>(exp));
  Int den = int_pow(boost::multiprecision::denominator(base), static_cast<unsigned>(exp));
  return Rat(num, den);
}

std::string to_fraction(const Rat& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

Rat parse_fraction(std::string_view s) {
  if (s.empty()) throw Error("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash != std::string_view::npos) {
      Int num(std::string(s.substr(0, slash)));
      Int den(std::string(s.substr(slash + 1)));
      if (den == 0) throw Error("zero denominator in '" + std::string(s) + "'");
      return Rat(num, den);
    }
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) return Rat(Int(std::string(s)));
    // Decimal literal: shift the point out.
    std::string digits(s.substr(0, dot));
    std::string frac(s.substr(dot + 1));
    bool neg = !digits.empty() && digits[0] == '-';
    Int num(digits.empty() || digits == "-" ? std::string("0") : digits);
    Int den = 1;
    for (char c : frac) {
      if (c < '0' || c > '9') throw Error("bad decimal literal '" + std::string(s) + "'");
      num = num * 10 + (neg ? -(c - '0') : (c - '0'));
      den *= 10;
    }
    return Rat(num, den);
  } catch (const std::exception& e) {
    throw Error("cannot parse rational '" + std::string(s) + "': " + e.what());
  }
}

std::string to_decimal(const Rat& r, int significant_digits) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  Float f(r);
  std::ostringstream os;
  os << std::setprecision(significant_digits) << f;
  return os.str();
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << h;
  return os.str();
}

}  // namespace bratteli

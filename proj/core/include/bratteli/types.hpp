/// @file types.hpp
/// @brief Arbitrary-precision integer/rational aliases and formatting helpers.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bratteli {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Thrown for any structural or usage error in the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class LevelOutOfRange : public Error {
 public:
  explicit LevelOutOfRange(const std::string& what) : Error(what) {}
};

/// Restriction to a vertex selection produced an invalid diagram.
class RestrictionError : public Error {
 public:
  RestrictionError(const std::string& what, int level) : Error(what), level(level) {}
  int level;
};

Int int_pow(const Int& base, unsigned exp);
Rat rat_pow(const Rat& base, long exp);

/// Renders a rational as "num/den" (denominator always present, e.g. "3/2", "5/1").
std::string to_fraction(const Rat& r);

/// Parses "num/den", a plain integer, or a decimal literal, exactly.
Rat parse_fraction(std::string_view s);

/// Decimal rendering with a fixed number of significant digits. Advisory only;
/// fractions are the authoritative representation.
std::string to_decimal(const Rat& r, int significant_digits = 12);

/// FNV-1a 64-bit hash, hex-encoded. Used for input provenance stamps.
std::string fnv1a_hex(std::string_view data);

}  // namespace bratteli

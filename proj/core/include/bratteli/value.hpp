/// @file value.hpp
/// @brief Scalar that is either an exact rational or a float with a tracked
///        absolute error bound. Exactness is contagious downward: any
///        operation touching an approximate operand yields an approximate
///        result with a propagated bound.

#pragma once

#include "bratteli/types.hpp"

#include <cmath>
#include <string>

namespace bratteli {

class Value {
 public:
  Value() : exact_(true), rat_(0), approx_(0), err_(0) {}
  Value(const Rat& r) : exact_(true), rat_(r), approx_(static_cast<double>(r)), err_(0) {}
  Value(const Int& i) : Value(Rat(i)) {}
  Value(long i) : Value(Rat(i)) {}
  Value(int i) : Value(Rat(i)) {}

  static Value approx(double v, double err) {
    Value x;
    x.exact_ = false;
    x.approx_ = v;
    x.err_ = err;
    return x;
  }

  bool exact() const { return exact_; }
  const Rat& rat() const {
    if (!exact_) throw Error("Value::rat() on approximate value");
    return rat_;
  }
  double num() const { return approx_; }
  double err() const { return err_; }

  Value operator+(const Value& o) const {
    if (exact_ && o.exact_) return Value(rat_ + o.rat_);
    return approx(approx_ + o.approx_, err_ + o.err_);
  }
  Value operator-(const Value& o) const {
    if (exact_ && o.exact_) return Value(rat_ - o.rat_);
    return approx(approx_ - o.approx_, err_ + o.err_);
  }
  Value operator*(const Value& o) const {
    if (exact_ && o.exact_) return Value(rat_ * o.rat_);
    return approx(approx_ * o.approx_,
                  std::abs(approx_) * o.err_ + std::abs(o.approx_) * err_ + err_ * o.err_);
  }
  Value operator/(const Value& o) const {
    if (exact_ && o.exact_) {
      if (o.rat_ == 0) throw Error("Value: division by exact zero");
      return Value(rat_ / o.rat_);
    }
    const double d = std::abs(o.approx_);
    if (d <= o.err_) throw Error("Value: division by approximate value whose bracket contains zero");
    const double q = approx_ / o.approx_;
    const double e = (err_ + std::abs(q) * o.err_) / (d - o.err_);
    return approx(q, e);
  }

  Value& operator+=(const Value& o) { return *this = *this + o; }

  /// Comparisons use central values; for exact operands they are exact.
  bool operator<(const Value& o) const {
    if (exact_ && o.exact_) return rat_ < o.rat_;
    return approx_ < o.approx_;
  }
  bool operator>(const Value& o) const { return o < *this; }
  bool operator==(const Value& o) const {
    if (exact_ && o.exact_) return rat_ == o.rat_;
    return approx_ == o.approx_;
  }
  bool is_zero() const { return exact_ ? rat_ == 0 : approx_ == 0; }

  std::string fraction_or_empty() const { return exact_ ? to_fraction(rat_) : std::string(); }
  std::string decimal(int digits = 12) const;

 private:
  bool exact_;
  Rat rat_;
  double approx_;
  double err_;
};

inline std::string Value::decimal(int digits) const {
  if (exact_) return to_decimal(rat_, digits);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, approx_);
  return buf;
}

inline Value value_pow(const Value& base, long exp) {
  if (base.exact()) return Value(rat_pow(base.rat(), exp));
  double v = std::pow(base.num(), static_cast<double>(exp));
  double rel = base.num() != 0 ? base.err() / std::abs(base.num()) : base.err();
  return Value::approx(v, std::abs(v) * rel * static_cast<double>(std::abs(exp)));
}

}  // namespace bratteli

#pragma once

#include <iosfwd>
#include <string>

#include "rdp/integer.hpp"

namespace rdp {

// Exact rational number in lowest terms with positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int v) : num_(v), den_(1) {}
  Rational(long v) : num_(v), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(const Integer& v) : num_(v), den_(1) {}
  Rational(Integer n, Integer d);

  static Rational parse(const std::string& s);  // "p" or "p/q"

  const Integer& num() const { return num_; }
  const Integer& den() const { return den_; }
  bool is_integer() const { return den_.is_one(); }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }
  std::string str() const;
  double to_double() const { return num_.to_double() / den_.to_double(); }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  Rational operator-() const { return Rational(-num_, den_, true); }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend int cmp(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

  size_t hash() const { return num_.hash() * 1000003u ^ den_.hash(); }

 private:
  Rational(Integer n, Integer d, bool /*reduced*/) : num_(std::move(n)), den_(std::move(d)) {}
  void reduce();

  Integer num_;
  Integer den_;
};

Integer floor(const Rational& a);
Integer ceil(const Rational& a);
Rational abs(const Rational& a);
// Representative of a modulo m in [0, m).
Rational mod(const Rational& a, const Rational& m);

std::ostream& operator<<(std::ostream& os, const Rational& a);

}  // namespace rdp

template <>
struct std::hash<rdp::Rational> {
  size_t operator()(const rdp::Rational& a) const { return a.hash(); }
};

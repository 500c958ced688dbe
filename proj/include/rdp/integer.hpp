#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rdp {

// Signed integer with an int64 fast path. Values are promoted to GMP on
// overflow and demoted again whenever they fit.
class Integer {
 public:
  Integer() = default;
  Integer(int v) : small_(v) {}
  Integer(long v) : small_(v) {}
  Integer(long long v) : small_(v) {}
  explicit Integer(const mpz_class& v);
  Integer(const Integer& o);
  Integer(Integer&& o) noexcept : small_(o.small_), big_(o.big_) { o.big_ = nullptr; }
  ~Integer() { delete big_; }

  Integer& operator=(const Integer& o);
  Integer& operator=(Integer&& o) noexcept;

  static Integer parse(std::string_view s);

  bool is_small() const { return big_ == nullptr; }
  bool fits_int64() const { return big_ == nullptr; }
  int64_t to_int64() const;  // throws if it does not fit
  mpz_class to_mpz() const;
  double to_double() const;
  std::string str() const;

  int sign() const;
  bool is_zero() const { return big_ == nullptr && small_ == 0; }
  bool is_one() const { return big_ == nullptr && small_ == 1; }

  Integer& operator+=(const Integer& o);
  Integer& operator-=(const Integer& o);
  Integer& operator*=(const Integer& o);
  // Truncating division and remainder, as for built-in integers.
  Integer& operator/=(const Integer& o);
  Integer& operator%=(const Integer& o);
  Integer operator-() const;

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  friend Integer operator/(Integer a, const Integer& b) { return a /= b; }
  friend Integer operator%(Integer a, const Integer& b) { return a %= b; }

  friend int cmp(const Integer& a, const Integer& b);
  friend bool operator==(const Integer& a, const Integer& b);
  friend bool operator!=(const Integer& a, const Integer& b) { return !(a == b); }
  friend bool operator<(const Integer& a, const Integer& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Integer& a, const Integer& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Integer& a, const Integer& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Integer& a, const Integer& b) { return cmp(a, b) >= 0; }

  size_t hash() const;

 private:
  void normalize();
  void set_big(mpz_class&& v);

  int64_t small_ = 0;
  mpz_class* big_ = nullptr;
};

Integer abs(const Integer& a);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
// Floor division and the matching non-negative remainder (for b > 0).
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);
// a / b where b is known to divide a; throws otherwise.
Integer div_exact(const Integer& a, const Integer& b);
Integer pow(const Integer& a, unsigned e);

std::ostream& operator<<(std::ostream& os, const Integer& a);

}  // namespace rdp

template <>
struct std::hash<rdp::Integer> {
  size_t operator()(const rdp::Integer& a) const { return a.hash(); }
};

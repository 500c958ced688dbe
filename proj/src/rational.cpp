#include "rdp/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace rdp {

Rational::Rational(Integer n, Integer d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  reduce();
}

void Rational::reduce() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (den_.is_one()) return;
  Integer g = gcd(num_, den_);
  if (!g.is_one()) {
    num_ = div_exact(num_, g);
    den_ = div_exact(den_, g);
  }
}

Rational Rational::parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(Integer::parse(s));
  return Rational(Integer::parse(s.substr(0, slash)), Integer::parse(s.substr(slash + 1)));
}

std::string Rational::str() const {
  if (den_.is_one()) return num_.str();
  return num_.str() + "/" + den_.str();
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ *= o.den_;
  reduce();
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (den_.is_one() && o.den_.is_one()) {
    num_ -= o.num_;
    return *this;
  }
  num_ = num_ * o.den_ - o.num_ * den_;
  den_ *= o.den_;
  reduce();
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  if (!den_.is_one()) reduce();
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_.is_zero()) throw std::domain_error("division by zero");
  num_ *= o.den_;
  den_ *= o.num_;
  reduce();
  return *this;
}

int cmp(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return cmp(a.num_, b.num_);
  return cmp(a.num_ * b.den_, b.num_ * a.den_);
}

Integer floor(const Rational& a) { return floor_div(a.num(), a.den()); }
Integer ceil(const Rational& a) { return -floor_div(-a.num(), a.den()); }
Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

Rational mod(const Rational& a, const Rational& m) {
  Rational q = a / m;
  return a - Rational(floor(q)) * m;
}

std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.str(); }

}  // namespace rdp

#include "rdp/integer.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace rdp {

namespace {

mpz_class mpz_of(int64_t v) {
  mpz_class r;
  mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
  return r;
}

}  // namespace

Integer::Integer(const mpz_class& v) { set_big(mpz_class(v)); }

Integer::Integer(const Integer& o) : small_(o.small_) {
  if (o.big_) big_ = new mpz_class(*o.big_);
}

Integer& Integer::operator=(const Integer& o) {
  if (this == &o) return *this;
  if (o.big_) {
    if (big_)
      *big_ = *o.big_;
    else
      big_ = new mpz_class(*o.big_);
  } else {
    delete big_;
    big_ = nullptr;
    small_ = o.small_;
  }
  return *this;
}

Integer& Integer::operator=(Integer&& o) noexcept {
  if (this == &o) return *this;
  delete big_;
  big_ = o.big_;
  small_ = o.small_;
  o.big_ = nullptr;
  return *this;
}

void Integer::set_big(mpz_class&& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) {
    delete big_;
    big_ = nullptr;
    small_ = mpz_get_si(v.get_mpz_t());
    return;
  }
  if (big_)
    *big_ = std::move(v);
  else
    big_ = new mpz_class(std::move(v));
}

void Integer::normalize() {
  if (big_ && mpz_fits_slong_p(big_->get_mpz_t())) {
    small_ = mpz_get_si(big_->get_mpz_t());
    delete big_;
    big_ = nullptr;
  }
}

Integer Integer::parse(std::string_view s) {
  std::string t(s);
  mpz_class v;
  if (v.set_str(t, 10) != 0) throw std::invalid_argument("bad integer: " + t);
  return Integer(v);
}

int64_t Integer::to_int64() const {
  if (big_) throw std::overflow_error("Integer does not fit in int64");
  return small_;
}

mpz_class Integer::to_mpz() const { return big_ ? *big_ : mpz_of(small_); }

double Integer::to_double() const { return big_ ? big_->get_d() : static_cast<double>(small_); }

std::string Integer::str() const { return big_ ? big_->get_str() : std::to_string(small_); }

int Integer::sign() const {
  if (big_) return mpz_sgn(big_->get_mpz_t());
  return (small_ > 0) - (small_ < 0);
}

Integer& Integer::operator+=(const Integer& o) {
  if (!big_ && !o.big_) {
    int64_t r;
    if (!__builtin_add_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  set_big(to_mpz() + o.to_mpz());
  return *this;
}

Integer& Integer::operator-=(const Integer& o) {
  if (!big_ && !o.big_) {
    int64_t r;
    if (!__builtin_sub_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  set_big(to_mpz() - o.to_mpz());
  return *this;
}

Integer& Integer::operator*=(const Integer& o) {
  if (!big_ && !o.big_) {
    int64_t r;
    if (!__builtin_mul_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  set_big(to_mpz() * o.to_mpz());
  return *this;
}

Integer& Integer::operator/=(const Integer& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (!big_ && !o.big_ && !(small_ == std::numeric_limits<int64_t>::min() && o.small_ == -1)) {
    small_ /= o.small_;
    return *this;
  }
  mpz_class q;
  mpz_class a = to_mpz(), b = o.to_mpz();
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  set_big(std::move(q));
  return *this;
}

Integer& Integer::operator%=(const Integer& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (!big_ && !o.big_) {
    small_ = (o.small_ == -1) ? 0 : small_ % o.small_;
    return *this;
  }
  mpz_class r;
  mpz_class a = to_mpz(), b = o.to_mpz();
  mpz_tdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  set_big(std::move(r));
  return *this;
}

Integer Integer::operator-() const {
  if (!big_ && small_ != std::numeric_limits<int64_t>::min()) return Integer(-small_);
  Integer r;
  r.set_big(-to_mpz());
  return r;
}

int cmp(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return (a.small_ > b.small_) - (a.small_ < b.small_);
  int c = mpz_cmp(a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return (c > 0) - (c < 0);
}

bool operator==(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (!a.big_ || !b.big_) return false;  // normalized: a big value never fits int64
  return *a.big_ == *b.big_;
}

size_t Integer::hash() const {
  if (!big_) return std::hash<int64_t>()(small_);
  return std::hash<std::string>()(big_->get_str(16));
}

Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

Integer gcd(const Integer& a, const Integer& b) {
  if (a.is_small() && b.is_small()) {
    int64_t x = a.to_int64(), y = b.to_int64();
    if (x != std::numeric_limits<int64_t>::min() && y != std::numeric_limits<int64_t>::min()) {
      x = x < 0 ? -x : x;
      y = y < 0 ? -y : y;
      while (y) {
        int64_t t = x % y;
        x = y;
        y = t;
      }
      return Integer(x);
    }
  }
  mpz_class r;
  mpz_class x = a.to_mpz(), y = b.to_mpz();
  mpz_gcd(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return Integer(r);
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return abs(div_exact(a, gcd(a, b)) * b);
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  if (!r.is_zero() && ((r.sign() < 0) != (b.sign() < 0))) q -= Integer(1);
  return q;
}

Integer floor_mod(const Integer& a, const Integer& b) { return a - floor_div(a, b) * b; }

Integer div_exact(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (q * b != a) throw std::domain_error("inexact division " + a.str() + " / " + b.str());
  return q;
}

Integer pow(const Integer& a, unsigned e) {
  Integer r(1), base(a);
  while (e) {
    if (e & 1u) r *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return r;
}

std::ostream& operator<<(std::ostream& os, const Integer& a) { return os << a.str(); }

}  // namespace rdp

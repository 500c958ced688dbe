#include "rdp/matrix.hpp"

#include <sstream>

namespace rdp {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

RatVector to_rational(const IntVector& v) {
  RatVector r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x);
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_integer()) throw std::domain_error("to_integer: non-integral entry " + m(i, j).str());
      r(i, j) = m(i, j).num();
    }
  return r;
}

IntVector to_integer(const RatVector& v) {
  IntVector r;
  r.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_integer()) throw std::domain_error("to_integer: non-integral entry " + x.str());
    r.push_back(x.num());
  }
  return r;
}

bool is_integral(const RatMatrix& m) {
  for (const auto& x : m.data())
    if (!x.is_integer()) return false;
  return true;
}

bool is_integral(const RatVector& v) {
  for (const auto& x : v)
    if (!x.is_integer()) return false;
  return true;
}

RatMatrix inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  size_t n = m.rows();
  RatMatrix a = m, inv = RatMatrix::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) throw std::domain_error("inverse: singular matrix");
    a.swap_rows(p, c);
    inv.swap_rows(p, c);
    Rational piv = a(c, c);
    for (size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      Rational f = a(i, c);
      for (size_t j = 0; j < n; ++j) {
        if (!a(c, j).is_zero()) a(i, j) -= f * a(c, j);
        if (!inv(c, j).is_zero()) inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

Rational determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  size_t n = m.rows();
  RatMatrix a = m;
  Rational det(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      a.swap_rows(p, c);
      det = -det;
    }
    det *= a(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      Rational f = a(i, c) / a(c, c);
      for (size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

Integer determinant(const IntMatrix& m) {
  // Bareiss fraction-free elimination.
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  size_t n = m.rows();
  if (n == 0) return Integer(1);
  IntMatrix a = m;
  Integer prev(1);
  int sgn = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      size_t p = k + 1;
      while (p < n && a(p, k).is_zero()) ++p;
      if (p == n) return Integer(0);
      a.swap_rows(p, k);
      sgn = -sgn;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a(i, j) = div_exact(a(i, j) * a(k, k) - a(i, k) * a(k, j), prev);
    prev = a(k, k);
  }
  return sgn > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

size_t rank(const RatMatrix& m) {
  RatMatrix a = m;
  size_t r = 0;
  for (size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    size_t p = r;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    for (size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c).is_zero()) continue;
      Rational f = a(i, c) / a(r, c);
      for (size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

IntMatrix inverse_unimodular(const IntMatrix& m) { return to_integer(inverse(to_rational(m))); }

IntMatrix int_matrix(const std::vector<std::vector<long long>>& rows) {
  IntMatrix m;
  for (const auto& r : rows) {
    IntVector v(r.begin(), r.end());
    m.append_row(v);
  }
  return m;
}

IntVector int_vector(const std::vector<long long>& v) { return IntVector(v.begin(), v.end()); }

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string to_string(const IntVector& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

std::string to_string(const RatVector& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace rdp

#include "rdp/lattice.hpp"

#include <numeric>
#include <stdexcept>
#include <tuple>

namespace rdp {

Lattice::Lattice(IntMatrix g) : gram(std::move(g)) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("Gram matrix must be square");
  for (size_t i = 0; i < gram.rows(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (gram(i, j) != gram(j, i)) throw std::invalid_argument("Gram matrix must be symmetric");
}

Integer Lattice::inner(const IntVector& x, const IntVector& y) const { return dot(x * gram, y); }

Rational Lattice::inner(const RatVector& x, const RatVector& y) const {
  Rational s(0);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    Rational t(0);
    for (size_t j = 0; j < y.size(); ++j)
      if (!y[j].is_zero() && !gram(i, j).is_zero()) t += Rational(gram(i, j)) * y[j];
    s += x[i] * t;
  }
  return s;
}

bool Lattice::is_even() const {
  for (size_t i = 0; i < rank(); ++i)
    if (!floor_mod(gram(i, i), Integer(2)).is_zero()) return false;
  return true;
}

Integer Lattice::det() const { return determinant(gram); }

IntVector Lattice::pairing_row(const IntVector& x) const { return x * gram; }

RatVector Lattice::pairing_row(const RatVector& x) const { return x * to_rational(gram); }

Signature signature(const IntMatrix& gram) {
  size_t n = gram.rows();
  IntMatrix a = gram;
  Signature s;
  int flip = 1;  // the trailing block equals flip * (true block) up to a positive factor
  std::vector<size_t> live;
  for (size_t i = 0; i < n; ++i) live.push_back(i);
  while (!live.empty()) {
    // choose a pivot with nonzero diagonal, or create one by a congruence
    size_t k = live.size();
    for (size_t t = 0; t < live.size(); ++t)
      if (!a(live[t], live[t]).is_zero()) {
        k = t;
        break;
      }
    if (k == live.size()) {
      size_t pi = n, pj = n;
      for (size_t t = 0; t < live.size() && pi == n; ++t)
        for (size_t u = t + 1; u < live.size(); ++u)
          if (!a(live[t], live[u]).is_zero()) {
            pi = live[t];
            pj = live[u];
            break;
          }
      if (pi == n) {
        s.zero += static_cast<int>(live.size());
        break;
      }
      // e_pi <- e_pi + e_pj gives a(pi,pi) = 2 a(pi,pj) != 0
      for (size_t c : live) a(pi, c) += a(pj, c);
      for (size_t r : live) a(r, pi) += a(r, pj);
      for (size_t t = 0; t < live.size(); ++t)
        if (live[t] == pi) k = t;
    }
    size_t p = live[k];
    Integer piv = a(p, p);
    int ps = piv.sign() * flip;
    if (ps > 0)
      ++s.pos;
    else
      ++s.neg;
    live.erase(live.begin() + static_cast<long>(k));
    // trailing block T = piv * a - a_p a_p^T equals piv times the Schur complement
    Integer content(0);
    for (size_t i : live)
      for (size_t j : live) {
        a(i, j) = piv * a(i, j) - a(i, p) * a(p, j);
        content = gcd(content, a(i, j));
      }
    if (piv.sign() < 0) flip = -flip;
    if (!content.is_zero() && !content.is_one())
      for (size_t i : live)
        for (size_t j : live) a(i, j) = div_exact(a(i, j), content);
  }
  return s;
}

std::vector<Integer> SmithForm::invariants() const {
  std::vector<Integer> r;
  for (size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
    if (!D(i, i).is_zero()) r.push_back(D(i, i));
  return r;
}

size_t SmithForm::rank() const { return invariants().size(); }

namespace {

void row_add(IntMatrix& m, size_t dst, size_t src, const Integer& c) {
  if (c.is_zero()) return;
  for (size_t j = 0; j < m.cols(); ++j)
    if (!m(src, j).is_zero()) m(dst, j) += c * m(src, j);
}

void col_add(IntMatrix& m, size_t dst, size_t src, const Integer& c) {
  if (c.is_zero()) return;
  for (size_t i = 0; i < m.rows(); ++i)
    if (!m(i, src).is_zero()) m(i, dst) += c * m(i, src);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input) {
  size_t m = input.rows(), n = input.cols();
  SmithForm f{IntMatrix::identity(m), input, IntMatrix::identity(n)};
  IntMatrix& a = f.D;
  for (size_t t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the trailing block becomes the pivot
    size_t bi = m, bj = n;
    for (size_t i = t; i < m; ++i)
      for (size_t j = t; j < n; ++j)
        if (!a(i, j).is_zero() && (bi == m || abs(a(i, j)) < abs(a(bi, bj)))) {
          bi = i;
          bj = j;
        }
    if (bi == m) break;
    a.swap_rows(t, bi);
    f.U.swap_rows(t, bi);
    a.swap_cols(t, bj);
    f.V.swap_cols(t, bj);
    while (true) {
      bool changed = false;
      for (size_t i = t + 1; i < m; ++i) {
        if (a(i, t).is_zero()) continue;
        Integer q = floor_div(a(i, t), a(t, t));
        row_add(a, i, t, -q);
        row_add(f.U, i, t, -q);
        if (!a(i, t).is_zero()) {
          a.swap_rows(i, t);
          f.U.swap_rows(i, t);
          changed = true;
        }
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (a(t, j).is_zero()) continue;
        Integer q = floor_div(a(t, j), a(t, t));
        col_add(a, j, t, -q);
        col_add(f.V, j, t, -q);
        if (!a(t, j).is_zero()) {
          a.swap_cols(j, t);
          f.V.swap_cols(j, t);
          changed = true;
        }
      }
      if (changed) continue;
      size_t bad = m;
      for (size_t i = t + 1; i < m && bad == m; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (!floor_mod(a(i, j), abs(a(t, t))).is_zero()) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_add(a, t, bad, Integer(1));
      row_add(f.U, t, bad, Integer(1));
    }
    if (a(t, t).sign() < 0) {
      for (size_t j = 0; j < n; ++j) a(t, j) = -a(t, j);
      for (size_t j = 0; j < m; ++j) f.U(t, j) = -f.U(t, j);
    }
  }
  return f;
}

namespace {

long mulmod(long a, long b, long m) { return static_cast<long>(static_cast<__int128>(a) * b % m); }

long normmod(long a, long m) {
  a %= m;
  return a < 0 ? a + m : a;
}

// g = gcd(a, b) = x a + y b
long ext_gcd(long a, long b, long& x, long& y) {
  if (a != 0 && b % a == 0) {
    x = 1;
    y = 0;
    return a;
  }
  long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    long q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  x = x0;
  y = y0;
  return a;
}

}  // namespace

ModularSmith modular_smith(const IntMatrix& input, long m) {
  const size_t n = input.rows();
  if (input.cols() != n) throw std::invalid_argument("modular_smith: matrix is not square");
  if (m <= 0) throw std::invalid_argument("modular_smith: modulus must be positive");
  using Mat = std::vector<std::vector<long>>;
  Mat a(n, std::vector<long>(n)), v(n, std::vector<long>(n, 0)), w(n, std::vector<long>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    v[i][i] = w[i][i] = 1 % m;
    for (size_t j = 0; j < n; ++j) a[i][j] = floor_mod(input(i, j), Integer(m)).to_int64();
  }
  auto g_of = [&](long x) { return std::gcd(x, m); };
  // rows (p, q) <- [[x, y], [-b/g, a/g]] (rows p, q)
  auto row_mix = [&](Mat& mat, size_t p, size_t q, long x, long y, long c, long d) {
    for (size_t j = 0; j < mat[p].size(); ++j) {
      long u = mat[p][j], t = mat[q][j];
      mat[p][j] = normmod(mulmod(x, u, m) + mulmod(y, t, m), m);
      mat[q][j] = normmod(mulmod(c, u, m) + mulmod(d, t, m), m);
    }
  };
  auto col_mix = [&](size_t p, size_t q, long x, long y, long c, long d) {
    // columns p, q of a and v by [[x, c], [y, d]]; rows p, q of w by its inverse [[d, -c], [-y, x]]
    for (size_t i = 0; i < n; ++i) {
      long u = a[i][p], t = a[i][q];
      a[i][p] = normmod(mulmod(x, u, m) + mulmod(y, t, m), m);
      a[i][q] = normmod(mulmod(c, u, m) + mulmod(d, t, m), m);
      u = v[i][p];
      t = v[i][q];
      v[i][p] = normmod(mulmod(x, u, m) + mulmod(y, t, m), m);
      v[i][q] = normmod(mulmod(c, u, m) + mulmod(d, t, m), m);
    }
    row_mix(w, p, q, normmod(d, m), normmod(-c, m), normmod(-y, m), normmod(x, m));
  };
  ModularSmith out;
  out.modulus = m;
  for (size_t t = 0; t < n; ++t) {
    while (true) {
      size_t bi = n, bj = n;
      long best = m;
      for (size_t i = t; i < n; ++i)
        for (size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && g_of(a[i][j]) < best) {
            best = g_of(a[i][j]);
            bi = i;
            bj = j;
          }
      if (bi == n) break;
      if (bi != t) std::swap(a[bi], a[t]);
      if (bj != t) col_mix(t, bj, 0, 1, m - 1, 0);
      for (size_t i = t + 1; i < n; ++i) {
        if (a[i][t] == 0) continue;
        long x, y, p = a[t][t], q = a[i][t];
        long g = ext_gcd(p, q, x, y);
        row_mix(a, t, i, normmod(x, m), normmod(y, m), normmod(-(q / g), m), normmod(p / g, m));
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        long x, y, p = a[t][t], q = a[t][j];
        long g = ext_gcd(p, q, x, y);
        col_mix(t, j, normmod(x, m), normmod(y, m), normmod(-(q / g), m), normmod(p / g, m));
      }
      bool clean = true;
      for (size_t i = t + 1; i < n && clean; ++i) clean = a[i][t] == 0;
      for (size_t j = t + 1; j < n && clean; ++j) clean = a[t][j] == 0;
      if (!clean) continue;
      long gt = g_of(a[t][t]);
      size_t bad = n;
      for (size_t i = t + 1; i < n && bad == n; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (a[i][j] % gt != 0) {
            bad = i;
            break;
          }
      if (bad == n) break;
      for (size_t j = 0; j < n; ++j) a[t][j] = normmod(a[t][j] + a[bad][j], m);
    }
    out.invariants.push_back(a[t][t] == 0 ? m : g_of(a[t][t]));
  }
  out.v = std::move(v);
  out.v_inv = std::move(w);
  return out;
}

ModularSmith modular_smith(const IntMatrix& a) {
  Integer d = abs(determinant(a));
  if (d.is_zero()) throw std::invalid_argument("modular_smith: singular matrix");
  if (!d.fits_int64() || d > Integer(static_cast<long long>(1) << 40))
    throw std::invalid_argument("modular_smith: determinant too large");
  return modular_smith(a, d.to_int64());
}

IntMatrix hermite_basis(const IntMatrix& gens) {
  IntMatrix a = gens;
  size_t k = a.rows(), n = a.cols();
  size_t r = 0;
  for (size_t c = 0; c < n && r < k; ++c) {
    while (true) {
      size_t p = k;
      for (size_t i = r; i < k; ++i)
        if (!a(i, c).is_zero() && (p == k || abs(a(i, c)) < abs(a(p, c)))) p = i;
      if (p == k) break;
      a.swap_rows(p, r);
      bool clean = true;
      for (size_t i = r + 1; i < k; ++i) {
        if (a(i, c).is_zero()) continue;
        row_add(a, i, r, -floor_div(a(i, c), a(r, c)));
        if (!a(i, c).is_zero()) clean = false;
      }
      if (clean) break;
    }
    if (r >= k || a(r, c).is_zero()) continue;
    if (a(r, c).sign() < 0)
      for (size_t j = 0; j < n; ++j) a(r, j) = -a(r, j);
    for (size_t i = 0; i < r; ++i) row_add(a, i, r, -floor_div(a(i, c), a(r, c)));
    ++r;
  }
  IntMatrix out(r, n);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < n; ++j) out(i, j) = a(i, j);
  return out;
}

RatMatrix hermite_basis(const RatMatrix& gens) {
  Integer d(1);
  for (const auto& x : gens.data()) d = lcm(d, x.den());
  IntMatrix scaled(gens.rows(), gens.cols());
  for (size_t i = 0; i < gens.rows(); ++i)
    for (size_t j = 0; j < gens.cols(); ++j)
      scaled(i, j) = div_exact(gens(i, j).num() * d, gens(i, j).den());
  IntMatrix h = hermite_basis(scaled);
  RatMatrix out(h.rows(), h.cols());
  for (size_t i = 0; i < h.rows(); ++i)
    for (size_t j = 0; j < h.cols(); ++j) out(i, j) = Rational(h(i, j), d);
  return out;
}

namespace {

// LLL reduction (delta 3/4, standard inner product) of linearly independent rows.
void lll_rows(std::vector<IntVector>& b) {
  const size_t k = b.size();
  if (k < 2) return;
  std::vector<RatVector> bs(k);
  std::vector<Rational> nrm(k);
  std::vector<std::vector<Rational>> mu(k, std::vector<Rational>(k, Rational(0)));
  auto idot = [](const IntVector& x, const RatVector& y) {
    Rational s(0);
    for (size_t i = 0; i < x.size(); ++i)
      if (!x[i].is_zero()) s += Rational(x[i]) * y[i];
    return s;
  };
  auto gso = [&](size_t from) {
    for (size_t i = from; i < k; ++i) {
      bs[i] = to_rational(b[i]);
      for (size_t j = 0; j < i; ++j) {
        mu[i][j] = idot(b[i], bs[j]) / nrm[j];
        for (size_t t = 0; t < bs[i].size(); ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      nrm[i] = dot(bs[i], bs[i]);
    }
  };
  gso(0);
  size_t i = 1;
  while (i < k) {
    for (size_t j = i; j-- > 0;) {
      Rational h = mu[i][j] + Rational(Integer(1), Integer(2));
      Integer q = floor_div(h.num(), h.den());
      if (q.is_zero()) continue;
      for (size_t t = 0; t < b[i].size(); ++t) b[i][t] -= q * b[j][t];
      for (size_t t = 0; t < j; ++t) mu[i][t] -= Rational(q) * mu[j][t];
      mu[i][j] -= Rational(q);
    }
    if (nrm[i] * Rational(4) < (Rational(3) - mu[i][i - 1] * mu[i][i - 1] * Rational(4)) * nrm[i - 1]) {
      std::swap(b[i], b[i - 1]);
      gso(i - 1);
      i = std::max<size_t>(i - 1, 1);
    } else {
      ++i;
    }
  }
}

}  // namespace

IntMatrix left_kernel(const IntMatrix& a) {
  // basis of {x : x a = 0}, one column at a time: Euclid on the values of the
  // current basis against the column, then LLL to keep entries small
  std::vector<IntVector> k;
  for (size_t i = 0; i < a.rows(); ++i) {
    IntVector e(a.rows(), Integer(0));
    e[i] = Integer(1);
    k.push_back(e);
  }
  for (size_t c = 0; c < a.cols() && !k.empty(); ++c) {
    std::vector<Integer> s(k.size(), Integer(0));
    for (size_t i = 0; i < k.size(); ++i)
      for (size_t j = 0; j < a.rows(); ++j)
        if (!k[i][j].is_zero() && !a(j, c).is_zero()) s[i] += k[i][j] * a(j, c);
    while (true) {
      size_t p = k.size();
      for (size_t i = 0; i < k.size(); ++i)
        if (!s[i].is_zero() && (p == k.size() || abs(s[i]) < abs(s[p]))) p = i;
      if (p == k.size()) break;
      bool single = true;
      for (size_t i = 0; i < k.size(); ++i) {
        if (i == p || s[i].is_zero()) continue;
        Integer q = floor_div(s[i], s[p]);
        s[i] -= q * s[p];
        for (size_t t = 0; t < k[i].size(); ++t)
          if (!k[p][t].is_zero()) k[i][t] -= q * k[p][t];
        if (!s[i].is_zero()) single = false;
      }
      if (single) {
        k.erase(k.begin() + static_cast<long>(p));
        break;
      }
    }
    lll_rows(k);
  }
  IntMatrix out(k.size(), a.rows());
  for (size_t i = 0; i < k.size(); ++i)
    for (size_t j = 0; j < a.rows(); ++j) out(i, j) = k[i][j];
  return hermite_basis(out);
}

IntMatrix gram_of(const Lattice& l, const IntMatrix& basis) {
  return basis * l.gram * basis.transpose();
}

RatMatrix gram_of(const Lattice& l, const RatMatrix& basis) {
  return basis * to_rational(l.gram) * basis.transpose();
}

Lattice sublattice(const Lattice& l, const IntMatrix& basis) { return Lattice(gram_of(l, basis)); }

RatMatrix dual_basis(const Lattice& l) { return inverse(to_rational(l.gram)); }

Closure primitive_closure(const IntMatrix& sub_basis) {
  SmithForm f = smith_normal_form(sub_basis);
  size_t r = f.rank();
  IntMatrix vinv = inverse_unimodular(f.V);
  IntMatrix b(r, sub_basis.cols());
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < sub_basis.cols(); ++j) b(i, j) = vinv(i, j);
  Integer idx(1);
  for (const auto& d : f.invariants()) idx *= d;
  if (r != sub_basis.rows()) throw std::invalid_argument("primitive_closure: basis rows are dependent");
  return {hermite_basis(b), idx};
}

bool is_primitive(const IntMatrix& sub_basis) {
  for (const auto& d : smith_normal_form(sub_basis).invariants())
    if (!d.is_one()) return false;
  return true;
}

Complement orthogonal_complement(const Lattice& l, const IntMatrix& sub_basis) {
  Complement c;
  c.basis = left_kernel(l.gram * sub_basis.transpose());
  if (c.basis.rows() > 0) c.degenerate = determinant(gram_of(l, c.basis)).is_zero();
  return c;
}

Lattice rescale(const Lattice& l, const Integer& k) { return Lattice(l.gram.scaled(k)); }

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  size_t n = a.rank(), m = b.rank();
  IntMatrix g(n + m, n + m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g(i, j) = a.gram(i, j);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) g(n + i, n + j) = b.gram(i, j);
  return Lattice(g);
}

bool is_isometry(const Lattice& l, const IntMatrix& g) {
  return g.rows() == l.rank() && g.cols() == l.rank() && g * l.gram * g.transpose() == l.gram;
}

IntMatrix isometry_inverse(const Lattice& l, const IntMatrix& g) {
  RatMatrix gi = inverse(to_rational(l.gram));
  return to_integer(to_rational(l.gram * g.transpose()) * gi);
}

IntMatrix reflection(const Lattice& l, const IntVector& r) {
  size_t n = l.rank();
  IntVector gr = r * l.gram;  // column G r^T as a row, G symmetric
  IntMatrix m = IntMatrix::identity(n);
  for (size_t i = 0; i < n; ++i) {
    if (gr[i].is_zero()) continue;
    for (size_t j = 0; j < n; ++j)
      if (!r[j].is_zero()) m(i, j) += gr[i] * r[j];
  }
  return m;
}

}  // namespace rdp

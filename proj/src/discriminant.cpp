#include "rdp/discriminant.hpp"

#include <map>
#include <set>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace rdp {

namespace {

long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long mod_inverse(long a, long m) {
  long g = m, x = 0, x1 = 1, r = mod_pos(a, m);
  while (r) {
    long q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error("not invertible modulo " + std::to_string(m));
  return mod_pos(x, m);
}

std::vector<std::pair<long, int>> factorize(long n) {
  std::vector<std::pair<long, int>> f;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

int legendre(long a, long p) {
  a = mod_pos(a, p);
  if (a == 0) return 0;
  long r = 1, base = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = static_cast<long>(static_cast<__int128>(r) * base % p);
    base = static_cast<long>(static_cast<__int128>(base) * base % p);
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

}  // namespace

FiniteQuadraticForm::FiniteQuadraticForm(std::vector<long> orders, std::vector<Rational> q,
                                         std::vector<std::vector<Rational>> b) {
  size_t k = orders.size();
  if (q.size() != k || b.size() != k) throw std::invalid_argument("quadratic form: size mismatch");
  std::vector<size_t> keep;
  for (size_t i = 0; i < k; ++i) {
    if (orders[i] < 1) throw std::invalid_argument("quadratic form: bad order");
    if (b[i].size() != k) throw std::invalid_argument("quadratic form: b is not square");
    if (orders[i] > 1) keep.push_back(i);
  }
  for (size_t i : keep) {
    orders_.push_back(orders[i]);
    q_.push_back(mod(q[i], Rational(2)));
    std::vector<Rational> row;
    for (size_t j : keep) row.push_back(mod(b[i][j], Rational(1)));
    b_.push_back(row);
  }
  k = orders_.size();
  size_ = 1;
  for (size_t i = 0; i < k; ++i) {
    exponent_ = std::lcm(exponent_, orders_[i]);
    if (size_ > (size_t{1} << 40) / static_cast<size_t>(orders_[i]))
      throw std::invalid_argument("quadratic form: group too large");
    size_ *= static_cast<size_t>(orders_[i]);
  }
  for (size_t i = 0; i < k; ++i) {
    Rational oi(orders_[i]);
    if (!mod(q_[i] * oi * oi, Rational(2)).is_zero() || mod(q_[i], Rational(1)) != b_[i][i])
      throw std::invalid_argument("quadratic form: q inconsistent with orders or b");
    for (size_t j = 0; j < k; ++j)
      if (b_[i][j] != b_[j][i] || !(b_[i][j] * oi).is_integer())
        throw std::invalid_argument("quadratic form: b inconsistent");
  }
  Rational e(exponent_);
  qn_.resize(k);
  bn_.assign(k, std::vector<long>(k));
  for (size_t i = 0; i < k; ++i) {
    qn_[i] = (q_[i] * e).num().to_int64();
    for (size_t j = 0; j < k; ++j) bn_[i][j] = (b_[i][j] * e).num().to_int64();
  }
  stride_.resize(k);
  size_t s = 1;
  for (size_t i = 0; i < k; ++i) {
    stride_[i] = s;
    s *= static_cast<size_t>(orders_[i]);
  }
}

FiniteQuadraticForm::Element FiniteQuadraticForm::generator(size_t i) const {
  Element x = zero();
  x[i] = 1;
  return x;
}

FiniteQuadraticForm::Element FiniteQuadraticForm::add(const Element& x, const Element& y) const {
  Element z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = mod_pos(x[i] + y[i], orders_[i]);
  return z;
}

FiniteQuadraticForm::Element FiniteQuadraticForm::sub(const Element& x, const Element& y) const {
  Element z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = mod_pos(x[i] - y[i], orders_[i]);
  return z;
}

FiniteQuadraticForm::Element FiniteQuadraticForm::scale(const Element& x, long k) const {
  Element z(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    z[i] = static_cast<long>(mod_pos(static_cast<long>(static_cast<__int128>(x[i]) * mod_pos(k, orders_[i]) % orders_[i]),
                                     orders_[i]));
  return z;
}

long FiniteQuadraticForm::order_of(const Element& x) const {
  long o = 1;
  for (size_t i = 0; i < x.size(); ++i) o = std::lcm(o, orders_[i] / std::gcd(orders_[i], x[i]));
  return o;
}

long FiniteQuadraticForm::value_num(const Element& x) const {
  const long m = 2 * exponent_;
  __int128 s = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    s += static_cast<__int128>(x[i]) * x[i] % m * qn_[i] % m;
    for (size_t j = i + 1; j < x.size(); ++j)
      if (x[j]) s += 2 * (static_cast<__int128>(x[i]) * x[j] % m * bn_[i][j] % m);
    s %= m;
  }
  return mod_pos(static_cast<long>(s), m);
}

long FiniteQuadraticForm::pairing_num(const Element& x, const Element& y) const {
  const long m = exponent_;
  __int128 s = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    for (size_t j = 0; j < y.size(); ++j)
      if (y[j]) s = (s + static_cast<__int128>(x[i]) * y[j] % m * bn_[i][j]) % m;
  }
  return mod_pos(static_cast<long>(s), m);
}

Rational FiniteQuadraticForm::value(const Element& x) const { return Rational(Integer(value_num(x)), Integer(exponent_)); }

Rational FiniteQuadraticForm::pairing(const Element& x, const Element& y) const {
  return Rational(Integer(pairing_num(x, y)), Integer(exponent_));
}

size_t FiniteQuadraticForm::index(const Element& x) const {
  size_t idx = 0;
  for (size_t i = 0; i < x.size(); ++i) idx += static_cast<size_t>(mod_pos(x[i], orders_[i])) * stride_[i];
  return idx;
}

FiniteQuadraticForm::Element FiniteQuadraticForm::element(size_t idx) const {
  Element x(orders_.size());
  for (size_t i = 0; i < orders_.size(); ++i) {
    x[i] = static_cast<long>(idx % static_cast<size_t>(orders_[i]));
    idx /= static_cast<size_t>(orders_[i]);
  }
  return x;
}

bool FiniteQuadraticForm::is_nondegenerate() const {
  for (size_t idx = 1; idx < size_; ++idx) {
    Element x = element(idx);
    bool paired = false;
    for (size_t j = 0; j < rank() && !paired; ++j) paired = pairing_num(x, generator(j)) != 0;
    if (!paired) return false;
  }
  return true;
}

FiniteQuadraticForm FiniteQuadraticForm::negated() const {
  std::vector<Rational> q;
  std::vector<std::vector<Rational>> b = b_;
  for (const auto& v : q_) q.push_back(-v);
  for (auto& row : b)
    for (auto& v : row) v = -v;
  return FiniteQuadraticForm(orders_, q, b);
}

FiniteQuadraticForm FiniteQuadraticForm::p_part(long p) const {
  std::vector<long> orders, mult;
  std::vector<size_t> idx;
  for (size_t i = 0; i < rank(); ++i) {
    long o = orders_[i], pk = 1;
    while (o % p == 0) {
      o /= p;
      pk *= p;
    }
    if (pk > 1) {
      orders.push_back(pk);
      mult.push_back(o);
      idx.push_back(i);
    }
  }
  std::vector<Rational> q;
  std::vector<std::vector<Rational>> b(idx.size());
  for (size_t a = 0; a < idx.size(); ++a) {
    q.push_back(q_[idx[a]] * Rational(mult[a] * mult[a]));
    for (size_t c = 0; c < idx.size(); ++c) b[a].push_back(b_[idx[a]][idx[c]] * Rational(mult[a] * mult[c]));
  }
  return FiniteQuadraticForm(orders, q, b);
}

std::vector<long> FiniteQuadraticForm::primes() const {
  std::vector<long> ps;
  for (long o : orders_)
    for (auto [p, e] : factorize(o))
      if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  return ps;
}

size_t FiniteQuadraticForm::length(long p) const {
  if (p == 0) {
    size_t l = 0;
    for (long pr : primes()) l = std::max(l, length(pr));
    return l;
  }
  size_t l = 0;
  for (long o : orders_)
    if (o % p == 0) ++l;
  return l;
}

std::string FiniteQuadraticForm::to_json() const {
  nlohmann::json j;
  j["orders"] = orders_;
  std::vector<std::string> q;
  for (const auto& v : q_) q.push_back(v.str());
  std::vector<std::vector<std::string>> b;
  for (const auto& row : b_) {
    b.emplace_back();
    for (const auto& v : row) b.back().push_back(v.str());
  }
  j["q"] = q;
  j["b"] = b;
  return j.dump();
}

FiniteQuadraticForm FiniteQuadraticForm::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  auto rat = [](const nlohmann::json& v) {
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      auto pos = s.find(" mod");
      return Rational::parse(pos == std::string::npos ? s : s.substr(0, pos));
    }
    return Rational(static_cast<long long>(v.get<int64_t>()));
  };
  std::vector<long> orders = j.at("orders").get<std::vector<long>>();
  std::vector<Rational> q;
  for (const auto& v : j.at("q")) q.push_back(rat(v));
  std::vector<std::vector<Rational>> b;
  if (j.contains("b")) {
    for (const auto& row : j.at("b")) {
      b.emplace_back();
      for (const auto& v : row) b.back().push_back(rat(v));
    }
  } else {
    // diagonal form
    b.assign(orders.size(), std::vector<Rational>(orders.size(), Rational(0)));
    for (size_t i = 0; i < orders.size(); ++i) b[i][i] = mod(q[i], Rational(1));
  }
  return FiniteQuadraticForm(orders, q, b);
}

FiniteQuadraticForm::Element Discriminant::element_of(const RatVector& dual) const {
  RatVector xq = dual * to_rational(lattice.gram);
  const long m = smith.modulus;
  std::vector<long> x(xq.size());
  for (size_t i = 0; i < xq.size(); ++i) {
    if (!xq[i].is_integer()) throw std::invalid_argument("vector is not in the dual lattice");
    x[i] = floor_mod(xq[i].num(), Integer(m)).to_int64();
  }
  FiniteQuadraticForm::Element out(pieces.size());
  for (size_t j = 0; j < pieces.size(); ++j) {
    const Piece& pc = pieces[j];
    __int128 t = 0;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i]) t = (t + static_cast<__int128>(x[i]) * smith.v[i][pc.factor]) % m;
    long am = static_cast<long>(t % pc.order);
    out[j] = static_cast<long>(static_cast<__int128>(am) * pc.inv % pc.order);
  }
  return out;
}

RatVector Discriminant::lift(const FiniteQuadraticForm::Element& x) const {
  RatVector v(lattice.rank(), Rational(0));
  for (size_t j = 0; j < x.size(); ++j) {
    if (!x[j]) continue;
    Rational c(x[j]);
    for (size_t i = 0; i < v.size(); ++i)
      if (!lifts(j, i).is_zero()) v[i] += c * lifts(j, i);
  }
  return v;
}

std::vector<FiniteQuadraticForm::Element> Discriminant::generator_images(const IntMatrix& g) const {
  RatMatrix gq = to_rational(g);
  std::vector<FiniteQuadraticForm::Element> out;
  for (size_t j = 0; j < lifts.rows(); ++j) out.push_back(element_of(lifts.row(j) * gq));
  return out;
}

Perm Discriminant::action(const IntMatrix& g) const {
  auto imgs = generator_images(g);
  Perm p(form.size());
  for (size_t idx = 0; idx < form.size(); ++idx) {
    auto x = form.element(idx);
    auto y = form.zero();
    for (size_t j = 0; j < x.size(); ++j)
      if (x[j]) y = form.add(y, form.scale(imgs[j], x[j]));
    p[idx] = static_cast<int>(form.index(y));
  }
  return p;
}

Discriminant discriminant_form(const Lattice& l) {
  if (!l.is_even()) throw std::invalid_argument("discriminant form of an odd lattice");
  if (determinant(l.gram).is_zero()) throw std::invalid_argument("discriminant form of a degenerate lattice");
  size_t n = l.rank();
  Discriminant d;
  d.lattice = l;
  d.smith = modular_smith(l.gram);
  d.gram_inv = inverse(to_rational(l.gram));
  const long m = d.smith.modulus;
  RatMatrix lifts;
  std::vector<long> orders;
  for (size_t i = 0; i < n; ++i) {
    long di = d.smith.invariants[i];
    if (di == 1) continue;
    for (auto [p, e] : factorize(di)) {
      long pk = 1;
      for (int t = 0; t < e; ++t) pk *= p;
      long cof = di / pk;
      d.pieces.push_back({i, pk, cof, mod_inverse(cof, pk)});
      orders.push_back(pk);
      RatVector x(n);
      for (size_t j = 0; j < n; ++j)
        x[j] = Rational(Integer(static_cast<long long>(static_cast<__int128>(cof) * d.smith.v_inv[i][j] % m)));
      RatVector row = x * d.gram_inv;
      for (auto& v : row) v = mod(v, Rational(1));
      lifts.append_row(row);
    }
  }
  size_t k = orders.size();
  std::vector<Rational> q(k);
  std::vector<std::vector<Rational>> b(k, std::vector<Rational>(k));
  for (size_t a = 0; a < k; ++a)
    for (size_t c = 0; c < k; ++c) {
      Rational v = l.inner(lifts.row(a), lifts.row(c));
      if (a == c) q[a] = v;
      b[a][c] = v;
    }
  d.form = FiniteQuadraticForm(orders, q, b);
  d.lifts = lifts;
  return d;
}

Overlattice overlattice_from_isotropic(const Discriminant& d,
                                       const std::vector<FiniteQuadraticForm::Element>& gens) {
  const auto& f = d.form;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (f.value_num(gens[i]) != 0) throw std::invalid_argument("subgroup is not isotropic");
    for (size_t j = 0; j < i; ++j)
      if (f.pairing_num(gens[i], gens[j]) != 0) throw std::invalid_argument("subgroup is not isotropic");
  }
  size_t n = d.lattice.rank();
  RatMatrix rows = to_rational(IntMatrix::identity(n));
  for (const auto& g : gens) rows.append_row(d.lift(g));
  Overlattice o;
  o.basis = hermite_basis(rows);
  o.lattice = Lattice(to_integer(gram_of(d.lattice, o.basis)));
  if (!o.lattice.is_even()) throw std::logic_error("overlattice is not even");
  Rational det = determinant(o.basis);
  o.index = (Rational(1) / abs(det)).num();
  return o;
}

ElementTable::ElementTable(const FiniteQuadraticForm& f) : form_(f) {
  elems_.reserve(f.size());
  isotropic_.resize(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    elems_.push_back(f.element(i));
    isotropic_[i] = f.value_num(elems_[i]) == 0;
  }
}

size_t ElementTable::add(size_t a, size_t b) const { return form_.index(form_.add(elems_[a], elems_[b])); }

bool ElementTable::orthogonal(size_t a, size_t b) const { return form_.pairing_num(elems_[a], elems_[b]) == 0; }

Bits ElementTable::zero_subgroup() const {
  Bits b((size() + 63) / 64, 0);
  set(b, 0);
  return b;
}

Bits ElementTable::extend(const Bits& bits, size_t x) const {
  Bits out = bits;
  auto mem = members(bits);
  size_t cur = x;
  while (!test(bits, cur)) {
    for (size_t m : mem) set(out, add(m, cur));
    cur = add(cur, x);
  }
  return out;
}

size_t ElementTable::count(const Bits& b) {
  size_t c = 0;
  for (uint64_t w : b) c += static_cast<size_t>(__builtin_popcountll(w));
  return c;
}

std::vector<size_t> ElementTable::members(const Bits& b) {
  std::vector<size_t> out;
  for (size_t w = 0; w < b.size(); ++w) {
    uint64_t v = b[w];
    while (v) {
      out.push_back(w * 64 + static_cast<size_t>(__builtin_ctzll(v)));
      v &= v - 1;
    }
  }
  return out;
}

Bits ElementTable::image(const Bits& b, const Perm& p) {
  Bits out(b.size(), 0);
  for (size_t w = 0; w < b.size(); ++w) {
    uint64_t v = b[w];
    while (v) {
      set(out, static_cast<size_t>(p[w * 64 + static_cast<size_t>(__builtin_ctzll(v))]));
      v &= v - 1;
    }
  }
  return out;
}

namespace {

// Elements of Z[zeta_M] as coefficient vectors modulo x^M - 1.
using Poly = std::vector<Integer>;

Poly poly_mul_mod(const Poly& a, const Poly& b) {
  size_t m = a.size();
  Poly c(m, Integer(0));
  for (size_t i = 0; i < m; ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < m; ++j)
      if (!b[j].is_zero()) c[(i + j) % m] += a[i] * b[j];
  }
  return c;
}

// Coefficients of the n-th cyclotomic polynomial, low degree first.
std::vector<Integer> cyclotomic(long n) {
  static std::mutex mu;
  static std::map<long, std::vector<Integer>> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
  }
  std::vector<Integer> num(static_cast<size_t>(n) + 1, Integer(0));
  num[0] = -1;
  num[static_cast<size_t>(n)] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d) continue;
    std::vector<Integer> div = cyclotomic(d);
    // exact division by a monic polynomial
    size_t dn = num.size() - 1, dd = div.size() - 1;
    std::vector<Integer> quo(dn - dd + 1, Integer(0));
    for (size_t i = dn + 1; i-- > dd;) {
      Integer c = num[i];
      quo[i - dd] = c;
      if (c.is_zero()) continue;
      for (size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * div[j];
    }
    num = quo;
  }
  std::lock_guard<std::mutex> lock(mu);
  memo[n] = num;
  return num;
}

bool is_zero_in_cyclotomic_field(Poly a) {
  long m = static_cast<long>(a.size());
  std::vector<Integer> phi = cyclotomic(m);
  size_t deg = phi.size() - 1;
  for (size_t i = a.size(); i-- > deg;) {
    Integer c = a[i];
    if (c.is_zero()) continue;
    for (size_t j = 0; j <= deg; ++j) a[i - deg + j] -= c * phi[j];
  }
  for (size_t i = 0; i < deg; ++i)
    if (!a[i].is_zero()) return false;
  return true;
}

Poly monomial(size_t m, long e, const Integer& c = Integer(1)) {
  Poly p(m, Integer(0));
  p[static_cast<size_t>(mod_pos(e, static_cast<long>(m)))] = c;
  return p;
}

}  // namespace

int milgram_signature(const FiniteQuadraticForm& q) {
  if (!q.is_nondegenerate()) throw std::invalid_argument("Gauss sum of a degenerate form");
  const long e = q.exponent();
  const long m = std::lcm(8L, 2 * e);
  const size_t ms = static_cast<size_t>(m);
  Poly gauss(ms, Integer(0));
  for (size_t idx = 0; idx < q.size(); ++idx) {
    long t = q.value_num(q.element(idx));
    gauss[static_cast<size_t>(t * (m / (2 * e)) % m)] += 1;
  }
  // an explicit positive square root of |A| in Z[zeta_m]
  Poly root = monomial(ms, 0);
  for (auto [p, k] : factorize(static_cast<long>(q.size()))) {
    Integer scalar(1);
    for (int t = 0; t < k / 2; ++t) scalar *= Integer(p);
    Poly f = monomial(ms, 0, scalar);
    if (k % 2) {
      Poly s(ms, Integer(0));
      if (p == 2) {
        s[ms / 8] += 1;
        s[ms - ms / 8] += 1;
      } else {
        for (long x = 1; x < p; ++x) s[static_cast<size_t>(x * (m / p))] += Integer(legendre(x, p));
        if (p % 4 == 3) s = poly_mul_mod(s, monomial(ms, 3 * m / 4));
      }
      f = poly_mul_mod(f, s);
    }
    root = poly_mul_mod(root, f);
  }
  for (int s = 0; s < 8; ++s) {
    Poly diff = poly_mul_mod(root, monomial(ms, s * m / 8));
    for (size_t i = 0; i < ms; ++i) diff[i] = gauss[i] - diff[i];
    if (is_zero_in_cyclotomic_field(diff)) return s;
  }
  throw std::logic_error("Gauss sum is not an eighth root of unity times sqrt|A|");
}

std::vector<JordanComponent> jordan_decomposition(const FiniteQuadraticForm& form, long p) {
  FiniteQuadraticForm f = form.p_part(p);
  using El = FiniteQuadraticForm::Element;
  std::vector<El> gens;
  for (size_t i = 0; i < f.rank(); ++i) gens.push_back(f.generator(i));
  const long e = f.exponent();
  std::vector<JordanComponent> out;
  auto is_zero = [](const El& x) { return std::all_of(x.begin(), x.end(), [](long v) { return v == 0; }); };
  while (true) {
    gens.erase(std::remove_if(gens.begin(), gens.end(), is_zero), gens.end());
    if (gens.empty()) break;
    long pk = 1;
    for (const auto& g : gens) pk = std::max(pk, f.order_of(g));
    int k = 0;
    for (long t = pk; t > 1; t /= p) ++k;
    const long scale = e / pk;
    auto n = [&](const El& x, const El& y) { return f.pairing_num(x, y) / scale; };
    auto unit = [&](long v) { return mod_pos(v, p) != 0; };
    std::vector<size_t> top;
    for (size_t i = 0; i < gens.size(); ++i)
      if (f.order_of(gens[i]) == pk) top.push_back(i);
    El x, y;
    bool single = false;
    for (size_t i : top)
      if (unit(n(gens[i], gens[i]))) {
        x = gens[i];
        single = true;
        break;
      }
    size_t xi = gens.size(), yi = gens.size();
    if (!single) {
      for (size_t a = 0; a < top.size() && xi == gens.size(); ++a)
        for (size_t c = a + 1; c < top.size(); ++c)
          if (unit(n(gens[top[a]], gens[top[c]]))) {
            xi = top[a];
            yi = top[c];
            break;
          }
      if (xi == gens.size()) throw std::invalid_argument("degenerate form in Jordan decomposition");
      x = gens[xi];
      y = gens[yi];
      if (p != 2) {
        x = f.add(x, y);
        single = true;
      }
    }
    std::vector<El> rest;
    if (single) {
      long nxx = mod_pos(n(x, x), pk);
      long inv = mod_inverse(nxx, pk);
      JordanComponent c{p, k, 1, 0, false};
      if (p == 2) {
        long t = f.value_num(x) / scale;  // q(x) 2^k mod 2^{k+1}
        c.unit = mod_pos(t, 8);
        c.odd_level1 = k == 1;
      } else {
        c.unit = mod_pos(nxx, p);
      }
      out.push_back(c);
      bool removed = false;
      for (const auto& g : gens) {
        if (!removed && g == x) {
          removed = true;
          continue;
        }
        long cf = static_cast<long>(static_cast<__int128>(mod_pos(n(g, x), pk)) * inv % pk);
        rest.push_back(f.sub(g, f.scale(x, cf)));
      }
      if (!removed) {
        // x = gens[xi] + gens[yi]: drop gens[xi], keep the projection of gens[yi]
        rest.clear();
        for (size_t i = 0; i < gens.size(); ++i) {
          if (i == xi) continue;
          long cf = static_cast<long>(static_cast<__int128>(mod_pos(n(gens[i], x), pk)) * inv % pk);
          rest.push_back(f.sub(gens[i], f.scale(x, cf)));
        }
      }
    } else {
      long a = mod_pos(n(x, x), pk), bxy = mod_pos(n(x, y), pk), c = mod_pos(n(y, y), pk);
      long det = mod_pos(static_cast<long>((static_cast<__int128>(a) * c - static_cast<__int128>(bxy) * bxy) % pk), pk);
      long dinv = mod_inverse(det, pk);
      long ha = mod_pos(f.value_num(x) / scale, 2 * pk) / 2, hc = mod_pos(f.value_num(y) / scale, 2 * pk) / 2;
      out.push_back({p, k, 2, (ha * hc) % 2 ? 3L : 7L, false});
      for (size_t i = 0; i < gens.size(); ++i) {
        if (i == xi || i == yi) continue;
        long u = mod_pos(n(gens[i], x), pk), v = mod_pos(n(gens[i], y), pk);
        // [c1 c2] = [u v] B^{-1}, B^{-1} = det^{-1} [[c, -b], [-b, a]]
        __int128 c1 = (static_cast<__int128>(u) * c - static_cast<__int128>(v) * bxy) % pk;
        __int128 c2 = (static_cast<__int128>(v) * a - static_cast<__int128>(u) * bxy) % pk;
        long k1 = mod_pos(static_cast<long>(c1 * dinv % pk), pk);
        long k2 = mod_pos(static_cast<long>(c2 * dinv % pk), pk);
        rest.push_back(f.sub(f.sub(gens[i], f.scale(x, k1)), f.scale(y, k2)));
      }
    }
    gens = std::move(rest);
  }
  return out;
}

GenusVerdict even_lattice_exists(int s_plus, int s_minus, const FiniteQuadraticForm& q) {
  if (s_plus < 0 || s_minus < 0) return {false, "negative signature"};
  size_t r = static_cast<size_t>(s_plus + s_minus);
  if (r < q.length()) return {false, "rank below the length of the discriminant group"};
  int sig = milgram_signature(q);
  if (mod_pos(s_plus - s_minus - sig, 8) != 0)
    return {false, "signature " + std::to_string(s_plus - s_minus) + " differs from Gauss sum residue " +
                       std::to_string(sig) + " mod 8"};
  const long order = static_cast<long>(q.size());
  for (long p : q.primes()) {
    if (q.length(p) != r) continue;
    auto comps = jordan_decomposition(q, p);
    long pv = 1;
    for (const auto& c : comps)
      for (int t = 0; t < c.k * c.dim; ++t) pv *= p;
    if (p != 2) {
      long lhs = mod_pos((s_minus % 2 ? -1 : 1) * ((order / pv) % p), p);
      long rhs = 1;
      for (const auto& c : comps) rhs = rhs * c.unit % p;
      if (legendre(lhs, p) != legendre(rhs, p))
        return {false, "determinant condition fails at p = " + std::to_string(p)};
    } else {
      if (std::any_of(comps.begin(), comps.end(), [](const JordanComponent& c) { return c.odd_level1; })) continue;
      long lhs = (order / pv) % 8;
      long rhs = 1;
      for (const auto& c : comps) rhs = rhs * c.unit % 8;
      if (lhs != rhs && lhs != (8 - rhs) % 8) return {false, "determinant condition fails at p = 2"};
    }
  }
  return {true, ""};
}

bool primitively_embeds_in_unimodular(const Lattice& l, int h_plus, int h_minus) {
  Signature s = signature(l.gram);
  if (s.zero) throw std::invalid_argument("degenerate lattice");
  if (s.pos > h_plus || s.neg > h_minus) return false;
  return even_lattice_exists(h_plus - s.pos, h_minus - s.neg, discriminant_form(l).form.negated()).exists;
}

int code_dimension(const BinaryCode& c) {
  int d = 0;
  while ((size_t{1} << d) < c.size()) ++d;
  return d;
}

std::vector<BinaryCode> classify_doubly_even_codes(int n) {
  if (n < 0 || n > 12) throw std::invalid_argument("code length out of range");
  const uint32_t words = 1u << n;
  auto doubly_even = [](uint32_t w) { return __builtin_popcount(w) % 4 == 0; };
  auto permute = [&](const BinaryCode& c, int i) {
    uint32_t a = 1u << i, b = 1u << (i + 1);
    BinaryCode out;
    for (uint32_t w : c) {
      uint32_t bi = (w & a) ? b : 0, ai = (w & b) ? a : 0;
      out.push_back((w & ~(a | b)) | ai | bi);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::set<BinaryCode> seen;
  std::vector<BinaryCode> reps;
  auto add_orbit = [&](const BinaryCode& c) {
    std::vector<BinaryCode> orbit{c};
    seen.insert(c);
    BinaryCode best = c;
    for (size_t k = 0; k < orbit.size(); ++k)
      for (int i = 0; i + 1 < n; ++i) {
        BinaryCode img = permute(orbit[k], i);
        if (seen.insert(img).second) {
          best = std::min(best, img);
          orbit.push_back(std::move(img));
        }
      }
    reps.push_back(best);
  };
  add_orbit({0});
  for (size_t r = 0; r < reps.size(); ++r) {
    BinaryCode base = reps[r];
    for (uint32_t w = 1; w < words; ++w) {
      if (!doubly_even(w) || std::binary_search(base.begin(), base.end(), w)) continue;
      BinaryCode child = base;
      bool ok = true;
      for (uint32_t c : base) {
        if (!doubly_even(c ^ w)) {
          ok = false;
          break;
        }
        child.push_back(c ^ w);
      }
      if (!ok) continue;
      std::sort(child.begin(), child.end());
      if (!seen.count(child)) add_orbit(child);
    }
  }
  std::sort(reps.begin(), reps.end(), [](const BinaryCode& a, const BinaryCode& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return reps;
}

}  // namespace rdp

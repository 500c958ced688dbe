#include "rdp/roots.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace rdp {

bool lex_less(const IntVector& a, const IntVector& b) {
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    int c = cmp(a[i], b[i]);
    if (c) return c < 0;
  }
  return a.size() < b.size();
}

void sort_canonical(std::vector<IntVector>& vs) { std::sort(vs.begin(), vs.end(), lex_less); }

int index_of(const std::vector<IntVector>& vs, const IntVector& v) {
  for (size_t i = 0; i < vs.size(); ++i)
    if (vs[i] == v) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------- ADE types

std::string Component::str() const {
  const char* f = family == Family::A ? "A" : family == Family::D ? "D" : "E";
  return f + std::to_string(n);
}

ADEType::ADEType(std::vector<Component> comps) : comps_(std::move(comps)) {
  for (const auto& c : comps_) {
    bool ok = (c.family == Family::A && c.n >= 1) || (c.family == Family::D && c.n >= 4) ||
              (c.family == Family::E && c.n >= 6 && c.n <= 8);
    if (!ok) throw std::invalid_argument("invalid ADE component " + c.str());
  }
  std::sort(comps_.begin(), comps_.end());
}

ADEType ADEType::parse(const std::string& s) {
  std::vector<Component> comps;
  if (s.empty() || s == "0") return ADEType();
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    size_t i = 0;
    int mult = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) mult = mult * 10 + (tok[i++] - '0');
    if (mult == 0) mult = 1;
    if (i >= tok.size()) throw std::invalid_argument("bad ADE type: " + s);
    Family f;
    switch (tok[i]) {
      case 'A': f = Family::A; break;
      case 'D': f = Family::D; break;
      case 'E': f = Family::E; break;
      default: throw std::invalid_argument("bad ADE type: " + s);
    }
    std::string num = tok.substr(i + 1);
    if (num.empty() || !std::all_of(num.begin(), num.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      throw std::invalid_argument("bad ADE type: " + s);
    for (int k = 0; k < mult; ++k) comps.push_back({f, std::stoi(num)});
  }
  return ADEType(comps);
}

int ADEType::rank() const {
  int r = 0;
  for (const auto& c : comps_) r += c.n;
  return r;
}

std::string ADEType::str() const {
  if (comps_.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < comps_.size();) {
    size_t j = i;
    while (j < comps_.size() && comps_[j] == comps_[i]) ++j;
    if (!s.empty()) s += "+";
    if (j - i > 1) s += std::to_string(j - i);
    s += comps_[i].str();
    i = j;
  }
  return s;
}

bool operator<(const ADEType& a, const ADEType& b) {
  if (a.rank() != b.rank()) return a.rank() < b.rank();
  return a.comps_ < b.comps_;
}

namespace {

std::vector<std::pair<int, int>> component_edges(const Component& c) {
  std::vector<std::pair<int, int>> e;
  switch (c.family) {
    case Family::A:
      for (int i = 0; i + 1 < c.n; ++i) e.push_back({i, i + 1});
      break;
    case Family::D:
      for (int i = 0; i + 1 <= c.n - 2; ++i) e.push_back({i, i + 1});
      e.push_back({c.n - 3, c.n - 1});
      break;
    case Family::E:
      for (int i = 0; i + 1 <= c.n - 2; ++i) e.push_back({i, i + 1});
      e.push_back({2, c.n - 1});
      break;
  }
  return e;
}

Integer factorial(int n) {
  Integer r(1);
  for (int i = 2; i <= n; ++i) r *= Integer(i);
  return r;
}

int component_aut_order(const Component& c) {
  if (c.family == Family::A) return c.n >= 2 ? 2 : 1;
  if (c.family == Family::D) return c.n == 4 ? 6 : 2;
  return c.n == 6 ? 2 : 1;
}

}  // namespace

IntMatrix ADEType::gram() const {
  int n = rank();
  IntMatrix g(static_cast<size_t>(n), static_cast<size_t>(n));
  int off = 0;
  for (const auto& c : comps_) {
    for (int i = 0; i < c.n; ++i) g(static_cast<size_t>(off + i), static_cast<size_t>(off + i)) = Integer(-2);
    for (auto [a, b] : component_edges(c)) {
      g(static_cast<size_t>(off + a), static_cast<size_t>(off + b)) = Integer(1);
      g(static_cast<size_t>(off + b), static_cast<size_t>(off + a)) = Integer(1);
    }
    off += c.n;
  }
  return g;
}

Integer ADEType::aut_order() const {
  Integer r(1);
  for (size_t i = 0; i < comps_.size();) {
    size_t j = i;
    while (j < comps_.size() && comps_[j] == comps_[i]) ++j;
    r *= factorial(static_cast<int>(j - i)) * pow(Integer(component_aut_order(comps_[i])), static_cast<unsigned>(j - i));
    i = j;
  }
  return r;
}

Integer ADEType::weyl_order() const {
  Integer r(1);
  for (const auto& c : comps_) {
    if (c.family == Family::A)
      r *= factorial(c.n + 1);
    else if (c.family == Family::D)
      r *= pow(Integer(2), static_cast<unsigned>(c.n - 1)) * factorial(c.n);
    else
      r *= Integer(c.n == 6 ? 51840LL : c.n == 7 ? 2903040LL : 696729600LL);
  }
  return r;
}

int ADEType::positive_root_count() const {
  int r = 0;
  for (const auto& c : comps_) {
    if (c.family == Family::A)
      r += c.n * (c.n + 1) / 2;
    else if (c.family == Family::D)
      r += c.n * (c.n - 1);
    else
      r += c.n == 6 ? 36 : c.n == 7 ? 63 : 120;
  }
  return r;
}

std::vector<ADEType> enumerate_ade_types(int max_rank) {
  std::vector<Component> all;
  for (int n = 1; n <= max_rank; ++n) all.push_back({Family::A, n});
  for (int n = 4; n <= max_rank; ++n) all.push_back({Family::D, n});
  for (int n = 6; n <= std::min(8, max_rank); ++n) all.push_back({Family::E, n});
  std::vector<ADEType> out;
  std::vector<Component> cur;
  // multisets as non-decreasing sequences of component indices
  std::function<void(size_t, int)> rec = [&](size_t start, int left) {
    if (!cur.empty()) out.emplace_back(cur);
    for (size_t i = start; i < all.size(); ++i) {
      if (all[i].n > left) continue;
      cur.push_back(all[i]);
      rec(i, left - all[i].n);
      cur.pop_back();
    }
  };
  rec(0, max_rank);
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------- Dynkin identification

namespace {

struct Labeled {
  Component comp;
  std::vector<int> order;  // vertex at standard position k
};

std::vector<int> walk_arm(const std::vector<std::vector<int>>& adj, int from, int start) {
  std::vector<int> arm{start};
  int prev = from, cur = start;
  while (true) {
    int next = -1;
    for (int w : adj[static_cast<size_t>(cur)])
      if (w != prev) next = w;
    if (next < 0 || adj[static_cast<size_t>(cur)].size() > 2) break;
    arm.push_back(next);
    prev = cur;
    cur = next;
  }
  return arm;
}

Labeled label_component(const std::vector<int>& verts, const std::vector<std::vector<int>>& adj) {
  size_t edges = 0;
  int branch = -1;
  for (int v : verts) {
    size_t d = adj[static_cast<size_t>(v)].size();
    edges += d;
    if (d > 3) throw NotADE("vertex of degree > 3");
    if (d == 3) {
      if (branch >= 0) throw NotADE("more than one branch vertex");
      branch = v;
    }
  }
  edges /= 2;
  if (edges + 1 != verts.size()) throw NotADE("diagram contains a cycle");
  int k = static_cast<int>(verts.size());
  if (branch < 0) {
    int end = -1;
    for (int v : verts)
      if (adj[static_cast<size_t>(v)].size() <= 1) {
        end = v;
        break;  // verts is sorted, so this is the smallest end
      }
    Labeled l{{Family::A, k}, {}};
    if (k == 1) {
      l.order = {end};
      return l;
    }
    l.order = walk_arm(adj, -1, end);
    return l;
  }
  std::vector<std::vector<int>> arms;
  for (int w : adj[static_cast<size_t>(branch)]) arms.push_back(walk_arm(adj, branch, w));
  std::stable_sort(arms.begin(), arms.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.front() < b.front();
  });
  size_t a1 = arms[0].size(), a2 = arms[1].size(), a3 = arms[2].size();
  Labeled l;
  if (a1 == 1 && a2 == 1) {
    // D_k: long arm outward-in, then branch, then the two leaves
    l.comp = {Family::D, k};
    const auto& lng = arms[2];
    for (size_t i = lng.size(); i-- > 0;) l.order.push_back(lng[i]);
    l.order.push_back(branch);
    l.order.push_back(arms[0][0]);
    l.order.push_back(arms[1][0]);
    return l;
  }
  if (a1 == 1 && a2 == 2 && a3 >= 2 && a3 <= 4) {
    // E_k: the length-2 arm (v0 v1), branch v2, the long arm v3.., then the short leaf
    l.comp = {Family::E, k};
    l.order = {arms[1][1], arms[1][0], branch};
    for (int v : arms[2]) l.order.push_back(v);
    l.order.push_back(arms[0][0]);
    return l;
  }
  throw NotADE("branched diagram is not of type D or E");
}

}  // namespace

DynkinIdentification identify_dynkin(const IntMatrix& gram) {
  size_t n = gram.rows();
  std::vector<std::vector<int>> adj(n);
  for (size_t i = 0; i < n; ++i) {
    if (gram(i, i) != Integer(-2)) throw NotADE("a vector is not a root");
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Integer& x = gram(i, j);
      if (x.is_zero()) continue;
      if (!x.is_one()) throw NotADE("pairing outside {0,1}");
      adj[i].push_back(static_cast<int>(j));
    }
  }
  std::vector<int> comp_of(n, -1);
  std::vector<std::vector<int>> comps;
  for (size_t s = 0; s < n; ++s) {
    if (comp_of[s] >= 0) continue;
    std::vector<int> c{static_cast<int>(s)};
    comp_of[s] = static_cast<int>(comps.size());
    for (size_t k = 0; k < c.size(); ++k)
      for (int w : adj[static_cast<size_t>(c[k])])
        if (comp_of[static_cast<size_t>(w)] < 0) {
          comp_of[static_cast<size_t>(w)] = static_cast<int>(comps.size());
          c.push_back(w);
        }
    std::sort(c.begin(), c.end());
    comps.push_back(c);
  }
  std::vector<Labeled> labeled;
  for (const auto& c : comps) labeled.push_back(label_component(c, adj));
  std::stable_sort(labeled.begin(), labeled.end(),
                   [](const Labeled& a, const Labeled& b) { return a.comp < b.comp; });
  DynkinIdentification id;
  std::vector<Component> cs;
  id.to_standard.assign(n, -1);
  int off = 0;
  for (const auto& l : labeled) {
    cs.push_back(l.comp);
    id.components.push_back(l.order);
    for (size_t k = 0; k < l.order.size(); ++k) id.to_standard[static_cast<size_t>(l.order[k])] = off + static_cast<int>(k);
    off += l.comp.n;
  }
  id.type = ADEType(cs);
  return id;
}

ADEType ade_type_of(const IntMatrix& gram) { return identify_dynkin(gram).type; }

std::vector<Perm> aut_generators(const ADEType& type) {
  size_t n = static_cast<size_t>(type.rank());
  std::vector<Perm> gens;
  const auto& cs = type.components();
  std::vector<int> offs;
  int off = 0;
  for (const auto& c : cs) {
    offs.push_back(off);
    off += c.n;
  }
  for (size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& c = cs[ci];
    int o = offs[ci];
    auto swap_gen = [&](std::vector<std::pair<int, int>> pairs) {
      Perm p = perm_identity(n);
      for (auto [a, b] : pairs) std::swap(p[static_cast<size_t>(o + a)], p[static_cast<size_t>(o + b)]);
      gens.push_back(p);
    };
    if (c.family == Family::A && c.n >= 2) {
      std::vector<std::pair<int, int>> pr;
      for (int i = 0; i < c.n / 2; ++i) pr.push_back({i, c.n - 1 - i});
      swap_gen(pr);
    } else if (c.family == Family::D && c.n == 4) {
      swap_gen({{2, 3}});
      Perm p = perm_identity(n);  // leaves 0 -> 2 -> 3 -> 0
      p[static_cast<size_t>(o + 0)] = o + 2;
      p[static_cast<size_t>(o + 2)] = o + 3;
      p[static_cast<size_t>(o + 3)] = o + 0;
      gens.push_back(p);
    } else if (c.family == Family::D) {
      swap_gen({{c.n - 2, c.n - 1}});
    } else if (c.family == Family::E && c.n == 6) {
      swap_gen({{0, 4}, {1, 3}});
    }
    if (ci + 1 < cs.size() && cs[ci + 1] == c) {
      Perm p = perm_identity(n);
      for (int i = 0; i < c.n; ++i) std::swap(p[static_cast<size_t>(o + i)], p[static_cast<size_t>(o + c.n + i)]);
      gens.push_back(p);
    }
  }
  return gens;
}

AutGroup aut_configuration(const IntMatrix& gram) {
  DynkinIdentification id = identify_dynkin(gram);
  Perm from = perm_inverse(id.to_standard);
  AutGroup g;
  g.order = id.type.aut_order();
  for (const auto& s : aut_generators(id.type)) {
    Perm p(s.size());
    for (size_t i = 0; i < s.size(); ++i)
      p[i] = from[static_cast<size_t>(s[static_cast<size_t>(id.to_standard[i])])];
    g.gens.push_back(p);
  }
  return g;
}

// ------------------------------------------------------------ short vectors

namespace {

struct Overflow {};

using i128 = __int128;

i128 mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
i128 add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
i128 floor_div128(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2 for a positive definite Q.
struct Completion {
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> d;
};

Completion complete_squares(const IntMatrix& q) {
  size_t n = q.rows();
  RatMatrix a = to_rational(q);
  Completion c{std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)), std::vector<Rational>(n)};
  for (size_t i = 0; i < n; ++i) {
    if (a(i, i).sign() <= 0) throw std::domain_error("short_vectors: lattice is not negative definite");
    c.d[i] = a(i, i);
    for (size_t j = i + 1; j < n; ++j) c.mu[i][j] = a(i, j) / a(i, i);
    for (size_t k = i + 1; k < n; ++k)
      for (size_t l = k; l < n; ++l) {
        a(k, l) -= c.mu[i][k] * a(i, l);
        a(l, k) = a(k, l);
      }
  }
  return c;
}

class Enumerator {
 public:
  Enumerator(const IntMatrix& gram, long norm, bool first_only)
      : n_(gram.rows()), norm_(norm), first_only_(first_only) {
    q_.assign(n_, std::vector<int64_t>(n_));
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < n_; ++j) q_[i][j] = -gram(i, j).to_int64();
    IntMatrix qm(n_, n_);
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < n_; ++j) qm(i, j) = Integer(static_cast<long long>(q_[i][j]));
    comp_ = complete_squares(qm);
    x_.assign(n_, 0);
  }

  std::vector<std::vector<int64_t>> run() {
    if (n_ == 0) return {};
    try {
      setup_scaled();
      rec_int(n_ - 1, bigk_);
    } catch (const Overflow&) {
      out_.clear();
      found_ = false;
      rec_rat(n_ - 1, Rational(static_cast<long long>(-norm_)));
    }
    return out_;
  }

 private:
  void setup_scaled() {
    Integer dm(1), dd(1);
    for (size_t i = 0; i < n_; ++i) {
      dd = lcm(dd, comp_.d[i].den());
      for (size_t j = i + 1; j < n_; ++j) dm = lcm(dm, comp_.mu[i][j].den());
    }
    auto fit = [](const Integer& v) {
      if (!v.fits_int64()) throw Overflow{};
      return static_cast<i128>(v.to_int64());
    };
    dm_ = fit(dm);
    a_.assign(n_, std::vector<i128>(n_, 0));
    b_.assign(n_, 0);
    for (size_t i = 0; i < n_; ++i) {
      b_[i] = fit(div_exact(comp_.d[i].num() * dd, comp_.d[i].den()));
      for (size_t j = i + 1; j < n_; ++j) a_[i][j] = fit(div_exact(comp_.mu[i][j].num() * dm, comp_.mu[i][j].den()));
    }
    bigk_ = mul(mul(fit(dd), mul(dm_, dm_)), static_cast<i128>(-norm_));
  }

  void leaf() {
    i128 s = 0;
    for (size_t i = 0; i < n_; ++i) {
      if (!x_[i]) continue;
      i128 t = 0;
      for (size_t j = 0; j < n_; ++j) t += static_cast<i128>(q_[i][j]) * x_[j];
      s += t * x_[i];
    }
    if (s == static_cast<i128>(-norm_)) {
      out_.push_back(x_);
      found_ = true;
    }
  }

  void rec_int(size_t i, i128 rem) {
    i128 c = 0;
    for (size_t j = i + 1; j < n_; ++j) c = add(c, mul(a_[i][j], x_[j]));
    auto cost = [&](i128 x) {
      i128 y = add(mul(dm_, x), c);
      return mul(b_[i], mul(y, y));
    };
    i128 x0 = floor_div128(-c, dm_);
    i128 lo = x0 + 1, hi = x0;
    while (cost(lo - 1) <= rem) --lo;
    while (cost(hi + 1) <= rem) ++hi;
    for (i128 x = lo; x <= hi; ++x) {
      if (first_only_ && found_) return;
      x_[i] = static_cast<int64_t>(x);
      i128 r = rem - cost(x);
      if (i == 0)
        leaf();
      else
        rec_int(i - 1, r);
    }
    x_[i] = 0;
  }

  void rec_rat(size_t i, const Rational& rem) {
    Rational c(0);
    for (size_t j = i + 1; j < n_; ++j)
      if (x_[j]) c += comp_.mu[i][j] * Rational(static_cast<long long>(x_[j]));
    auto cost = [&](const Integer& x) {
      Rational y = Rational(x) + c;
      return comp_.d[i] * y * y;
    };
    Integer x0 = floor(-c);
    Integer lo = x0 + Integer(1), hi = x0;
    while (cost(lo - Integer(1)) <= rem) lo -= Integer(1);
    while (cost(hi + Integer(1)) <= rem) hi += Integer(1);
    for (Integer x = lo; x <= hi; x += Integer(1)) {
      if (first_only_ && found_) return;
      x_[i] = x.to_int64();
      Rational r = rem - cost(x);
      if (i == 0)
        leaf();
      else
        rec_rat(i - 1, r);
    }
    x_[i] = 0;
  }

  size_t n_;
  long norm_;
  bool first_only_;
  bool found_ = false;
  std::vector<std::vector<int64_t>> q_;
  Completion comp_;
  i128 dm_ = 1, bigk_ = 0;
  std::vector<std::vector<i128>> a_;
  std::vector<i128> b_;
  std::vector<int64_t> x_;
  std::vector<std::vector<int64_t>> out_;
};

}  // namespace

std::vector<IntVector> short_vectors(const IntMatrix& gram, long norm) {
  if (norm >= 0) throw std::invalid_argument("short_vectors: norm must be negative");
  Enumerator e(gram, norm, false);
  std::vector<IntVector> out;
  for (const auto& v : e.run()) {
    IntVector w;
    w.reserve(v.size());
    for (auto x : v) w.emplace_back(static_cast<long long>(x));
    out.push_back(std::move(w));
  }
  sort_canonical(out);
  return out;
}

bool has_short_vector(const IntMatrix& gram, long norm) {
  if (norm >= 0) throw std::invalid_argument("short_vectors: norm must be negative");
  Enumerator e(gram, norm, true);
  return !e.run().empty();
}

std::vector<IntVector> roots_of(const Lattice& ambient, const IntMatrix& basis) {
  std::vector<IntVector> out;
  for (const auto& v : short_vectors(gram_of(ambient, basis), -2)) out.push_back(v * basis);
  sort_canonical(out);
  return out;
}

// ------------------------------------------------------------ ADE bases

namespace {

Rational eval_form(const IntVector& r, const RatVector& form) {
  Rational s(0);
  for (size_t i = 0; i < r.size(); ++i)
    if (!r[i].is_zero() && !form[i].is_zero()) s += Rational(r[i]) * form[i];
  return s;
}

}  // namespace

std::vector<IntVector> ade_basis_from_linear_form(const std::vector<IntVector>& roots,
                                                  const RatVector& form, size_t expected_rank) {
  std::vector<IntVector> pos;
  for (const auto& r : roots) {
    int s = eval_form(r, form).sign();
    if (s == 0) throw std::invalid_argument("linear form vanishes on a root " + to_string(r));
    if (s > 0) pos.push_back(r);
  }
  VectorSet pset(pos.begin(), pos.end());
  std::vector<IntVector> simple;
  for (const auto& r : pos) {
    bool decomposable = false;
    for (const auto& s : pos) {
      if (s == r) continue;
      IntVector d(r.size());
      for (size_t i = 0; i < r.size(); ++i) d[i] = r[i] - s[i];
      if (pset.count(d)) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) simple.push_back(r);
  }
  if (simple.size() != expected_rank)
    throw std::logic_error("ADE basis has " + std::to_string(simple.size()) + " roots, expected " +
                           std::to_string(expected_rank));
  sort_canonical(simple);
  return simple;
}

RatVector generic_form(const std::vector<IntVector>& roots, const RatVector& base) {
  size_t n = base.size();
  std::mt19937_64 rng(0x5eed1234abcdULL);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    IntVector xi(n);
    for (size_t i = 0; i < n; ++i) xi[i] = Integer(static_cast<long long>(rng() % 2001) - 1000);
    bool ok = true;
    Rational min_base(-1), max_xi(0);
    for (const auto& r : roots) {
      Rational b = eval_form(r, base);
      Integer x = dot(r, xi);
      if (b.is_zero()) {
        if (x.is_zero()) {
          ok = false;
          break;
        }
      } else if (min_base.sign() < 0 || abs(b) < min_base) {
        min_base = abs(b);
      }
      if (abs(Rational(x)) > max_xi) max_xi = abs(Rational(x));
    }
    if (!ok) continue;
    RatVector f(n);
    if (min_base.sign() < 0) {
      for (size_t i = 0; i < n; ++i) f[i] = Rational(xi[i]);
      return f;
    }
    Rational m = Rational(floor(max_xi / min_base)) + Rational(1);
    for (size_t i = 0; i < n; ++i) f[i] = m * base[i] + Rational(xi[i]);
    return f;
  }
  throw std::runtime_error("generic_form: no generic perturbation found");
}

// ------------------------------------------------------ Weyl group words

RatVector apply_word(const Lattice& ambient, const ReflectionWord& w, RatVector x) {
  for (const auto& r : w) {
    Rational p = ambient.inner(x, to_rational(r));
    if (p.is_zero()) continue;
    for (size_t i = 0; i < x.size(); ++i)
      if (!r[i].is_zero()) x[i] += p * Rational(r[i]);
  }
  return x;
}

IntMatrix word_matrix(const Lattice& ambient, const ReflectionWord& w) {
  size_t n = ambient.rank();
  IntMatrix m = IntMatrix::identity(n);
  for (const auto& r : w) {
    // m <- m (I + (G r^T) r): the rows of m pick up <row, r> r
    IntVector gr = r * ambient.gram;
    for (size_t i = 0; i < n; ++i) {
      Integer p(0);
      for (size_t k = 0; k < n; ++k)
        if (!m(i, k).is_zero() && !gr[k].is_zero()) p += m(i, k) * gr[k];
      if (p.is_zero()) continue;
      for (size_t j = 0; j < n; ++j)
        if (!r[j].is_zero()) m(i, j) += p * r[j];
    }
  }
  return m;
}

namespace {

std::vector<Rational> pairings(const Lattice& ambient, const std::vector<IntVector>& roots, const RatVector& x) {
  RatVector xg = x * to_rational(ambient.gram);
  std::vector<Rational> out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(eval_form(r, xg));
  return out;
}

}  // namespace

ReflectionWord connecting_word(const Lattice& ambient, const std::vector<IntVector>& roots,
                               const RatVector& u, const RatVector& v) {
  std::vector<Rational> pu = pairings(ambient, roots, u), pv = pairings(ambient, roots, v);
  std::vector<size_t> cross;
  Rational min_v(-1);
  for (size_t k = 0; k < roots.size(); ++k) {
    if (pu[k].is_zero() || pv[k].is_zero()) throw std::invalid_argument("connecting_word: point lies on a wall");
    if (pu[k].sign() < 0 && pv[k].sign() > 0) cross.push_back(k);
    if (min_v.sign() < 0 || abs(pv[k]) < min_v) min_v = abs(pv[k]);
  }
  ReflectionWord word;
  if (!cross.empty()) {
    std::mt19937_64 rng(0x2c0ffee5ULL);
    size_t n = ambient.rank();
    bool done = false;
    for (int attempt = 0; attempt < 1000 && !done; ++attempt) {
      RatVector xi(n);
      for (size_t i = 0; i < n; ++i) xi[i] = Rational(static_cast<long long>(rng() % 1999) - 999);
      std::vector<Rational> px = pairings(ambient, roots, xi);
      Rational max_x(0);
      for (const auto& p : px)
        if (abs(p) > max_x) max_x = abs(p);
      // |eps <xi,r>| < |<v,r>| / 2 keeps v + eps xi in the chamber of v
      Rational eps = min_v / (Rational(2) * max_x + Rational(1));
      std::vector<std::pair<Rational, size_t>> ts;
      bool ok = true;
      for (size_t k : cross) {
        Rational d = pv[k] + eps * px[k];
        if (d.sign() <= 0) {
          ok = false;
          break;
        }
        ts.push_back({-pu[k] / d, k});
      }
      if (!ok) continue;
      std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (size_t i = 0; i + 1 < ts.size() && ok; ++i)
        if (ts[i].first == ts[i + 1].first) ok = false;
      if (!ok) continue;
      for (const auto& t : ts) word.push_back(roots[t.second]);
      done = true;
    }
    if (!done) throw std::runtime_error("connecting_word: no generic perturbation found");
  }
  // exact postcondition: u^g lies in the chamber of v
  std::vector<Rational> pg = pairings(ambient, roots, apply_word(ambient, word, u));
  for (size_t k = 0; k < roots.size(); ++k)
    if (pg[k].sign() != pv[k].sign()) throw std::logic_error("connecting_word: postcondition failed");
  return word;
}

RatVector chamber_point(const Lattice& ambient, const std::vector<IntVector>& simple) {
  size_t k = simple.size(), n = ambient.rank();
  IntMatrix s(k, n);
  for (size_t i = 0; i < k; ++i) s.set_row(i, simple[i]);
  RatMatrix gi = inverse(to_rational(gram_of(ambient, s)));
  RatVector a(k, Rational(0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) a[i] += gi(i, j);
  return a * to_rational(s);
}

ReflectionWord longest_element(const Lattice& ambient, const std::vector<IntVector>& roots,
                               const std::vector<IntVector>& simple) {
  RatVector c = chamber_point(ambient, simple);
  RatVector mc = c;
  for (auto& x : mc) x = -x;
  return connecting_word(ambient, roots, c, mc);
}

KappaResult kappa(const Lattice& ambient, const std::vector<IntVector>& roots,
                  const std::vector<IntVector>& simple, const IntMatrix& g) {
  RatVector c = chamber_point(ambient, simple);
  RatVector cg = c * to_rational(g);
  ReflectionWord h = connecting_word(ambient, roots, cg, c);
  KappaResult res{g * word_matrix(ambient, h), Perm(simple.size())};
  for (size_t i = 0; i < simple.size(); ++i) {
    int j = index_of(simple, simple[i] * res.element);
    if (j < 0) throw std::logic_error("kappa: image does not permute the ADE basis");
    res.perm[i] = j;
  }
  return res;
}

}  // namespace rdp

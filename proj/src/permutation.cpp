#include "rdp/permutation.hpp"

#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace rdp {

Perm perm_identity(size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm perm_compose(const Perm& p, const Perm& q) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = q[static_cast<size_t>(p[i])];
  return r;
}

Perm perm_inverse(const Perm& p) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[static_cast<size_t>(p[i])] = static_cast<int>(i);
  return r;
}

bool perm_is_identity(const Perm& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

std::string perm_string(const Perm& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

std::vector<Perm> perm_group_elements(const std::vector<Perm>& gens, size_t n, size_t limit) {
  std::vector<Perm> elems{perm_identity(n)};
  std::unordered_set<Perm, PermHash> seen(elems.begin(), elems.end());
  for (size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : gens) {
      Perm h = perm_compose(elems[i], g);
      if (seen.insert(h).second) {
        elems.push_back(std::move(h));
        if (elems.size() > limit) throw std::runtime_error("permutation group exceeds element limit");
      }
    }
  return elems;
}

std::vector<std::vector<int>> perm_orbits(const std::vector<Perm>& gens, size_t n) {
  UnionFind uf(n);
  for (const auto& g : gens)
    for (size_t i = 0; i < n; ++i) uf.unite(i, static_cast<size_t>(g[i]));
  std::vector<std::vector<int>> out;
  std::vector<int> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    size_t r = uf.find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[static_cast<size_t>(slot[r])].push_back(static_cast<int>(i));
  }
  return out;
}

UnionFind::UnionFind(size_t n) : parent_(n), comps_(n) {
  std::iota(parent_.begin(), parent_.end(), size_t{0});
}

size_t UnionFind::find(size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(size_t a, size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  // keep the smaller index as root so representatives are deterministic
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  --comps_;
  return true;
}

}  // namespace rdp

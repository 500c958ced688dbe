#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rdp {

// Permutation of {0..n-1} as an image list. Composition follows the right
// action convention: i^(pq) = (i^p)^q, so (p*q)[i] = q[p[i]].
using Perm = std::vector<int>;

Perm perm_identity(size_t n);
Perm perm_compose(const Perm& p, const Perm& q);
Perm perm_inverse(const Perm& p);
bool perm_is_identity(const Perm& p);
std::string perm_string(const Perm& p);

struct PermHash {
  size_t operator()(const Perm& p) const {
    size_t h = 1469598103934665603ull;
    for (int v : p) h = (h ^ static_cast<size_t>(v + 1)) * 1099511628211ull;
    return h;
  }
};

// All elements of the group generated by gens (acting on n points); throws
// if more than limit elements are found.
std::vector<Perm> perm_group_elements(const std::vector<Perm>& gens, size_t n, size_t limit = 50000000);

// Orbits of a group given by generators as a list of point lists.
std::vector<std::vector<int>> perm_orbits(const std::vector<Perm>& gens, size_t n);

// Disjoint-set forest used for orbit computations.
class UnionFind {
 public:
  explicit UnionFind(size_t n);
  size_t find(size_t x);
  bool unite(size_t a, size_t b);
  size_t components() const { return comps_; }

 private:
  std::vector<size_t> parent_;
  size_t comps_;
};

}  // namespace rdp

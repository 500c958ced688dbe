#pragma once

#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rdp {

struct OrbitCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Point, class Elem>
struct OrbitStabilizerResult {
  std::vector<Point> orbit;        // orbit[0] = s0
  std::vector<Elem> transversal;   // s0^{transversal[i]} = orbit[i]
  std::vector<Elem> stabilizer;    // Schreier generators, deduplicated, no identity
};

// Orbit of s0 under the group generated by gens, with a transversal and
// Schreier generators of the stabilizer. act(p, i) applies gens[i] to p;
// mul(a, b) is the product "a then b".
template <class Point, class Elem, class PointHash, class ElemHash, class Act, class Mul, class Inv>
OrbitStabilizerResult<Point, Elem> orbit_stabilizer(const Point& s0, const std::vector<Elem>& gens,
                                                    const Elem& identity, Act act, Mul mul, Inv inv,
                                                    size_t cap) {
  OrbitStabilizerResult<Point, Elem> res;
  std::unordered_map<Point, size_t, PointHash> where;
  std::unordered_set<Elem, ElemHash> seen_stab;
  res.orbit.push_back(s0);
  res.transversal.push_back(identity);
  where.emplace(s0, 0);
  for (size_t i = 0; i < res.orbit.size(); ++i) {
    for (size_t g = 0; g < gens.size(); ++g) {
      Point p = act(res.orbit[i], g);
      auto it = where.find(p);
      if (it == where.end()) {
        if (res.orbit.size() >= cap) throw OrbitCapExceeded("orbit exceeds cap");
        where.emplace(p, res.orbit.size());
        res.orbit.push_back(std::move(p));
        res.transversal.push_back(mul(res.transversal[i], gens[g]));
        continue;
      }
      Elem s = mul(mul(res.transversal[i], gens[g]), inv(res.transversal[it->second]));
      if (s == identity || !seen_stab.insert(s).second) continue;
      res.stabilizer.push_back(std::move(s));
    }
  }
  return res;
}

}  // namespace rdp

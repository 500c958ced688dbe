#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rdp/lattice.hpp"
#include "rdp/orbit.hpp"
#include "rdp/permutation.hpp"

namespace rdp {

// A finite quadratic form q : A -> Q/2Z on A = Z/orders[0] x ... x Z/orders[k-1].
class FiniteQuadraticForm {
 public:
  using Element = std::vector<long>;

  FiniteQuadraticForm() = default;
  // q[i] = q(g_i) mod 2 and b[i][j] = b(g_i, g_j) mod 1; validated and normalized.
  FiniteQuadraticForm(std::vector<long> orders, std::vector<Rational> q,
                      std::vector<std::vector<Rational>> b);

  size_t rank() const { return orders_.size(); }
  const std::vector<long>& orders() const { return orders_; }
  long exponent() const { return exponent_; }
  size_t size() const { return size_; }
  const Rational& q(size_t i) const { return q_[i]; }
  const Rational& b(size_t i, size_t j) const { return b_[i][j]; }

  Element zero() const { return Element(orders_.size(), 0); }
  Element generator(size_t i) const;
  Element add(const Element& x, const Element& y) const;
  Element sub(const Element& x, const Element& y) const;
  Element scale(const Element& x, long k) const;
  long order_of(const Element& x) const;

  // q(x) * exponent mod 2 * exponent, and b(x, y) * exponent mod exponent.
  long value_num(const Element& x) const;
  long pairing_num(const Element& x, const Element& y) const;
  Rational value(const Element& x) const;
  Rational pairing(const Element& x, const Element& y) const;

  // Mixed-radix indexing of all elements, index 0 is zero.
  size_t index(const Element& x) const;
  Element element(size_t idx) const;

  bool is_nondegenerate() const;
  FiniteQuadraticForm negated() const;
  // The p-primary part on generators (order/p^k) g_i.
  FiniteQuadraticForm p_part(long p) const;
  std::vector<long> primes() const;
  // Number of generators of the p-part (minimal), or of A when p = 0.
  size_t length(long p = 0) const;

  std::string to_json() const;
  static FiniteQuadraticForm from_json(const std::string& text);

 private:
  std::vector<long> orders_;
  std::vector<Rational> q_;
  std::vector<std::vector<Rational>> b_;
  long exponent_ = 1;
  size_t size_ = 1;
  std::vector<long> qn_;
  std::vector<std::vector<long>> bn_;
  std::vector<size_t> stride_;
};

// Discriminant form of an even nondegenerate lattice together with the
// conversion between dual vectors and group elements.
struct Discriminant {
  Lattice lattice;
  FiniteQuadraticForm form;
  RatMatrix lifts;  // row i is a dual vector representing generator i

  FiniteQuadraticForm::Element element_of(const RatVector& dual) const;  // throws if not in L^vee
  RatVector lift(const FiniteQuadraticForm::Element& x) const;
  // Images of the generators under an isometry g of the lattice.
  std::vector<FiniteQuadraticForm::Element> generator_images(const IntMatrix& g) const;
  // Permutation of element indices induced by g.
  Perm action(const IntMatrix& g) const;

  RatMatrix gram_inv;
  ModularSmith smith;  // of the Gram matrix, modulo |det|
  struct Piece {
    size_t factor;  // index into smith.invariants
    long order;     // prime power
    long cofactor;  // smith.invariants[factor] / order
    long inv;       // cofactor^{-1} mod order
  };
  std::vector<Piece> pieces;
};
Discriminant discriminant_form(const Lattice& l);  // throws for odd lattices

// Even overlattice L + lifts(H) for a totally isotropic subgroup H, given by
// generators. basis is in L-coordinates; gram is the Gram matrix of that basis.
struct Overlattice {
  RatMatrix basis;
  Lattice lattice;
  Integer index;
};
Overlattice overlattice_from_isotropic(const Discriminant& d,
                                       const std::vector<FiniteQuadraticForm::Element>& gens);

// Subsets of element indices as bitsets.
using Bits = std::vector<uint64_t>;
struct BitsHash {
  size_t operator()(const Bits& b) const {
    size_t h = 0xcbf29ce484222325ull;
    for (uint64_t w : b) h = (h ^ w) * 0x100000001b3ull;
    return h;
  }
};

// Element-index tables for fast subgroup work.
class ElementTable {
 public:
  explicit ElementTable(const FiniteQuadraticForm& f);
  const FiniteQuadraticForm& form() const { return form_; }
  size_t size() const { return form_.size(); }
  size_t add(size_t a, size_t b) const;
  bool isotropic(size_t a) const { return isotropic_[a]; }
  bool orthogonal(size_t a, size_t b) const;
  // Subgroup generated by bits and x; bits must be a subgroup.
  Bits extend(const Bits& bits, size_t x) const;
  Bits zero_subgroup() const;
  static bool test(const Bits& b, size_t i) { return b[i >> 6] >> (i & 63) & 1; }
  static void set(Bits& b, size_t i) { b[i >> 6] |= uint64_t{1} << (i & 63); }
  static size_t count(const Bits& b);
  static std::vector<size_t> members(const Bits& b);
  static Bits image(const Bits& b, const Perm& p);

 private:
  FiniteQuadraticForm form_;
  std::vector<FiniteQuadraticForm::Element> elems_;
  std::vector<bool> isotropic_;
};

template <class Elem>
struct IsotropicOrbit {
  Bits members;
  std::vector<size_t> gens;     // element indices generating the subgroup
  size_t order = 1;             // |H|
  size_t orbit_size = 1;
  std::vector<Elem> stabilizer; // empty unless requested
};

// Orbit representatives of totally isotropic subgroups under the group
// generated by gens, which act on elements by gen_perms. accept must be
// invariant under the group and closed under passing to subgroups; only
// accepted subgroups are reported and enlarged. Output is ordered by |H|
// and then by discovery.
template <class Elem, class ElemHash, class Mul, class Inv>
std::vector<IsotropicOrbit<Elem>> isotropic_subgroups(
    const ElementTable& table, const std::vector<Elem>& gens, const std::vector<Perm>& gen_perms,
    const Elem& identity, Mul mul, Inv inv,
    const std::function<bool(const std::vector<size_t>&, const Bits&)>& accept,
    bool with_stabilizers, size_t cap = 50000000) {
  std::vector<IsotropicOrbit<Elem>> reps;
  std::unordered_set<Bits, BitsHash> seen;
  auto act = [&](const Bits& b, size_t g) { return ElementTable::image(b, gen_perms[g]); };
  auto add_orbit = [&](Bits start, std::vector<size_t> gens_idx) {
    IsotropicOrbit<Elem> rep;
    rep.members = start;
    rep.gens = std::move(gens_idx);
    rep.order = ElementTable::count(start);
    if (with_stabilizers) {
      auto os = orbit_stabilizer<Bits, Elem, BitsHash, ElemHash>(start, gens, identity, act, mul, inv, cap);
      rep.orbit_size = os.orbit.size();
      for (auto& p : os.orbit) seen.insert(std::move(p));
      rep.stabilizer = std::move(os.stabilizer);
    } else {
      std::vector<Bits> orbit{start};
      seen.insert(start);
      for (size_t i = 0; i < orbit.size(); ++i)
        for (size_t g = 0; g < gens.size(); ++g) {
          Bits p = act(orbit[i], g);
          if (seen.insert(p).second) {
            orbit.push_back(std::move(p));
            if (seen.size() > cap) throw OrbitCapExceeded("isotropic subgroup count exceeds cap");
          }
        }
      rep.orbit_size = orbit.size();
    }
    reps.push_back(std::move(rep));
  };
  Bits zero = table.zero_subgroup();
  if (!accept({}, zero)) return reps;
  add_orbit(zero, {});
  std::vector<size_t> iso;
  for (size_t x = 1; x < table.size(); ++x)
    if (table.isotropic(x)) iso.push_back(x);
  for (size_t r = 0; r < reps.size(); ++r) {
    const Bits base = reps[r].members;
    const std::vector<size_t> base_gens = reps[r].gens;
    auto base_members = ElementTable::members(base);
    for (size_t x : iso) {
      if (ElementTable::test(base, x)) continue;
      bool ortho = true;
      for (size_t g : base_gens)
        if (!table.orthogonal(x, g)) {
          ortho = false;
          break;
        }
      if (!ortho) continue;
      Bits child = table.extend(base, x);
      if (seen.count(child)) continue;
      std::vector<size_t> child_gens = base_gens;
      child_gens.push_back(x);
      if (!accept(child_gens, child)) {
        seen.insert(child);
        continue;
      }
      add_orbit(std::move(child), std::move(child_gens));
    }
  }
  std::stable_sort(reps.begin(), reps.end(),
                   [](const IsotropicOrbit<Elem>& a, const IsotropicOrbit<Elem>& b) { return a.order < b.order; });
  return reps;
}

// Signature residue mod 8 from the exact Gauss sum sum_x exp(pi i q(x)).
int milgram_signature(const FiniteQuadraticForm& q);

struct JordanComponent {
  long p;
  int k;          // level p^k
  int dim;        // 1, or 2 for the even 2-adic blocks
  long unit;      // p odd: numerator class mod p; p = 2: determinant unit mod 8
  bool odd_level1 = false;  // p = 2, dim 1, k = 1
};
std::vector<JordanComponent> jordan_decomposition(const FiniteQuadraticForm& q, long p);

struct GenusVerdict {
  bool exists = false;
  std::string reason;  // obstruction, empty when exists
};
GenusVerdict even_lattice_exists(int s_plus, int s_minus, const FiniteQuadraticForm& q);
bool primitively_embeds_in_unimodular(const Lattice& l, int h_plus, int h_minus);

// Doubly-even binary codes of length n up to coordinate permutation; codewords
// are bitmasks, each code listed as its sorted set of words.
using BinaryCode = std::vector<uint32_t>;
std::vector<BinaryCode> classify_doubly_even_codes(int n);
int code_dimension(const BinaryCode& c);

}  // namespace rdp

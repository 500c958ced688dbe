#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "rdp/lattice.hpp"
#include "rdp/permutation.hpp"

namespace rdp {

struct IntVectorHash {
  size_t operator()(const IntVector& v) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& x : v) h = (h ^ x.hash()) * 0x100000001b3ull;
    return h;
  }
};
using VectorSet = std::unordered_set<IntVector, IntVectorHash>;

// Lexicographic order on coordinates, the canonical order of vector sets.
bool lex_less(const IntVector& a, const IntVector& b);
void sort_canonical(std::vector<IntVector>& vs);

enum class Family { A, D, E };

struct Component {
  Family family;
  int n;
  std::string str() const;
  int rank() const { return n; }
  friend bool operator==(const Component& a, const Component& b) {
    return a.family == b.family && a.n == b.n;
  }
  friend bool operator<(const Component& a, const Component& b) {
    return a.family != b.family ? a.family < b.family : a.n < b.n;
  }
};

// Multiset of ADE components, kept sorted A < D < E and by rank.
class ADEType {
 public:
  ADEType() = default;
  explicit ADEType(std::vector<Component> comps);
  static ADEType parse(const std::string& s);  // "2A1+A3", "A1+E7", "0" for empty

  const std::vector<Component>& components() const { return comps_; }
  int rank() const;
  std::string str() const;
  bool empty() const { return comps_.empty(); }
  // Cartan-type Gram matrix (-2 diagonal, +1 on edges) in the standard labeling.
  IntMatrix gram() const;
  // Orders of the automorphism group of the diagram and of the Weyl group.
  Integer aut_order() const;
  Integer weyl_order() const;
  int positive_root_count() const;

  friend bool operator==(const ADEType& a, const ADEType& b) { return a.comps_ == b.comps_; }
  friend bool operator!=(const ADEType& a, const ADEType& b) { return !(a == b); }
  friend bool operator<(const ADEType& a, const ADEType& b);

 private:
  std::vector<Component> comps_;
};

struct NotADE : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dynkin identification of a configuration given by its Gram matrix.
// to_standard[i] is the index of root i in the standard labeling of type.gram().
struct DynkinIdentification {
  ADEType type;
  Perm to_standard;
  std::vector<std::vector<int>> components;  // root indices per component, standard order
};
DynkinIdentification identify_dynkin(const IntMatrix& gram);  // throws NotADE
ADEType ade_type_of(const IntMatrix& gram);

// All ADE types with 1 <= rank <= max_rank, in canonical order.
std::vector<ADEType> enumerate_ade_types(int max_rank);

// Generators of the diagram automorphism group of type.gram() (standard labels).
std::vector<Perm> aut_generators(const ADEType& type);

struct AutGroup {
  std::vector<Perm> gens;  // permutations of the configuration's indices
  Integer order;
};
// Full pairing-preserving permutation group of a configuration.
AutGroup aut_configuration(const IntMatrix& gram);

// {v : <v,v> = norm} for a negative-definite Gram matrix, canonically sorted.
std::vector<IntVector> short_vectors(const IntMatrix& gram, long norm);
bool has_short_vector(const IntMatrix& gram, long norm);

// Roots of a negative-definite lattice given by a basis inside an ambient
// lattice, returned in ambient coordinates.
std::vector<IntVector> roots_of(const Lattice& ambient, const IntMatrix& basis);

// A root system inside some ambient lattice: a basis of the root sublattice
// R together with all roots, in ambient coordinates.
struct RootSystem {
  Lattice ambient;
  std::vector<IntVector> roots;
};

// Linear form l(x) = dot(x, form); returns the indecomposable positive roots.
std::vector<IntVector> ade_basis_from_linear_form(const std::vector<IntVector>& roots,
                                                  const RatVector& form, size_t expected_rank);

// A form that is nonzero on every root and has the sign of base wherever
// base is nonzero. Deterministic.
RatVector generic_form(const std::vector<IntVector>& roots, const RatVector& base);

using ReflectionWord = std::vector<IntVector>;

// A word g = s_{r1}...s_{rN} in the roots with Gamma(u)^g = Gamma(v).
// u, v are rational vectors of the ambient lattice; the roots list is Roots(R).
ReflectionWord connecting_word(const Lattice& ambient, const std::vector<IntVector>& roots,
                               const RatVector& u, const RatVector& v);

IntMatrix word_matrix(const Lattice& ambient, const ReflectionWord& w);
RatVector apply_word(const Lattice& ambient, const ReflectionWord& w, RatVector x);

// Sum of the dual basis of a simple-root set inside its own span, ambient coords.
RatVector chamber_point(const Lattice& ambient, const std::vector<IntVector>& simple);

// The longest element of W(R) for an ADE basis.
ReflectionWord longest_element(const Lattice& ambient, const std::vector<IntVector>& roots,
                               const std::vector<IntVector>& simple);

struct KappaResult {
  IntMatrix element;  // g h, which maps the chamber of simple to itself
  Perm perm;          // simple[i]^{gh} = simple[perm[i]]
};
// The splitting O(R) -> Aut(basis) applied to g, an isometry of the ambient lattice preserving R.
KappaResult kappa(const Lattice& ambient, const std::vector<IntVector>& roots,
                  const std::vector<IntVector>& simple, const IntMatrix& g);

// Index of v in a list, or -1.
int index_of(const std::vector<IntVector>& vs, const IntVector& v);

}  // namespace rdp

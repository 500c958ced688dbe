#pragma once

#include <string>
#include <vector>

#include "rdp/matrix.hpp"

namespace rdp {

// A lattice given by its Gram matrix in a fixed basis. Elements are written
// as integer row vectors in that basis; rational vectors live in L (x) Q.
struct Lattice {
  IntMatrix gram;

  Lattice() = default;
  explicit Lattice(IntMatrix g);

  size_t rank() const { return gram.rows(); }
  Integer inner(const IntVector& x, const IntVector& y) const;
  Rational inner(const RatVector& x, const RatVector& y) const;
  Integer norm(const IntVector& x) const { return inner(x, x); }
  Rational norm(const RatVector& x) const { return inner(x, x); }
  bool is_even() const;
  Integer det() const;
  // x * G, the functional <x, .> in dual coordinates.
  IntVector pairing_row(const IntVector& x) const;
  RatVector pairing_row(const RatVector& x) const;
};

struct Signature {
  int pos = 0;
  int neg = 0;
  int zero = 0;
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.pos == b.pos && a.neg == b.neg && a.zero == b.zero;
  }
};

// Exact signature by congruence diagonalization over Z.
Signature signature(const IntMatrix& gram);

struct SmithForm {
  IntMatrix U, D, V;  // U * A * V = D, U and V unimodular
  std::vector<Integer> invariants() const;  // nonzero diagonal entries
  size_t rank() const;
};
SmithForm smith_normal_form(const IntMatrix& a);

// Smith form of a square nonsingular matrix computed modulo a multiple m of
// its exponent (m = |det| works): x -> (x v mod m)_i mod invariants[i] maps
// Z^n / Z^n a onto the direct sum of cyclic groups. v and v_inv are inverse mod m.
struct ModularSmith {
  long modulus = 1;
  std::vector<long> invariants;
  std::vector<std::vector<long>> v, v_inv;
};
ModularSmith modular_smith(const IntMatrix& a, long m);
ModularSmith modular_smith(const IntMatrix& a);  // m = |det a|

// Basis (Hermite normal form rows) of the Z-span of the given rows.
IntMatrix hermite_basis(const IntMatrix& gens);
// Same for rational generators; the result spans the same Z-module.
RatMatrix hermite_basis(const RatMatrix& gens);

// Rows x with x * a = 0; the result is a primitive basis.
IntMatrix left_kernel(const IntMatrix& a);

// Gram matrix B G B^T of the lattice spanned by the rows of B.
IntMatrix gram_of(const Lattice& l, const IntMatrix& basis);
RatMatrix gram_of(const Lattice& l, const RatMatrix& basis);
Lattice sublattice(const Lattice& l, const IntMatrix& basis);

// Dual basis of L in L-coordinates: the rows of G^{-1}.
RatMatrix dual_basis(const Lattice& l);

struct Closure {
  IntMatrix basis;  // basis of (S (x) Q) cap L, ambient coordinates
  Integer index;    // [closure : S]
};
Closure primitive_closure(const IntMatrix& sub_basis);
bool is_primitive(const IntMatrix& sub_basis);

struct Complement {
  IntMatrix basis;  // ambient coordinates
  bool degenerate = false;
};
Complement orthogonal_complement(const Lattice& l, const IntMatrix& sub_basis);

Lattice rescale(const Lattice& l, const Integer& k);
Lattice direct_sum(const Lattice& a, const Lattice& b);

// g acts by x -> x g; it is an isometry iff g G g^T = G.
bool is_isometry(const Lattice& l, const IntMatrix& g);
// g^{-1} = G g^T G^{-1} for an isometry of a nondegenerate lattice.
IntMatrix isometry_inverse(const Lattice& l, const IntMatrix& g);

// Matrix of x -> x + <x,r> r, the reflection in a root of norm -2.
IntMatrix reflection(const Lattice& l, const IntVector& r);

}  // namespace rdp

#pragma once

#include <string>
#include <vector>

#include "rdp/discriminant.hpp"
#include "rdp/e10.hpp"
#include "rdp/roots.hpp"

namespace rdp {

// Root data of a negative-definite lattice given by its Gram matrix.
struct RootInfo {
  std::vector<IntVector> roots;  // lattice coordinates
  std::vector<IntVector> basis;  // an ADE basis of the root sublattice
  ADEType type;
  bool root_lattice = false;  // the roots generate the lattice
};
RootInfo root_info(const IntMatrix& gram);

// (sharp): root lattice whose type is that of a sub-diagram of E10.
struct SharpVerdict {
  bool holds = false;
  ADEType type;
  bool root_lattice = false;
};
SharpVerdict condition_sharp(const IntMatrix& gram);

// An even overlattice of <Phi> up to Aut(Phi). Phi is the standard basis of
// type.gram(); the overlattice basis is in Phi-coordinates.
struct OverlatticeOrbit {
  std::vector<size_t> subgroup;  // generators, as element indices of q_<Phi>
  size_t index = 1;
  RatMatrix basis;
  Lattice lattice;
  SharpVerdict sharp;
  std::vector<Perm> stabilizer;  // Stab(Rbar, Phi) inside Aut(Phi)
  size_t orbit_size = 1;
};
std::vector<OverlatticeOrbit> overlattices_up_to_aut(const ADEType& phi);

struct EmbeddingClass {
  ADEType tau_phi;
  ADEType tau_rbar;
  SigmaMask sigma = 0;
  std::vector<IntVector> phi_f;  // Phi_f in L10 coordinates, standard order of tau_phi
  IntMatrix phi0;                // Rbar-basis to L10 coordinates (rows)
  RatMatrix rbar_basis;          // Rbar in Phi-coordinates
  std::vector<Perm> stab_rbar;   // Stab(Rbar, Phi) in Aut(Phi)
  std::vector<Perm> h_phi;       // H_Phi on sigma_indices(sigma)
  size_t double_cosets = 0;
  std::string key() const { return tau_phi.str() + "/" + tau_rbar.str(); }
};

// Number of double cosets H_phi \ G / H_sigma of a finite permutation group G.
size_t double_coset_count(const std::vector<Perm>& group_elems, const std::vector<Perm>& left,
                          const std::vector<Perm>& right);

// The embedding classes for one Phi; sigma_stab(s) must return H_Sigma.
std::vector<EmbeddingClass> classify_phi(const ADEType& phi,
                                         const std::function<SigmaStabilizer(SigmaMask)>& sigma_stab);

// All classes with |Phi| < 10, ordered by (tau_phi, tau_rbar).
std::vector<EmbeddingClass> classify_configurations(unsigned threads, const std::string& cache_dir = "");

// (tau(Phi_f), tau(primitive closure)) for roots of L10.
std::pair<ADEType, ADEType> embedding_key(const std::vector<IntVector>& phi_f);

// Types of full-rank closed root subsystems of a root lattice of type t.
std::vector<ADEType> full_rank_subsystems(const ADEType& t);

}  // namespace rdp

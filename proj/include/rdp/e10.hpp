#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdp/lattice.hpp"
#include "rdp/roots.hpp"

namespace rdp {

// Subsets of E10 = {e1, ..., e10}; bit i stands for e_{i+1}.
using SigmaMask = uint16_t;
constexpr SigmaMask kFullMask = 0x3ff;
constexpr SigmaMask kFirstNineMask = 0x1ff;

struct E10Basis {
  Lattice lattice;   // standard basis e1..e10
  RatMatrix dual;    // row i is e_{i+1}^vee
  RatVector c0;      // sum of the dual basis
};
const E10Basis& build_l10();

bool in_S(SigmaMask s);
std::vector<SigmaMask> enumerate_S();  // increasing bitmask order

int sigma_size(SigmaMask s);
std::vector<size_t> sigma_indices(SigmaMask s);
std::vector<IntVector> sigma_roots(SigmaMask s);  // the e_i in s, in index order
IntMatrix sigma_basis(SigmaMask s);
ADEType sigma_type(SigmaMask s);
std::string sigma_string(SigmaMask s);  // "e1,e4"
// Accepts "e1,e4", "1,4" or a decimal/hex bitmask such as "9" or "0x9".
SigmaMask parse_sigma(const std::string& text);

// Roots of <Xi> and the longest element of W(Xi, L10) as a matrix.
struct WallData {
  std::vector<IntVector> roots;
  IntMatrix xi;
};
const WallData& wall_data(SigmaMask xi);

struct ChamberRecord {
  IntMatrix gamma;
  SigmaMask sigma = 0;
};

// <sigma(D)>^{gamma(D)} = <walk_sigma>.
bool chamber_sound(SigmaMask walk_sigma, const ChamberRecord& d);

// The chamber across the wall of the induced chamber indexed by xi.
ChamberRecord adjacent_chamber(SigmaMask walk_sigma, const ChamberRecord& d, SigmaMask xi);

struct SigmaOrbitData {
  SigmaMask sigma = 0;
  std::vector<SigmaMask> sigma_list;  // discovery order, sigma_list[0] = sigma
  std::vector<IntMatrix> gamma_list;
  std::vector<IntMatrix> gens;        // G_Sigma, identity removed, deduplicated
};
SigmaOrbitData orbit_of_sigma(SigmaMask s);

struct SigmaStabilizer {
  std::vector<IntMatrix> gens;  // kappa~(G_Sigma); each maps Sigma to itself
  std::vector<Perm> h_gens;     // H_Sigma on sigma_indices(s), identity removed
  Integer h_order;
};
SigmaStabilizer stab_sigma(SigmaMask s, const SigmaOrbitData& data);

// orbit_of_sigma through a per-Sigma JSON file in cache_dir (if non-empty).
SigmaOrbitData cached_orbit(SigmaMask s, const std::string& cache_dir);

// Walk data for every element of S, index-aligned with enumerate_S().
std::vector<SigmaOrbitData> all_orbits(unsigned threads, const std::string& cache_dir = "");

// The first element of S of each type, keyed by the canonical type string.
const std::vector<std::pair<ADEType, SigmaMask>>& sigma_types();
SigmaMask sigma_of_type(const ADEType& t);  // throws if t is not in tau(S)
bool in_tau_S(const ADEType& t);

struct SigmaClass {
  ADEType type;
  std::vector<SigmaMask> members;  // increasing
};
struct NNClassification {
  std::vector<SigmaClass> classes;  // ordered by type
  bool symmetric = false;           // Sigma' ~ Sigma iff Sigma ~ Sigma'
  bool matches_types = false;       // classes coincide with ADE types
};
NNClassification classify_nn(const std::vector<SigmaOrbitData>& orbits);

std::string orbit_to_json(const SigmaOrbitData& d);
SigmaOrbitData orbit_from_json(const std::string& text);

}  // namespace rdp

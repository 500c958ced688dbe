#pragma once

#include <string>
#include <vector>

#include "rdp/discriminant.hpp"
#include "rdp/embeddings.hpp"
#include "rdp/stabilizers.hpp"

namespace rdp {

// B_Phi = L10(2) + <Phi^->(2) in coordinates (e_1..e_10, r_1^-..r_n^-), and the
// overlattice M_f generated by B_Phi and r'_i = (r_i^+ + r_i^-)/2.
struct MfRecord {
  size_t n = 0;
  Lattice b_phi;
  RatMatrix basis;  // M_f in B-coordinates
  Lattice m_f;      // Gram of that basis
  std::vector<RatVector> r_prime, r_dprime;
  std::vector<std::vector<int>> components;  // Dynkin components of Phi, as indices
};
MfRecord build_mf(const EmbeddingClass& ec);

// Direct evaluation of the conditions on an even overlattice of M_f given by a
// basis in B-coordinates.
bool check_C1(const Lattice& mbar);
bool check_C2(const MfRecord& mf, const RatMatrix& mbar);
bool check_C3(const MfRecord& mf, const RatMatrix& mbar);
bool check_C4(const MfRecord& mf, const EmbeddingClass& ec, const RatMatrix& mbar);

// N(Mbar): vectors of Mbar with zero L10 part, as a basis in B-coordinates.
RatMatrix n_part(const MfRecord& mf, const RatMatrix& mbar);

// For each root r of R_f, the number of t in T(Mbar) with (r + t)/2 in Mbar;
// each such t gives the lift pair (r + t)/2, (r - t)/2.
std::vector<size_t> rf_lift_counts(const MfRecord& mf, const EmbeddingClass& ec, const RatMatrix& mbar);

// U(M_f) generators in M_f coordinates: g + g^- for g in G'_Phi, then u_1..u_c.
std::vector<IntMatrix> u_mf_generators(const EmbeddingClass& ec, const MfRecord& mf,
                                       const std::vector<IntMatrix>& stab_gens);

struct StrongClass {
  std::string class_key;
  RatMatrix basis;                  // Mbar in B-coordinates
  Lattice mbar;
  std::vector<Integer> q_invariants;  // Mbar / M_f, descending
  std::string q;                    // abbreviated
  size_t orbit_size = 1;            // subgroups of q_{M_f} in the U(M_f)-orbit
};

// "0", "2", "22", "42", ...
std::string q_abbreviation(const std::vector<Integer>& invariants);

struct StrongResult {
  std::vector<StrongClass> classes;
  size_t candidates = 0;        // orbits passing C2, C3, C4
  std::vector<std::string> c1_failures;  // obstruction per rejected orbit
};
StrongResult enumerate_strong_classes(const EmbeddingClass& ec, const std::vector<IntMatrix>& stab_gens);

struct Table1Row {
  size_t no = 0;
  ADEType tau_phi, tau_rbar;
  std::vector<StrongClass> strong;
  bool computed = true;  // false when the class was skipped for its chamber budget
};
struct StrongClassification {
  std::vector<Table1Row> rows;
  size_t strong_total = 0;
  size_t realizable = 0;
  std::vector<std::string> skipped;  // class keys over the chamber budget
};
// Per-class results are cached in cache_dir (strong_<key>.json) next to the
// stabilizers, so an interrupted run resumes where it stopped.
StrongClassification classify_strong(unsigned threads, const std::string& cache_dir = "", size_t max_chambers = 0);

std::string table1_csv(const StrongClassification& c);
std::string table1_json(const StrongClassification& c);

}  // namespace rdp

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdp/embeddings.hpp"
#include "rdp/orbit.hpp"

namespace rdp {

// A finite generating set G'_Phi of Stab(Phi_f, L10).
struct PhiStabilizer {
  std::vector<IntMatrix> gens;    // each maps Phi_f to itself as a set
  std::optional<Integer> order;   // known when the group is finite and was computed
  std::string method;             // "sieve" or "unimodular"
  size_t chambers = 0;            // Weyl chambers of Rbar inside Gamma(Phi_f)
};

// |W(Rbar)| / |W(R_f)|, the number of chambers the sieve visits.
Integer chamber_count(const EmbeddingClass& ec);

// Coset sieve over W(Sigma, L10); hs must be stab_sigma(ec.sigma).
PhiStabilizer stab_phi_f(const EmbeddingClass& ec, const SigmaStabilizer& hs);

// Sigma with an E8 component E: L10 = <E> + U, Stab(Phi_f) = Stab_O(E)(Phi_E) x Stab_O+(U)(Phi_U).
bool has_unimodular_shortcut(const EmbeddingClass& ec);
PhiStabilizer stab_unimodular_shortcut(const EmbeddingClass& ec);  // throws without an E8 component

// Shortcut when available and the sieve would visit more than budget chambers.
PhiStabilizer stabilizer_of(const EmbeddingClass& ec, const SigmaStabilizer& hs, size_t budget = 500000);

// Order of a finite matrix group by closure; nullopt past the cap.
std::optional<size_t> matrix_group_order(const std::vector<IntMatrix>& gens, size_t cap = 2000000);

struct ChamberBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// stabilizer_of through a per-class JSON file in dir (no caching when dir is
// empty). Cached generators are re-verified on load. With max_chambers > 0 a
// class whose sieve needs more chambers and has no shortcut throws
// ChamberBudgetExceeded; the shortcut is then used above max_chambers.
std::string stabilizer_cache_name(const std::string& class_key);
PhiStabilizer cached_stabilizer(const EmbeddingClass& ec, const SigmaStabilizer& hs, const std::string& dir,
                                size_t max_chambers = 0);

std::string stabilizer_to_json(const std::string& class_key, const PhiStabilizer& s);
PhiStabilizer stabilizer_from_json(const std::string& text);

}  // namespace rdp

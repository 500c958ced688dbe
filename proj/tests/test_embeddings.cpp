#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "rdp/embeddings.hpp"

using namespace rdp;

namespace {

IntMatrix gram(const std::string& t) { return ADEType::parse(t).gram(); }

std::vector<EmbeddingClass> classify_all() {
  static std::vector<EmbeddingClass> all = classify_configurations(1);
  return all;
}

SigmaStabilizer direct_stab(SigmaMask s) { return stab_sigma(s, orbit_of_sigma(s)); }

}  // namespace

TEST_SUITE("embeddings") {
  TEST_CASE("root lattice data") {
    RootInfo e8 = root_info(gram("E8"));
    CHECK(e8.roots.size() == 240);
    CHECK(e8.type.str() == "E8");
    CHECK(e8.root_lattice);
    RootInfo a = root_info(gram("2A1+A3"));
    CHECK(a.roots.size() == 16);
    CHECK(a.type.str() == "2A1+A3");
    CHECK(root_info(rescale(Lattice(gram("A2")), Integer(2)).gram).roots.empty());
  }

  TEST_CASE("condition sharp") {
    CHECK_FALSE(condition_sharp(gram("8A1")).holds);
    CHECK(condition_sharp(gram("A1+E7")).holds);
    CHECK_FALSE(condition_sharp(gram("2D4")).holds);
    CHECK(condition_sharp(gram("E8")).holds);
    CHECK(condition_sharp(gram("A9")).holds);
    CHECK(condition_sharp(gram("A1+A2+A6")).root_lattice);
  }

  TEST_CASE("overlattices of A1") {
    auto o = overlattices_up_to_aut(ADEType::parse("A1"));
    REQUIRE(o.size() == 1);
    CHECK(o[0].index == 1);
    CHECK(o[0].sharp.holds);
  }

  TEST_CASE("overlattices of 8A1 follow the doubly-even codes") {
    auto o = overlattices_up_to_aut(ADEType::parse("8A1"));
    REQUIRE(o.size() == 8);
    std::vector<std::string> types;
    std::vector<bool> sharp;
    std::vector<size_t> index;
    for (const auto& x : o) {
      types.push_back(x.sharp.root_lattice ? x.sharp.type.str() : "-");
      sharp.push_back(x.sharp.holds);
      index.push_back(x.index);
    }
    CHECK(index == std::vector<size_t>{1, 2, 2, 4, 4, 8, 8, 16});
    std::multiset<std::string> got(types.begin(), types.end());
    CHECK(got == std::multiset<std::string>{"8A1", "4A1+D4", "-", "2A1+D6", "2D4", "A1+E7", "D8", "E8"});
    for (size_t i = 0; i < o.size(); ++i) {
      bool expect = types[i] == "A1+E7" || types[i] == "D8" || types[i] == "E8";
      CHECK(sharp[i] == expect);
    }
    // the index-2 pair: weight-8 word is not a root lattice, weight-4 word gives 4A1+D4
    CHECK(types[1] != types[2]);
  }

  TEST_CASE("overlattices of 4A2 against a subspace count") {
    ADEType phi = ADEType::parse("4A2");
    auto orbits = overlattices_up_to_aut(phi);
    size_t total = 0;
    for (const auto& o : orbits) total += o.orbit_size;
    // brute force: totally isotropic subspaces of F_3^4 with q(x) = (2/3) sum x_i^2 mod 2
    Lattice l(phi.gram());
    Discriminant d = discriminant_form(l);
    REQUIRE(d.form.size() == 81);
    ElementTable table(d.form);
    std::set<Bits> subs;
    std::vector<size_t> iso;
    for (size_t x = 0; x < d.form.size(); ++x)
      if (table.isotropic(x)) iso.push_back(x);
    subs.insert(table.zero_subgroup());
    for (size_t a : iso)
      for (size_t b : iso) {
        Bits s = table.zero_subgroup();
        s = table.extend(s, a);
        if (!table.test(s, b) && table.orthogonal(a, b)) s = table.extend(s, b);
        bool ok = true;
        for (size_t m : table.members(s)) ok = ok && table.isotropic(m);
        if (ok) subs.insert(s);
      }
    CHECK(total == subs.size());
    bool has_index3 = false;
    for (const auto& o : orbits) has_index3 = has_index3 || o.index == 3;
    CHECK(has_index3);
  }

  TEST_CASE("double coset counts") {
    std::vector<Perm> gens{{1, 0, 2}, {0, 2, 1}};
    auto s3 = perm_group_elements(gens, 3, 100);
    CHECK(double_coset_count(s3, {}, {}) == 6);
    CHECK(double_coset_count(s3, {{1, 0, 2}}, {}) == 3);
    CHECK(double_coset_count(s3, {{1, 0, 2}}, {{1, 0, 2}}) == 2);
    CHECK(double_coset_count(s3, gens, {}) == 1);
    // 2A1 in Sigma = 2A1, brute force over Aut = Z/2
    auto c = classify_phi(ADEType::parse("2A1"), direct_stab);
    for (const auto& e : c) {
      auto sidx = sigma_indices(e.sigma);
      AutGroup aut = aut_configuration(build_l10().lattice.gram.submatrix(sidx, sidx));
      auto elems = perm_group_elements(aut.gens, sidx.size(), 100);
      std::set<std::set<Perm>> cosets;
      SigmaStabilizer hs = direct_stab(e.sigma);
      auto hl = perm_group_elements(e.h_phi, sidx.size(), 100);
      auto hr = perm_group_elements(hs.h_gens, sidx.size(), 100);
      for (const auto& g : elems) {
        std::set<Perm> dc;
        for (const auto& a : hl)
          for (const auto& b : hr) dc.insert(perm_compose(perm_compose(a, g), b));
        cosets.insert(dc);
      }
      CHECK(cosets.size() == e.double_cosets);
    }
  }

  TEST_CASE("2A1+2A3") {
    auto c = classify_phi(ADEType::parse("2A1+2A3"), direct_stab);
    std::set<std::string> got;
    for (const auto& e : c) {
      got.insert(e.tau_rbar.str());
      CHECK(e.double_cosets == 1);
    }
    CHECK(got == std::set<std::string>{"A1+E7", "A3+D5", "D8", "E8"});
  }

  TEST_CASE("full-rank subsystems") {
    auto e8 = full_rank_subsystems(ADEType::parse("E8"));
    std::set<std::string> s;
    for (const auto& t : e8) s.insert(t.str());
    for (const char* t : {"E8", "A8", "D8", "A1+E7", "A2+E6", "2A4", "2D4", "8A1", "A1+A7", "4A2", "2A1+2A3"})
      CHECK(s.count(t) == 1);
    CHECK(s.count("A1+A2+A5") == 1);
    CHECK(s.count("4A1+D4") == 1);
    CHECK(s.count("A9") == 0);
    auto a3 = full_rank_subsystems(ADEType::parse("A3"));
    REQUIRE(a3.size() == 1);
    CHECK(a3[0].str() == "A3");
  }

  TEST_CASE("classification of configurations") {
    const auto& all = classify_all();
    CHECK(all.size() == 184);
    size_t rank9 = 0;
    std::set<std::pair<std::string, std::string>> emitted;
    const Lattice& l10 = build_l10().lattice;
    for (const auto& e : all) {
      if (e.tau_phi.rank() == 9) ++rank9;
      CHECK(e.double_cosets == 1);
      CHECK(emitted.insert({e.tau_phi.str(), e.tau_rbar.str()}).second);
      IntMatrix m;
      for (const auto& r : e.phi_f) m.append_row(r);
      CHECK(ade_type_of(gram_of(l10, m)) == e.tau_phi);
      CHECK(hermite_basis(primitive_closure(m).basis) == hermite_basis(sigma_basis(e.sigma)));
      CHECK(condition_sharp(gram_of(l10, sigma_basis(e.sigma))).holds);
    }
    std::set<std::pair<std::string, std::string>> oracle;
    for (const auto& [t, mask] : sigma_types()) {
      (void)mask;
      if (t.rank() > 9) continue;
      for (const auto& s : full_rank_subsystems(t)) oracle.insert({s.str(), t.str()});
    }
    CHECK(emitted == oracle);
    size_t oracle_rank9 = 0;
    for (const auto& [t, tbar] : oracle) oracle_rank9 += ADEType::parse(t).rank() == 9;
    CHECK(rank9 == oracle_rank9);
  }

  TEST_CASE("keys are invariant under O+(L10)") {
    const auto& all = classify_all();
    const Lattice& l10 = build_l10().lattice;
    std::mt19937 rng(7);
    for (size_t k = 0; k < 40; ++k) {
      const auto& e = all[(k * 37) % all.size()];
      std::vector<IntVector> moved = e.phi_f;
      for (int step = 0; step < 12; ++step) {
        IntVector r(10, Integer(0));
        r[rng() % 10] = 1;
        for (auto& v : moved) {
          Integer p = l10.inner(v, r);
          for (size_t i = 0; i < 10; ++i) v[i] += p * r[i];
        }
      }
      auto key = embedding_key(moved);
      CHECK(key.first == e.tau_phi);
      CHECK(key.second == e.tau_rbar);
    }
  }
}

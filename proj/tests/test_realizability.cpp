#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "rdp/realizability.hpp"

using namespace rdp;

namespace {

const std::vector<EmbeddingClass>& all_classes() {
  static std::vector<EmbeddingClass> all = classify_configurations(1);
  return all;
}

const EmbeddingClass& find_class(const std::string& key) {
  for (const auto& ec : all_classes())
    if (ec.key() == key) return ec;
  throw std::invalid_argument("no class " + key);
}

std::vector<IntMatrix> stab_gens(const EmbeddingClass& ec) {
  return stabilizer_of(ec, stab_sigma(ec.sigma, orbit_of_sigma(ec.sigma))).gens;
}

struct Direct {
  bool c2, c3, c4;
  bool all() const { return c2 && c3 && c4; }
};

Direct direct(const MfRecord& mf, const EmbeddingClass& ec, const RatMatrix& mbar) {
  return {check_C2(mf, mbar), check_C3(mf, mbar), check_C4(mf, ec, mbar)};
}

RatMatrix overlattice_in_b(const MfRecord& mf, const Discriminant& d, const std::vector<size_t>& elems) {
  std::vector<FiniteQuadraticForm::Element> gens;
  for (size_t e : elems) gens.push_back(d.form.element(e));
  return overlattice_from_isotropic(d, gens).basis * mf.basis;
}

std::vector<Perm> u_perms(const EmbeddingClass& ec, const MfRecord& mf, const Discriminant& d) {
  std::vector<Perm> out;
  for (const auto& g : u_mf_generators(ec, mf, stab_gens(ec))) out.push_back(d.action(g));
  return out;
}

// Orbit count of a set of subgroups under permutations of the elements.
size_t orbit_count(std::set<Bits> pool, const std::vector<Perm>& perms) {
  size_t orbits = 0;
  while (!pool.empty()) {
    ++orbits;
    std::vector<Bits> q{*pool.begin()};
    pool.erase(pool.begin());
    for (size_t i = 0; i < q.size(); ++i)
      for (const auto& p : perms) {
        Bits b = ElementTable::image(q[i], p);
        auto it = pool.find(b);
        if (it == pool.end()) continue;
        pool.erase(it);
        q.push_back(b);
      }
  }
  return orbits;
}

}  // namespace

TEST_SUITE("realizability") {
  TEST_CASE("M_f for A1") {
    const auto& ec = find_class("A1/A1");
    MfRecord mf = build_mf(ec);
    CHECK(mf.m_f.rank() == 11);
    CHECK(abs(mf.m_f.det()) * Integer(4) == abs(mf.b_phi.det()));
    RatMatrix nb = n_part(mf, mf.basis);
    REQUIRE(nb.rows() == 1);
    CHECK(gram_of(mf.b_phi, nb)(0, 0) == Rational(-4));
    CHECK(check_C2(mf, mf.basis));
    CHECK(check_C3(mf, mf.basis));
    CHECK(check_C4(mf, ec, mf.basis));
    CHECK(check_C1(mf.m_f));
    auto r = enumerate_strong_classes(ec, stab_gens(ec));
    REQUIRE(r.classes.size() == 1);
    CHECK(r.classes[0].q == "0");
  }

  TEST_CASE("lift vectors") {
    for (const std::string key : {"A1/A1", "2A1+A3/D5", "A1+A2/A1+A2", "D4/D4"}) {
      const auto& ec = find_class(key);
      MfRecord mf = build_mf(ec);
      const size_t n = mf.n;
      CHECK(mf.m_f.rank() == 10 + n);
      CHECK(abs(mf.m_f.det()) * pow(Integer(4), static_cast<unsigned>(n)) == abs(mf.b_phi.det()));
      RatMatrix binv = inverse(mf.basis);
      for (size_t i = 0; i < n; ++i) {
        RatVector sum(10 + n, Rational(0));
        for (size_t k = 0; k < 10 + n; ++k) sum[k] = mf.r_prime[i][k] + mf.r_dprime[i][k];
        for (size_t k = 0; k < 10; ++k) CHECK(sum[k] == Rational(ec.phi_f[i][k]));
        for (size_t k = 10; k < 10 + n; ++k) CHECK(sum[k].is_zero());
        CHECK(mf.b_phi.inner(mf.r_prime[i], mf.r_prime[i]) == Rational(-2));
        CHECK(mf.b_phi.inner(mf.r_prime[i], mf.r_dprime[i]).is_zero());
        CHECK(is_integral(mf.r_prime[i] * binv));
        for (size_t j = 0; j < n; ++j) {
          Rational rr(build_l10().lattice.inner(ec.phi_f[i], ec.phi_f[j]));
          CHECK(mf.b_phi.inner(mf.r_prime[i], mf.r_prime[j]) == rr);
          CHECK(mf.b_phi.inner(mf.r_prime[i], mf.r_dprime[j]).is_zero());
        }
      }
    }
  }

  TEST_CASE("discriminant group of M_f for 8A1") {
    const auto& ec = find_class("8A1/E8");
    MfRecord mf = build_mf(ec);
    CHECK(discriminant_form(mf.m_f).form.size() == 1024);
  }

  TEST_CASE("component sign flips") {
    for (const std::string key : {"A1/A1", "2A1+A3/D5", "A1+A2/A1+A2"}) {
      const auto& ec = find_class(key);
      MfRecord mf = build_mf(ec);
      auto sg = stab_gens(ec);
      auto gens = u_mf_generators(ec, mf, sg);
      REQUIRE(gens.size() == sg.size() + mf.components.size());
      RatMatrix binv = inverse(mf.basis);
      for (size_t k = 0; k < mf.components.size(); ++k) {
        RatMatrix u = binv * to_rational(gens[sg.size() + k]) * mf.basis;  // B-coordinates
        CHECK(is_isometry(mf.m_f, gens[sg.size() + k]));
        for (size_t i = 0; i < 10; ++i) {
          RatVector e(10 + mf.n, Rational(0));
          e[i] = 1;
          CHECK(e * u == e);
        }
        std::set<int> comp(mf.components[k].begin(), mf.components[k].end());
        for (size_t i = 0; i < mf.n; ++i) {
          RatVector img = mf.r_prime[i] * u;
          CHECK(img == (comp.count(static_cast<int>(i)) ? mf.r_dprime[i] : mf.r_prime[i]));
        }
        CHECK(u * u == RatMatrix::identity(10 + mf.n));
      }
      // the remaining generators restrict to the stabilizer elements on L10
      for (size_t j = 0; j < sg.size(); ++j) {
        RatMatrix g = binv * to_rational(gens[j]) * mf.basis;
        for (size_t a = 0; a < 10; ++a)
          for (size_t b = 0; b < 10; ++b) CHECK(g(a, b) == Rational(sg[j](a, b)));
      }
    }
  }

  TEST_CASE("adjoining a glue vector with a root in N violates C3") {
    const auto& ec = find_class("2A1/2A1");
    MfRecord mf = build_mf(ec);
    Discriminant d = discriminant_form(mf.m_f);
    RatVector v(12, Rational(0));
    v[10] = v[11] = Rational(Integer(1), Integer(2));
    CHECK(mf.b_phi.norm(v) == Rational(-2));
    auto x = d.element_of(v * inverse(mf.basis));
    CHECK(d.form.value_num(x) == 0);
    RatMatrix mbar = overlattice_from_isotropic(d, {x}).basis * mf.basis;
    CHECK_FALSE(check_C3(mf, mbar));
    CHECK(check_C3(mf, mf.basis));
  }

  TEST_CASE("fast pruning agrees with the direct conditions") {
    for (const std::string key : {"2A1+A3/D5", "4A1/D4", "2A1+2A3/A3+D5", "A1+A3/A1+A3"}) {
      const auto& ec = find_class(key);
      MfRecord mf = build_mf(ec);
      Discriminant d = discriminant_form(mf.m_f);
      ElementTable table(d.form);
      std::set<Bits> passing;
      std::map<Bits, std::vector<size_t>> gens_of;
      auto accept = [&](const std::vector<size_t>& gens, const Bits& h) {
        if (!direct(mf, ec, overlattice_in_b(mf, d, gens)).all()) return false;
        passing.insert(h);
        gens_of.emplace(h, gens);
        return true;
      };
      std::vector<Perm> none;
      isotropic_subgroups<Perm, PermHash>(table, none, none, perm_identity(d.form.size()), perm_compose, perm_inverse,
                                          accept, false);
      auto perms = u_perms(ec, mf, d);
      auto res = enumerate_strong_classes(ec, stab_gens(ec));
      CHECK_MESSAGE(orbit_count(passing, perms) == res.candidates, key);
      for (const auto& sc : res.classes) {
        CHECK(check_C1(sc.mbar));
        CHECK(direct(mf, ec, sc.basis).all());
        Signature s = signature(sc.mbar.gram);
        CHECK(s.pos == 1);
        CHECK(s.neg == static_cast<int>(9 + mf.n));
      }
      // lift pairs and Q across orbits
      for (const auto& [h, gens] : gens_of) {
        RatMatrix mbar = overlattice_in_b(mf, d, gens);
        for (size_t c : rf_lift_counts(mf, ec, mbar)) CHECK(c == 2);
        auto q = modular_smith(to_integer(inverse(mbar * inverse(mf.basis)))).invariants;
        for (const auto& p : perms) {
          std::vector<size_t> img;
          for (size_t g : gens) img.push_back(static_cast<size_t>(p[g]));
          CHECK(passing.count(ElementTable::image(h, p)));
          RatMatrix m2 = overlattice_in_b(mf, d, img);
          CHECK(modular_smith(to_integer(inverse(m2 * inverse(mf.basis)))).invariants == q);
        }
      }
    }
  }

  TEST_CASE("monotone pruning along random chains") {
    std::mt19937 rng(3);
    for (const std::string key : {"2A1+A3/D5", "4A1/D4", "6A1/D6"}) {
      const auto& ec = find_class(key);
      MfRecord mf = build_mf(ec);
      Discriminant d = discriminant_form(mf.m_f);
      ElementTable table(d.form);
      for (int trial = 0; trial < 6; ++trial) {
        Bits h = table.zero_subgroup();
        std::vector<size_t> gens;
        bool failed = false;
        while (true) {
          std::vector<size_t> cand;
          for (size_t x = 1; x < table.size(); ++x) {
            if (ElementTable::test(h, x) || !table.isotropic(x)) continue;
            bool ok = true;
            for (size_t g : gens) ok = ok && table.orthogonal(g, x);
            if (ok) cand.push_back(x);
          }
          if (cand.empty()) break;
          size_t x = cand[rng() % cand.size()];
          gens.push_back(x);
          h = table.extend(h, x);
          bool pass = direct(mf, ec, overlattice_in_b(mf, d, gens)).all();
          if (failed) CHECK_FALSE(pass);
          failed = failed || !pass;
        }
      }
    }
  }

  TEST_CASE("Q abbreviations") {
    CHECK(q_abbreviation({}) == "0");
    CHECK(q_abbreviation({Integer(2)}) == "2");
    CHECK(q_abbreviation({Integer(2), Integer(2)}) == "22");
    CHECK(q_abbreviation({Integer(4), Integer(2)}) == "42");
    const std::set<std::string> legend{"0", "2", "3", "4", "5", "6", "22", "222", "42"};
    for (const std::string key : {"2A1+2A3/D8", "6A1/D6", "8A1/E8"}) {
      const auto& ec = find_class(key);
      for (const auto& sc : enumerate_strong_classes(ec, stab_gens(ec)).classes) CHECK(legend.count(sc.q));
    }
  }

  TEST_CASE("two quoted rows") {
    CHECK(enumerate_strong_classes(find_class("6A1+A2/A2+D6"), stab_gens(find_class("6A1+A2/A2+D6"))).classes.empty());
    std::vector<size_t> counts;
    for (const std::string r : {"A1+E7", "A3+D5", "D8", "E8"}) {
      const auto& ec = find_class("2A1+2A3/" + r);
      counts.push_back(enumerate_strong_classes(ec, stab_gens(ec)).classes.size());
    }
    CHECK(counts == std::vector<size_t>{3, 2, 7, 4});
  }
}

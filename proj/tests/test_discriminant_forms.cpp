#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "rdp/discriminant.hpp"
#include "rdp/e10.hpp"
#include "rdp/roots.hpp"

using namespace rdp;

namespace {

Lattice ade(const std::string& t) { return Lattice(ADEType::parse(t).gram()); }

Lattice hyperbolic_plane() { return Lattice(int_matrix({{0, 1}, {1, 0}})); }

// A battery of even lattices with known signatures.
std::vector<Lattice> battery() {
  std::vector<Lattice> out;
  for (const char* t : {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "D4", "D5", "D6", "D7", "D8",
                        "E6", "E7", "E8", "2A1", "A1+A2", "3A1", "A2+D4"}) {
    out.push_back(ade(t));
    out.push_back(rescale(ade(t), Integer(2)));
  }
  out.push_back(hyperbolic_plane());
  out.push_back(rescale(hyperbolic_plane(), Integer(2)));
  out.push_back(rescale(build_l10().lattice, Integer(2)));
  out.push_back(direct_sum(ade("E8"), rescale(hyperbolic_plane(), Integer(3))));
  out.push_back(Lattice(int_matrix({{2, 1}, {1, -4}})));
  out.push_back(Lattice(int_matrix({{-12}})));
  out.push_back(Lattice(int_matrix({{6, 3}, {3, 6}})));
  return out;
}

FiniteQuadraticForm cyclic(long n, long num, long den) {
  Rational q{Integer(num), Integer(den)};
  return FiniteQuadraticForm({n}, {q}, {{mod(q, Rational(1))}});
}

}  // namespace

TEST_SUITE("discriminant-forms") {
  TEST_CASE("discriminant forms of small lattices") {
    CHECK(discriminant_form(ade("E8")).form.size() == 1);
    auto a1 = discriminant_form(ade("A1"));
    REQUIRE(a1.form.size() == 2);
    CHECK(a1.form.q(0) == Rational(3, 2));
    auto l2 = discriminant_form(rescale(build_l10().lattice, Integer(2)));
    CHECK(l2.form.size() == 1024);
    CHECK(l2.form.rank() == 10);
    CHECK(std::all_of(l2.form.orders().begin(), l2.form.orders().end(), [](long o) { return o == 2; }));
    CHECK_THROWS(discriminant_form(Lattice(int_matrix({{1}}))));
  }

  TEST_CASE("group order equals |det|, and the form is consistent") {
    std::mt19937 rng(7);
    auto bat = battery();
    CHECK(bat.size() >= 30);
    for (const auto& l : bat) {
      auto d = discriminant_form(l);
      const auto& f = d.form;
      CHECK(Integer(static_cast<long long>(f.size())) == abs(l.det()));
      CHECK(f.is_nondegenerate());
      std::uniform_int_distribution<size_t> pick(0, f.size() - 1);
      for (int t = 0; t < 20; ++t) {
        auto x = f.element(pick(rng)), y = f.element(pick(rng));
        Rational lhs = mod(f.value(f.add(x, y)) - f.value(x) - f.value(y), Rational(2));
        CHECK(lhs == mod(Rational(2) * f.pairing(x, y), Rational(2)));
        CHECK(f.value(f.scale(x, 3)) == mod(Rational(9) * f.value(x), Rational(2)));
        // lifts are dual vectors with the right norms
        RatVector v = d.lift(x);
        CHECK(d.element_of(v) == x);
        CHECK(mod(l.norm(v), Rational(2)) == f.value(x));
      }
    }
  }

  TEST_CASE("isometries act on the discriminant group") {
    // the diagram flip of A3 acts as -1 on Z/4
    Lattice a3 = ade("A3");
    auto d = discriminant_form(a3);
    IntMatrix flip = int_matrix({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    Perm p = d.action(flip);
    for (size_t i = 0; i < d.form.size(); ++i)
      CHECK(static_cast<size_t>(p[i]) == d.form.index(d.form.scale(d.form.element(i), -1)));
  }

  TEST_CASE("Gauss sum residues match signatures") {
    CHECK(milgram_signature(FiniteQuadraticForm()) == 0);
    CHECK(milgram_signature(discriminant_form(ade("A1")).form) == 7);
    CHECK(milgram_signature(discriminant_form(ade("E8")).form) == 0);
    int count = 0;
    for (const auto& l : battery()) {
      Signature s = signature(l.gram);
      int expect = ((s.pos - s.neg) % 8 + 8) % 8;
      CHECK(milgram_signature(discriminant_form(l).form) == expect);
      ++count;
    }
    CHECK(count >= 20);
  }

  TEST_CASE("Jordan decomposition lengths") {
    auto f = discriminant_form(rescale(ade("A2"), Integer(2))).form;  // (Z/2)^2 x Z/3 x Z/2 pieces
    size_t l2 = 0;
    for (const auto& c : jordan_decomposition(f, 2)) l2 += static_cast<size_t>(c.dim);
    CHECK(l2 == f.length(2));
    auto u2 = discriminant_form(rescale(hyperbolic_plane(), Integer(2))).form;
    auto comps = jordan_decomposition(u2, 2);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].dim == 2);
    CHECK(comps[0].unit == 7);
    auto d4 = discriminant_form(ade("D4")).form;
    comps = jordan_decomposition(d4, 2);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].unit == 3);
  }

  TEST_CASE("genus existence on explicit cases") {
    FiniteQuadraticForm trivial;
    CHECK(even_lattice_exists(0, 8, trivial).exists);
    CHECK_FALSE(even_lattice_exists(1, 0, trivial).exists);
    CHECK(even_lattice_exists(2, 2, trivial).exists);
    CHECK(even_lattice_exists(1, 9, trivial).exists);
    CHECK(even_lattice_exists(0, 0, trivial).exists);
    CHECK_FALSE(even_lattice_exists(-1, 1, trivial).exists);
    CHECK(even_lattice_exists(0, 1, discriminant_form(ade("A1")).form).exists);
    // <-12> versus a form on Z/12 with the same Gauss sum but no rank-one witness
    CHECK(even_lattice_exists(0, 1, discriminant_form(Lattice(int_matrix({{-12}}))).form).exists);
    FiniteQuadraticForm fake({4, 3}, {Rational(1, 4), Rational(4, 3)},
                             {{Rational(1, 4), Rational(0)}, {Rational(0), Rational(1, 3)}});
    CHECK(milgram_signature(fake) == 7);
    CHECK_FALSE(even_lattice_exists(0, 1, fake).exists);
    CHECK(even_lattice_exists(0, 9, fake).exists);
    CHECK(even_lattice_exists(0, 1, cyclic(8, 7, 8)).exists);
    CHECK(milgram_signature(cyclic(8, 3, 8)) == 7);
    CHECK_FALSE(even_lattice_exists(0, 1, cyclic(8, 3, 8)).exists);
    // every witness in the battery is accepted
    for (const auto& l : battery()) {
      Signature s = signature(l.gram);
      CHECK(even_lattice_exists(s.pos, s.neg, discriminant_form(l).form).exists);
    }
    // the classical embedding of L10(2) into the K3 lattice (with L10 carrying sign (1,9))
    CHECK(primitively_embeds_in_unimodular(build_l10().lattice, 3, 19));
    CHECK(primitively_embeds_in_unimodular(rescale(build_l10().lattice, Integer(2)), 3, 19));
    CHECK_FALSE(primitively_embeds_in_unimodular(ade("E8"), 3, 7));
  }

  TEST_CASE("rank-one genus oracle") {
    // Even rank-one lattices are <2m>; a form on Z/N is realized in rank one
    // iff N is even and it is isometric to x -> -x^2/N (or +x^2/N).
    for (long n = 2; n <= 40; ++n) {
      for (long a = 0; a < 2 * n; ++a) {
        if ((a * n) % 2) continue;  // q(N g) = N^2 a / N = N a must be even
        bool gcd_ok = std::gcd(a, n) == 1;
        if (!gcd_ok) continue;  // degenerate otherwise
        FiniteQuadraticForm f = cyclic(n, a, n);
        for (int sgn : {-1, 1}) {
          bool oracle = false;
          if (n % 2 == 0)
            for (long u = 1; u < n && !oracle; ++u)
              if (std::gcd(u, n) == 1 && ((sgn * u * u - a) % (2 * n) + 2 * n) % (2 * n) == 0) oracle = true;
          bool got = sgn < 0 ? even_lattice_exists(0, 1, f).exists : even_lattice_exists(1, 0, f).exists;
          CHECK_MESSAGE(got == oracle, "N=" << n << " a=" << a << " sign=" << sgn);
        }
      }
    }
  }

  TEST_CASE("isotropic subgroups of nA1 are the doubly-even codes") {
    CHECK(classify_doubly_even_codes(3).size() == 1);
    auto c4 = classify_doubly_even_codes(4);
    REQUIRE(c4.size() == 2);
    CHECK(c4[1] == BinaryCode{0, 15});
    auto c8 = classify_doubly_even_codes(8);
    REQUIRE(c8.size() == 8);
    std::vector<int> dims;
    for (const auto& c : c8) dims.push_back(code_dimension(c));
    CHECK(dims == std::vector<int>{0, 1, 1, 2, 2, 3, 3, 4});
    for (int n = 1; n <= 8; ++n) {
      Lattice l = ade(std::to_string(n) + "A1");
      if (n == 1) l = ade("A1");
      auto d = discriminant_form(l);
      ElementTable table(d.form);
      auto aut = aut_configuration(l.gram);
      std::vector<Perm> perms;
      for (const auto& g : aut.gens) {
        IntMatrix m(static_cast<size_t>(n), static_cast<size_t>(n));
        for (size_t i = 0; i < g.size(); ++i) m(i, static_cast<size_t>(g[i])) = 1;
        perms.push_back(d.action(m));
      }
      auto reps = isotropic_subgroups<Perm, PermHash>(
          table, aut.gens, perms, perm_identity(static_cast<size_t>(n)), perm_compose, perm_inverse,
          [](const std::vector<size_t>&, const Bits&) { return true; }, true);
      CHECK_MESSAGE(reps.size() == classify_doubly_even_codes(n).size(), "n = " << n);
      size_t total = 0;
      for (const auto& r : reps) total += r.orbit_size;
      // orbit-stabilizer: |S_n| = orbit size * |stabilizer|
      for (const auto& r : reps) {
        auto stab = perm_group_elements(r.stabilizer, static_cast<size_t>(n), 50000);
        CHECK(Integer(static_cast<long long>(stab.size() * r.orbit_size)) == aut.order);
      }
      // brute-force count of doubly-even codes as subsets closed under xor
      size_t brute = 0;
      uint32_t words = 1u << n;
      std::vector<uint32_t> de;
      for (uint32_t w = 0; w < words; ++w)
        if (__builtin_popcount(w) % 4 == 0) de.push_back(w);
      // enumerate codes by spanning sets in echelon form: count subspaces of span(de) all of whose words are doubly-even
      std::set<std::vector<uint32_t>> codes{{0}};
      std::vector<std::vector<uint32_t>> frontier{{0}};
      while (!frontier.empty()) {
        std::vector<std::vector<uint32_t>> next;
        for (const auto& c : frontier)
          for (uint32_t w : de) {
            if (std::binary_search(c.begin(), c.end(), w)) continue;
            std::vector<uint32_t> e = c;
            bool ok = true;
            for (uint32_t x : c) {
              if (__builtin_popcount(x ^ w) % 4) ok = false;
              e.push_back(x ^ w);
            }
            if (!ok) continue;
            std::sort(e.begin(), e.end());
            if (codes.insert(e).second) next.push_back(e);
          }
        frontier = std::move(next);
      }
      brute = codes.size();
      CHECK(total == brute);
    }
  }

  TEST_CASE("overlattices from isotropic subgroups") {
    Lattice l8 = ade("8A1");
    auto d = discriminant_form(l8);
    auto zero = overlattice_from_isotropic(d, {});
    CHECK(zero.index == Integer(1));
    CHECK(zero.lattice.gram == hermite_basis(IntMatrix::identity(8)) * l8.gram * hermite_basis(IntMatrix::identity(8)).transpose());
    auto word = [&](uint32_t w) {
      RatVector v(8, Rational(0));
      for (size_t i = 0; i < 8; ++i)
        if (w >> i & 1) v[i] = Rational(1, 2);
      return d.element_of(v);
    };
    // extended Hamming code gives E8
    std::vector<FiniteQuadraticForm::Element> ham{word(0x0f), word(0x33), word(0x55), word(0xff)};
    auto e8 = overlattice_from_isotropic(d, ham);
    CHECK(e8.index == Integer(16));
    CHECK(abs(e8.lattice.det()).is_one());
    CHECK(short_vectors(e8.lattice.gram, -2).size() == 240);
    // the all-ones word adds no roots
    auto nr = overlattice_from_isotropic(d, {word(0xff)});
    CHECK(nr.index == Integer(2));
    CHECK(short_vectors(nr.lattice.gram, -2).size() == 16);
    CHECK_THROWS(overlattice_from_isotropic(d, {word(0x03)}));
    // index^2 |A_M| = |A_L|
    for (const auto& o : {zero, e8, nr})
      CHECK(o.index * o.index * Integer(static_cast<long long>(discriminant_form(o.lattice).form.size())) ==
            Integer(static_cast<long long>(d.form.size())));
  }

  TEST_CASE("form JSON round trip") {
    auto f = discriminant_form(ade("A2+D4")).form;
    auto g = FiniteQuadraticForm::from_json(f.to_json());
    CHECK(g.to_json() == f.to_json());
    auto h = FiniteQuadraticForm::from_json(R"({"orders":[2],"q":["3/2 mod 2"]})");
    CHECK(h.q(0) == Rational(3, 2));
  }
}

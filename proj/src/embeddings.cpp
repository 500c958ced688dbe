#include "rdp/embeddings.hpp"

#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "rdp/parallel.hpp"

namespace rdp {

namespace {

IntMatrix rows_of(const std::vector<IntVector>& vs) {
  IntMatrix m;
  for (const auto& v : vs) m.append_row(v);
  return m;
}

IntMatrix perm_matrix(const Perm& p) {
  IntMatrix m(p.size(), p.size());
  for (size_t i = 0; i < p.size(); ++i) m(i, static_cast<size_t>(p[i])) = 1;
  return m;
}

}  // namespace

RootInfo root_info(const IntMatrix& gram) {
  RootInfo info;
  size_t n = gram.rows();
  info.roots = short_vectors(gram, -2);
  if (info.roots.empty()) {
    info.root_lattice = n == 0;
    return info;
  }
  size_t r = rank(to_rational(rows_of(info.roots)));
  RatVector form = generic_form(info.roots, RatVector(n, Rational(0)));
  info.basis = ade_basis_from_linear_form(info.roots, form, r);
  Lattice l(gram);
  info.type = ade_type_of(gram_of(l, rows_of(info.basis)));
  info.root_lattice = r == n && abs(determinant(rows_of(info.basis))).is_one();
  return info;
}

SharpVerdict condition_sharp(const IntMatrix& gram) {
  RootInfo info = root_info(gram);
  SharpVerdict v;
  v.type = info.type;
  v.root_lattice = info.root_lattice;
  v.holds = info.root_lattice && in_tau_S(info.type);
  return v;
}

std::vector<OverlatticeOrbit> overlattices_up_to_aut(const ADEType& phi) {
  Lattice l(phi.gram());
  Discriminant d = discriminant_form(l);
  ElementTable table(d.form);
  AutGroup aut = aut_configuration(l.gram);
  std::vector<Perm> perms;
  for (const auto& g : aut.gens) perms.push_back(d.action(perm_matrix(g)));
  auto reps = isotropic_subgroups<Perm, PermHash>(
      table, aut.gens, perms, perm_identity(l.rank()), perm_compose, perm_inverse,
      [](const std::vector<size_t>&, const Bits&) { return true; }, true);
  std::vector<OverlatticeOrbit> out;
  for (auto& r : reps) {
    OverlatticeOrbit o;
    o.subgroup = r.gens;
    o.index = r.order;
    std::vector<FiniteQuadraticForm::Element> gens;
    for (size_t g : r.gens) gens.push_back(d.form.element(g));
    Overlattice ov = overlattice_from_isotropic(d, gens);
    o.basis = ov.basis;
    o.lattice = ov.lattice;
    o.sharp = condition_sharp(o.lattice.gram);
    o.stabilizer = std::move(r.stabilizer);
    o.orbit_size = r.orbit_size;
    out.push_back(std::move(o));
  }
  return out;
}

size_t double_coset_count(const std::vector<Perm>& group_elems, const std::vector<Perm>& left,
                          const std::vector<Perm>& right) {
  std::unordered_map<Perm, size_t, PermHash> where;
  for (size_t i = 0; i < group_elems.size(); ++i) where.emplace(group_elems[i], i);
  UnionFind uf(group_elems.size());
  for (size_t i = 0; i < group_elems.size(); ++i) {
    for (const auto& h : left) uf.unite(i, where.at(perm_compose(h, group_elems[i])));
    for (const auto& h : right) uf.unite(i, where.at(perm_compose(group_elems[i], h)));
  }
  return uf.components();
}

std::vector<EmbeddingClass> classify_phi(const ADEType& phi,
                                         const std::function<SigmaStabilizer(SigmaMask)>& sigma_stab) {
  const Lattice lphi(phi.gram());
  const size_t n = lphi.rank();
  const Lattice& l10 = build_l10().lattice;
  std::vector<IntVector> phi_simple;
  for (size_t i = 0; i < n; ++i) {
    IntVector e(n, Integer(0));
    e[i] = 1;
    phi_simple.push_back(e);
  }
  RatVector c_phi = chamber_point(lphi, phi_simple);
  std::vector<OverlatticeOrbit> orbits = overlattices_up_to_aut(phi);
  std::set<std::string> root_types;
  for (const auto& o : orbits)
    if (o.sharp.root_lattice && !root_types.insert(o.sharp.type.str()).second)
      throw std::logic_error("two Aut(Phi)-orbits of root overlattices of type " + o.sharp.type.str() +
                             " for Phi = " + phi.str());
  std::vector<EmbeddingClass> out;
  for (const auto& o : orbits) {
    if (!o.sharp.holds) continue;
    EmbeddingClass ec;
    ec.tau_phi = phi;
    ec.tau_rbar = o.sharp.type;
    ec.sigma = sigma_of_type(o.sharp.type);
    ec.rbar_basis = o.basis;
    ec.stab_rbar = o.stabilizer;
    const Lattice& rbar = o.lattice;
    std::vector<IntVector> roots = short_vectors(rbar.gram, -2);
    // an ADE basis of Rbar whose chamber lies inside the chamber of Phi
    RatVector base = lphi.pairing_row(c_phi) * o.basis.transpose();
    std::vector<IntVector> bbar = ade_basis_from_linear_form(roots, generic_form(roots, base), n);
    IntMatrix bmat = rows_of(bbar);
    DynkinIdentification id_r = identify_dynkin(gram_of(rbar, bmat));
    auto sidx = sigma_indices(ec.sigma);
    DynkinIdentification id_s = identify_dynkin(l10.gram.submatrix(sidx, sidx));
    Perm iota(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (id_r.to_standard[i] == id_s.to_standard[j]) iota[i] = static_cast<int>(j);
    auto sroots = sigma_roots(ec.sigma);
    IntMatrix target;
    for (size_t i = 0; i < n; ++i) target.append_row(sroots[static_cast<size_t>(iota[i])]);
    ec.phi0 = inverse_unimodular(bmat) * target;
    IntMatrix phi_in_rbar = to_integer(inverse(o.basis));
    IntMatrix phif = phi_in_rbar * ec.phi0;
    for (size_t i = 0; i < n; ++i) ec.phi_f.push_back(phif.row(i));
    if (gram_of(l10, phif) != lphi.gram) throw std::logic_error("phi0 is not an isometry");
    Closure cl = primitive_closure(phif);
    if (cl.index != Integer(static_cast<long long>(o.index)) || hermite_basis(cl.basis) != hermite_basis(sigma_basis(ec.sigma)))
      throw std::logic_error("primitive closure of Phi_f differs from <Sigma>");
    // H_Phi: Stab(Rbar, Phi) transported to Aut(Sigma)
    RatMatrix binv = inverse(o.basis);
    std::set<Perm> seen;
    for (const auto& s : o.stabilizer) {
      IntMatrix g = to_integer(o.basis * to_rational(perm_matrix(s)) * binv);
      KappaResult k = kappa(rbar, roots, bbar, g);
      Perm ps(n);
      for (size_t i = 0; i < n; ++i) ps[static_cast<size_t>(iota[i])] = iota[static_cast<size_t>(k.perm[i])];
      if (!perm_is_identity(ps) && seen.insert(ps).second) ec.h_phi.push_back(ps);
    }
    SigmaStabilizer hs = sigma_stab(ec.sigma);
    AutGroup aut_s = aut_configuration(l10.gram.submatrix(sidx, sidx));
    auto elems = perm_group_elements(aut_s.gens, n, 1u << 24);
    ec.double_cosets = double_coset_count(elems, ec.h_phi, hs.h_gens);
    out.push_back(std::move(ec));
  }
  return out;
}

std::vector<EmbeddingClass> classify_configurations(unsigned threads, const std::string& cache_dir) {
  std::vector<ADEType> types = enumerate_ade_types(9);
  std::mutex mu;
  std::map<SigmaMask, SigmaStabilizer> memo;
  auto stab = [&](SigmaMask s) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(s);
      if (it != memo.end()) return it->second;
    }
    SigmaStabilizer st = stab_sigma(s, cached_orbit(s, cache_dir));
    std::lock_guard<std::mutex> lock(mu);
    return memo.emplace(s, std::move(st)).first->second;
  };
  std::vector<std::vector<EmbeddingClass>> per(types.size());
  parallel_for(types.size(), threads, [&](size_t i) { per[i] = classify_phi(types[i], stab); });
  std::vector<EmbeddingClass> out;
  for (auto& v : per)
    for (auto& c : v) out.push_back(std::move(c));
  std::stable_sort(out.begin(), out.end(), [](const EmbeddingClass& a, const EmbeddingClass& b) {
    if (a.tau_phi != b.tau_phi) return a.tau_phi < b.tau_phi;
    return a.tau_rbar < b.tau_rbar;
  });
  return out;
}

std::pair<ADEType, ADEType> embedding_key(const std::vector<IntVector>& phi_f) {
  const Lattice& l10 = build_l10().lattice;
  IntMatrix m = rows_of(phi_f);
  ADEType tp = ade_type_of(gram_of(l10, m));
  Closure cl = primitive_closure(m);
  RootInfo info = root_info(gram_of(l10, cl.basis));
  if (!info.root_lattice) throw std::invalid_argument("primitive closure is not a root lattice");
  return {tp, info.type};
}

namespace {

std::set<std::string> subsystems_of(const ADEType& t);

// Types obtained by deleting one node from the extended diagram of a simple type.
std::set<std::string> extended_deletions(const Component& c) {
  ADEType t({c});
  IntMatrix g = t.gram();
  Lattice l(g);
  std::vector<IntVector> roots = short_vectors(g, -2);
  IntVector highest;
  Integer best(-1);
  for (const auto& r : roots) {
    Integer h(0);
    bool positive = true;
    for (const auto& x : r) {
      if (x.sign() < 0) positive = false;
      h += x;
    }
    if (positive && h > best) {
      best = h;
      highest = r;
    }
  }
  std::vector<IntVector> ext;
  for (size_t i = 0; i < g.rows(); ++i) {
    IntVector e(g.rows(), Integer(0));
    e[i] = 1;
    ext.push_back(e);
  }
  IntVector neg = highest;
  for (auto& x : neg) x = -x;
  ext.push_back(neg);
  std::set<std::string> out;
  for (size_t drop = 0; drop < ext.size(); ++drop) {
    IntMatrix sub;
    for (size_t i = 0; i < ext.size(); ++i)
      if (i != drop) sub.append_row(ext[i]);
    out.insert(ade_type_of(gram_of(l, sub)).str());
  }
  return out;
}

std::set<std::string> component_subsystems(const Component& c) {
  static std::mutex mu;
  static std::map<std::string, std::set<std::string>> memo;
  std::string key = ADEType({c}).str();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  std::set<std::string> out{key};
  for (const auto& d : extended_deletions(c)) {
    if (d == key) continue;
    for (const auto& s : subsystems_of(ADEType::parse(d))) out.insert(s);
  }
  std::lock_guard<std::mutex> lock(mu);
  memo[key] = out;
  return out;
}

std::set<std::string> subsystems_of(const ADEType& t) {
  std::set<std::string> acc{"0"};
  for (const auto& c : t.components()) {
    std::set<std::string> next;
    for (const auto& a : acc)
      for (const auto& b : component_subsystems(c)) {
        std::vector<Component> comps;
        if (a != "0") comps = ADEType::parse(a).components();
        ADEType tb = ADEType::parse(b);
        comps.insert(comps.end(), tb.components().begin(), tb.components().end());
        next.insert(ADEType(comps).str());
      }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

std::vector<ADEType> full_rank_subsystems(const ADEType& t) {
  std::vector<ADEType> out;
  for (const auto& s : subsystems_of(t)) out.push_back(ADEType::parse(s));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rdp

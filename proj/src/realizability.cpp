#include "rdp/realizability.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rdp/json_io.hpp"
#include "rdp/parallel.hpp"

namespace rdp {

namespace {

IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

Integer denominator_lcm(const RatMatrix& m) {
  Integer d(1);
  for (const auto& x : m.data()) d = lcm(d, x.den());
  return d;
}

RatMatrix columns(const RatMatrix& m, size_t from, size_t to) {
  RatMatrix out(m.rows(), to - from);
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = from; j < to; ++j) out(i, j - from) = m(i, j);
  return out;
}

// Rows of the lattice spanned by m whose columns [from, to) vanish.
RatMatrix vanishing_part(const RatMatrix& m, size_t from, size_t to) {
  RatMatrix c = columns(m, from, to);
  IntMatrix k = left_kernel(to_integer(c.scaled(Rational(denominator_lcm(c)))));
  return to_rational(k) * m;
}

bool in_lattice(const RatMatrix& basis_inv, const RatVector& v) { return is_integral(v * basis_inv); }

IntMatrix integral_gram(const RatMatrix& g, Integer& den) {
  den = denominator_lcm(g);
  return to_integer(g.scaled(Rational(den)));
}

RatVector b_vector(const IntVector& l10_part, const RatVector& minus_part) {
  RatVector v;
  for (const auto& x : l10_part) v.emplace_back(x);
  v.insert(v.end(), minus_part.begin(), minus_part.end());
  return v;
}

std::vector<IntVector> up_to_sign(const std::vector<IntVector>& roots) {
  std::vector<IntVector> out;
  for (const auto& r : roots) {
    for (const auto& x : r) {
      if (x.is_zero()) continue;
      if (x.sign() > 0) out.push_back(r);
      break;
    }
  }
  return out;
}

std::vector<IntVector> rf_roots(const EmbeddingClass& ec) {
  IntMatrix m;
  for (const auto& r : ec.phi_f) m.append_row(r);
  return roots_of(build_l10().lattice, m);
}

}  // namespace

MfRecord build_mf(const EmbeddingClass& ec) {
  const Lattice& l10 = build_l10().lattice;
  MfRecord mf;
  mf.n = ec.phi_f.size();
  const size_t n = mf.n, dim = 10 + n;
  IntMatrix gphi = ec.tau_phi.gram();
  mf.b_phi = Lattice(block_diag(l10.gram, gphi).scaled(Integer(2)));
  RatMatrix gens = RatMatrix::identity(dim);
  for (size_t i = 0; i < n; ++i) {
    RatVector e(n, Rational(0));
    e[i] = 1;
    RatVector plus = b_vector(ec.phi_f[i], e), minus = b_vector(ec.phi_f[i], e);
    for (size_t j = 10; j < dim; ++j) minus[j] = -minus[j];
    for (auto& x : plus) x /= Rational(2);
    for (auto& x : minus) x /= Rational(2);
    mf.r_prime.push_back(plus);
    mf.r_dprime.push_back(minus);
    gens.append_row(plus);
  }
  mf.basis = hermite_basis(gens);
  RatMatrix g = mf.basis * to_rational(mf.b_phi.gram) * mf.basis.transpose();
  if (!is_integral(g)) throw std::logic_error("M_f is not integral");
  mf.m_f = Lattice(to_integer(g));
  if (!mf.m_f.is_even()) throw std::logic_error("M_f is not even");
  mf.components = identify_dynkin(gphi).components;
  return mf;
}

bool check_C1(const Lattice& mbar) { return primitively_embeds_in_unimodular(mbar, 3, 19); }

bool check_C2(const MfRecord& mf, const RatMatrix& mbar) {
  RatMatrix p = vanishing_part(mbar, 10, 10 + mf.n);
  return is_integral(columns(p, 0, 10));
}

RatMatrix n_part(const MfRecord&, const RatMatrix& mbar) { return vanishing_part(mbar, 0, 10); }

bool check_C3(const MfRecord& mf, const RatMatrix& mbar) {
  RatMatrix nb = n_part(mf, mbar);
  RatMatrix g = nb * to_rational(mf.b_phi.gram) * nb.transpose();
  if (!is_integral(g)) throw std::logic_error("N(Mbar) is not integral");
  return !has_short_vector(to_integer(g), -2);
}

bool check_C4(const MfRecord& mf, const EmbeddingClass& ec, const RatMatrix& mbar) {
  const Lattice& l10 = build_l10().lattice;
  RatMatrix nb = n_part(mf, mbar);
  RatMatrix g = nb * to_rational(mf.b_phi.gram) * nb.transpose();
  std::vector<RatVector> t;
  for (const auto& x : short_vectors(to_integer(g), -4)) t.push_back(to_rational(x) * nb);
  RatMatrix inv = inverse(mbar);
  std::set<IntVector> liftable;
  for (const auto& r : roots_of(l10, sigma_basis(ec.sigma))) {
    RatVector rb = b_vector(r, RatVector(mf.n, Rational(0)));
    for (const auto& tv : t) {
      RatVector v(rb.size());
      for (size_t i = 0; i < v.size(); ++i) v[i] = (rb[i] + tv[i]) / Rational(2);
      if (in_lattice(inv, v)) {
        liftable.insert(r);
        break;
      }
    }
  }
  auto rf = rf_roots(ec);
  return liftable == std::set<IntVector>(rf.begin(), rf.end());
}

std::vector<size_t> rf_lift_counts(const MfRecord& mf, const EmbeddingClass& ec, const RatMatrix& mbar) {
  RatMatrix nb = n_part(mf, mbar);
  RatMatrix g = nb * to_rational(mf.b_phi.gram) * nb.transpose();
  std::vector<RatVector> t;
  for (const auto& x : short_vectors(to_integer(g), -4)) t.push_back(to_rational(x) * nb);
  RatMatrix inv = inverse(mbar);
  std::vector<size_t> out;
  for (const auto& r : rf_roots(ec)) {
    RatVector rb = b_vector(r, RatVector(mf.n, Rational(0)));
    size_t c = 0;
    for (const auto& tv : t) {
      RatVector v(rb.size());
      for (size_t i = 0; i < v.size(); ++i) v[i] = (rb[i] + tv[i]) / Rational(2);
      c += in_lattice(inv, v);
    }
    out.push_back(c);
  }
  return out;
}

std::vector<IntMatrix> u_mf_generators(const EmbeddingClass& ec, const MfRecord& mf,
                                       const std::vector<IntMatrix>& stab_gens) {
  const size_t n = mf.n;
  RatMatrix binv = inverse(mf.basis);
  auto to_mf = [&](const IntMatrix& gb) {
    RatMatrix g = mf.basis * to_rational(gb) * binv;
    if (!is_integral(g)) throw std::logic_error("isometry does not preserve M_f");
    IntMatrix gi = to_integer(g);
    if (!is_isometry(mf.m_f, gi)) throw std::logic_error("not an isometry of M_f");
    return gi;
  };
  std::vector<IntMatrix> out;
  for (const auto& g : stab_gens) {
    IntMatrix pm(n, n);
    for (size_t i = 0; i < n; ++i) {
      int j = index_of(ec.phi_f, ec.phi_f[i] * g);
      if (j < 0) throw std::logic_error("stabilizer element moves Phi_f");
      pm(i, static_cast<size_t>(j)) = 1;
    }
    out.push_back(to_mf(block_diag(g, pm)));
  }
  for (const auto& comp : mf.components) {
    IntMatrix d = IntMatrix::identity(n);
    for (int i : comp) d(static_cast<size_t>(i), static_cast<size_t>(i)) = -1;
    out.push_back(to_mf(block_diag(IntMatrix::identity(10), d)));
  }
  return out;
}

std::string q_abbreviation(const std::vector<Integer>& invariants) {
  if (invariants.empty()) return "0";
  std::string s;
  for (const auto& x : invariants) s += x.str();
  return s;
}

StrongResult enumerate_strong_classes(const EmbeddingClass& ec, const std::vector<IntMatrix>& stab_gens) {
  const Lattice& l10 = build_l10().lattice;
  MfRecord mf = build_mf(ec);
  const size_t n = mf.n, dim = 10 + n;
  Discriminant d = discriminant_form(mf.m_f);
  ElementTable table(d.form);
  RatMatrix binv = inverse(mf.basis);
  RatMatrix gm = to_rational(mf.m_f.gram);
  auto idx = [&](const RatVector& vb) -> long {
    RatVector y = vb * binv;
    if (!is_integral(y * gm)) return -1;
    return static_cast<long>(d.form.index(d.element_of(y)));
  };
  RatMatrix dual = inverse(gm) * mf.basis;  // M_f^vee in B-coordinates

  // (C2): classes of (L10 (x) Q) cap M_f^vee modulo L10(2).
  std::set<size_t> f2;
  {
    RatMatrix p = vanishing_part(dual, 10, dim);
    std::map<RatVector, RatVector> classes;  // fractional parts -> representative
    auto frac = [](RatVector v) {
      for (auto& x : v) x = x - Rational(floor(x));
      return v;
    };
    RatVector zero(dim, Rational(0));
    classes.emplace(frac(zero), zero);
    std::vector<RatVector> queue{zero};
    for (size_t q = 0; q < queue.size(); ++q)
      for (size_t i = 0; i < p.rows(); ++i) {
        RatVector v = queue[q];
        RatVector row = p.row(i);
        for (size_t j = 0; j < dim; ++j) v[j] += row[j];
        v = frac(v);
        if (classes.emplace(v, v).second) queue.push_back(v);
      }
    for (const auto& [key, rep] : classes) {
      if (is_integral(rep)) continue;
      long k = idx(rep);
      if (k < 0) throw std::logic_error("dual vector outside M_f^vee");
      f2.insert(static_cast<size_t>(k));
    }
  }
  // (C3) and (C4) through vectors of N(M_f^vee).
  RatMatrix nv = vanishing_part(dual, 0, 10);
  Integer den;
  IntMatrix ng = integral_gram(nv * to_rational(mf.b_phi.gram) * nv.transpose(), den);
  std::set<size_t> f3;
  for (const auto& x : short_vectors(ng, -2 * den.to_int64())) f3.insert(static_cast<size_t>(idx(to_rational(x) * nv)));
  std::vector<RatVector> tvec;
  std::vector<size_t> tidx;
  for (const auto& x : short_vectors(ng, -4 * den.to_int64())) {
    tvec.push_back(to_rational(x) * nv);
    tidx.push_back(static_cast<size_t>(idx(tvec.back())));
  }
  auto rf = rf_roots(ec);
  std::set<IntVector> rf_set(rf.begin(), rf.end());
  std::vector<std::vector<std::pair<size_t, size_t>>> lift_pairs;  // per root of Rbar outside R_f
  bool mf_fails = f2.count(0) || f3.count(0);
  for (const auto& r : up_to_sign(roots_of(l10, sigma_basis(ec.sigma)))) {
    std::vector<std::pair<size_t, size_t>> pairs;
    RatVector rb = b_vector(r, RatVector(n, Rational(0)));
    for (size_t k = 0; k < tvec.size(); ++k) {
      RatVector v(dim);
      for (size_t i = 0; i < dim; ++i) v[i] = (rb[i] + tvec[k][i]) / Rational(2);
      long j = idx(v);
      if (j >= 0) pairs.emplace_back(tidx[k], static_cast<size_t>(j));
    }
    bool lifts_in_mf = std::any_of(pairs.begin(), pairs.end(), [](auto& pr) { return pr.first == 0 && pr.second == 0; });
    if (rf_set.count(r)) {
      if (!lifts_in_mf) throw std::logic_error("a root of R_f has no lift in M_f");
      continue;
    }
    if (lifts_in_mf) mf_fails = true;
    lift_pairs.push_back(std::move(pairs));
  }
  StrongResult res;
  if (mf_fails) return res;

  auto accept = [&](const std::vector<size_t>&, const Bits& h) {
    for (size_t x : f2)
      if (ElementTable::test(h, x)) return false;
    for (size_t x : f3)
      if (ElementTable::test(h, x)) return false;
    for (const auto& pairs : lift_pairs)
      for (const auto& [a, b] : pairs)
        if (ElementTable::test(h, a) && ElementTable::test(h, b)) return false;
    return true;
  };
  std::vector<Perm> perms;
  {
    std::set<Perm> seen;
    for (const auto& g : u_mf_generators(ec, mf, stab_gens)) {
      Perm p = d.action(g);
      if (!perm_is_identity(p) && seen.insert(p).second) perms.push_back(p);
    }
  }
  auto reps = isotropic_subgroups<Perm, PermHash>(table, perms, perms, perm_identity(d.form.size()), perm_compose,
                                                  perm_inverse, accept, false);
  res.candidates = reps.size();
  for (const auto& rep : reps) {
    std::vector<FiniteQuadraticForm::Element> gens;
    for (size_t g : rep.gens) gens.push_back(d.form.element(g));
    Overlattice ov = overlattice_from_isotropic(d, gens);
    Signature s = signature(ov.lattice.gram);
    if (s.pos != 1 || s.neg != static_cast<int>(9 + n)) throw std::logic_error("Mbar has the wrong signature");
    for (size_t c : rf_lift_counts(mf, ec, ov.basis * mf.basis))
      if (c != 2) throw std::logic_error("a root of R_f does not have exactly two lifts");
    Signature k3{3, 19, false};
    GenusVerdict v = even_lattice_exists(k3.pos - s.pos, k3.neg - s.neg, discriminant_form(ov.lattice).form.negated());
    if (!v.exists) {
      res.c1_failures.push_back(v.reason);
      continue;
    }
    StrongClass sc;
    sc.class_key = ec.key();
    sc.basis = ov.basis * mf.basis;
    sc.mbar = ov.lattice;
    for (long x : modular_smith(to_integer(inverse(ov.basis))).invariants)
      if (x != 1) sc.q_invariants.push_back(Integer(static_cast<long long>(x)));
    std::sort(sc.q_invariants.begin(), sc.q_invariants.end(), [](const Integer& a, const Integer& b) { return b < a; });
    sc.q = q_abbreviation(sc.q_invariants);
    sc.orbit_size = rep.orbit_size;
    res.classes.push_back(std::move(sc));
  }
  return res;
}

namespace {

nlohmann::json rat_matrix_json(const RatMatrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).str());
    j.push_back(row);
  }
  return j;
}

RatMatrix json_rat_matrix(const nlohmann::json& j) {
  RatMatrix m;
  for (const auto& row : j) {
    RatVector v;
    for (const auto& x : row) v.push_back(Rational::parse(x.get<std::string>()));
    m.append_row(v);
  }
  return m;
}

std::string strong_cache_path(const std::string& dir, const std::string& key) {
  std::string name = stabilizer_cache_name(key);
  return dir + "/strong_" + name.substr(5);
}

std::string strong_to_json(const std::string& key, const std::vector<StrongClass>& classes) {
  nlohmann::json j;
  j["version"] = 1;
  j["class_key"] = key;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : classes) {
    nlohmann::json cj;
    cj["Q"] = c.q;
    nlohmann::json inv = nlohmann::json::array();
    for (const auto& x : c.q_invariants) inv.push_back(int_json(x));
    cj["q_invariants"] = inv;
    cj["orbit_size"] = c.orbit_size;
    cj["basis"] = rat_matrix_json(c.basis);
    arr.push_back(cj);
  }
  j["classes"] = arr;
  return j.dump();
}

std::optional<std::vector<StrongClass>> strong_from_cache(const std::string& path, const EmbeddingClass& ec) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    std::ifstream in(path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("version") != 1 || j.at("class_key") != ec.key()) return std::nullopt;
    MfRecord mf = build_mf(ec);
    RatMatrix mf_inv = inverse(mf.basis);
    std::vector<StrongClass> out;
    for (const auto& cj : j.at("classes")) {
      StrongClass c;
      c.class_key = ec.key();
      c.q = cj.at("Q").get<std::string>();
      for (const auto& x : cj.at("q_invariants")) c.q_invariants.push_back(json_int(x));
      c.orbit_size = cj.at("orbit_size").get<size_t>();
      c.basis = json_rat_matrix(cj.at("basis"));
      RatMatrix g = gram_of(mf.b_phi, c.basis);
      // the stored basis must span an even overlattice of M_f
      if (c.basis.rows() != mf.basis.rows() || !is_integral(g) || !is_integral(mf.basis * inverse(c.basis)))
        return std::nullopt;
      c.mbar = Lattice(to_integer(g));
      if (!c.mbar.is_even()) return std::nullopt;
      out.push_back(std::move(c));
    }
    return out;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

StrongClassification classify_strong(unsigned threads, const std::string& cache_dir, size_t max_chambers) {
  std::vector<EmbeddingClass> classes = classify_configurations(threads, cache_dir);
  std::mutex mu;
  std::map<SigmaMask, SigmaStabilizer> memo;
  auto hs_of = [&](SigmaMask s) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(s);
      if (it != memo.end()) return it->second;
    }
    SigmaStabilizer st = stab_sigma(s, cached_orbit(s, cache_dir));
    std::lock_guard<std::mutex> lock(mu);
    return memo.emplace(s, std::move(st)).first->second;
  };
  StrongClassification out;
  out.rows.resize(classes.size());
  parallel_for(classes.size(), threads, [&](size_t i) {
    const EmbeddingClass& ec = classes[i];
    Table1Row& row = out.rows[i];
    row.no = i + 1;
    row.tau_phi = ec.tau_phi;
    row.tau_rbar = ec.tau_rbar;
    std::string path = cache_dir.empty() ? "" : strong_cache_path(cache_dir, ec.key());
    if (!path.empty())
      if (auto cached = strong_from_cache(path, ec)) {
        row.strong = std::move(*cached);
        return;
      }
    try {
      PhiStabilizer st = cached_stabilizer(ec, hs_of(ec.sigma), cache_dir, max_chambers);
      row.strong = enumerate_strong_classes(ec, st.gens).classes;
    } catch (const ChamberBudgetExceeded&) {
      row.computed = false;
      return;
    }
    if (!path.empty()) {
      std::filesystem::create_directories(cache_dir);
      std::string tmp = path + ".tmp";
      {
        std::ofstream o(tmp);
        o << strong_to_json(ec.key(), row.strong);
      }
      std::filesystem::rename(tmp, path);
    }
  });
  for (const auto& r : out.rows) {
    if (!r.computed) {
      out.skipped.push_back(r.tau_phi.str() + "/" + r.tau_rbar.str());
      continue;
    }
    out.strong_total += r.strong.size();
    out.realizable += !r.strong.empty();
  }
  return out;
}

std::string table1_csv(const StrongClassification& c) {
  std::ostringstream os;
  os << "no,tau_phi,tau_rbar,Q\n";
  for (const auto& r : c.rows) {
    std::string q;
    for (const auto& s : r.strong) q += (q.empty() ? "" : " ") + s.q;
    if (!r.computed) q = "?";
    os << r.no << ',' << r.tau_phi.str() << ',' << (r.tau_rbar == r.tau_phi ? "" : r.tau_rbar.str()) << ','
       << (q.empty() ? "-" : q) << '\n';
  }
  return os.str();
}

std::string table1_json(const StrongClassification& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : c.rows) {
    nlohmann::json row;
    row["no"] = r.no;
    row["tau_phi"] = r.tau_phi.str();
    row["tau_rbar"] = r.tau_rbar.str();
    row["computed"] = r.computed;
    nlohmann::json strong = nlohmann::json::array();
    for (const auto& s : r.strong) {
      nlohmann::json sj;
      sj["Q"] = s.q;
      sj["gram"] = matrix_json(s.mbar.gram);
      strong.push_back(sj);
    }
    row["strong"] = strong;
    rows.push_back(row);
  }
  nlohmann::json j;
  j["rows"] = rows;
  j["strong_total"] = c.strong_total;
  j["realizable"] = c.realizable;
  j["skipped"] = c.skipped;
  return j.dump(1);
}

}  // namespace rdp

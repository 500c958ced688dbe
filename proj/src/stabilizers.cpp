#include "rdp/stabilizers.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "rdp/json_io.hpp"

namespace rdp {

namespace {

using Coords = std::vector<int>;  // n x n, row-major: roots of Phi_f in a basis of Rbar

struct CoordsHash {
  size_t operator()(const Coords& c) const {
    size_t h = 0xcbf29ce484222325ull;
    for (int v : c) h = (h ^ static_cast<size_t>(v + 1000)) * 0x100000001b3ull;
    return h;
  }
};

IntMatrix rows_of(const std::vector<IntVector>& vs) {
  IntMatrix m;
  for (const auto& v : vs) m.append_row(v);
  return m;
}

// Rows sorted lexicographically: the configuration as an unordered set.
Coords sorted_rows(const Coords& c, size_t n) {
  std::vector<std::vector<int>> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i].assign(c.begin() + static_cast<long>(i * n), c.begin() + static_cast<long>((i + 1) * n));
  std::sort(rows.begin(), rows.end());
  Coords out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

// Coefficients of the rows of vs in the basis rows of b (which span them).
IntMatrix coordinates(const Lattice& l, const IntMatrix& vs, const IntMatrix& b) {
  RatMatrix rhs = to_rational(vs * l.gram * b.transpose());
  RatMatrix g = to_rational(b * l.gram * b.transpose());
  RatMatrix c = rhs * inverse(g);
  if (!is_integral(c)) throw std::logic_error("vectors are not integral in the given basis");
  return to_integer(c);
}

// The isometry of L10 acting on <Sigma> by sigma_i -> images_i and trivially on Sigma^perp.
IntMatrix extend_by_identity(const IntMatrix& sigma, const IntMatrix& images) {
  const Lattice& l10 = build_l10().lattice;
  Complement perp = orthogonal_complement(l10, sigma);
  IntMatrix src = sigma, dst = images;
  for (size_t i = 0; i < perp.basis.rows(); ++i) {
    src.append_row(perp.basis.row(i));
    dst.append_row(perp.basis.row(i));
  }
  RatMatrix g = inverse(to_rational(src)) * to_rational(dst);
  if (!is_integral(g)) throw std::logic_error("extension by the identity is not integral");
  return to_integer(g);
}

bool fixes_set(const IntMatrix& g, const std::vector<IntVector>& phi) {
  std::set<IntVector> want(phi.begin(), phi.end());
  for (const auto& r : phi)
    if (!want.count(r * g)) return false;
  return true;
}

}  // namespace

Integer chamber_count(const EmbeddingClass& ec) { return ec.tau_rbar.weyl_order() / ec.tau_phi.weyl_order(); }

PhiStabilizer stab_phi_f(const EmbeddingClass& ec, const SigmaStabilizer& hs) {
  const Lattice& l10 = build_l10().lattice;
  const size_t n = ec.phi_f.size();
  IntMatrix sigma = sigma_basis(ec.sigma);
  IntMatrix phi = rows_of(ec.phi_f);
  IntMatrix a = gram_of(l10, sigma);
  IntMatrix c0m = coordinates(l10, phi, sigma);
  Coords c0(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      c0[i * n + j] = static_cast<int>(c0m(i, j).to_int64());
      if (c0[i * n + j] < 0) throw std::logic_error("Phi_f is not positive on the chamber of Sigma");
    }

  // O(Phi_f) under Stab(Sigma, L10), which acts on <Sigma> by permuting Sigma.
  std::vector<Perm> col_perm;
  auto sroots = sigma_roots(ec.sigma);
  for (const auto& g : hs.gens) {
    Perm p(n);
    for (size_t i = 0; i < n; ++i) p[i] = index_of(sroots, sroots[i] * g);
    col_perm.push_back(p);
  }
  auto act = [&](const Coords& c, size_t gi) {
    Coords out(n * n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) out[i * n + static_cast<size_t>(col_perm[gi][j])] = c[i * n + j];
    return sorted_rows(out, n);
  };
  auto mul = [](const IntMatrix& x, const IntMatrix& y) { return x * y; };
  auto inv = [&](const IntMatrix& x) { return isometry_inverse(l10, x); };
  auto os = orbit_stabilizer<Coords, IntMatrix, CoordsHash, std::hash<IntMatrix>>(
      sorted_rows(c0, n), hs.gens, IntMatrix::identity(10), act, mul, inv, 1u << 22);
  std::unordered_map<Coords, size_t, CoordsHash> where;
  for (size_t i = 0; i < os.orbit.size(); ++i) where.emplace(os.orbit[i], i);

  PhiStabilizer out;
  out.method = "sieve";
  std::unordered_set<IntMatrix> seen;
  auto add = [&](const IntMatrix& g) {
    if (g == IntMatrix::identity(10) || !seen.insert(g).second) return;
    if (!fixes_set(g, ec.phi_f)) throw std::logic_error("stabilizer generator moves Phi_f");
    out.gens.push_back(g);
  };
  for (const auto& g : os.stabilizer) add(g);

  // Chambers of Rbar inside Gamma(Phi_f): crossing the wall of basis root k
  // keeps Phi_f positive unless that root lies in Phi_f.
  std::unordered_set<Coords, CoordsHash> visited{c0};
  std::vector<Coords> queue{c0};
  for (size_t q = 0; q < queue.size(); ++q) {
    const Coords c = queue[q];
    auto it = where.find(sorted_rows(c, n));
    if (q > 0 && it != where.end()) {
      // Delta = C^-1 Phi_f is Sigma^w; Phi_f^{w^-1} = Phi_f^{h}
      IntMatrix cm(n, n);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) cm(i, j) = c[i * n + j];
      RatMatrix delta = inverse(to_rational(cm)) * to_rational(phi);
      IntMatrix w = extend_by_identity(sigma, to_integer(delta));
      add(os.transversal[it->second] * w);
    }
    for (size_t k = 0; k < n; ++k) {
      Coords next = c;
      bool positive = true;
      for (size_t i = 0; i < n && positive; ++i) {
        long s = 0;
        for (size_t j = 0; j < n; ++j) s += static_cast<long>(c[i * n + j]) * a(j, k).to_int64();
        next[i * n + k] += static_cast<int>(s);
        positive = next[i * n + k] >= 0;
      }
      if (positive && visited.insert(next).second) queue.push_back(std::move(next));
    }
  }
  out.chambers = queue.size();
  if (Integer(static_cast<long long>(out.chambers)) != chamber_count(ec))
    throw std::logic_error("chamber count differs from |W(Rbar)|/|W(R_f)|");
  return out;
}

namespace {

struct E8Split {
  std::vector<size_t> e_idx;       // Sigma positions of the E8 component
  IntMatrix e_basis, u_basis;      // L10 = <E> + U
  std::vector<size_t> phi_e, phi_u;
};

std::optional<E8Split> split_e8(const EmbeddingClass& ec) {
  const Lattice& l10 = build_l10().lattice;
  auto sidx = sigma_indices(ec.sigma);
  DynkinIdentification id = identify_dynkin(l10.gram.submatrix(sidx, sidx));
  E8Split sp;
  for (const auto& comp : id.components) {
    std::vector<size_t> idx, amb;
    for (int i : comp) {
      idx.push_back(static_cast<size_t>(i));
      amb.push_back(sidx[static_cast<size_t>(i)]);
    }
    if (ade_type_of(l10.gram.submatrix(amb, amb)).str() == "E8") sp.e_idx = idx;
  }
  if (sp.e_idx.empty()) return std::nullopt;
  auto sroots = sigma_roots(ec.sigma);
  for (size_t i : sp.e_idx) sp.e_basis.append_row(sroots[i]);
  sp.u_basis = orthogonal_complement(l10, sp.e_basis).basis;
  for (size_t i = 0; i < ec.phi_f.size(); ++i) {
    Integer p(0);
    for (size_t j = 0; j < sp.u_basis.rows(); ++j) p += abs(l10.inner(ec.phi_f[i], sp.u_basis.row(j)));
    (p.is_zero() ? sp.phi_e : sp.phi_u).push_back(i);
  }
  if (sp.phi_e.size() != 8) return std::nullopt;
  return sp;
}

IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

// Keeps the elements of a finite group that enlarge the group generated so far.
std::vector<Perm> small_generating_set(const std::vector<Perm>& elems, size_t n) {
  std::vector<Perm> gens;
  std::unordered_set<Perm, PermHash> have{perm_identity(n)};
  for (const auto& e : elems) {
    if (have.count(e)) continue;
    gens.push_back(e);
    auto all = perm_group_elements(gens, n);
    have = std::unordered_set<Perm, PermHash>(all.begin(), all.end());
    if (have.size() == elems.size()) break;
  }
  return gens;
}

}  // namespace

bool has_unimodular_shortcut(const EmbeddingClass& ec) { return split_e8(ec).has_value(); }

PhiStabilizer stab_unimodular_shortcut(const EmbeddingClass& ec) {
  auto sp = split_e8(ec);
  if (!sp) throw std::invalid_argument("class " + ec.key() + " has no E8 summand spanned by Phi_f");
  const Lattice& l10 = build_l10().lattice;
  Lattice e(gram_of(l10, sp->e_basis)), u(gram_of(l10, sp->u_basis));
  if (!abs(e.det()).is_one() || !abs(u.det()).is_one()) throw std::logic_error("L10 does not split as E8 + U");
  IntMatrix t = sp->e_basis;
  for (size_t i = 0; i < 2; ++i) t.append_row(sp->u_basis.row(i));

  // O(E) part: automorphisms of Phi_E that extend integrally to E.
  IntMatrix x;
  for (size_t i : sp->phi_e) x.append_row(ec.phi_f[i]);
  IntMatrix xe = coordinates(l10, x, sp->e_basis);
  RatMatrix xe_inv = inverse(to_rational(xe));
  AutGroup aut = aut_configuration(gram_of(l10, x));
  std::vector<Perm> valid;
  std::map<Perm, IntMatrix> mats;
  for (const auto& p : perm_group_elements(aut.gens, 8)) {
    IntMatrix pm(8, 8);
    for (size_t i = 0; i < 8; ++i) pm(i, static_cast<size_t>(p[i])) = 1;
    RatMatrix ar = xe_inv * to_rational(pm) * to_rational(xe);
    if (!is_integral(ar)) continue;
    valid.push_back(p);
    mats.emplace(p, to_integer(ar));
  }
  // O+(U) part fixing Phi_U: the four isometries of a hyperbolic plane, cone preserving.
  IntVector pos_u;
  for (long i = 0; i < 49 && pos_u.empty(); ++i) {
    IntVector cand = int_vector({i / 7 - 3, i % 7 - 3});
    RatVector amb = to_rational(cand * sp->u_basis);
    if (l10.norm(amb).sign() <= 0) continue;
    pos_u = cand;
    if (l10.inner(amb, build_l10().c0).sign() < 0)
      for (auto& v : pos_u) v = -v;
  }
  if (pos_u.empty()) throw std::logic_error("no positive vector in U");
  std::vector<IntMatrix> u_valid;
  for (long a0 = -1; a0 <= 1; ++a0)
    for (long a1 = -1; a1 <= 1; ++a1)
      for (long a2 = -1; a2 <= 1; ++a2)
        for (long a3 = -1; a3 <= 1; ++a3) {
          IntMatrix b = int_matrix({{a0, a1}, {a2, a3}});
          if (b * u.gram * b.transpose() != u.gram) continue;
          if (u.inner(pos_u, pos_u * b).sign() <= 0) continue;
          bool ok = true;
          for (size_t i : sp->phi_u) {
            IntVector c = coordinates(l10, rows_of({ec.phi_f[i]}), sp->u_basis).row(0);
            IntVector img = (c * b) * sp->u_basis;
            ok = ok && img == ec.phi_f[i];
          }
          if (ok) u_valid.push_back(b);
        }
  PhiStabilizer out;
  out.method = "unimodular";
  RatMatrix tinv = inverse(to_rational(t));
  auto lift = [&](const IntMatrix& ae, const IntMatrix& bu) {
    return to_integer(tinv * to_rational(block_diag(ae, bu)) * to_rational(t));
  };
  for (const auto& p : small_generating_set(valid, 8)) out.gens.push_back(lift(mats.at(p), IntMatrix::identity(2)));
  for (const auto& b : u_valid)
    if (b != IntMatrix::identity(2)) out.gens.push_back(lift(IntMatrix::identity(8), b));
  for (const auto& g : out.gens) {
    if (!is_isometry(l10, g)) throw std::logic_error("shortcut generator is not an isometry");
    if (!fixes_set(g, ec.phi_f)) throw std::logic_error("shortcut generator moves Phi_f");
  }
  out.order = Integer(static_cast<long long>(valid.size() * u_valid.size()));
  return out;
}

PhiStabilizer stabilizer_of(const EmbeddingClass& ec, const SigmaStabilizer& hs, size_t budget) {
  if (chamber_count(ec) > Integer(static_cast<long long>(budget)) && has_unimodular_shortcut(ec))
    return stab_unimodular_shortcut(ec);
  return stab_phi_f(ec, hs);
}

std::string stabilizer_cache_name(const std::string& class_key) {
  std::string s = "stab_";
  for (char c : class_key) s += (c == '+' ? 'p' : c == '/' ? '_' : c);
  return s + ".json";
}

PhiStabilizer cached_stabilizer(const EmbeddingClass& ec, const SigmaStabilizer& hs, const std::string& dir,
                                size_t max_chambers) {
  std::string path = dir.empty() ? "" : dir + "/" + stabilizer_cache_name(ec.key());
  if (!path.empty() && std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      PhiStabilizer s = stabilizer_from_json(buf.str());
      const Lattice& l10 = build_l10().lattice;
      bool ok = true;
      for (const auto& g : s.gens) ok = ok && g.rows() == 10 && is_isometry(l10, g) && fixes_set(g, ec.phi_f);
      if (ok) return s;
    } catch (const std::exception&) {
      // unreadable cache entries are recomputed
    }
  }
  if (max_chambers > 0 && !has_unimodular_shortcut(ec) &&
      chamber_count(ec) > Integer(static_cast<long long>(max_chambers)))
    throw ChamberBudgetExceeded("class " + ec.key() + " needs " + chamber_count(ec).str() + " chambers");
  PhiStabilizer s = stabilizer_of(ec, hs, max_chambers > 0 ? max_chambers : 500000);
  if (!path.empty()) {
    std::filesystem::create_directories(dir);
    std::string tmp = path + ".tmp" + std::to_string(std::hash<std::string>{}(ec.key()));
    {
      std::ofstream out(tmp);
      out << stabilizer_to_json(ec.key(), s);
    }
    std::filesystem::rename(tmp, path);
  }
  return s;
}

std::optional<size_t> matrix_group_order(const std::vector<IntMatrix>& gens, size_t cap) {
  if (gens.empty()) return 1;
  IntMatrix id = IntMatrix::identity(gens[0].rows());
  std::vector<IntMatrix> elems{id};
  std::unordered_set<IntMatrix> seen{id};
  for (size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : gens) {
      IntMatrix h = elems[i] * g;
      if (seen.insert(h).second) {
        elems.push_back(std::move(h));
        if (elems.size() > cap) return std::nullopt;
      }
    }
  return elems.size();
}

std::string stabilizer_to_json(const std::string& class_key, const PhiStabilizer& s) {
  nlohmann::json j;
  j["class_key"] = class_key;
  j["order_if_finite"] = s.order ? int_json(*s.order) : nlohmann::json(nullptr);
  j["method"] = s.method;
  j["chambers"] = s.chambers;
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : s.gens) gens.push_back(matrix_json(g));
  j["gens"] = gens;
  return j.dump();
}

PhiStabilizer stabilizer_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  PhiStabilizer s;
  if (!j.at("order_if_finite").is_null()) s.order = json_int(j.at("order_if_finite"));
  s.method = j.value("method", "");
  s.chambers = j.value("chambers", size_t{0});
  for (const auto& g : j.at("gens")) s.gens.push_back(json_matrix(g));
  return s;
}

}  // namespace rdp

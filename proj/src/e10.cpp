#include "rdp/e10.hpp"

#include <algorithm>
#include <bit>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rdp/json_io.hpp"
#include "rdp/parallel.hpp"

namespace rdp {

namespace {

constexpr int kCacheVersion = 1;

IntMatrix e10_gram() {
  IntMatrix g(10, 10);
  for (size_t i = 0; i < 10; ++i) g(i, i) = -2;
  std::vector<std::pair<size_t, size_t>> edges{{0, 3}, {1, 2}, {2, 3}};
  for (size_t i = 3; i + 1 < 10; ++i) edges.emplace_back(i, i + 1);
  for (auto [a, b] : edges) g(a, b) = g(b, a) = 1;
  return g;
}

IntVector unit(size_t i) {
  IntVector v(10, Integer(0));
  v[i] = 1;
  return v;
}

// Rows of m indexed by s are supported on the columns indexed by s.
bool preserves_span(const IntMatrix& m, SigmaMask s) {
  for (size_t i = 0; i < 10; ++i) {
    if (!(s >> i & 1)) continue;
    for (size_t j = 0; j < 10; ++j)
      if (!(s >> j & 1) && !m(i, j).is_zero()) return false;
  }
  return true;
}

}  // namespace

const E10Basis& build_l10() {
  static const E10Basis basis = [] {
    E10Basis b;
    b.lattice = Lattice(e10_gram());
    b.dual = dual_basis(b.lattice);
    b.c0 = RatVector(10, Rational(0));
    for (size_t i = 0; i < 10; ++i)
      for (size_t j = 0; j < 10; ++j) b.c0[j] += b.dual(i, j);
    return b;
  }();
  return basis;
}

bool in_S(SigmaMask s) { return s != 0 && s != kFullMask && s != kFirstNineMask && s <= kFullMask; }

std::vector<SigmaMask> enumerate_S() {
  std::vector<SigmaMask> out;
  for (unsigned s = 1; s <= kFullMask; ++s)
    if (in_S(static_cast<SigmaMask>(s))) out.push_back(static_cast<SigmaMask>(s));
  return out;
}

int sigma_size(SigmaMask s) { return std::popcount(static_cast<unsigned>(s)); }

std::vector<size_t> sigma_indices(SigmaMask s) {
  std::vector<size_t> out;
  for (size_t i = 0; i < 10; ++i)
    if (s >> i & 1) out.push_back(i);
  return out;
}

std::vector<IntVector> sigma_roots(SigmaMask s) {
  std::vector<IntVector> out;
  for (size_t i : sigma_indices(s)) out.push_back(unit(i));
  return out;
}

IntMatrix sigma_basis(SigmaMask s) {
  IntMatrix b;
  for (size_t i : sigma_indices(s)) b.append_row(unit(i));
  return b;
}

ADEType sigma_type(SigmaMask s) {
  auto idx = sigma_indices(s);
  return ade_type_of(build_l10().lattice.gram.submatrix(idx, idx));
}

std::string sigma_string(SigmaMask s) {
  std::string out;
  for (size_t i : sigma_indices(s)) out += (out.empty() ? "e" : ",e") + std::to_string(i + 1);
  return out;
}

SigmaMask parse_sigma(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t.empty()) throw std::invalid_argument("empty root set");
  bool list = t.find(',') != std::string::npos || t[0] == 'e' || t[0] == 'E';
  if (!list) {
    unsigned long v = std::stoul(t, nullptr, 0);
    if (v > kFullMask) throw std::invalid_argument("bitmask out of range: " + text);
    return static_cast<SigmaMask>(v);
  }
  SigmaMask s = 0;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty() && (item[0] == 'e' || item[0] == 'E')) item = item.substr(1);
    int k = std::stoi(item);
    if (k < 1 || k > 10) throw std::invalid_argument("no root e" + item);
    s |= static_cast<SigmaMask>(1u << (k - 1));
  }
  return s;
}

const WallData& wall_data(SigmaMask xi) {
  static std::vector<WallData> table;
  static std::once_flag once;
  std::call_once(once, [] {
    const Lattice& l = build_l10().lattice;
    table.resize(kFullMask + 1);
    std::vector<SigmaMask> all = enumerate_S();
    for (SigmaMask s : all) {
      WallData& w = table[s];
      w.roots = roots_of(l, sigma_basis(s));
      w.xi = word_matrix(l, longest_element(l, w.roots, sigma_roots(s)));
    }
  });
  if (!in_S(xi)) throw std::invalid_argument("not an element of S: " + sigma_string(xi));
  return table[xi];
}

bool chamber_sound(SigmaMask walk_sigma, const ChamberRecord& d) {
  if (sigma_size(d.sigma) != sigma_size(walk_sigma)) return false;
  auto rows = sigma_indices(d.sigma);
  auto cols = sigma_indices(walk_sigma);
  for (size_t r : rows)
    for (size_t j = 0; j < 10; ++j)
      if (!(walk_sigma >> j & 1) && !d.gamma(r, j).is_zero()) return false;
  return abs(determinant(d.gamma.submatrix(rows, cols))).is_one();
}

ChamberRecord adjacent_chamber(SigmaMask walk_sigma, const ChamberRecord& d, SigmaMask xi) {
  if (!in_S(xi) || (xi & d.sigma) != d.sigma || sigma_size(xi) != sigma_size(d.sigma) + 1)
    throw std::invalid_argument("not a wall of the induced chamber: " + sigma_string(xi));
  ChamberRecord out;
  out.gamma = wall_data(xi).xi * d.gamma;
  for (size_t k = 0; k < 10; ++k) {
    bool inside = true;
    for (size_t j = 0; j < 10 && inside; ++j)
      if (!(walk_sigma >> j & 1) && !out.gamma(k, j).is_zero()) inside = false;
    if (inside) out.sigma |= static_cast<SigmaMask>(1u << k);
  }
  if (!chamber_sound(walk_sigma, out))
    throw std::logic_error("adjacent chamber does not meet the face of " + sigma_string(walk_sigma));
  return out;
}

SigmaOrbitData orbit_of_sigma(SigmaMask s) {
  if (!in_S(s)) throw std::invalid_argument("not an element of S: " + std::to_string(s));
  const Lattice& l = build_l10().lattice;
  SigmaOrbitData data;
  data.sigma = s;
  data.sigma_list.push_back(s);
  data.gamma_list.push_back(IntMatrix::identity(10));
  std::vector<int> slot(kFullMask + 1, -1);
  slot[s] = 0;
  std::unordered_set<IntMatrix> seen_gens;
  const IntMatrix id = IntMatrix::identity(10);
  for (size_t i = 0; i < data.sigma_list.size(); ++i) {
    ChamberRecord d{data.gamma_list[i], data.sigma_list[i]};
    for (size_t k = 0; k < 10; ++k) {
      if (d.sigma >> k & 1) continue;
      SigmaMask xi = static_cast<SigmaMask>(d.sigma | (1u << k));
      if (!in_S(xi)) continue;
      ChamberRecord next = adjacent_chamber(s, d, xi);
      int m = slot[next.sigma];
      if (m < 0) {
        slot[next.sigma] = static_cast<int>(data.sigma_list.size());
        data.sigma_list.push_back(next.sigma);
        data.gamma_list.push_back(std::move(next.gamma));
        continue;
      }
      IntMatrix g = isometry_inverse(l, next.gamma) * data.gamma_list[static_cast<size_t>(m)];
      if (g == id || !seen_gens.insert(g).second) continue;
      if (!preserves_span(g, s) || !is_isometry(l, g))
        throw std::logic_error("closing element does not stabilize <Sigma>");
      data.gens.push_back(std::move(g));
    }
  }
  return data;
}

SigmaStabilizer stab_sigma(SigmaMask s, const SigmaOrbitData& data) {
  if (data.sigma != s) throw std::invalid_argument("orbit data belongs to another Sigma");
  const Lattice& l = build_l10().lattice;
  const auto& roots = wall_data(s).roots;
  auto simple = sigma_roots(s);
  SigmaStabilizer out;
  std::unordered_set<IntMatrix> seen;
  std::unordered_set<Perm, PermHash> seen_perm;
  for (const auto& g : data.gens) {
    KappaResult k = kappa(l, roots, simple, g);
    if (!preserves_span(k.element, s)) throw std::logic_error("kappa~ image moves <Sigma>");
    if (seen.insert(k.element).second) out.gens.push_back(k.element);
    if (!perm_is_identity(k.perm) && seen_perm.insert(k.perm).second) out.h_gens.push_back(k.perm);
  }
  out.h_order = Integer(static_cast<long long>(
      perm_group_elements(out.h_gens, simple.size(), 1u << 22).size()));
  return out;
}

std::string orbit_to_json(const SigmaOrbitData& d) {
  nlohmann::json j;
  j["version"] = kCacheVersion;
  j["sigma"] = d.sigma;
  j["class"] = d.sigma_list;
  nlohmann::json gammas = nlohmann::json::array(), gens = nlohmann::json::array();
  for (const auto& g : d.gamma_list) gammas.push_back(matrix_json(g));
  for (const auto& g : d.gens) gens.push_back(matrix_json(g));
  j["gammas"] = gammas;
  j["gens"] = gens;
  return j.dump();
}

SigmaOrbitData orbit_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.value("version", 0) != kCacheVersion) throw std::runtime_error("stale Sigma cache entry");
  SigmaOrbitData d;
  d.sigma = j.at("sigma").get<SigmaMask>();
  d.sigma_list = j.at("class").get<std::vector<SigmaMask>>();
  for (const auto& g : j.at("gammas")) d.gamma_list.push_back(json_matrix(g));
  for (const auto& g : j.at("gens")) d.gens.push_back(json_matrix(g));
  if (d.gamma_list.size() != d.sigma_list.size()) throw std::runtime_error("corrupt Sigma cache entry");
  const Lattice& l = build_l10().lattice;
  for (size_t i = 0; i < d.sigma_list.size(); ++i)
    if (!chamber_sound(d.sigma, {d.gamma_list[i], d.sigma_list[i]}))
      throw std::runtime_error("Sigma cache entry fails the chamber check");
  for (const auto& g : d.gens)
    if (!preserves_span(g, d.sigma) || !is_isometry(l, g))
      throw std::runtime_error("Sigma cache entry has a bad generator");
  return d;
}

SigmaOrbitData cached_orbit(SigmaMask s, const std::string& cache_dir) {
  if (cache_dir.empty()) return orbit_of_sigma(s);
  std::string path = cache_dir + "/sigma_" + std::to_string(s) + ".json";
  {
    std::ifstream in(path);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        SigmaOrbitData d = orbit_from_json(buf.str());
        if (d.sigma == s) return d;
      } catch (const std::exception&) {
      }
    }
  }
  SigmaOrbitData d = orbit_of_sigma(s);
  std::filesystem::create_directories(cache_dir);
  std::string tmp = path + ".tmp" + std::to_string(std::hash<std::thread::id>()(std::this_thread::get_id()));
  {
    std::ofstream f(tmp);
    f << orbit_to_json(d) << "\n";
  }
  std::filesystem::rename(tmp, path);
  return d;
}

std::vector<SigmaOrbitData> all_orbits(unsigned threads, const std::string& cache_dir) {
  std::vector<SigmaMask> all = enumerate_S();
  wall_data(all.front());
  std::vector<SigmaOrbitData> out(all.size());
  parallel_for(all.size(), threads, [&](size_t i) { out[i] = cached_orbit(all[i], cache_dir); });
  return out;
}

NNClassification classify_nn(const std::vector<SigmaOrbitData>& orbits) {
  std::unordered_map<SigmaMask, std::vector<SigmaMask>> sorted;
  for (const auto& d : orbits) {
    auto v = d.sigma_list;
    std::sort(v.begin(), v.end());
    sorted[d.sigma] = std::move(v);
  }
  NNClassification res;
  res.symmetric = true;
  std::vector<std::vector<SigmaMask>> keys;
  for (const auto& d : orbits) {
    const auto& mine = sorted.at(d.sigma);
    for (SigmaMask t : mine) {
      auto it = sorted.find(t);
      if (it == sorted.end() || it->second != mine) res.symmetric = false;
    }
    if (mine.front() == d.sigma) keys.push_back(mine);
  }
  res.matches_types = true;
  std::unordered_map<std::string, int> type_seen;
  for (const auto& members : keys) {
    ADEType t = sigma_type(members.front());
    for (SigmaMask m : members)
      if (sigma_type(m) != t) res.matches_types = false;
    if (type_seen[t.str()]++) res.matches_types = false;
    res.classes.push_back({t, members});
  }
  std::sort(res.classes.begin(), res.classes.end(),
            [](const SigmaClass& a, const SigmaClass& b) { return a.type < b.type; });
  return res;
}

const std::vector<std::pair<ADEType, SigmaMask>>& sigma_types() {
  static const std::vector<std::pair<ADEType, SigmaMask>> table = [] {
    std::vector<std::pair<ADEType, SigmaMask>> t;
    for (SigmaMask s : enumerate_S()) {
      ADEType ty = sigma_type(s);
      if (std::none_of(t.begin(), t.end(), [&](const auto& e) { return e.first == ty; })) t.emplace_back(ty, s);
    }
    std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return t;
  }();
  return table;
}

SigmaMask sigma_of_type(const ADEType& t) {
  for (const auto& [ty, s] : sigma_types())
    if (ty == t) return s;
  throw std::invalid_argument("type " + t.str() + " is not a sub-diagram of E10");
}

bool in_tau_S(const ADEType& t) {
  const auto& st = sigma_types();
  return std::any_of(st.begin(), st.end(), [&](const auto& e) { return e.first == t; });
}

}  // namespace rdp

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rdp/json_io.hpp"
#include "rdp/realizability.hpp"

using namespace rdp;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kError = 1, kMismatch = 2, kBudget = 3 };

struct Config {
  std::string cache;
  unsigned threads = 1;
  std::string format = "csv";
  std::string expect;
  std::string out = ".";
  size_t max_chambers = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name, tmp = path + ".tmp";
  {
    std::ofstream o(tmp);
    o << text;
  }
  std::filesystem::rename(tmp, path);
}

std::vector<long> parse_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

// Thread count and cache location never enter the fingerprint.
std::string fingerprint(const std::string& stage, const Config& c) {
  std::string key = std::string(kVersion) + "|" + stage + "|" + std::to_string(c.max_chambers);
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : key) h = (h ^ ch) * 0x100000001b3ull;
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string csv_header(const std::string& stage, const Config& c) {
  return "# rdp " + std::string(kVersion) + " classify " + stage + " config " + fingerprint(stage, c) + "\n";
}

json artifact_json(const std::string& stage, const Config& c) {
  return {{"version", kVersion}, {"stage", stage}, {"config", fingerprint(stage, c)}};
}

int check_expect(const Config& c, const std::vector<long>& got, const std::string& what) {
  if (c.expect.empty()) return kOk;
  std::vector<long> want = parse_list(c.expect);
  for (size_t i = 0; i < want.size(); ++i)
    if (i >= got.size() || got[i] != want[i]) {
      std::cerr << "expectation mismatch for " << what << "\n";
      return kMismatch;
    }
  return kOk;
}

void emit(const Config& c, const json& j, const std::string& text) {
  if (c.format == "json")
    std::cout << j.dump(1) << "\n";
  else
    std::cout << text;
}

int cmd_e10_info(const Config& c) {
  const E10Basis& e = build_l10();
  auto s = enumerate_S();
  std::set<std::string> types;
  for (auto m : s) types.insert(sigma_type(m).str());
  Signature sig = signature(e.lattice.gram);
  json j;
  j["gram"] = matrix_json(e.lattice.gram);
  j["det"] = int_json(e.lattice.det());
  j["signature"] = {sig.pos, sig.neg};
  j["S_size"] = s.size();
  j["S_types"] = types.size();
  std::ostringstream os;
  os << "gram\n" << to_string(e.lattice.gram) << "\n";
  os << "det " << e.lattice.det().str() << "\nsignature " << sig.pos << "," << sig.neg << "\n";
  os << "S " << s.size() << "\ntypes " << types.size() << "\n";
  emit(c, j, os.str());
  return kOk;
}

int cmd_roots(const Config& c, const std::string& gram_file, long norm) {
  IntMatrix g = json_matrix(json::parse(read_file(gram_file)));
  Signature s = signature(g);
  if (s.pos != 0 || s.zero != 0) throw std::invalid_argument("Gram matrix is not negative definite");
  auto vs = short_vectors(g, norm);
  json arr = json::array();
  std::ostringstream os;
  os << "count " << vs.size() << "\n";
  for (const auto& v : vs) {
    json row = json::array();
    for (const auto& x : v) row.push_back(int_json(x));
    arr.push_back(row);
    os << to_string(v) << "\n";
  }
  emit(c, {{"norm", norm}, {"count", vs.size()}, {"vectors", arr}}, os.str());
  return kOk;
}

int cmd_orbit_sigma(const Config& c, const std::string& spec) {
  SigmaMask s = parse_sigma(spec);
  if (!in_S(s)) throw std::invalid_argument(sigma_string(s) + " is not in S");
  SigmaOrbitData d = cached_orbit(s, c.cache);
  std::vector<SigmaMask> members = d.sigma_list;
  std::sort(members.begin(), members.end());
  json j;
  j["sigma"] = s;
  j["type"] = sigma_type(s).str();
  j["class"] = members;
  j["generators"] = d.gens.size();
  std::ostringstream os;
  os << "sigma " << sigma_string(s) << "\ntype " << sigma_type(s).str() << "\nclass size " << members.size() << "\n";
  for (auto m : members) os << "  " << sigma_string(m) << "\n";
  os << "generators " << d.gens.size() << "\n";
  emit(c, j, os.str());
  return kOk;
}

int cmd_stab(const Config& c, const std::string& key) {
  auto classes = classify_configurations(c.threads, c.cache);
  auto it = std::find_if(classes.begin(), classes.end(), [&](const EmbeddingClass& e) { return e.key() == key; });
  if (it == classes.end()) throw std::invalid_argument("no configuration class " + key);
  SigmaStabilizer hs = stab_sigma(it->sigma, cached_orbit(it->sigma, c.cache));
  PhiStabilizer st;
  try {
    st = cached_stabilizer(*it, hs, c.cache, c.max_chambers);
  } catch (const ChamberBudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kBudget;
  }
  std::optional<Integer> order = st.order;
  if (!order && it->tau_rbar.rank() == 9)
    if (auto o = matrix_group_order(st.gens)) order = Integer(static_cast<long long>(*o));
  json j = json::parse(stabilizer_to_json(key, st));
  if (order) j["order_if_finite"] = int_json(*order);
  std::ostringstream os;
  os << "class " << key << "\nmethod " << st.method << "\nchambers " << st.chambers << "\ngenerators "
     << st.gens.size() << "\norder " << (order ? order->str() : "unknown") << "\n";
  emit(c, j, os.str());
  return kOk;
}

int cmd_classify_nn(const Config& c) {
  auto orbits = all_orbits(c.threads, c.cache);
  NNClassification nn = classify_nn(orbits);
  std::ostringstream csv;
  csv << csv_header("nn", c) << "type,size,members\n";
  json rows = json::array();
  for (const auto& cl : nn.classes) {
    std::string m;
    for (auto s : cl.members) m += (m.empty() ? "" : " ") + std::to_string(s);
    csv << cl.type.str() << ',' << cl.members.size() << ',' << m << '\n';
    rows.push_back({{"type", cl.type.str()}, {"members", cl.members}});
  }
  json j{{"artifact", artifact_json("nn", c)}, {"classes", rows}, {"symmetric", nn.symmetric},
         {"matches_types", nn.matches_types}};
  write_file(c.out, "nn.csv", csv.str());
  write_file(c.out, "nn.json", j.dump(1) + "\n");
  std::ostringstream os;
  os << "sigma " << orbits.size() << "\nclasses " << nn.classes.size() << "\nsymmetric "
     << (nn.symmetric ? "yes" : "no") << "\nclasses are ADE types " << (nn.matches_types ? "yes" : "no") << "\n";
  emit(c, {{"sigma", orbits.size()}, {"classes", nn.classes.size()}, {"symmetric", nn.symmetric},
           {"matches_types", nn.matches_types}},
       os.str());
  if (!nn.symmetric || !nn.matches_types) return kMismatch;
  return check_expect(c, {static_cast<long>(nn.classes.size())}, "classify nn");
}

int cmd_classify_configs(const Config& c) {
  auto classes = classify_configurations(c.threads, c.cache);
  std::ostringstream csv;
  csv << csv_header("configs", c) << "no,tau_phi,tau_rbar,rank,sigma,double_cosets\n";
  json rows = json::array();
  long rank9 = 0;
  for (size_t i = 0; i < classes.size(); ++i) {
    const auto& e = classes[i];
    rank9 += e.tau_rbar.rank() == 9;
    csv << i + 1 << ',' << e.tau_phi.str() << ',' << e.tau_rbar.str() << ',' << e.tau_rbar.rank() << ",\""
        << sigma_string(e.sigma) << "\"," << e.double_cosets << '\n';
    rows.push_back({{"no", i + 1},
                    {"tau_phi", e.tau_phi.str()},
                    {"tau_rbar", e.tau_rbar.str()},
                    {"rank", e.tau_rbar.rank()},
                    {"sigma", e.sigma},
                    {"double_cosets", e.double_cosets}});
  }
  write_file(c.out, "configs.csv", csv.str());
  write_file(c.out, "configs.json",
             json{{"artifact", artifact_json("configs", c)}, {"classes", rows}}.dump(1) + "\n");
  std::ostringstream os;
  os << "classes " << classes.size() << "\nrank 9 " << rank9 << "\n";
  emit(c, {{"classes", classes.size()}, {"rank9", rank9}}, os.str());
  return check_expect(c, {static_cast<long>(classes.size()), rank9}, "classify configs");
}

int cmd_classify_strong(const Config& c) {
  StrongClassification sc = classify_strong(c.threads, c.cache, c.max_chambers);
  write_file(c.out, "table1.csv", csv_header("strong", c) + table1_csv(sc));
  json j = json::parse(table1_json(sc));
  j["artifact"] = artifact_json("strong", c);
  write_file(c.out, "table1.json", j.dump(1) + "\n");
  std::ostringstream os;
  os << "strong " << sc.strong_total << "\nrealizable " << sc.realizable << "\n";
  for (const auto& k : sc.skipped) os << "skipped " << k << "\n";
  emit(c, {{"strong", sc.strong_total}, {"realizable", sc.realizable}, {"skipped", sc.skipped}}, os.str());
  if (!sc.skipped.empty()) return kBudget;
  return check_expect(c, {static_cast<long>(sc.strong_total), static_cast<long>(sc.realizable)}, "classify strong");
}

// --expect true or false
int cmd_genus(const Config& c, const std::string& sig, const std::string& form_file) {
  auto s = parse_list(sig);
  if (s.size() != 2) throw std::invalid_argument("--sig expects two integers a,b");
  FiniteQuadraticForm q = FiniteQuadraticForm::from_json(read_file(form_file));
  GenusVerdict v = even_lattice_exists(static_cast<int>(s[0]), static_cast<int>(s[1]), q);
  std::ostringstream os;
  os << (v.exists ? "true" : "false") << "\n";
  if (!v.exists) os << "obstruction: " << v.reason << "\n";
  emit(c, {{"exists", v.exists}, {"reason", v.reason}}, os.str());
  if (!c.expect.empty() && c.expect != "true" && c.expect != "false")
    throw std::invalid_argument("genus-exists expects --expect true or false");
  if (!c.expect.empty() && (c.expect == "true") != v.exists) return kMismatch;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification of ADE-configurations in the Enriques lattice L10"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--cache", cfg.cache, "cache directory");
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--expect", cfg.expect, "expected counts, comma separated");
  app.add_option("--out", cfg.out, "directory for table files");
  app.add_option("--max-chambers", cfg.max_chambers, "sieve budget per class, 0 for none");

  auto* e10 = app.add_subcommand("e10", "the lattice L10 and its root basis");
  e10->add_subcommand("info", "Gram matrix and the set S")->fallthrough();
  e10->require_subcommand(1);
  e10->fallthrough();

  std::string gram_file;
  long norm = -2;
  auto* roots = app.add_subcommand("roots", "vectors of given norm in a negative-definite lattice")->fallthrough();
  roots->add_option("--gram", gram_file, "JSON Gram matrix")->required();
  roots->add_option("--norm", norm, "norm");

  std::string spec;
  auto* orbit = app.add_subcommand("orbit-sigma", "chamber walk of one Sigma")->fallthrough();
  orbit->add_option("sigma", spec, "bitmask or list such as e1,e4")->required();

  std::string key;
  auto* stab = app.add_subcommand("stab", "generators of Stab(Phi_f, L10)")->fallthrough();
  stab->add_option("--class", key, "class key such as 8A1/E8")->required();

  std::string stage;
  auto* classify = app.add_subcommand("classify", "nn, configs or strong")->fallthrough();
  classify->add_option("stage", stage)->required()->check(CLI::IsMember({"nn", "configs", "strong"}));

  std::string sig, form_file;
  auto* genus = app.add_subcommand("genus-exists", "existence of an even lattice")->fallthrough();
  genus->add_option("--sig", sig, "signature a,b")->required();
  genus->add_option("--form", form_file, "JSON discriminant form")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*e10) return cmd_e10_info(cfg);
    if (*roots) return cmd_roots(cfg, gram_file, norm);
    if (*orbit) return cmd_orbit_sigma(cfg, spec);
    if (*stab) return cmd_stab(cfg, key);
    if (*classify) {
      if (stage == "nn") return cmd_classify_nn(cfg);
      if (stage == "configs") return cmd_classify_configs(cfg);
      return cmd_classify_strong(cfg);
    }
    if (*genus) return cmd_genus(cfg, sig, form_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

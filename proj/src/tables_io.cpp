#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "octaflow/resgen.hpp"

namespace octaflow::resgen {

namespace {

using ojson = nlohmann::ordered_json;

ojson poly_json(const KExpr& p) {
  ojson a = ojson::array();
  for (const auto& t : p.terms()) {
    ojson m = ojson::array();
    for (int i = 0; i < 6; ++i) m.push_back(t.m.exp(i));
    a.push_back(ojson::array({m, format_rational(t.c)}));
  }
  return a;
}

ojson poly_list(const std::vector<KExpr>& v) {
  ojson a = ojson::array();
  for (const auto& p : v) a.push_back(poly_json(p));
  return a;
}

KExpr poly_from(const ojson& j, const std::string& where) {
  if (!j.is_array()) throw TablesError(where + ": polynomial must be an array");
  std::vector<Term<Rational>> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_array() || t[0].size() != 6 || !t[1].is_string())
      throw TablesError(where + ": term must be [[6 ints], \"p/q\"]");
    std::array<int, 6> e{};
    for (int i = 0; i < 6; ++i) {
      if (!t[0][i].is_number_integer()) throw TablesError(where + ": exponent must be an integer");
      int v = t[0][i].get<int>();
      if (v < 0 || v > 255) throw TablesError(where + ": exponent out of range");
      e[i] = v;
    }
    Rational c;
    try {
      c = parse_rational(t[1].get<std::string>());
    } catch (const std::exception& ex) {
      throw TablesError(where + ": bad coefficient: " + ex.what());
    }
    terms.push_back({Monomial::from_exps(std::span<const int>(e.data(), 6)), c});
  }
  return KExpr(6, std::move(terms));
}

std::vector<KExpr> list_from(const ojson& j, const char* key, std::size_t n) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != n)
    throw TablesError(std::string("tables: \"") + key + "\" must be an array of " + std::to_string(n));
  std::vector<KExpr> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(poly_from(j[key][i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

std::string to_json(const ResolventTables& t) {
  ojson j;
  j["version"] = t.version;
  j["phi2K"] = poly_list(t.phi2K);
  j["phi3K"] = poly_list(t.phi3K);
  ojson tk = ojson::array();
  for (const auto& row : t.TK) tk.push_back(poly_list(row));
  j["TK"] = tk;
  j["tK"] = poly_json(t.tK);
  j["gammaK"] = poly_list(t.gammaK);
  ojson meta;
  meta["seed"] = t.meta.seed;
  meta["sample_count"] = t.meta.sample_count;
  meta["generator"] = t.meta.generator;
  meta["trials"] = t.meta.trials;
  ojson fits = ojson::array();
  for (const auto& f : t.meta.fits)
    fits.push_back({{"name", f.name}, {"degree", f.degree}, {"basis", f.basis}, {"samples", f.samples}, {"primes", f.primes}});
  meta["fits"] = fits;
  j["meta"] = meta;
  return j.dump() + "\n";
}

ResolventTables from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    throw TablesError(std::string("tables: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw TablesError("tables: top level must be an object");
  ResolventTables t;
  if (!j.contains("version") || !j["version"].is_number_integer()) throw TablesError("tables: missing version");
  t.version = j["version"].get<int>();
  if (t.version != 1) throw TablesError("tables: unsupported version " + std::to_string(t.version));
  t.phi2K = list_from(j, "phi2K", 28);
  t.phi3K = list_from(j, "phi3K", 84);
  t.gammaK = list_from(j, "gammaK", 28);
  if (!j.contains("TK") || !j["TK"].is_array() || j["TK"].size() != 7) throw TablesError("tables: \"TK\" must be 7x7");
  for (std::size_t a = 0; a < 7; ++a) {
    const auto& row = j["TK"][a];
    if (!row.is_array() || row.size() != 7) throw TablesError("tables: \"TK\" must be 7x7");
    std::vector<KExpr> r;
    for (std::size_t b = 0; b < 7; ++b)
      r.push_back(poly_from(row[b], "TK[" + std::to_string(a) + "][" + std::to_string(b) + "]"));
    t.TK.push_back(std::move(r));
  }
  if (!j.contains("tK")) throw TablesError("tables: missing \"tK\"");
  t.tK = poly_from(j["tK"], "tK");
  if (j.contains("meta") && j["meta"].is_object()) {
    const auto& m = j["meta"];
    t.meta.seed = m.value("seed", std::uint64_t{0});
    t.meta.sample_count = m.value("sample_count", 0);
    t.meta.generator = m.value("generator", std::string());
    t.meta.trials = m.value("trials", 0);
    if (m.contains("fits") && m["fits"].is_array())
      for (const auto& f : m["fits"])
        t.meta.fits.push_back({f.value("name", std::string()), f.value("degree", 0), f.value("basis", 0),
                               f.value("samples", 0), f.value("primes", 0)});
  }
  return t;
}

void save_tables(const ResolventTables& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw TablesError("cannot write " + path);
  f << to_json(t);
  if (!f) throw TablesError("write failed: " + path);
}

ResolventTables load_tables(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw TablesError("cannot read tables file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

std::string tables_path(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* e = std::getenv("OCTAFLOW_TABLES"); e && *e) return e;
  return OCTAFLOW_DEFAULT_TABLES;
}

}  // namespace octaflow::resgen

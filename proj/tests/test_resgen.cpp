#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "octaflow/errors.hpp"
#include "octaflow/resgen.hpp"
#include "octaflow/s8geom.hpp"
#include "test_util.hpp"

using namespace octaflow;
using namespace octaflow::resgen;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const ResolventTables& shipped() {
  static const ResolventTables t = load_tables(OCTAFLOW_DEFAULT_TABLES);
  return t;
}

XPoint rand_x() {
  XPoint x;
  Rational s = 0;
  for (int i = 0; i < 7; ++i) {
    x[i] = tu::qrand();
    s += x[i];
  }
  x[7] = -s;
  return x;
}

}  // namespace

TEST_CASE("invariant basis sizes") {
  CHECK(invariant_basis(0).size() == 1);
  CHECK(invariant_basis(1).empty());
  CHECK(invariant_basis(4).size() == 2);
  CHECK(invariant_basis(18).size() == 58);
  CHECK(invariant_basis(19).size() == 64);
  CHECK(invariant_basis(27).size() == 230);
  for (const auto& e : invariant_basis(19)) {
    int d = 0;
    for (int k = 0; k < 7; ++k) d += (k + 2) * e[k];
    CHECK(d == 19);
  }
  CHECK_THROWS_AS(invariant_basis(-1), DomainError);
}

TEST_CASE("fit recovers a known invariant") {
  auto f = [](const XPoint& x) {
    auto F = power_sums(x);
    return std::vector<Rational>{F[2] * F[2] - 2 * F[4], Rational(5) * F[4] + F[2] * F[2] / 3};
  };
  auto r = fit_invariant(f, 4, 2, 11);
  REQUIRE(r.basis.size() == 2);
  for (int t = 0; t < 5; ++t) {
    XPoint x = rand_x();
    auto F = power_sums(x);
    auto want = f(x);
    for (int j = 0; j < 2; ++j) {
      Rational s = 0;
      for (size_t b = 0; b < r.basis.size(); ++b) s += r.coeffs[j][b] * basis_value(r.basis[b], F);
      CHECK(s == want[j]);
    }
  }
  CHECK(r.held_out > 0);
}

TEST_CASE("fit rejects non-invariants") {
  auto f = [](const XPoint& x) { return std::vector<Rational>{x[0] * x[0] * x[0] * x[0]}; };
  CHECK_THROWS_AS(fit_invariant(f, 4, 1, 3), FitError);
}

TEST_CASE("K monomials from prefactored basis elements") {
  // Phi2^6 Phi3^2 / Phi2^9 = K1
  CHECK(k_monomial({6, 2, 0, 0, 0, 0, 0}, {9, 0}) == std::array<int, 6>{1, 0, 0, 0, 0, 0});
  // Phi2^5 Phi8 / Phi2^9 = K6
  CHECK(k_monomial({5, 0, 0, 0, 0, 0, 1}, {9, 0}) == std::array<int, 6>{0, 0, 0, 0, 0, 1});
  // a lone Phi3 has no K expression
  CHECK_THROWS_AS(k_monomial({0, 1, 0, 0, 0, 0, 0}, {0, 0}), FitError);
}

TEST_CASE("tau in x coordinates") {
  const auto& h = s8::hchange();
  for (int t = 0; t < 5; ++t) {
    XPoint x = rand_x();
    CVec xc(8);
    for (int i = 0; i < 8; ++i) xc[i] = x[i].get_d();
    auto T = tau(h.H * xc);
    Eigen::MatrixXcd lhs = h.Hbt * T;
    auto want = tau_x(x);
    double scale = lhs.cwiseAbs().maxCoeff(), err = 0;
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 7; ++k) err = std::max(err, std::abs(lhs(i, k) - want[i][k].get_d()));
    CHECK(err < 1e-12 * scale);
  }
}

TEST_CASE("w monomial counts") {
  CHECK(w_monomials(2).size() == 28);
  CHECK(w_monomials(3).size() == 84);
}

TEST_CASE("shipped tables: shape and metadata") {
  const auto& t = shipped();
  CHECK(t.phi2K.size() == 28);
  CHECK(t.phi3K.size() == 84);
  CHECK(t.gammaK.size() == 28);
  REQUIRE(t.TK.size() == 7);
  for (const auto& row : t.TK) CHECK(row.size() == 7);
  CHECK(t.meta.seed == kDefaultSeed);
  CHECK(t.meta.trials > 0);
  REQUIRE(t.meta.fits.size() == 4);
  CHECK(t.meta.fits[0].basis == 58);
  CHECK(t.meta.fits[2].basis == 230);
  CHECK(t.meta.fits[3].basis == 64);
}

TEST_CASE("shipped tables verify") {
  VerifyOptions vo;
  vo.trials = 5;
  vo.exact_trials = 1;
  auto r = verify_tables(shipped(), vo);
  CHECK(r.ok());
  CHECK(r.persymmetric);
  CHECK(r.det_matches);
  CHECK(r.conjugacy < 1e-9);
  CHECK(r.phi2_rel < 1e-9);
}

TEST_CASE("fault injection is caught") {
  VerifyOptions vo;
  vo.trials = 2;
  vo.exact_trials = 1;
  vo.check_det = false;
  SUBCASE("Phi2K coefficient") {
    auto t = shipped();
    t.phi2K[3] = t.phi2K[3] + KExpr::constant(6, Rational(1, 1000));
    auto r = verify_tables(t, vo);
    CHECK_FALSE(r.ok());
    CHECK(r.phi2_exact_fail > 0);
  }
  SUBCASE("TK symmetry") {
    auto t = shipped();
    t.TK[0][1] = t.TK[0][1] + KExpr::variable(6, 0);
    auto r = verify_tables(t, vo);
    CHECK_FALSE(r.persymmetric);
    CHECK_FALSE(r.ok());
  }
  SUBCASE("GammaK coefficient") {
    auto t = shipped();
    t.gammaK[0] = t.gammaK[0] * Rational(2);
    auto r = verify_tables(t, vo);
    CHECK(r.gamma_exact_fail > 0);
  }
  SUBCASE("det") {
    auto t = shipped();
    t.tK = t.tK + KExpr::constant(6, Rational(1));
    vo.check_det = true;
    auto r = verify_tables(t, vo);
    CHECK_FALSE(r.det_matches);
  }
}

TEST_CASE("JSON round trip") {
  const std::string text = slurp(OCTAFLOW_DEFAULT_TABLES);
  auto t = from_json(text);
  CHECK(to_json(t) == text);
  const auto tmp = (std::filesystem::temp_directory_path() / "octaflow_rt.json").string();
  save_tables(t, tmp);
  CHECK(slurp(tmp) == text);
  std::filesystem::remove(tmp);
  CHECK_THROWS_AS(from_json("{}"), TablesError);
  CHECK_THROWS_AS(from_json("not json"), TablesError);
  CHECK_THROWS_AS(load_tables("/nonexistent/tables.json"), TablesError);
}

TEST_CASE("tables path resolution") {
  ::unsetenv("OCTAFLOW_TABLES");
  CHECK(tables_path() == OCTAFLOW_DEFAULT_TABLES);
  ::setenv("OCTAFLOW_TABLES", "/tmp/from_env.json", 1);
  CHECK(tables_path() == "/tmp/from_env.json");
  CHECK(tables_path("/tmp/cli.json") == "/tmp/cli.json");
  ::unsetenv("OCTAFLOW_TABLES");
}

TEST_CASE("regeneration is byte-identical to the shipped file") {
  auto t = generate_tables();
  CHECK(to_json(t) == slurp(OCTAFLOW_DEFAULT_TABLES));
}

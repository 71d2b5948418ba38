#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "octaflow/mpoly.hpp"
#include "octaflow/proj.hpp"

namespace octaflow::resgen {

// exponents of Phi_2 .. Phi_8
using PhiExps = std::array<int, 7>;

// all PhiExps with sum k a_k = d, lex descending
std::vector<PhiExps> invariant_basis(int d);

// Sample points are zero-sum rational x; the u-point is H x, so every
// invariant of it is rational.
using XPoint = std::array<Rational, 8>;
std::array<Rational, 9> power_sums(const XPoint& x);  // [k] = F_k(x)
Rational basis_value(const PhiExps& e, const std::array<Rational, 9>& F);

using Evaluator = std::function<std::vector<Rational>(const XPoint&)>;

struct FitResult {
  int degree = 0;
  std::vector<PhiExps> basis;
  std::vector<std::vector<Rational>> coeffs;  // one per evaluator output, over basis
  int samples = 0;
  int primes = 0;
  int held_out = 0;
};

// Exact fit of every evaluator output against invariant_basis(d):
// multimodular solve, rational reconstruction, exact held-out check.
FitResult fit_invariant(const Evaluator& f, int d, int nvalues, std::uint64_t seed);

// polynomial in K1..K6
using KExpr = MPoly<Rational>;

struct Prefactor {
  int phi2 = 0, phi3 = 0;
};

// rewrites each basis monomial divided by the prefactor as a K-monomial
KExpr kexpr_from_fit(const std::vector<PhiExps>& basis, const std::vector<Rational>& coeffs, Prefactor pre);
std::array<int, 6> k_monomial(const PhiExps& e, Prefactor pre);  // FitError if powers do not cancel

// column k is Phi_{9-k}(v) phi_k(v)
Eigen::Matrix<cplx, 7, 7> tau(const CVec& v);
std::vector<std::vector<Cyclo8>> tau_exact(const std::vector<Cyclo8>& v);
// conj(H)^T tau at u = H x: entry (i,k) = F_{8-k}(x) (F_{k+1}(x) - 8 x_i^{k+1})
std::vector<std::vector<Rational>> tau_x(const XPoint& x);

// w-monomials of degree d, grlex descending; the order of the table lists
std::vector<Monomial> w_monomials(int d);

struct FitInfo {
  std::string name;
  int degree = 0, basis = 0, samples = 0, primes = 0;
};

struct ResolventTables {
  int version = 1;
  std::vector<KExpr> phi2K;              // 28
  std::vector<KExpr> phi3K;              // 84
  std::vector<std::vector<KExpr>> TK;    // 7 x 7
  KExpr tK;
  std::vector<KExpr> gammaK;             // 28
  struct Meta {
    std::uint64_t seed = 0;
    int sample_count = 0;
    std::string generator;
    int trials = 0;
    std::vector<FitInfo> fits;
  } meta;
};

constexpr std::uint64_t kDefaultSeed = 20240531;

struct GenOptions {
  std::uint64_t seed = kDefaultSeed;
  int trials = 10;        // float verification trials
  int exact_trials = 2;   // exact cyclotomic verification trials
  bool verify = true;
  std::function<void(const std::string&)> log;
};

ResolventTables generate_tables(const GenOptions& opt = {});

struct VerifyReport {
  int trials = 0, exact_trials = 0;
  // counts of nonzero exact residuals
  int phi2_exact_fail = 0, phi3_exact_fail = 0, gamma_exact_fail = 0, tk_exact_fail = 0, dettau_exact_fail = 0;
  bool persymmetric = true;
  bool det_matches = true;
  // max relative residuals in floating mode
  double phi2_rel = 0, phi3_rel = 0, gamma_rel = 0, tk_rel = 0;
  double conjugacy = 0;         // extended-precision map at exact K(v)
  double conjugacy_double = 0;  // same in double; informational
  int skipped = 0;              // singular T_K samples redrawn
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct VerifyOptions {
  int trials = 10;
  int exact_trials = 2;
  std::uint64_t seed = 99;
  bool check_det = true;  // recompute det T_K symbolically
};

VerifyReport verify_tables(const ResolventTables& t, const VerifyOptions& opt = {});

// ---- tables file ----
std::string to_json(const ResolventTables& t);
ResolventTables from_json(const std::string& text);  // TablesError
void save_tables(const ResolventTables& t, const std::string& path);
ResolventTables load_tables(const std::string& path);
// --tables, else OCTAFLOW_TABLES, else the build-time default
std::string tables_path(const std::string& cli_value = "");

}  // namespace octaflow::resgen

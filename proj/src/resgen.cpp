#include "octaflow/resgen.hpp"

#include <optional>
#include <random>
#include <sstream>

#include "octaflow/modular.hpp"
#include "octaflow/s8geom.hpp"
#include "octaflow/solver.hpp"

namespace octaflow::resgen {

namespace {

constexpr int kHeldOut = 5;
constexpr int kMaxPrimes = 400;
constexpr int kResamples = 3;

void basis_rec(int d, int k, PhiExps& cur, std::vector<PhiExps>& out) {
  if (k < 2) {
    if (d == 0) out.push_back(cur);
    return;
  }
  for (int a = d / k; a >= 0; --a) {
    cur[k - 2] = a;
    basis_rec(d - a * k, k - 1, cur, out);
  }
  cur[k - 2] = 0;
}

// Uniform small rationals; fixed mapping so output does not depend on the
// standard library's distributions.
struct SampleRng {
  std::mt19937_64 g;
  explicit SampleRng(std::uint64_t s) : g(s) {}
  Rational next() {
    long num = static_cast<long>(g() % 41) - 20;
    long den = static_cast<long>(g() % 7) + 1;
    return rat(num, den);
  }
  XPoint point() {
    XPoint x;
    Rational s = 0;
    for (int i = 0; i < 7; ++i) {
      x[i] = next();
      s += x[i];
    }
    x[7] = -s;
    return x;
  }
};

int multinomial(Monomial m, int nvars) {
  int n = m.degree(), r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  for (int j = 0; j < nvars; ++j)
    for (int i = 2; i <= m.exp(j); ++i) r /= i;
  return r;
}

Rational qpow(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

template <class T>
T tpow(const T& x, int e) {
  T r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

void say(const GenOptions& o, const std::string& s) {
  if (o.log) o.log(s);
}

}  // namespace

std::vector<PhiExps> invariant_basis(int d) {
  if (d < 0) throw DomainError("invariant_basis: negative degree");
  std::vector<PhiExps> out;
  PhiExps cur{};
  basis_rec(d, 8, cur, out);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::array<Rational, 9> power_sums(const XPoint& x) {
  std::array<Rational, 9> F;
  F[0] = 8;
  for (int k = 1; k <= 8; ++k) F[k] = 0;
  for (const auto& xi : x) {
    Rational p = xi;
    for (int k = 1; k <= 8; ++k) {
      F[k] += p;
      p *= xi;
    }
  }
  return F;
}

Rational basis_value(const PhiExps& e, const std::array<Rational, 9>& F) {
  Rational r = 1;
  for (int k = 2; k <= 8; ++k)
    if (e[k - 2]) r *= qpow(F[k], e[k - 2]);
  return r;
}

FitResult fit_invariant(const Evaluator& f, int d, int nvalues, std::uint64_t seed) {
  using namespace modp;
  FitResult res;
  res.degree = d;
  res.basis = invariant_basis(d);
  const int nb = static_cast<int>(res.basis.size());
  const int ns = std::max(nb, (nb * 5 + 3) / 4);
  SampleRng rng(seed);

  for (int attempt = 0; attempt < kResamples; ++attempt) {
    std::vector<std::array<Rational, 9>> F;
    std::vector<std::vector<Rational>> target;
    for (int s = 0; s < ns + kHeldOut; ++s) {
      XPoint x = rng.point();
      F.push_back(power_sums(x));
      target.push_back(f(x));
      if (static_cast<int>(target.back().size()) != nvalues) throw DimensionError("fit_invariant: evaluator arity");
    }

    CrtAccumulator crt(static_cast<std::size_t>(nb) * nvalues);
    std::optional<std::vector<Rational>> prev;
    int bad = 0, used = 0;
    for (int pi = 0; pi < kMaxPrimes && bad < 3; ++pi) {
      const u64 p = primes(pi + 1)[pi];
      std::vector<std::vector<u64>> A(ns, std::vector<u64>(nb)), B(ns, std::vector<u64>(nvalues));
      for (int s = 0; s < ns; ++s) {
        std::array<u64, 9> Fp{};
        for (int k = 2; k <= 8; ++k) Fp[k] = reduce(F[s][k], p);
        for (int m = 0; m < nb; ++m) {
          u64 v = 1;
          for (int k = 2; k <= 8; ++k)
            if (res.basis[m][k - 2]) v = mulmod(v, powmod(Fp[k], res.basis[m][k - 2], p), p);
          A[s][m] = v;
        }
        for (int j = 0; j < nvalues; ++j) B[s][j] = reduce(target[s][j], p);
      }
      auto sol = solve_mod(std::move(A), std::move(B), p);
      if (!sol.full_rank) {
        ++bad;
        continue;
      }
      if (!sol.consistent) throw FitError("fit_invariant: samples are not a degree-" + std::to_string(d) + " invariant");
      std::vector<u64> flat;
      flat.reserve(static_cast<std::size_t>(nb) * nvalues);
      for (int j = 0; j < nvalues; ++j)
        for (int m = 0; m < nb; ++m) flat.push_back(sol.X[m][j]);
      crt.add(flat, p);
      ++used;
      auto rec = crt.reconstruct();
      if (rec && prev && *rec == *prev) {
        bool ok = true;
        for (int s = ns; s < ns + kHeldOut && ok; ++s) {
          std::vector<Rational> bv(nb);
          for (int m = 0; m < nb; ++m) bv[m] = basis_value(res.basis[m], F[s]);
          for (int j = 0; j < nvalues && ok; ++j) {
            Rational acc = 0;
            for (int m = 0; m < nb; ++m) {
              const Rational& c = (*rec)[static_cast<std::size_t>(j) * nb + m];
              if (sgn(c)) acc += c * bv[m];
            }
            ok = acc == target[s][j];
          }
        }
        if (ok) {
          res.coeffs.assign(nvalues, std::vector<Rational>(nb));
          for (int j = 0; j < nvalues; ++j)
            for (int m = 0; m < nb; ++m) res.coeffs[j][m] = (*rec)[static_cast<std::size_t>(j) * nb + m];
          res.samples = ns;
          res.primes = used;
          res.held_out = kHeldOut;
          return res;
        }
      }
      prev = std::move(rec);
    }
    if (bad < 3) throw FitError("fit_invariant: reconstruction did not stabilize");
  }
  throw FitError("fit_invariant: sample matrix rank deficient after resampling");
}

std::array<int, 6> k_monomial(const PhiExps& a, Prefactor pre) {
  // a[0..6] = exponents of Phi_2..Phi_8
  const int e2 = a[0] + 2 * a[2] + a[3] + 3 * a[4] + 2 * a[5] + 4 * a[6];
  const int e3 = a[1] + a[3] + a[5];
  if (e2 + 3 * (e3 / 2) != pre.phi2 || e3 % 2 != pre.phi3)
    throw FitError("kexpr_from_fit: Phi2/Phi3 powers do not cancel against the prefactor");
  return {e3 / 2, a[2], a[3] + a[5], a[4], a[5], a[6]};
}

KExpr kexpr_from_fit(const std::vector<PhiExps>& basis, const std::vector<Rational>& coeffs, Prefactor pre) {
  if (basis.size() != coeffs.size()) throw DimensionError("kexpr_from_fit: size mismatch");
  std::vector<Term<Rational>> terms;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (sgn(coeffs[i]) == 0) continue;
    auto k = k_monomial(basis[i], pre);
    terms.push_back({Monomial::from_exps(std::span<const int>(k.data(), 6)), coeffs[i]});
  }
  return KExpr(6, std::move(terms));
}

Eigen::Matrix<cplx, 7, 7> tau(const CVec& v) {
  if (v.size() != 7) throw DimensionError("tau: expected 7 coordinates");
  auto P = s8::phis(v);
  Eigen::Matrix<cplx, 7, 7> T;
  for (int k = 1; k <= 7; ++k) T.col(k - 1) = P[9 - k] * s8::basic_equivariant_x(k, v);
  return T;
}

std::vector<std::vector<Cyclo8>> tau_exact(const std::vector<Cyclo8>& v) {
  if (v.size() != 7) throw DimensionError("tau_exact: expected 7 coordinates");
  std::vector<std::vector<Cyclo8>> T(7, std::vector<Cyclo8>(7));
  for (int k = 1; k <= 7; ++k) {
    const Cyclo8 s = eval(s8::phi_form(9 - k), v);
    const auto& ph = s8::basic_equivariant_form(k);
    for (int i = 0; i < 7; ++i) T[i][k - 1] = s * eval(ph[i], v);
  }
  return T;
}

std::vector<std::vector<Rational>> tau_x(const XPoint& x) {
  auto F = power_sums(x);
  std::vector<std::vector<Rational>> M(8, std::vector<Rational>(7));
  for (int i = 0; i < 8; ++i) {
    Rational p = x[i];
    for (int k = 0; k < 7; ++k) {
      M[i][k] = F[8 - k] * (F[k + 1] - 8 * p);
      p *= x[i];
    }
  }
  return M;
}

std::vector<Monomial> w_monomials(int d) { return monomials_of_degree(7, d); }

namespace {

// prod_a M_ia^{e_a}
Rational row_monomial(const std::vector<Rational>& row, Monomial m) {
  Rational r = 1;
  for (int a = 0; a < 7; ++a)
    if (m.exp(a)) r *= qpow(row[a], m.exp(a));
  return r;
}

std::vector<Rational> form_coeffs(const std::vector<std::vector<Rational>>& M, const XPoint* weight, int deg) {
  auto mons = w_monomials(deg);
  std::vector<Rational> out;
  for (auto m : mons) {
    Rational acc = 0;
    for (int i = 0; i < 8; ++i) {
      Rational t = row_monomial(M[i], m);
      if (weight) t *= (*weight)[i];
      acc += t;
    }
    out.push_back(acc * multinomial(m, 7));
  }
  return out;
}

std::vector<KExpr> kexprs(const FitResult& f, Prefactor pre) {
  std::vector<KExpr> out;
  for (const auto& c : f.coeffs) out.push_back(kexpr_from_fit(f.basis, c, pre));
  return out;
}

FitInfo info(const std::string& name, const FitResult& f) {
  return {name, f.degree, static_cast<int>(f.basis.size()), f.samples + f.held_out, f.primes};
}

}  // namespace

ResolventTables generate_tables(const GenOptions& opt) {
  ResolventTables t;
  t.meta.seed = opt.seed;
  t.meta.generator = "octaflow codegen 1";
  t.meta.trials = opt.verify ? opt.trials : 0;

  say(opt, "fitting Phi2K (degree 18)");
  auto f2 = fit_invariant([](const XPoint& x) { return form_coeffs(tau_x(x), nullptr, 2); }, 18, 28, opt.seed + 1);
  t.phi2K = kexprs(f2, {9, 0});
  t.meta.fits.push_back(info("phi2K", f2));

  say(opt, "fitting TK (degree 18)");
  auto fT = fit_invariant(
      [](const XPoint& x) {
        auto M = tau_x(x);
        std::vector<Rational> out;
        for (int a = 0; a < 7; ++a)
          for (int b = 0; b < 7; ++b) {
            Rational s = 0;
            for (int i = 0; i < 8; ++i) s += M[i][6 - a] * M[i][b];
            out.push_back(s);
          }
        return out;
      },
      18, 49, opt.seed + 2);
  auto tk = kexprs(fT, {9, 0});
  t.TK.assign(7, {});
  for (int a = 0; a < 7; ++a) t.TK[a].assign(tk.begin() + 7 * a, tk.begin() + 7 * a + 7);
  t.meta.fits.push_back(info("TK", fT));

  say(opt, "fitting Phi3K (degree 27)");
  auto f3 = fit_invariant([](const XPoint& x) { return form_coeffs(tau_x(x), nullptr, 3); }, 27, 84, opt.seed + 3);
  t.phi3K = kexprs(f3, {12, 1});
  t.meta.fits.push_back(info("phi3K", f3));

  say(opt, "fitting gammaK (degree 19)");
  auto fg = fit_invariant(
      [](const XPoint& x) {
        auto c = form_coeffs(tau_x(x), &x, 2);
        for (auto& q : c) q *= 448;
        return c;
      },
      19, 28, opt.seed + 4);
  t.gammaK = kexprs(fg, {8, 1});
  t.meta.fits.push_back(info("gammaK", fg));

  say(opt, "computing tK = det TK");
  PolyMatrix<Rational> PM(7, 7, 6);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) PM.at(a, b) = t.TK[a][b];
  t.tK = poly_mat_det(PM);

  for (const auto& f : t.meta.fits) t.meta.sample_count += f.samples;

  if (!opt.verify) return t;
  say(opt, "verifying");
  VerifyOptions vo;
  vo.trials = opt.trials;
  vo.exact_trials = opt.exact_trials;
  vo.seed = opt.seed + 5;
  vo.check_det = false;  // tK was just built as det TK
  auto rep = verify_tables(t, vo);
  if (!rep.ok()) {
    std::string msg = "generated tables failed verification:";
    for (const auto& s : rep.failures) msg += " " + s + ";";
    std::ostringstream os;
    os << " residuals phi2 " << rep.phi2_rel << " phi3 " << rep.phi3_rel << " gamma " << rep.gamma_rel << " TK "
       << rep.tk_rel << " conjugacy " << rep.conjugacy;
    msg += os.str();
    throw FitError(msg);
  }
  return t;
}

// ---- verification ----

namespace {

template <class T>
T eval_form(const std::vector<KExpr>& coeffs, const std::vector<T>& K, const std::vector<T>& w, int deg) {
  auto mons = w_monomials(deg);
  T acc(0);
  for (std::size_t i = 0; i < mons.size(); ++i) {
    T m(1);
    for (int a = 0; a < 7; ++a)
      for (int e = 0; e < mons[i].exp(a); ++e) m = m * w[a];
    acc += eval(coeffs[i], K) * m;
  }
  return acc;
}

template <class T>
std::vector<T> xform(const std::vector<T>& u);

template <>
std::vector<Cyclo8> xform(const std::vector<Cyclo8>& u) {
  return s8::u_to_x_exact(u);
}

Cyclo8 rand_cyclo(std::mt19937_64& g) {
  Cyclo8 c;
  for (int i = 0; i < 4; ++i) c[i] = rat(static_cast<long>(g() % 9) - 4, static_cast<long>(g() % 3) + 1);
  return c;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

VerifyReport verify_tables(const ResolventTables& t, const VerifyOptions& opt) {
  VerifyReport r;
  r.trials = opt.trials;
  r.exact_trials = opt.exact_trials;
  if (t.phi2K.size() != 28 || t.phi3K.size() != 84 || t.gammaK.size() != 28 || t.TK.size() != 7)
    throw TablesError("verify_tables: malformed tables");

  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      if (t.TK[a][b] != t.TK[6 - b][6 - a]) r.persymmetric = false;
  if (!r.persymmetric) r.failures.push_back("TK not persymmetric");

  if (opt.check_det) {
    PolyMatrix<Rational> PM(7, 7, 6);
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b) PM.at(a, b) = t.TK[a][b];
    r.det_matches = poly_mat_det(PM) == t.tK;
    if (!r.det_matches) r.failures.push_back("det TK != tK");
  }

  std::mt19937_64 g(opt.seed);

  // exact cyclotomic identities at generic points of Q(z)^7
  for (int trial = 0; trial < opt.exact_trials; ++trial) {
    std::vector<Cyclo8> v(7), w(7);
    for (auto& c : v) c = rand_cyclo(g);
    for (auto& c : w) c = rand_cyclo(g);
    std::array<Cyclo8, 9> P;
    for (int k = 2; k <= 8; ++k) P[k] = eval(s8::phi_form(k), v);
    if (P[2].is_zero() || P[3].is_zero() || P[5].is_zero()) {
      --trial;
      continue;
    }
    std::vector<Cyclo8> K = {P[3] * P[3] / (P[2] * P[2] * P[2]), P[4] / (P[2] * P[2]),  P[5] / (P[2] * P[3]),
                             P[6] / (P[2] * P[2] * P[2]),      P[7] / (P[2] * P[5]), P[8] / (P[2] * P[2] * P[2] * P[2])};
    auto T = tau_exact(v);
    std::vector<Cyclo8> u(7, Cyclo8(0));
    for (int i = 0; i < 7; ++i)
      for (int k = 0; k < 7; ++k) u[i] += T[i][k] * w[k];
    const Cyclo8 p2_9 = tpow(P[2], 9);

    if (eval(s8::phi_form(2), u) != p2_9 * eval_form(t.phi2K, K, w, 2)) ++r.phi2_exact_fail;
    if (eval(s8::phi_form(3), u) != tpow(P[2], 12) * P[3] * eval_form(t.phi3K, K, w, 3)) ++r.phi3_exact_fail;

    // Gamma: sum_k G_k(u) L_k(v)
    auto xv = xform(v), xu = xform(u);
    Cyclo8 S1v(0), S1u(0), F2u(0);
    for (int i = 0; i < 8; ++i) {
      S1v += xv[i];
      S1u += xu[i];
      F2u += xu[i] * xu[i];
    }
    Cyclo8 gam(0);
    const Rational three_quarters = rat(3, 4);
    for (int k = 0; k < 8; ++k) {
      Cyclo8 Lu = S1u - Cyclo8(8) * xu[k];
      Cyclo8 Gk = F2u - Cyclo8(8) * xu[k] * xu[k] - Cyclo8(three_quarters) * Lu * Lu;
      gam += Gk * (S1v - Cyclo8(8) * xv[k]);
    }
    if (gam != tpow(P[2], 8) * P[3] * eval_form(t.gammaK, K, w, 2)) ++r.gamma_exact_fail;

    // (tau^r tau) = Phi2^9 TK, repose = R A^T R
    bool tk_ok = true;
    for (int a = 0; a < 7 && tk_ok; ++a)
      for (int b = 0; b < 7 && tk_ok; ++b) {
        Cyclo8 s(0);
        for (int i = 0; i < 7; ++i) s += T[6 - i][6 - a] * T[i][b];
        tk_ok = s == p2_9 * eval(t.TK[a][b], K);
      }
    if (!tk_ok) ++r.tk_exact_fail;

    // (det tau)^2 = Phi2^63 tK
    Cyclo8 d = det_cofactor(T);
    if (d * d != tpow(P[2], 63) * eval(t.tK, K)) ++r.dettau_exact_fail;
  }
  if (r.phi2_exact_fail) r.failures.push_back("Phi2K reconstruction (exact)");
  if (r.phi3_exact_fail) r.failures.push_back("Phi3K reconstruction (exact)");
  if (r.gamma_exact_fail) r.failures.push_back("GammaK reconstruction (exact)");
  if (r.tk_exact_fail) r.failures.push_back("TK reconstruction (exact)");
  if (r.dettau_exact_fail) r.failures.push_back("det tau squared (exact)");

  // floating identities and the conjugacy oracle at rational v; the map is
  // assembled in extended precision from the exact K(v)
  solver::NumericTables nt(t);
  solver::ExtendedTables xt(t);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < opt.trials; ++trial) {
    std::vector<Cyclo8> vq(7);
    CVec v(7), w(7);
    for (int i = 0; i < 7; ++i) {
      const long num = static_cast<long>(g() % 41) - 20, den = static_cast<long>(g() % 7) + 1;
      vq[i] = Cyclo8(rat(num, den));
      v[i] = vq[i].to_complex();
      w[i] = cplx(U(g), U(g));
    }
    std::array<Cyclo8, 9> P;
    for (int k = 2; k <= 8; ++k) P[k] = eval(s8::phi_form(k), vq);
    if (P[2].is_zero() || P[3].is_zero() || P[5].is_zero()) {
      --trial;
      continue;
    }
    const std::array<Cyclo8, 6> Kq = {P[3] * P[3] / (P[2] * P[2] * P[2]), P[4] / (P[2] * P[2]),
                                      P[5] / (P[2] * P[3]),                P[6] / (P[2] * P[2] * P[2]),
                                      P[7] / (P[2] * P[5]),                P[8] / (P[2] * P[2] * P[2] * P[2])};
    std::array<cplx, 6> K;
    std::array<cplxq, 6> Kx;
    for (int i = 0; i < 6; ++i) {
      K[i] = Kq[i].to_complex();
      Kx[i] = cyclo_to<quad>(Kq[i]);
    }
    std::optional<solver::ExtendedGK> gk;
    try {
      gk.emplace(xt, Kx);
    } catch (const SingularMatrix&) {
      ++r.skipped;
      --trial;
      continue;
    }
    const cplx p2 = P[2].to_complex(), p3 = P[3].to_complex();
    auto T = tau(v);
    CVec u = T * w;
    auto at = nt.at(K);
    solver::Vec7<cplx> wv;
    for (int i = 0; i < 7; ++i) wv[i] = w[i];
    r.phi2_rel = std::max(r.phi2_rel, rel(s8::phi(2, u), std::pow(p2, 9) * at.phi2(wv)));
    r.phi3_rel = std::max(r.phi3_rel, rel(s8::phi(3, u), std::pow(p2, 12) * p3 * at.phi3(wv)));
    cplx gam = 0;
    for (int k = 1; k <= 8; ++k) gam += s8::selector_forms(k, u).G * s8::selector_forms(k, v).L;
    r.gamma_rel = std::max(r.gamma_rel, rel(gam, std::pow(p2, 8) * p3 * at.gamma(wv)));
    Eigen::Matrix<cplx, 7, 7> Rm = Eigen::Matrix<cplx, 7, 7>::Zero();
    for (int i = 0; i < 7; ++i) Rm(i, 6 - i) = 1;
    Eigen::Matrix<cplx, 7, 7> lhs = Rm * T.transpose() * Rm * T;
    Eigen::Matrix<cplx, 7, 7> rhs = std::pow(p2, 9) * solver::to_eigen(at.TK);
    r.tk_rel = std::max(r.tk_rel, (lhs - rhs).cwiseAbs().maxCoeff() / lhs.cwiseAbs().maxCoeff());
    CVec a = T.fullPivLu().solve(s8::g4_u(u));
    r.conjugacy = std::max(r.conjugacy, proj_distance(a, (*gk)(w)));
    try {
      solver::GK gd(nt, K);
      r.conjugacy_double = std::max(r.conjugacy_double, proj_distance(a, gd(w)));
    } catch (const SingularMatrix&) {
    }
  }
  const double ftol = 1e-9;
  if (r.phi2_rel > ftol) r.failures.push_back("Phi2K reconstruction (float)");
  if (r.phi3_rel > ftol) r.failures.push_back("Phi3K reconstruction (float)");
  if (r.gamma_rel > ftol) r.failures.push_back("GammaK reconstruction (float)");
  if (r.tk_rel > ftol) r.failures.push_back("TK reconstruction (float)");
  if (r.conjugacy > ftol) r.failures.push_back("conjugacy oracle");
  return r;
}

}  // namespace octaflow::resgen

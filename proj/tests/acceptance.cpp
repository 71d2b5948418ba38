// Acceptance suite: one PASS/FAIL line per criterion on stdout.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "octaflow/basin.hpp"
#include "octaflow/equin.hpp"
#include "octaflow/errors.hpp"
#include "octaflow/resgen.hpp"
#include "octaflow/s8geom.hpp"
#include "octaflow/solver.hpp"

using namespace octaflow;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::mt19937_64 rng(20240531);

double unif(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
cplx crand() { return {unif(-1, 1), unif(-1, 1)}; }
cplx disk() {
  const double r = std::sqrt(unif(0, 1)), t = unif(0, 2 * M_PI);
  return std::polar(r, t);
}
CVec cvec(int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = crand();
  return v;
}
CVec p8(int k) {
  CVec x = CVec::Constant(8, 1.0);
  x[k - 1] = -7;
  return x;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

const resgen::ResolventTables& tables() {
  static const resgen::ResolventTables t = resgen::load_tables(resgen::tables_path());
  return t;
}
const solver::NumericTables& numeric() {
  static const solver::NumericTables nt(tables());
  return nt;
}
const solver::ExtendedTables& extended() {
  static const solver::ExtendedTables xt(tables());
  return xt;
}

// rational v with its exact K; nullopt on the exceptional set
struct RationalPoint {
  std::vector<Cyclo8> exact;
  CVec v;
  std::array<Cyclo8, 6> K;
};
std::optional<RationalPoint> rational_point() {
  RationalPoint r;
  r.exact.resize(7);
  r.v.resize(7);
  for (int i = 0; i < 7; ++i) {
    r.exact[i] = Cyclo8(rat(std::uniform_int_distribution<long>(-20, 20)(rng),
                            std::uniform_int_distribution<long>(1, 7)(rng)));
    r.v[i] = r.exact[i].to_complex();
  }
  std::array<Cyclo8, 9> P;
  for (int k = 2; k <= 8; ++k) P[k] = eval(s8::phi_form(k), r.exact);
  if (P[2].is_zero() || P[3].is_zero() || P[5].is_zero()) return std::nullopt;
  r.K = {P[3] * P[3] / (P[2] * P[2] * P[2]), P[4] / (P[2] * P[2]),  P[5] / (P[2] * P[3]),
         P[6] / (P[2] * P[2] * P[2]),      P[7] / (P[2] * P[5]), P[8] / (P[2] * P[2] * P[2] * P[2])};
  return r;
}
std::array<cplxq, 6> to_quad(const std::array<Cyclo8, 6>& K) {
  std::array<cplxq, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = cyclo_to<quad>(K[i]);
  return out;
}

cplx sigma(int l, const CVec& v) {
  return s8::phi(2, v) * s8::selector_forms(l, v).L / s8::phi(3, v);
}

// ---- criteria ----

Outcome c1() {
  const auto& h = s8::hchange();
  bool exact = true;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      Cyclo8 s;
      for (int k = 0; k < 8; ++k) s += h.exact[a][k] * h.exact[b][k].conj();
      exact = exact && s == Cyclo8(a == b ? 1 : 0);
    }
  const double fl = (h.H * h.Hbt - Eigen::Matrix<cplx, 7, 7>::Identity()).cwiseAbs().maxCoeff();
  return {exact && fl < 1e-14, std::string("exact ") + (exact ? "I7" : "not I7") + fmt(", float max %.2e", fl)};
}

Outcome c2() {
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    CVec u = cvec(7);
    for (int k = 4; k <= 8; ++k) worst = std::max(worst, rel(s8::phi_bh(k, u), s8::phi(k, u)));
  }
  return {worst < 1e-10, fmt("max rel %.2e over 100 u, k = 4..8", worst)};
}

Outcome c3() {
  double eq = 0, fix = 0, rho = 0, restr = 0;
  int min_small = 8;
  for (int t = 0; t < 100; ++t) {
    s8::Perm p = s8::perm_identity();
    std::shuffle(p.begin(), p.end(), rng);
    auto A = s8::perm_to_u(p);
    CVec u = cvec(7);
    eq = std::max(eq, proj_distance(s8::g4_u(A * u), A * s8::g4_u(u)));
  }
  for (int k = 1; k <= 8; ++k) {
    CVec p = s8::x_to_u(p8(k));
    fix = std::max(fix, proj_distance(s8::g4_u(p), p));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(s8::g4_chart_jacobian(p));
    rho = std::max(rho, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  for (int t = 0; t < 20; ++t) {
    CVec x = p8(7) + crand() * p8(8);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s8::g4_chart_jacobian(s8::x_to_u(x)));
    const auto s = svd.singularValues();
    int small = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s[i] < 1e-8 * s[0]) ++small;
    min_small = std::min(min_small, small);
  }
  for (int t = 0; t < 100; ++t) {
    const cplx z = 2.0 * crand();
    CVec h(2);
    h << 1.0, z;
    CVec g = s8::restricted_computed(s8::RestrictedTag::Line28, h);
    const cplx want = -z * z * z * (7.0 * z - 4.0) / (4.0 * z - 7.0);
    restr = std::max(restr, std::abs(g[1] / g[0] - want) / std::max(1.0, std::abs(want)));
  }
  const bool ok = eq < 1e-10 && fix < 1e-10 && rho < 1e-10 && min_small >= 5 && restr < 1e-12;
  std::ostringstream os;
  os << fmt("equivariance %.2e, fixed %.2e, rho %.2e, ", eq, fix, rho) << "min near-zero sv " << min_small
     << fmt(", line restriction %.2e", restr);
  return {ok, os.str()};
}

Outcome c4() {
  int in_ok = 0, out_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    cplx z = disk();
    for (int i = 0; i < 60 && std::abs(z) > 0; ++i) z = s8::restricted_map(s8::RestrictedTag::Line28, z);
    if (std::abs(z) < 1e-12) ++in_ok;
  }
  for (int t = 0; t < 1000; ++t) {
    cplx z;
    do z = 4.0 * crand();
    while (std::abs(z) <= 1);
    CVec h(2);
    h << 1.0, z;
    for (int i = 0; i < 60; ++i) {
      h = s8::restricted_closed(s8::RestrictedTag::Line28, h);
      h /= h.norm();
    }
    if (std::abs(h[0]) < 1e-12 * std::abs(h[1])) ++out_ok;
  }
  return {in_ok == 1000 && out_ok == 1000,
          std::to_string(in_ok) + "/1000 inside -> 0, " + std::to_string(out_ok) + "/1000 outside -> inf"};
}

Outcome c5() {
  resgen::VerifyOptions vo;
  vo.trials = 0;
  vo.exact_trials = 4;
  vo.seed = 5;
  const auto r = resgen::verify_tables(tables(), vo);
  const int fails = r.phi2_exact_fail + r.phi3_exact_fail + r.gamma_exact_fail + r.tk_exact_fail + r.dettau_exact_fail;
  std::ostringstream os;
  os << "exact points " << r.exact_trials << ", nonzero residuals " << fails
     << ", persymmetric " << r.persymmetric << ", det TK == tK " << r.det_matches;
  return {fails == 0 && r.persymmetric && r.det_matches, os.str()};
}

Outcome c6() {
  double worst = 0;
  int pairs = 0, redraw = 0;
  for (int nv = 0; nv < 10;) {
    auto p = rational_point();
    if (!p) continue;
    std::optional<solver::ExtendedGK> g;
    try {
      g.emplace(extended(), to_quad(p->K));
    } catch (const SingularMatrix&) {
      ++redraw;
      continue;
    }
    const auto T = resgen::tau(p->v);
    for (int nw = 0; nw < 10; ++nw) {
      CVec w = cvec(7);
      CVec a = T.fullPivLu().solve(s8::g4_u(T * w));
      worst = std::max(worst, proj_distance(a, (*g)(w)));
      ++pairs;
    }
    ++nv;
  }
  return {worst < 1e-9, fmt("max d %.2e over %.0f (v, w) pairs, extended precision", worst, pairs) +
                            (redraw ? ", " + std::to_string(redraw) + " singular redraws" : "")};
}

Outcome c7() {
  double worst = 0, first = 0;
  for (int t = 0; t < 20;) {
    CVec v = cvec(7);
    std::array<cplx, 6> K;
    try {
      K = s8::k_invariants(v).K;
    } catch (const ExceptionalSet&) {
      continue;
    }
    // elementary symmetric functions of sigma
    std::array<cplx, 9> e{};
    e[0] = 1;
    double s = 0;
    for (int l = 1; l <= 8; ++l) {
      const cplx sg = sigma(l, v);
      s = std::max(s, std::abs(sg));
      for (int n = l; n >= 1; --n) e[n] -= sg * e[n - 1];
    }
    const auto C = solver::ck_coeffs(K);
    // C_1 = 0 exactly; compare against the root scale there
    first = std::max(first, std::abs(C[1] - e[1]) / s);
    for (int n = 2; n <= 8; ++n) worst = std::max(worst, rel(C[n], e[n]));
    ++t;
  }
  return {worst < 1e-9 && first < 1e-9, fmt("max coefficient rel %.2e (n >= 2), |sum sigma| / max|sigma| %.2e, 20 v", worst, first)};
}

Outcome c8() {
  double worst = 0;
  int done = 0;
  while (done < 100) {
    solver::ReducedOctic q;
    q.b[0] = 1;
    for (int n = 2; n <= 8; ++n) q.b[n] = disk();
    solver::KParams kp;
    try {
      kp = solver::k_from_b(q);
    } catch (const DegenerateReduction&) {
      continue;
    }
    const auto C = solver::ck_coeffs(kp.K);
    cplx ln = 1;
    for (int n = 1; n <= 8; ++n) {
      ln *= kp.lambda;
      if (n >= 2) worst = std::max(worst, std::abs(ln * C[n] - q.b[n]) / std::abs(q.b[n]));
    }
    ++done;
  }
  return {worst < 1e-9, fmt("max rel %.2e over 100 b", worst)};
}

Outcome c9() {
  const solver::IterationConfig cfg;  // 16 restarts x 200 iterations
  int all_dyn = 0;
  double worst = 0;
  int missing = 0;
  std::vector<int> failed;
  for (int t = 0; t < 100; ++t) {
    solver::Octic p;
    for (auto& c : p.a) c = disk();
    solver::IterationConfig c = cfg;
    c.seed = 1000 + t;
    const auto r = solver::solve(p, numeric(), c);
    if (r.all_dynamical())
      ++all_dyn;
    else
      failed.push_back(t);
    if (r.roots.size() != 8) ++missing;
    for (const auto& x : r.roots) worst = std::max(worst, x.rel_residual);
  }
  for (int t : failed) std::fprintf(stderr, "criterion 9: instance %d not all-dynamical\n", t);

  solver::Octic w;
  const double a[8] = {-36, 546, -4536, 22449, -67284, 118124, -109584, 40320};
  for (int i = 0; i < 8; ++i) w.a[i] = a[i];
  double werr[2] = {0, 0};
  int wdyn[2] = {0, 0};
  for (int prec = 0; prec < 2; ++prec) {
    const auto r = prec ? solver::solve(w, extended(), cfg) : solver::solve(w, numeric(), cfg);
    wdyn[prec] = r.dynamical_count();
    if (r.roots.size() != 8) {
      werr[prec] = 1e300;
      continue;
    }
    std::vector<double> re;
    for (const auto& x : r.roots) re.push_back(x.root.real());
    std::vector<size_t> idx(8);
    for (size_t i = 0; i < 8; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return re[i] < re[j]; });
    for (int k = 0; k < 8; ++k) werr[prec] = std::max(werr[prec], std::abs(r.roots[idx[k]].root - cplx(k + 1)));
  }
  const bool ok = all_dyn >= 95 && worst < 1e-8 && missing == 0 && werr[0] < 1e-8 && werr[1] < 1e-8;
  std::ostringstream os;
  os << all_dyn << "/100 all-dynamical, " << fmt("max rel residual %.2e; ", worst)
     << fmt("prod(x-k): double err %.2e, extended err %.2e", werr[0], werr[1]) << " (dynamical: double " << wdyn[0] << ", extended "
     << wdyn[1] << ")";
  return {ok, os.str()};
}

Outcome c10() {
  double worst = 0, rk = 0;
  for (int t = 0; t < 10;) {
    auto p = rational_point();
    if (!p) continue;
    std::optional<solver::ExtendedGK> g;
    try {
      g.emplace(extended(), to_quad(p->K));
    } catch (const SingularMatrix&) {
      continue;
    }
    const auto T = resgen::tau(p->v);
    std::array<cplx, 6> Kd;
    for (int i = 0; i < 6; ++i) Kd[i] = p->K[i].to_complex();
    const auto C = solver::ck_coeffs(Kd);
    for (int l = 1; l <= 8; ++l) {
      CVec w = T.fullPivLu().solve(s8::x_to_u(p8(l)));
      solver::Vec7<cplxq> wq;
      for (int i = 0; i < 7; ++i) wq[i] = cplxq(quad(w[i].real()), quad(w[i].imag()));
      const cplx J = to_cplx(solver::select_root(*g, wq));
      const cplx s = sigma(l, p->v);
      worst = std::max(worst, std::abs(J - s) / std::max(1.0, std::abs(s)));
      cplx val = 0;
      double mag = 0;
      for (int n = 0; n <= 8; ++n) {
        val = val * s + C[n];
        mag = mag * std::abs(s) + std::abs(C[n]);
      }
      rk = std::max(rk, std::abs(val) / mag);
    }
    ++t;
  }
  return {worst < 1e-9 && rk < 1e-9, fmt("max |J - sigma| %.2e, max |R_K(sigma)| rel %.2e, 10 v x 8 points", worst, rk)};
}

Outcome c11() {
  bool exact = true;
  double eig = 0;
  for (int n = 5; n <= 12; ++n) {
    const auto c = equin::alpha_coeffs(n);
    const auto v = equin::linear_conditions(n, c.alpha1, c.alpha2, c.alpha3);
    exact = exact && v.fixed == 1 && sgn(v.critical_at_points) == 0 && sgn(v.critical_off_line) == 0;
    eig = std::max(eig, equin::criticality_residuals(n, 20).offline_eigenvalue);
  }

  // n = 8 against [v_k (7 v_k^3 - 4 v_k^2 S1 + 2 v_k S2 - S3)]
  const auto G = equin::gamma_form(8);
  using P = MPoly<Rational>;
  bool same = true;
  for (int k = 0; k < 7; ++k) {
    P S1(7), S2(7), S3(7);
    std::vector<P> o;
    for (int j = 0; j < 7; ++j)
      if (j != k) o.push_back(P::variable(7, j));
    for (size_t a = 0; a < o.size(); ++a) {
      S1 = S1 + o[a];
      for (size_t b = a + 1; b < o.size(); ++b) {
        S2 = S2 + o[a] * o[b];
        for (size_t c = b + 1; c < o.size(); ++c) S3 = S3 + o[a] * o[b] * o[c];
      }
    }
    const P vk = P::variable(7, k);
    const P T = vk * vk * vk * Rational(7) - vk * vk * S1 * Rational(4) + vk * S2 * Rational(2) - S3;
    same = same && (G[k] * Rational(7) == vk * T);
  }

  double line8 = 0;
  std::ostringstream rec;
  for (int n = 5; n <= 12; ++n) {
    double d = 0;
    for (int t = 0; t < 20; ++t) {
      const cplx z = 2.0 * crand();
      d = std::max(d, std::abs(equin::line_model(n, z) - equin::line_model_closed(n, z)) /
                          std::max(1.0, std::abs(equin::line_model_closed(n, z))));
    }
    if (n == 8) line8 = d;
    rec << " n" << n << ":" << fmt("%.0e", d);
  }
  const bool ok = exact && eig < 1e-10 && same && line8 < 1e-12;
  std::ostringstream os;
  os << "conditions exact " << exact << fmt(", off-line eig %.2e", eig) << ", n=8 T_k form " << same
     << "; line restriction vs -z^3((n-1)z-4)/(4z-(n-1)):" << rec.str();
  return {ok, os.str()};
}

Outcome c12() {
  using basin::RenderConfig;
  std::ostringstream os;
  bool ok = true;

  RenderConfig c;
  c.tag = s8::RestrictedTag::Line28;
  c.width = c.height = 400;
  const auto img = basin::render(c);
  int zero = -1;
  for (size_t k = 0; k < img.attractors.size(); ++k)
    if (std::abs(img.attractors[k].orbit[0][1]) < 1e-12) zero = static_cast<int>(k);
  const double px = (c.window.re_max - c.window.re_min) / c.width;
  int sampled = 0, agree = 0;
  std::uniform_int_distribution<int> pick(0, c.width * c.height - 1);
  while (sampled < 10000) {
    const int i = pick(rng);
    const int row = i / c.width, col = i % c.width;
    const CVec h = basin::pixel_point(c, col, row);
    const double r = std::abs(h[1] / h[0]);
    if (std::abs(r - 1) < 2 * px) continue;
    ++sampled;
    const int lbl = img.label[i];
    if (lbl >= 0 && (lbl == zero) == (r < 1)) ++agree;
  }
  ok = ok && img.attractors.size() == 2 && zero >= 0 && agree == sampled;
  os << "line28 " << agree << "/" << sampled << " agree";

  RenderConfig c168;
  c168.tag = s8::RestrictedTag::L1_168;
  c168.width = c168.height = 200;
  const auto i168 = basin::render(c168);
  ok = ok && i168.attractors.size() == 2;
  os << "; L1_168 attractors " << i168.attractors.size();

  RenderConfig cq;
  cq.tag = s8::RestrictedTag::L2_105;
  cq.width = cq.height = 200;
  const auto iq = basin::render(cq);
  const double qpx = (cq.window.re_max - cq.window.re_min) / cq.width;
  std::array<int, 4> owner{-1, -1, -1, -1};
  int mixed = 0, wrong_sign = 0;
  for (int row = 0; row < cq.height; ++row)
    for (int col = 0; col < cq.width; ++col) {
      const CVec h = basin::pixel_point(cq, col, row);
      const double x = h[0].real(), y = h[1].real();
      if (std::abs(x) < 2 * qpx || std::abs(y) < 2 * qpx) continue;
      const int quad_ix = (x > 0) + 2 * (y > 0);
      const int lbl = iq.label[static_cast<size_t>(row) * cq.width + col];
      if (lbl < 0) {
        ++mixed;
        continue;
      }
      if (owner[quad_ix] < 0) owner[quad_ix] = lbl;
      if (owner[quad_ix] != lbl) ++mixed;
      const CVec& a = iq.attractors[lbl].orbit[0];
      const double ax = (a[0] / a[2]).real(), ay = (a[1] / a[2]).real();
      if ((ax > 0) != (x > 0) || (ay > 0) != (y > 0)) ++wrong_sign;
    }
  std::vector<int> own(owner.begin(), owner.end());
  std::sort(own.begin(), own.end());
  const bool distinct = own[0] >= 0 && std::unique(own.begin(), own.end()) == own.end();
  ok = ok && iq.attractors.size() == 4 && distinct && mixed == 0 && wrong_sign == 0;
  os << "; L2_105 attractors " << iq.attractors.size() << ", quadrant-pure " << (mixed == 0 && distinct)
     << ", off-quadrant " << wrong_sign;
  return {ok, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> crit = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  const char* names[] = {"coordinate orthogonality",  "bordered hessian identities", "g4 structure",
                         "restricted dichotomy",      "codegen exact reconstruction", "conjugacy oracle",
                         "resolvent coefficients",    "inversion round trip",       "end-to-end solving",
                         "root selector",             "general n",                   "basin render"};
  int failed = 0;
  for (size_t i = 0; i < crit.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = crit[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2zu %s: %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", names[i], o.detail.c_str(),
                sec);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(crit.size()) - failed, crit.size());
  return failed ? 1 : 0;
}

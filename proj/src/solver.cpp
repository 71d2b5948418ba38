#include "octaflow/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace octaflow::solver {

namespace {

const std::vector<Monomial>& wmons(int d) {
  static const std::vector<Monomial> m2 = resgen::w_monomials(2), m3 = resgen::w_monomials(3);
  return d == 2 ? m2 : m3;
}

template <class C>
double dabs(const C& z) {
  return static_cast<double>(std::abs(z));
}

template <class C>
bool finite(const C& z) {
  return std::isfinite(static_cast<double>(z.real())) && std::isfinite(static_cast<double>(z.imag()));
}

template <class C>
cplx lower(const C& z) {
  return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

template <class C>
C raise(const cplx& z) {
  return C(z.real(), z.imag());
}

template <class C>
C form_at(const std::vector<C>& c, int d, const Vec7<C>& w) {
  const auto& ms = wmons(d);
  C acc(0);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    C m = c[i];
    for (int a = 0; a < 7; ++a)
      for (int e = 0; e < ms[i].exp(a); ++e) m *= w[a];
    acc += m;
  }
  return acc;
}

template <class C>
MPoly<C> form_poly(const std::vector<C>& c, int d) {
  const auto& ms = wmons(d);
  std::vector<Term<C>> t;
  for (std::size_t i = 0; i < ms.size(); ++i) t.push_back({ms[i], c[i]});
  return MPoly<C>(7, std::move(t));
}

template <class C>
Vec7<C> from_cvec(const CVec& w) {
  if (w.size() != 7) throw DimensionError("expected 7 coordinates");
  Vec7<C> r;
  for (int i = 0; i < 7; ++i) r[i] = raise<C>(w[i]);
  return r;
}

template <class C>
CVec to_cvec(const Vec7<C>& w) {
  CVec r(7);
  for (int i = 0; i < 7; ++i) r[i] = lower(w[i]);
  return r;
}

// in-place LU with partial pivoting; false if a pivot vanishes
template <class C>
bool lu_factor(Mat7<C>& a, std::array<int, 7>& piv, C& det) {
  det = C(1);
  for (int k = 0; k < 7; ++k) {
    int p = k;
    for (int i = k + 1; i < 7; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    piv[k] = p;
    if (a[p][k] == C(0)) {
      det = C(0);
      return false;
    }
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (int i = k + 1; i < 7; ++i) {
      a[i][k] /= a[k][k];
      for (int j = k + 1; j < 7; ++j) a[i][j] -= a[i][k] * a[k][j];
    }
  }
  return true;
}

template <class C>
Vec7<C> lu_solve(const Mat7<C>& lu, const std::array<int, 7>& piv, Vec7<C> b) {
  for (int k = 0; k < 7; ++k) std::swap(b[k], b[piv[k]]);
  for (int i = 1; i < 7; ++i)
    for (int j = 0; j < i; ++j) b[i] -= lu[i][j] * b[j];
  for (int i = 6; i >= 0; --i) {
    for (int j = i + 1; j < 7; ++j) b[i] -= lu[i][j] * b[j];
    b[i] /= lu[i][i];
  }
  return b;
}

cplx disk(std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(0, 1);
  const double r = std::sqrt(U(g)), th = 2 * M_PI * U(g);
  return std::polar(r, th);
}

}  // namespace

Eigen::Matrix<cplx, 7, 7> to_eigen(const Mat7<cplx>& m) {
  Eigen::Matrix<cplx, 7, 7> r;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) r(i, j) = m[i][j];
  return r;
}

// ---- octics ----

cplx Octic::operator()(cplx x) const {
  cplx r = 1;
  for (const auto& c : a) r = r * x + c;
  return r;
}

cplx Octic::derivative(cplx x) const {
  cplx r = 8;
  for (int k = 0; k < 7; ++k) r = r * x + double(7 - k) * a[k];
  return r;
}

double Octic::scale() const {
  double s = 1;
  for (const auto& c : a) s = std::max(s, std::abs(c));
  return s;
}

template <class C>
BasicReduction<C> reduce_octic_as(const Octic& p) {
  auto n = [](double x) { return C(x); };
  const C a1 = raise<C>(p.a[0]), a2 = raise<C>(p.a[1]), a3 = raise<C>(p.a[2]), a4 = raise<C>(p.a[3]),
          a5 = raise<C>(p.a[4]), a6 = raise<C>(p.a[5]), a7 = raise<C>(p.a[6]), a8 = raise<C>(p.a[7]);
  auto pw = [](const C& x, int e) {
    C r(1);
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  };
  BasicReduction<C> r;
  auto& b = r.q.b;
  b[0] = C(1);
  b[1] = C(0);
  b[2] = (n(-7) * pw(a1, 2) + n(16) * a2) / n(16);
  b[3] = (n(7) * pw(a1, 3) - n(24) * a1 * a2 + n(32) * a3) / n(32);
  b[4] = (n(-105) * pw(a1, 4) + n(480) * pw(a1, 2) * a2 - n(1280) * a1 * a3 + n(2048) * a4) / n(2048);
  b[5] = (n(7) * pw(a1, 5) - n(40) * pw(a1, 3) * a2 + n(160) * pw(a1, 2) * a3 - n(512) * a1 * a4 + n(1024) * a5) /
         n(1024);
  b[6] = (n(-35) * pw(a1, 6) + n(240) * pw(a1, 4) * a2 - n(1280) * pw(a1, 3) * a3 + n(6144) * pw(a1, 2) * a4 -
          n(24576) * a1 * a5 + n(65536) * a6) /
         n(65536);
  b[7] = (n(3) * pw(a1, 7) - n(24) * pw(a1, 5) * a2 + n(160) * pw(a1, 4) * a3 - n(1024) * pw(a1, 3) * a4 +
          n(6144) * pw(a1, 2) * a5 - n(32768) * a1 * a6 + n(131072) * a7) /
         n(131072);
  b[8] = (n(-7) * pw(a1, 8) + n(64) * pw(a1, 6) * a2 - n(512) * pw(a1, 5) * a3 + n(4096) * pw(a1, 4) * a4 -
          n(32768) * pw(a1, 3) * a5 + n(262144) * pw(a1, 2) * a6 - n(2097152) * a1 * a7 + n(16777216) * a8) /
         n(16777216);
  r.shift = a1 / n(8);
  return r;
}

template <class C>
std::array<C, 9> ck_coeffs(const std::array<C, 6>& K) {
  auto n = [](double x) { return C(x); };
  const C K1 = K[0], K2 = K[1], K3 = K[2], K4 = K[3], K5 = K[4], K6 = K[5];
  if (K1 == C(0)) throw DomainError("ck_coeffs: K1 = 0");
  const C K12 = K1 * K1, K13 = K12 * K1, K14 = K13 * K1;
  std::array<C, 9> c;
  c[0] = C(1);
  c[1] = C(0);
  c[2] = n(-32) / K1;
  c[3] = n(512) / (n(3) * K1);
  c[4] = n(512) * (n(1) - n(2) * K2) / K12;
  c[5] = n(16384) * (n(6) * K3 - n(5)) / (n(15) * K12);
  c[6] = n(16384) * (n(-3) + n(8) * K1 + n(18) * K2 - n(24) * K4) / (n(9) * K13);
  c[7] = n(262144) * (n(35) - n(70) * K2 - n(84) * K3 + n(120) * K3 * K5) / (n(105) * K13);
  c[8] = n(131072) *
         (n(15) - n(160) * K1 - n(180) * K2 + n(180) * K2 * K2 + n(384) * K1 * K3 + n(480) * K4 - n(720) * K6) /
         (n(45) * K14);
  return c;
}

template <class C>
BasicKParams<C> k_from_b(const BasicReducedOctic<C>& q, double tol) {
  auto n = [](double x) { return C(x); };
  const auto& b = q.b;
  double s = 0;
  for (int k = 2; k <= 8; ++k) s = std::max(s, std::pow(dabs(b[k]), 1.0 / k));
  const C b2 = b[2], b3 = b[3], b4 = b[4], b5 = b[5], b6 = b[6], b7 = b[7], b8 = b[8];
  if (s == 0 || dabs(b2) <= tol * s * s) throw DegenerateReduction(Degeneracy::B2, "b2 vanishes");
  if (dabs(b3) <= tol * s * s * s) throw DegenerateReduction(Degeneracy::B3, "b3 vanishes");
  const C d5 = b2 * b3 - b5;
  if (dabs(d5) <= tol * std::pow(s, 5)) throw DegenerateReduction(Degeneracy::B2B3MinusB5, "b2 b3 - b5 vanishes");
  const C b22 = b2 * b2, b23 = b22 * b2, b24 = b23 * b2, b32 = b3 * b3;
  BasicKParams<C> k;
  k.K[0] = n(-9) * b32 / (n(8) * b23);
  k.K[1] = (b22 - n(2) * b4) / (n(2) * b22);
  k.K[2] = n(5) * d5 / (n(6) * b2 * b3);
  k.K[3] = (n(2) * b23 - n(3) * b32 - n(6) * b2 * b4 + n(6) * b6) / (n(8) * b23);
  k.K[4] = n(7) * (b22 * b3 - b3 * b4 - b2 * b5 + b7) / (n(10) * b2 * d5);
  k.K[5] = (b24 - n(4) * b2 * b32 - n(4) * b22 * b4 + n(2) * b4 * b4 + n(4) * b3 * b5 + n(4) * b2 * b6 - n(4) * b8) /
           (n(8) * b24);
  k.lambda = n(-3) * b3 / (n(16) * b2);
  auto c = ck_coeffs(k.K);
  C ln(1);
  double sn = 1;
  for (int i = 1; i <= 8; ++i) {
    ln *= k.lambda;
    sn *= s;
    if (i >= 2) k.roundtrip = std::max(k.roundtrip, dabs(ln * c[i] - b[i]) / sn);
  }
  return k;
}

// ---- tables at K ----

template <class C>
BasicTables<C>::BasicTables(const resgen::ResolventTables& t) {
  if (t.phi2K.size() != 28 || t.phi3K.size() != 84 || t.gammaK.size() != 28 || t.TK.size() != 7)
    throw TablesError("tables: wrong entry counts");
  for (const auto& e : t.phi2K) phi2_.emplace_back(e);
  for (const auto& e : t.phi3K) phi3_.emplace_back(e);
  for (const auto& e : t.gammaK) gamma_.emplace_back(e);
  for (const auto& row : t.TK) {
    if (row.size() != 7) throw TablesError("tables: TK must be 7x7");
    for (const auto& e : row) tk_entries_.emplace_back(e);
  }
  tK_ = CompiledPoly<C>(t.tK);
}

template <class C>
typename BasicTables<C>::At BasicTables<C>::at(const std::array<C, 6>& K) const {
  std::span<const C> k(K.data(), 6);
  At r;
  for (const auto& p : phi2_) r.phi2c.push_back(p(k));
  for (const auto& p : phi3_) r.phi3c.push_back(p(k));
  for (const auto& p : gamma_) r.gammac.push_back(p(k));
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) r.TK[a][b] = tk_entries_[7 * a + b](k);
  r.tK = tK_(k);
  return r;
}

template <class C>
C BasicTables<C>::At::phi2(const Vec7<C>& w) const {
  return form_at(phi2c, 2, w);
}
template <class C>
C BasicTables<C>::At::phi3(const Vec7<C>& w) const {
  return form_at(phi3c, 3, w);
}
template <class C>
C BasicTables<C>::At::gamma(const Vec7<C>& w) const {
  return form_at(gammac, 2, w);
}

// ---- g_K ----

template <class C>
BasicGK<C>::BasicGK(const Tables& nt, const std::array<C, 6>& K) : at_(nt.at(K)) {
  auto n = [](double x) { return C(x); };
  if (!finite(at_.tK) || at_.tK == C(0)) throw SingularMatrix("g_K: t_K vanishes");
  Eigen::Matrix<cplx, 7, 7> tkd;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      if (!finite(at_.TK[a][b])) throw SingularMatrix("g_K: T_K not finite");
      tkd(a, b) = lower(at_.TK[a][b]);
    }
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 7, 7>> svd(tkd);
  const auto& sv = svd.singularValues();
  cond_ = sv(6) > 0 ? sv(0) / sv(6) : INFINITY;
  using R = typename C::value_type;
  const double cond_max = 0.01 / static_cast<double>(std::numeric_limits<R>::epsilon());
  if (!(cond_ < cond_max)) throw SingularMatrix("g_K: T_K singular");
  lu_ = at_.TK;
  C dummy;
  if (!lu_factor(lu_, piv_, dummy)) throw SingularMatrix("g_K: T_K singular");

  const MPoly<C> p2 = form_poly(at_.phi2c, 2);
  const MPoly<C> p3 = form_poly(at_.phi3c, 3);

  for (auto& row : S_) row.fill(C(0));
  const auto& m2 = wmons(2);
  for (std::size_t i = 0; i < m2.size(); ++i) {
    int a = -1, b = -1;
    for (int j = 0; j < 7; ++j)
      for (int e = 0; e < m2[i].exp(j); ++e) (a < 0 ? a : b) = j;
    if (a == b) {
      S_[a][a] = at_.phi2c[i];
    } else {
      S_[a][b] = S_[b][a] = at_.phi2c[i] / n(2);
    }
  }
  Mat7<C> Alu;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) Alu[i][j] = n(2) * S_[i][j];
  std::array<int, 7> apiv{};
  C detA;
  if (!lu_factor(Alu, apiv, detA)) throw SingularMatrix("g_K: Phi2K degenerate");
  Mat7<C> B;
  for (int j = 0; j < 7; ++j) {
    Vec7<C> e;
    e.fill(C(0));
    e[j] = C(1);
    const auto col = lu_solve(Alu, apiv, e);
    for (int i = 0; i < 7; ++i) B[i][j] = col[i];
  }
  det_ratio_ = -detA / at_.tK;

  // BH(F, G, J) for quadratic F: -det(A) gradJ^T A^{-1} gradG; -det(A) / t_K == 128
  auto apply_B = [&](const std::vector<MPoly<C>>& g) {
    std::vector<MPoly<C>> out(7, MPoly<C>(7));
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) out[i] += B[i][j] * g[j];
    return out;
  };
  auto dot = [](const std::vector<MPoly<C>>& a, const std::vector<MPoly<C>>& b) {
    MPoly<C> r(7);
    for (int i = 0; i < 7; ++i) r += a[i] * b[i];
    return r;
  };
  const auto g3 = gradient(p3);
  const auto Bg3 = apply_B(g3);
  const MPoly<C> G4 = (n(128) * K[0]) * dot(g3, Bg3);
  const MPoly<C> p4 = (n(1) / n(576)) * (n(72) * (p2 * p2) + G4);
  const MPoly<C> G5 = n(128) * dot(gradient(p4), Bg3);
  const MPoly<C> p5 = (n(1) / n(768)) * (n(96) * (p2 * p3) + G5);

  const auto r5 = gradient(p5, true), r3 = gradient(p3, true), r2 = gradient(p2, true);
  for (int i = 0; i < 7; ++i) {
    MPoly<C> num = (n(84) / n(5)) * r5[i] - n(3) * (p2 * r3[i]) - p3 * r2[i];
    num_.emplace_back(num);
  }
}

template <class C>
Vec7<C> BasicGK<C>::operator()(const Vec7<C>& w) const {
  std::span<const C> s(w.data(), 7);
  Vec7<C> num;
  for (int i = 0; i < 7; ++i) num[i] = num_[i](s);
  return lu_solve(lu_, piv_, num);
}

template <class C>
C BasicGK<C>::bilinear(const Vec7<C>& a, const Vec7<C>& b) const {
  C r(0);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) r += a[i] * S_[i][j] * b[j];
  return r;
}

template <class C>
CVec BasicGK<C>::operator()(const CVec& w) const {
  return to_cvec((*this)(from_cvec<C>(w)));
}
template <class C>
cplx BasicGK<C>::phi2K(const CVec& w) const {
  return lower(phi2K(from_cvec<C>(w)));
}
template <class C>
cplx BasicGK<C>::gammaK(const CVec& w) const {
  return lower(gammaK(from_cvec<C>(w)));
}
template <class C>
cplx BasicGK<C>::bilinear(const CVec& a, const CVec& b) const {
  return lower(bilinear(from_cvec<C>(a), from_cvec<C>(b)));
}

// ---- iteration and selection ----

namespace {

template <class V>
struct VecOps;

template <>
struct VecOps<CVec> {
  static double norm(const CVec& v) { return v.norm(); }
  static void scale(CVec& v, double s) { v /= s; }
  static double dist(const CVec& a, const CVec& b) { return proj_distance(a, b); }
};

template <class C>
struct VecOps<Vec7<C>> {
  static double norm(const Vec7<C>& v) {
    double s = 0;
    for (const auto& x : v) s += std::norm(lower(x));
    return std::sqrt(s);
  }
  static void scale(Vec7<C>& v, double s) {
    const C d(s);
    for (auto& x : v) x /= d;
  }
  static double dist(const Vec7<C>& a, const Vec7<C>& b) { return proj_distance(to_cvec(a), to_cvec(b)); }
};

template <class V, class G>
bool iterate_t(const G& g, V& w, int& iterations, bool& stalled, const IterationConfig& cfg) {
  using Ops = VecOps<V>;
  const double n0 = Ops::norm(w);
  if (!(n0 > 0)) throw IndeterminatePoint("iterate: zero start");
  Ops::scale(w, n0);
  int quiet = 0;
  stalled = false;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    V y = g(w);
    const double n = Ops::norm(y);
    if (!(n > 0) || !std::isfinite(n)) throw IndeterminatePoint("iterate: image vanishes");
    Ops::scale(y, n);
    const double d = Ops::dist(y, w);
    w = y;
    iterations = it;
    if (d < cfg.tol) return true;
    quiet = d < cfg.stall_tol ? quiet + 1 : 0;
    if (cfg.stall_window > 0 && quiet >= cfg.stall_window) {
      stalled = true;
      return true;
    }
  }
  return false;
}

}  // namespace

IterResult iterate(const std::function<CVec(const CVec&)>& g, const CVec& w0, const IterationConfig& cfg) {
  IterResult r;
  r.w = w0;
  r.converged = iterate_t(g, r.w, r.iterations, r.stalled, cfg);
  return r;
}

template <class C>
C select_root(const BasicGK<C>& g, const Vec7<C>& w) {
  const C p2 = g.phi2K(w);
  double tk = 0, wn = 0;
  for (const auto& row : g.values().TK)
    for (const auto& x : row) tk = std::max(tk, dabs(x));
  for (const auto& x : w) wn += std::norm(lower(x));
  if (!(dabs(p2) > 1e-14 * tk * wn)) throw DomainError("select_root: Phi2K vanishes at the limit");
  return -g.gammaK(w) / (C(48) * p2);
}

cplx select_root(const GK& g, const CVec& w) { return select_root(g, from_cvec<cplx>(w)); }

// ---- full solve ----

cplx newton_polish(const Octic& p, cplx x, int max_steps) {
  cplx best = x;
  double bestr = std::abs(p(x));
  for (int s = 0; s < max_steps; ++s) {
    const cplx f = p(x), df = p.derivative(x);
    if (std::abs(df) == 0) break;
    const cplx dx = f / df;
    x -= dx;
    if (!finite(x)) break;
    const double r = std::abs(p(x));
    if (r < bestr) {
      bestr = r;
      best = x;
    }
    if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return best;
}

Octic taylor_shift(const Octic& p, cplx t) {
  // ascending coefficients d[k] of x^k
  std::array<cplx, 9> d;
  d[8] = 1;
  for (int k = 0; k < 8; ++k) d[k] = p.a[7 - k];
  for (int i = 0; i < 8; ++i)
    for (int k = 7; k >= i; --k) d[k] += t * d[k + 1];
  Octic q;
  for (int k = 0; k < 8; ++k) q.a[7 - k] = d[k];
  return q;
}

int RootReport::dynamical_count() const {
  int n = 0;
  for (const auto& r : roots) n += r.dynamical;
  return n;
}

namespace {

// Complex gaussian whitened by T_K.  Once two 8-points are known, start in
// the subspace where all found 8-points share one x-coordinate; it is
// invariant and holds only the unfound ones.
CVec start_point(const Eigen::Matrix<cplx, 7, 7>& TK, const Eigen::Matrix<cplx, 7, 7>& S,
                 const std::vector<CVec>& limits, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  if (limits.size() < 2) {
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 7, 7>> svd(TK, Eigen::ComputeFullV);
    CVec z(7);
    for (int i = 0; i < 7; ++i) {
      const double re = N(rng), im = N(rng);
      z[i] = cplx(re, im) / std::sqrt(svd.singularValues()(i));
    }
    return svd.matrixV() * z;
  }
  auto B = [&](const CVec& a, const CVec& b) { return (a.transpose() * S * b)(0, 0); };
  std::vector<CVec> n;
  for (const auto& w : limits) n.push_back(w / std::sqrt(B(w, w) / 56.0));
  for (std::size_t f = 1; f < n.size(); ++f)
    if ((B(n[0], n[f]) / -8.0).real() < 0) n[f] = -n[f];
  Eigen::MatrixXcd Cm(static_cast<Eigen::Index>(n.size() - 1), 7);
  for (std::size_t f = 1; f < n.size(); ++f) Cm.row(static_cast<Eigen::Index>(f - 1)) = (S * (n[f] - n[0])).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Cm, Eigen::ComputeFullV);
  const int rank = static_cast<int>(n.size()) - 1;
  Eigen::MatrixXcd Nm = svd.matrixV().rightCols(7 - rank);
  CVec c(Nm.cols());
  for (int i = 0; i < c.size(); ++i) c[i] = disk(rng);
  return Nm * c;
}

template <class C>
RootReport solve_t(const Octic& p, const BasicTables<C>& nt, const IterationConfig& cfg) {
  if (cfg.tol <= 0 || cfg.max_iter <= 0 || cfg.restarts <= 0) throw DomainError("solve: configuration must be positive");
  RootReport rep;
  std::mt19937_64 rng(cfg.seed);
  const double ascale = p.scale();
  std::vector<CVec> limits;

  auto is_new = [&](cplx x) {
    for (const auto& r : rep.roots)
      if (std::abs(r.root - x) <= 1e-8 * std::max(1.0, std::abs(x))) return false;
    return true;
  };
  auto add_root = [&](cplx x, int iters, int restart, bool dyn) {
    RootInfo ri;
    ri.root = x;
    ri.residual = std::abs(p(x));
    ri.rel_residual = ri.residual / ascale;
    ri.iterations = iters;
    ri.restart = restart;
    ri.dynamical = dyn;
    rep.roots.push_back(ri);
  };

  bool reduced = false;
  for (int attempt = 0; attempt <= 5 && !reduced; ++attempt) {
    // retries substitute x = t + 1/y
    cplx t = 0;
    Octic pt = p;
    if (attempt > 0) {
      for (;;) {
        long j = static_cast<long>(rng() % 32) - 16;
        if (j >= 0) ++j;
        t = double(j) / 16.0;
        if (std::abs(p(t)) > 1e-8 * ascale) break;
      }
      rep.shifts.push_back(t);
      const Octic s = taylor_shift(p, t);
      for (int i = 0; i < 7; ++i) pt.a[i] = s.a[6 - i] / s.a[7];
      pt.a[7] = 1.0 / s.a[7];
    }
    ++rep.attempts;
    const auto red = reduce_octic_as<C>(pt);
    BasicKParams<C> kp;
    try {
      kp = k_from_b(red.q);
    } catch (const DegenerateReduction& e) {
      rep.diagnostics.push_back(std::string("degenerate reduction: ") + e.what());
      continue;
    }
    std::optional<BasicGK<C>> g;
    try {
      g.emplace(nt, kp.K);
    } catch (const Error& e) {
      rep.diagnostics.push_back(std::string("map assembly failed: ") + e.what());
      continue;
    }
    reduced = true;
    Eigen::Matrix<cplx, 7, 7> TK, S;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        TK(i, j) = lower(g->values().TK[i][j]);
        S(i, j) = lower(g->gram()[i][j]);
      }
    for (int r = 0; r < cfg.restarts && rep.roots.size() < 8; ++r) {
      ++rep.restarts_used;
      Vec7<C> w = from_cvec<C>(start_point(TK, S, limits, rng));
      int iters = 0;
      bool stalled = false, conv = false;
      try {
        conv = iterate_t(*g, w, iters, stalled, cfg);
      } catch (const IndeterminatePoint&) {
        rep.diagnostics.push_back("restart " + std::to_string(r) + ": indeterminate point");
        continue;
      }
      if (!conv) {
        rep.diagnostics.push_back("restart " + std::to_string(r) + ": not converged");
        continue;
      }
      ++rep.converged_runs;
      rep.stalled_runs += stalled;
      C sigma;
      try {
        sigma = select_root(*g, w);
      } catch (const DomainError&) {
        rep.diagnostics.push_back("restart " + std::to_string(r) + ": selector undefined at limit");
        continue;
      }
      const cplx y = lower(C(kp.lambda * sigma - red.shift));
      const cplx raw = attempt > 0 ? t + 1.0 / y : y;
      const cplx x = newton_polish(p, raw);
      if (std::abs(x - raw) > 1e-5 * std::max(1.0, std::abs(x))) {
        rep.diagnostics.push_back("restart " + std::to_string(r) + ": limit is not an 8-point");
        continue;
      }
      if (!is_new(x)) continue;
      add_root(x, iters, r, true);
      limits.push_back(to_cvec(w));
    }
  }

  const int dyn = static_cast<int>(rep.roots.size());
  if (rep.roots.size() < 8) {
    // deflation fallback
    std::vector<cplx> c(p.a.begin(), p.a.end());
    c.insert(c.begin(), 1.0);
    for (const auto& r : rep.roots) {
      std::vector<cplx> q(c.size() - 1);
      q[0] = c[0];
      for (std::size_t i = 1; i < q.size(); ++i) q[i] = c[i] + r.root * q[i - 1];
      c = std::move(q);
    }
    const int m = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
    for (int j = 0; j < m; ++j) comp(0, j) = -c[j + 1] / c[0];
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    for (int i = 0; i < m; ++i) {
      cplx seed = es.eigenvalues()[i];
      cplx x = newton_polish(p, seed);
      for (int k = 0; k < 10 && !is_new(x); ++k)
        x = newton_polish(p, seed + 1e-3 * std::max(1.0, std::abs(seed)) * disk(rng));
      if (!is_new(x)) x = seed;
      add_root(x, 0, -1, false);
    }
    rep.diagnostics.push_back(std::to_string(m) + " root(s) recovered by deflation");
  }

  bool good = rep.roots.size() == 8;
  for (const auto& r : rep.roots) good = good && r.rel_residual < 1e-8;
  if (!reduced || dyn == 0)
    rep.status = "total_failure";
  else
    rep.status = good ? "ok" : "partial";
  return rep;
}

}  // namespace

RootReport solve(const Octic& p, const NumericTables& nt, const IterationConfig& cfg) {
  auto r = solve_t(p, nt, cfg);
  r.precision = "double";
  return r;
}

RootReport solve(const Octic& p, const ExtendedTables& nt, const IterationConfig& cfg) {
  auto r = solve_t(p, nt, cfg);
  r.precision = "extended";
  return r;
}

#define OCTAFLOW_INSTANTIATE(C)                                              \
  template BasicReduction<C> reduce_octic_as<C>(const Octic&);               \
  template BasicKParams<C> k_from_b<C>(const BasicReducedOctic<C>&, double); \
  template std::array<C, 9> ck_coeffs<C>(const std::array<C, 6>&);           \
  template class BasicTables<C>;                                             \
  template class BasicGK<C>;                                                 \
  template C select_root<C>(const BasicGK<C>&, const Vec7<C>&);

OCTAFLOW_INSTANTIATE(cplx)
OCTAFLOW_INSTANTIATE(cplxq)

}  // namespace octaflow::solver

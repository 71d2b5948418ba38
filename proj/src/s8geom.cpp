#include "octaflow/s8geom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace octaflow::s8 {

namespace {

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<cplx> as_vec(const CVec& v) { return {v.data(), v.data() + v.size()}; }

void check_len(const CVec& v, int n, const char* what) {
  if (v.size() != n) throw DimensionError(std::string(what) + ": expected length " + std::to_string(n));
}

}  // namespace

const HChange& hchange() {
  static const HChange h = [] {
    HChange r;
    // 1/(2 sqrt2) = sqrt2/4
    Cyclo8 s = Cyclo8::sqrt2();
    s *= rat(1, 4);
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 8; ++k) {
        r.exact[j][k] = Cyclo8::zeta_pow((j + 1) * k) * s;
        r.H(j, k) = r.exact[j][k].to_complex();
      }
    r.Hbt = r.H.adjoint();
    return r;
  }();
  return h;
}

ProjPoint x_to_u(const CVec& x) {
  check_len(x, 8, "x_to_u");
  const cplx s = x.sum();
  if (std::abs(s) > 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()))
    throw DomainError("x_to_u: coordinates do not sum to zero");
  return hchange().H * x;
}

ProjPoint u_to_x(const CVec& u) {
  check_len(u, 7, "u_to_x");
  return hchange().Hbt * u;
}

std::vector<Cyclo8> x_to_u_exact(const std::vector<Cyclo8>& x) {
  if (x.size() != 8) throw DimensionError("x_to_u_exact: expected 8 coordinates");
  Cyclo8 s;
  for (const auto& c : x) s += c;
  if (!s.is_zero()) throw DomainError("x_to_u_exact: coordinates do not sum to zero");
  const auto& H = hchange().exact;
  std::vector<Cyclo8> u(7);
  for (int j = 0; j < 7; ++j)
    for (int k = 0; k < 8; ++k) u[j] += H[j][k] * x[k];
  return u;
}

std::vector<Cyclo8> u_to_x_exact(const std::vector<Cyclo8>& u) {
  if (u.size() != 7) throw DimensionError("u_to_x_exact: expected 7 coordinates");
  const auto& H = hchange().exact;
  std::vector<Cyclo8> x(8);
  for (int k = 0; k < 8; ++k)
    for (int j = 0; j < 7; ++j) x[k] += H[j][k].conj() * u[j];
  return x;
}

// ---- invariants ----

namespace {

// Sum over x_i^k of x = conj(H)^T u collapses to the monomials whose weighted
// index sum vanishes mod 8, each with coefficient 8 * multinomial / (2 sqrt2)^k.
MPoly<Cyclo8> build_phi_form(int k) {
  Cyclo8 scale = (Cyclo8(2) * Cyclo8::sqrt2());
  Cyclo8 p(1);
  for (int i = 0; i < k; ++i) p *= scale;
  Cyclo8 base = Cyclo8(8) * p.inverse();
  std::vector<Term<Cyclo8>> terms;
  const mpz_class kf = factorial(k);
  for (Monomial m : monomials_of_degree(7, k)) {
    int w = 0;
    mpz_class den = 1;
    for (int j = 0; j < 7; ++j) {
      w += (j + 1) * m.exp(j);
      den *= factorial(m.exp(j));
    }
    if (w % 8) continue;
    Cyclo8 c = base;
    c *= rat(kf, den);
    terms.push_back({m, c});
  }
  return MPoly<Cyclo8>(7, std::move(terms));
}

struct PhiForms {
  std::array<MPoly<Cyclo8>, 9> exact;
  std::array<MPoly<cplx>, 9> num;
  PhiForms() {
    for (int k = 2; k <= 8; ++k) {
      exact[k] = build_phi_form(k);
      num[k] = exact[k].cast<cplx>();
    }
  }
};

const PhiForms& phi_forms() {
  static const PhiForms f;
  return f;
}

void check_k(int k, int lo, int hi) {
  if (k < lo || k > hi)
    throw DomainError("index " + std::to_string(k) + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
}

struct BhChain {
  std::array<MPoly<cplx>, 9> phi, g;
  BhChain() {
    const auto& P = phi_forms().num;
    phi[2] = P[2];
    phi[3] = P[3];
    g[4] = bordered_hessian_det(phi[2], phi[3], phi[3]);
    phi[4] = (cplx(72) * phi[2] * phi[2] + g[4]) * cplx(1.0 / 576);
    g[5] = bordered_hessian_det(phi[2], phi[3], phi[4]);
    phi[5] = (cplx(96) * phi[2] * phi[3] + g[5]) * cplx(1.0 / 768);
    g[6] = bordered_hessian_det(phi[2], phi[4], phi[4]);
    phi[6] = (cplx(128) * phi[3] * phi[3] + g[6]) * cplx(1.0 / 1024);
    g[7] = bordered_hessian_det(phi[2], phi[4], phi[5]);
    phi[7] = (cplx(160) * phi[3] * phi[4] + g[7]) * cplx(1.0 / 1280);
    g[8] = bordered_hessian_det(phi[2], phi[5], phi[5]);
    phi[8] = (cplx(200) * phi[4] * phi[4] + g[8]) * cplx(1.0 / 1600);
  }
};

const BhChain& bh_chain() {
  static const BhChain c;
  return c;
}

}  // namespace

const MPoly<Cyclo8>& phi_form(int k) {
  check_k(k, 2, 8);
  return phi_forms().exact[k];
}

const MPoly<cplx>& phi_form_c(int k) {
  check_k(k, 2, 8);
  return phi_forms().num[k];
}

cplx phi(int k, const CVec& u) {
  check_k(k, 2, 8);
  check_len(u, 7, "phi");
  CVec x = u_to_x(u);
  cplx s = 0;
  for (int i = 0; i < 8; ++i) s += std::pow(x[i], k);
  return s;
}

std::array<cplx, 9> phis(const CVec& u) {
  check_len(u, 7, "phis");
  CVec x = u_to_x(u);
  std::array<cplx, 9> r{};
  for (int i = 0; i < 8; ++i) {
    cplx p = x[i] * x[i];
    for (int k = 2; k <= 8; ++k) {
      r[k] += p;
      p *= x[i];
    }
  }
  return r;
}

const MPoly<cplx>& phi_bh_form(int k) {
  check_k(k, 2, 8);
  return bh_chain().phi[k];
}

const MPoly<cplx>& g_bh_form(int k) {
  check_k(k, 4, 8);
  return bh_chain().g[k];
}

cplx phi_bh(int k, const CVec& u) {
  check_len(u, 7, "phi_bh");
  return eval<cplx, cplx>(phi_bh_form(k), as_vec(u));
}

// ---- equivariants ----

const std::vector<MPoly<Cyclo8>>& basic_equivariant_form(int k) {
  check_k(k, 1, 7);
  static const std::array<std::vector<MPoly<Cyclo8>>, 8> forms = [] {
    std::array<std::vector<MPoly<Cyclo8>>, 8> f;
    for (int j = 1; j <= 7; ++j) {
      f[j] = gradient(phi_form(j + 1), true);
      Cyclo8 c(rat(-8, j + 1));
      for (auto& p : f[j]) p *= c;
    }
    return f;
  }();
  return forms[k];
}

ProjPoint basic_equivariant(int k, const CVec& u) {
  check_len(u, 7, "basic_equivariant");
  const auto& f = basic_equivariant_form(k);
  CVec r(7);
  auto pt = as_vec(u);
  for (int i = 0; i < 7; ++i) r[i] = eval<Cyclo8, cplx>(f[i], pt);
  return r;
}

CVec basic_equivariant_x(int k, const CVec& u) {
  check_k(k, 1, 7);
  CVec x = u_to_x(u);
  cplx F = 0;
  for (int i = 0; i < 8; ++i) F += std::pow(x[i], k);
  CVec f(8);
  for (int i = 0; i < 8; ++i) f[i] = F - 8.0 * std::pow(x[i], k);
  return hchange().H * f;
}

const std::vector<MPoly<Cyclo8>>& g4_form() {
  static const std::vector<MPoly<Cyclo8>> g = [] {
    const auto &f1 = basic_equivariant_form(1), &f2 = basic_equivariant_form(2), &f4 = basic_equivariant_form(4);
    MPoly<Cyclo8> a = phi_form(3) * Cyclo8(-2), b = phi_form(2) * Cyclo8(-9);
    std::vector<MPoly<Cyclo8>> out;
    for (int i = 0; i < 7; ++i) out.push_back(a * f1[i] + b * f2[i] + f4[i] * Cyclo8(84));
    return out;
  }();
  return g;
}

const std::vector<MPoly<cplx>>& g4_form_c() {
  static const std::vector<MPoly<cplx>> g = [] {
    std::vector<MPoly<cplx>> out;
    for (const auto& p : g4_form()) out.push_back(p.cast<cplx>());
    return out;
  }();
  return g;
}

bool is_indeterminate(const CVec& image, const CVec& input, int degree) {
  const double in = input.cwiseAbs().maxCoeff();
  const double out = image.cwiseAbs().maxCoeff();
  if (!(out == out)) return true;
  return out == 0.0 || out <= 1e-300 * std::pow(in, degree);
}

ProjPoint g4_u(const CVec& u) {
  check_len(u, 7, "g4_u");
  static const std::vector<CompiledPoly<cplx>> comp = [] {
    std::vector<CompiledPoly<cplx>> c;
    for (const auto& p : g4_form_c()) c.emplace_back(p);
    return c;
  }();
  CVec un = canonical(u);
  std::vector<cplx> pw;
  CompiledPoly<cplx>::fill_powers(std::span<const cplx>(un.data(), 7), comp[0].max_exp(), pw);
  CVec r(7);
  for (int i = 0; i < 7; ++i) {
    if (comp[i].max_exp() != comp[0].max_exp()) {
      r[i] = comp[i](std::span<const cplx>(un.data(), 7));
    } else {
      r[i] = comp[i].eval_powers(pw);
    }
  }
  if (is_indeterminate(r, un, 4)) throw IndeterminatePoint("g4_u: all components vanish");
  return r;
}

CVec g4_x(const CVec& x) {
  check_len(x, 8, "g4_x");
  cplx F2 = 0, F3 = 0, F4 = 0;
  for (int i = 0; i < 8; ++i) {
    cplx s = x[i] * x[i];
    F2 += s;
    F3 += s * x[i];
    F4 += s * s;
  }
  CVec g(8);
  for (int i = 0; i < 8; ++i) {
    cplx s = x[i] * x[i];
    g[i] = 16.0 * F3 * x[i] - 9.0 * F2 * (F2 - 8.0 * s) + 84.0 * (F4 - 8.0 * s * s);
  }
  return g;
}

Eigen::MatrixXcd g4_x_jacobian(const CVec& x) {
  check_len(x, 8, "g4_x_jacobian");
  cplx F2 = 0, F3 = 0;
  for (int i = 0; i < 8; ++i) {
    F2 += x[i] * x[i];
    F3 += x[i] * x[i] * x[i];
  }
  Eigen::MatrixXcd J(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int m = 0; m < 8; ++m) {
      cplx xi = x[i], xm = x[m];
      cplx d = 16.0 * 3.0 * xm * xm * xi - 9.0 * (4.0 * F2 * xm - 16.0 * xm * xi * xi) + 84.0 * 4.0 * xm * xm * xm;
      if (i == m) d += 16.0 * F3 + 9.0 * 16.0 * F2 * xi - 84.0 * 32.0 * xi * xi * xi;
      J(i, m) = d;
    }
  return J;
}

Eigen::MatrixXcd g4_chart_jacobian(const CVec& u0) {
  check_len(u0, 7, "g4_chart_jacobian");
  CVec u = canonical(u0);
  Eigen::Index j = 0;
  u.cwiseAbs().maxCoeff(&j);
  const auto& h = hchange();
  Eigen::MatrixXcd Ju = h.H * g4_x_jacobian(h.Hbt * u) * h.Hbt;
  CVec g = h.H * g4_x(h.Hbt * u);
  Eigen::MatrixXcd C(6, 6);
  int r = 0;
  for (int a = 0; a < 7; ++a) {
    if (a == j) continue;
    int c = 0;
    for (int b = 0; b < 7; ++b) {
      if (b == j) continue;
      C(r, c) = (Ju(a, b) - g[a] * Ju(j, b) / g[j]) / g[j];
      ++c;
    }
    ++r;
  }
  return C;
}

CVec v_to_x(const CVec& v) {
  check_len(v, 7, "v_to_x");
  CVec x(8);
  const cplx s = v.sum();
  for (int i = 0; i < 7; ++i) x[i] = s - 8.0 * v[i];
  x[7] = s;
  return x;
}

CVec x_to_v(const CVec& x) {
  check_len(x, 8, "x_to_v");
  CVec v(7);
  for (int i = 0; i < 7; ++i) v[i] = x[7] - x[i];
  return v;
}

ProjPoint g4_v(const CVec& v) {
  check_len(v, 7, "g4_v");
  CVec r(7);
  for (int k = 0; k < 7; ++k) {
    std::vector<cplx> rest;
    for (int j = 0; j < 7; ++j)
      if (j != k) rest.push_back(v[j]);
    cplx S1 = elem_sym<cplx>(1, rest), S2 = elem_sym<cplx>(2, rest), S3 = elem_sym<cplx>(3, rest);
    cplx a = v[k];
    r[k] = a * (7.0 * a * a * a - 4.0 * a * a * S1 + 2.0 * a * S2 - S3);
  }
  return r;
}

// ---- group ----

Perm perm_identity() {
  Perm p;
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm perm_compose(const Perm& a, const Perm& b) {
  Perm r;
  for (int i = 0; i < 8; ++i) r[i] = a[b[i]];
  return r;
}

CVec apply_perm_x(const Perm& p, const CVec& x) {
  check_len(x, 8, "apply_perm_x");
  CVec y(8);
  for (int i = 0; i < 8; ++i) y[p[i]] = x[i];
  return y;
}

Eigen::Matrix<cplx, 7, 7> perm_to_u(const Perm& p) {
  Eigen::Matrix<cplx, 8, 8> T = Eigen::Matrix<cplx, 8, 8>::Zero();
  for (int i = 0; i < 8; ++i) T(p[i], i) = 1;
  const auto& h = hchange();
  return h.H * T * h.Hbt;
}

std::vector<Perm> generators() {
  Perm t = perm_identity();
  std::swap(t[0], t[1]);
  Perm c;
  for (int i = 0; i < 8; ++i) c[i] = (i + 1) % 8;
  return {t, c};
}

// ---- special orbits ----

namespace {

struct FamilyInfo {
  Family f;
  const char* name;
  int size;
  std::vector<std::vector<int>> blocks;
  std::vector<long> rep;
};

const std::vector<FamilyInfo>& families() {
  static const std::vector<FamilyInfo> fs = {
      {Family::P8, "p8", 8, {}, {-7, 1, 1, 1, 1, 1, 1, 1}},
      {Family::P28, "p28", 28, {}, {1, -1, 0, 0, 0, 0, 0, 0}},
      {Family::Q28, "q28", 28, {}, {1, 1, 1, 1, 1, 1, -3, -3}},
      {Family::L1_28, "L1_28", 28, {{0, 1, 2, 3, 4, 5}, {6}, {7}}, {}},
      {Family::L1_168, "L1_168", 168, {{0, 1}, {2, 3, 4, 5, 6}, {7}}, {}},
      {Family::L1_210, "L1_210", 210, {{0, 1}, {2, 3}, {4, 5, 6, 7}}, {}},
      {Family::L1_280, "L1_280", 280, {{0, 1}, {2, 3, 4}, {5, 6, 7}}, {}},
      {Family::M1_280, "M1_280", 280, {{0, 1, 2}, {3, 4, 5, 6}, {7}}, {}},
      {Family::L2_56, "L2_56", 56, {{0, 1, 2, 3, 4}, {5}, {6}, {7}}, {}},
      {Family::L2_105, "L2_105", 105, {{0, 1}, {2, 3}, {4, 5}, {6, 7}}, {}},
      {Family::L2_280, "L2_280", 280, {{0, 1, 2}, {3, 4, 5}, {6}, {7}}, {}},
      {Family::L2_420, "L2_420", 420, {{0, 1}, {2, 3, 4, 5}, {6}, {7}}, {}},
      {Family::L2_840, "L2_840", 840, {{0, 1}, {2, 3}, {4, 5, 6}, {7}}, {}},
  };
  return fs;
}

const FamilyInfo& info(Family f) {
  for (const auto& i : families())
    if (i.f == f) return i;
  throw DomainError("unknown orbit family");
}

bool is_point_family(Family f) { return f == Family::P8 || f == Family::P28 || f == Family::Q28; }

// projective canonical form of an integer vector
std::vector<long> canon_int(std::vector<long> v) {
  long g = 0;
  for (long a : v) g = std::gcd(g, std::labs(a));
  long sign = 0;
  for (long a : v)
    if (a) {
      sign = a > 0 ? 1 : -1;
      break;
    }
  if (g)
    for (auto& a : v) a = a / g * sign;
  return v;
}

using Partition = std::vector<std::vector<int>>;

Partition canon_partition(Partition p) {
  for (auto& b : p) std::sort(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  return p;
}

Partition apply_perm_partition(const Perm& g, const Partition& p) {
  Partition q = p;
  for (auto& b : q)
    for (auto& i : b) i = g[i];
  return canon_partition(q);
}

void validate_blocks(const OrbitDescriptor& d) {
  if (is_point_family(d.family)) return;
  std::vector<int> seen(8, 0);
  for (const auto& b : d.blocks)
    for (int i : b) {
      if (i < 0 || i > 7) throw DomainError("descriptor index out of range");
      ++seen[i];
    }
  for (int s : seen)
    if (s != 1) throw DomainError("descriptor blocks must partition {1..8}");
  std::vector<int> want, have;
  for (const auto& b : info(d.family).blocks) want.push_back(static_cast<int>(b.size()));
  for (const auto& b : d.blocks) have.push_back(static_cast<int>(b.size()));
  std::sort(want.begin(), want.end());
  std::sort(have.begin(), have.end());
  if (want != have) throw DomainError("descriptor block sizes do not match family " + family_name(d.family));
}

}  // namespace

OrbitDescriptor standard_descriptor(Family f) { return {f, info(f).blocks}; }
std::string family_name(Family f) { return info(f).name; }
int expected_orbit_size(Family f) { return info(f).size; }

Family family_from_name(const std::string& s) {
  for (const auto& i : families())
    if (s == i.name) return i.f;
  throw DomainError("unknown orbit family: " + s);
}

std::vector<std::vector<long>> special_orbit_points(Family f) {
  if (!is_point_family(f)) throw DomainError("not a point family: " + family_name(f));
  std::set<std::vector<long>> seen;
  std::deque<std::vector<long>> todo;
  auto start = canon_int(info(f).rep);
  seen.insert(start);
  todo.push_back(start);
  const auto gens = generators();
  while (!todo.empty()) {
    auto v = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      std::vector<long> w(8);
      for (int i = 0; i < 8; ++i) w[g[i]] = v[i];
      w = canon_int(w);
      if (seen.insert(w).second) todo.push_back(w);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<ProjPoint> special_orbit(const OrbitDescriptor& d) {
  std::vector<ProjPoint> out;
  for (const auto& v : special_orbit_points(d.family)) {
    CVec x(8);
    for (int i = 0; i < 8; ++i) x[i] = double(v[i]);
    out.push_back(x_to_u(x));
  }
  return out;
}

std::vector<std::vector<std::vector<int>>> subspace_orbit(const OrbitDescriptor& d) {
  if (is_point_family(d.family)) throw DomainError("not a subspace family");
  validate_blocks(d);
  std::set<Partition> seen;
  std::deque<Partition> todo;
  auto start = canon_partition(d.blocks);
  seen.insert(start);
  todo.push_back(start);
  const auto gens = generators();
  while (!todo.empty()) {
    auto p = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      auto q = apply_perm_partition(g, p);
      if (seen.insert(q).second) todo.push_back(q);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::vector<std::vector<int>>> subspace_orbit_bruteforce(const OrbitDescriptor& d) {
  if (is_point_family(d.family)) throw DomainError("not a subspace family");
  validate_blocks(d);
  std::set<Partition> seen;
  Perm p = perm_identity();
  do {
    seen.insert(apply_perm_partition(p, d.blocks));
  } while (std::next_permutation(p.begin(), p.end()));
  return {seen.begin(), seen.end()};
}

RatMatrix defining_forms(const OrbitDescriptor& d) {
  if (is_point_family(d.family)) throw DomainError("not a subspace family");
  validate_blocks(d);
  RatMatrix A;
  for (const auto& b : d.blocks)
    for (std::size_t i = 1; i < b.size(); ++i) {
      std::vector<Rational> row(8, Rational(0));
      row[b[0]] = 1;
      row[b[i]] = -1;
      A.push_back(row);
    }
  A.push_back(std::vector<Rational>(8, Rational(1)));
  return A;
}

Subspace special_subspace(const OrbitDescriptor& d) {
  auto A = defining_forms(d);
  Subspace s{d, rational_nullspace(A, 8)};
  if (static_cast<int>(s.basis.size()) != static_cast<int>(d.blocks.size()) - 1)
    throw DomainError("inconsistent descriptor");
  return s;
}

CVec Subspace::point(const std::vector<cplx>& params) const {
  if (params.size() != basis.size()) throw DimensionError("subspace parameter count");
  CVec x = CVec::Zero(8);
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (int i = 0; i < 8; ++i) x[i] += params[r] * basis[r][i].get_d();
  return x;
}

// ---- restricted maps ----

namespace {

struct TagInfo {
  RestrictedTag tag;
  const char* name;
  bool line, closed;
};

const std::vector<TagInfo>& tags() {
  static const std::vector<TagInfo> t = {
      {RestrictedTag::Line28, "line28", true, true},   {RestrictedTag::L1_168, "L1_168", true, true},
      {RestrictedTag::L1_210, "L1_210", true, true},   {RestrictedTag::L1_280, "L1_280", true, true},
      {RestrictedTag::M1_280, "M1_280", true, true},   {RestrictedTag::L2_105, "L2_105", false, true},
      {RestrictedTag::L2_56, "L2_56", false, false},   {RestrictedTag::L2_280, "L2_280", false, false},
      {RestrictedTag::L2_420, "L2_420", false, false}, {RestrictedTag::L2_840, "L2_840", false, false},
  };
  return t;
}

const TagInfo& tinfo(RestrictedTag t) {
  for (const auto& i : tags())
    if (i.tag == t) return i;
  throw DomainError("unknown restricted-map tag");
}

}  // namespace

std::string tag_name(RestrictedTag t) { return tinfo(t).name; }
bool tag_is_line(RestrictedTag t) { return tinfo(t).line; }
bool tag_has_closed_form(RestrictedTag t) { return tinfo(t).closed; }

RestrictedTag tag_from_name(const std::string& s) {
  for (const auto& i : tags())
    if (s == i.name) return i.tag;
  throw DomainError("unknown restricted-map tag: " + s);
}

Chart chart(RestrictedTag t) {
  using V = std::vector<double>;
  const double r3 = std::sqrt(3.0);
  switch (t) {
    case RestrictedTag::Line28:
      return {t, {V{1, 1, 1, 1, 1, 1, -7, 1}, V{1, 1, 1, 1, 1, 1, 1, -7}}};
    case RestrictedTag::L1_168:
      return {t, {V{1, 1, 1, 1, 1, 1, 1, -7}, V{3, 3, -1, -1, -1, -1, -1, -1}}};
    case RestrictedTag::L1_210:
      return {t, {V{3, 3, -1, -1, -1, -1, -1, -1}, V{1, 1, -3, -3, 1, 1, 1, 1}}};
    case RestrictedTag::L1_280:
      return {t, {V{-3, -3, 1, 1, 1, 1, 1, 1}, V{0, 0, 4, 4, 4, -4, -4, -4}}};
    case RestrictedTag::M1_280:
      return {t, {V{-5, -5, -5, 3, 3, 3, 3, 3}, V{1, 1, 1, 1, 1, 1, 1, -7}}};
    case RestrictedTag::L2_105:
      return {t,
              {V{1, 1, 1, 1, -1, -1, -1, -1}, V{1, 1, -1, -1, -1, -1, 1, 1}, V{1, 1, -1, -1, 1, 1, -1, -1}}};
    case RestrictedTag::L2_56:
      return {t,
              {V{0, 0, 0, 0, 0, -16, 8, 8}, V{0, 0, 0, 0, 0, 0, 8 * r3, -8 * r3}, V{3, 3, 3, 3, 3, -5, -5, -5}}};
    case RestrictedTag::L2_280:
      return {t, {V{0, 0, 0, 0, 0, 0, -8, 8}, V{8, 8, 8, -8, -8, -8, 0, 0}, V{2, 2, 2, 2, 2, 2, -6, -6}}};
    case RestrictedTag::L2_420:
      return {t, {V{0, 0, 0, 0, 0, 0, -8, 8}, V{-16, -16, 8, 8, 8, 8, 0, 0}, V{2, 2, 2, 2, 2, 2, -6, -6}}};
    case RestrictedTag::L2_840:
      return {t, {V{-2, -2, 2, 2, 0, 0, 0, 0}, V{-2, -2, -2, -2, 0, 0, 0, 8}, V{1, 1, 1, 1, 1, 1, 1, -7}}};
  }
  throw DomainError("unknown restricted-map tag");
}

CVec restricted_closed(RestrictedTag t, const CVec& h) {
  const auto& ti = tinfo(t);
  if (!ti.closed) throw DomainError("no closed form for " + std::string(ti.name));
  CVec r(h.size());
  if (ti.line) {
    check_len(h, 2, "restricted_closed");
    const cplx s = h[0], z = h[1];
    cplx N, D;
    switch (t) {
      case RestrictedTag::Line28:
        N = -z * z * z * (7.0 * z - 4.0 * s);
        D = s * s * s * (4.0 * z - 7.0 * s);
        break;
      case RestrictedTag::L1_168:
        N = -z * z * z * (3.0 * z + 4.0 * s);
        D = 4.0 * s * s * (z * z + 8.0 * z * s + 14.0 * s * s);
        break;
      case RestrictedTag::L1_210:
        N = -z * z * (3.0 * z + s);
        D = s * s * (z + 3.0 * s);
        break;
      case RestrictedTag::L1_280:
        N = 8.0 * z * z * z * s;
        D = 5.0 * z * z * z * z + 6.0 * z * z * s * s - 3.0 * s * s * s * s;
        break;
      default:  // M1_280
        N = -z * (7.0 * z * z - 5.0 * z * s + s * s);
        D = s * s * s;
        break;
    }
    r << D, N;
    return r;
  }
  check_len(h, 3, "restricted_closed");
  const cplx x = h[0], y = h[1], z = h[2];
  r << y * z * (4.0 * x * x + y * y + z * z), x * z * (x * x + 4.0 * y * y + z * z),
      x * y * (x * x + y * y + 4.0 * z * z);
  return r;
}

CVec restricted_computed(RestrictedTag t, const CVec& h) {
  const Chart c = chart(t);
  const int m = static_cast<int>(c.frame.size());
  check_len(h, m, "restricted_computed");
  Eigen::MatrixXcd F(8, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < 8; ++i) F(i, j) = c.frame[j][i];
  CVec y = g4_x(F * h);
  return F.colPivHouseholderQr().solve(y);
}

cplx restricted_map(RestrictedTag t, cplx z) {
  if (!tag_is_line(t)) throw DomainError("restricted_map(z) needs a line tag");
  CVec h(2);
  h << 1.0, z;
  CVec r = restricted_closed(t, h);
  return r[1] / r[0];
}

// ---- K invariants and selector ----

KValues k_invariants(const CVec& u) {
  check_len(u, 7, "k_invariants");
  CVec x = u_to_x(u);
  const double n = x.norm();
  if (n == 0) throw ExceptionalSet("k_invariants: zero point");
  x /= n;
  std::array<cplx, 9> P{};
  for (int i = 0; i < 8; ++i) {
    cplx p = x[i] * x[i];
    for (int k = 2; k <= 8; ++k) {
      P[k] += p;
      p *= x[i];
    }
  }
  const double tol = 1e-12;
  if (std::abs(P[2]) < tol) throw ExceptionalSet("k_invariants: Phi2 vanishes");
  if (std::abs(P[3]) < tol) throw ExceptionalSet("k_invariants: Phi3 vanishes");
  if (std::abs(P[5]) < tol) throw ExceptionalSet("k_invariants: Phi5 vanishes");
  KValues k;
  const cplx p2 = P[2], p3 = P[3];
  k.K[0] = p3 * p3 / (p2 * p2 * p2);
  k.K[1] = P[4] / (p2 * p2);
  k.K[2] = P[5] / (p2 * p3);
  k.K[3] = P[6] / (p2 * p2 * p2);
  k.K[4] = P[7] / (p2 * P[5]);
  k.K[5] = P[8] / (p2 * p2 * p2 * p2);
  return k;
}

SelectorPair selector_forms(int k, const CVec& u) {
  check_k(k, 1, 8);
  check_len(u, 7, "selector_forms");
  CVec x = u_to_x(u);
  const cplx S1 = x.sum();
  cplx F2 = 0;
  for (int i = 0; i < 8; ++i) F2 += x[i] * x[i];
  const cplx xk = x[k - 1];
  SelectorPair r;
  r.L = S1 - 8.0 * xk;
  const cplx Q = F2 - 8.0 * xk * xk;
  r.G = Q - 0.75 * r.L * r.L;
  return r;
}

}  // namespace octaflow::s8

#include "octaflow/equin.hpp"

#include <random>

namespace octaflow::equin {

namespace {

void check_n(int n) {
  if (n < 5) throw DomainError("general-n map needs n >= 5");
}

// first-order dual numbers for exact derivatives
struct Dual {
  Rational a, b;
  Dual(long v = 0) : a(v), b(0) {}
  Dual(Rational x, Rational y) : a(std::move(x)), b(std::move(y)) {}
  friend Dual operator+(const Dual& p, const Dual& q) { return {p.a + q.a, p.b + q.b}; }
  friend Dual operator-(const Dual& p, const Dual& q) { return {p.a - q.a, p.b - q.b}; }
  friend Dual operator*(const Dual& p, const Dual& q) { return {p.a * q.a, p.a * q.b + p.b * q.a}; }
  Dual& operator+=(const Dual& q) { return *this = *this + q; }
};

template <class T>
T tpow(const T& x, int e) {
  T r(1);
  for (int i = 0; i < e; ++i) r = r * x;
  return r;
}

template <class T>
std::vector<T> line_point(int n, const T& x, const T& y) {
  // [x, ..., x, y, (2-n)x - y]
  std::vector<T> p(n, x);
  p[n - 2] = y;
  p[n - 1] = T(2 - n) * x - y;
  return p;
}

}  // namespace

NMapCoeffs alpha_coeffs(int n) {
  check_n(n);
  NMapCoeffs c;
  c.n = n;
  const mpz_class N = n;
  c.alpha1 = rat(1, (N - 4) * N * N * N);
  c.alpha2 = rat(-6, (N - 4) * (N - 1) * N * N * N * N);
  c.alpha3 = rat(-8, (N - 4) * (N - 2) * (N - 1) * N * N * N * N);
  c.a2 = rat(4, N - 1);
  c.a3 = rat(12, (N - 1) * (N - 2));
  c.a4 = rat(24, (N - 1) * (N - 2) * (N - 4));
  return c;
}

template <class T>
std::vector<T> g_alpha_x(int n, const T& a1, const T& a2, const T& a3, const std::vector<T>& x) {
  if (static_cast<int>(x.size()) != n) throw DimensionError("g_alpha_x: length mismatch");
  T F1(0), F2(0), F3(0), F4(0);
  for (const auto& xi : x) {
    T s = xi * xi;
    F1 += xi;
    F2 += s;
    F3 += s * xi;
    F4 += s * s;
  }
  const T N(n);
  std::vector<T> g(n);
  for (int l = 0; l < n; ++l) {
    T s = x[l] * x[l];
    g[l] = a1 * (F4 - N * s * s) + a2 * F2 * (F2 - N * s) + a3 * F3 * (F1 - N * x[l]);
  }
  return g;
}

template <class T>
std::vector<std::vector<T>> g_alpha_jacobian(int n, const T& a1, const T& a2, const T& a3, const std::vector<T>& x) {
  if (static_cast<int>(x.size()) != n) throw DimensionError("g_alpha_jacobian: length mismatch");
  T F1(0), F2(0), F3(0);
  for (const auto& xi : x) {
    F1 += xi;
    F2 += xi * xi;
    F3 += xi * xi * xi;
  }
  const T N(n);
  std::vector<std::vector<T>> J(n, std::vector<T>(n));
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      const T &xl = x[l], &xm = x[m];
      T d = a1 * T(4) * xm * xm * xm + a2 * (T(2) * xm * (F2 - N * xl * xl) + F2 * T(2) * xm) +
            a3 * (T(3) * xm * xm * (F1 - N * xl) + F3);
      if (l == m) d = d - a1 * T(4) * N * xl * xl * xl - a2 * F2 * T(2) * N * xl - a3 * F3 * N;
      J[l][m] = d;
    }
  return J;
}

template std::vector<cplx> g_alpha_x<cplx>(int, const cplx&, const cplx&, const cplx&, const std::vector<cplx>&);
template std::vector<Rational> g_alpha_x<Rational>(int, const Rational&, const Rational&, const Rational&,
                                                   const std::vector<Rational>&);
template std::vector<std::vector<cplx>> g_alpha_jacobian<cplx>(int, const cplx&, const cplx&, const cplx&,
                                                               const std::vector<cplx>&);
template std::vector<std::vector<Rational>> g_alpha_jacobian<Rational>(int, const Rational&, const Rational&,
                                                                       const Rational&, const std::vector<Rational>&);

ConditionValues linear_conditions(int n, const Rational& a1, const Rational& a2, const Rational& a3) {
  check_n(n);
  ConditionValues c;
  c.fixed = g_alpha_x<Rational>(n, a1, a2, a3, line_point<Rational>(n, 1, 1))[0];
  // d/dz of gamma_1 - gamma_2 along [z, 1] at z = 1
  auto gd = g_alpha_x<Dual>(n, Dual(a1, 0), Dual(a2, 0), Dual(a3, 0), line_point<Dual>(n, Dual(1, 1), Dual(1, 0)));
  c.critical_at_points = gd[0].b - gd[n - 2].b;
  auto J = g_alpha_jacobian<Rational>(n, a1, a2, a3, line_point<Rational>(n, 1, 0));
  c.critical_off_line = J[0][0] - J[0][1];
  return c;
}

ConditionValues linear_condition_forms(int n, const Rational& a1, const Rational& a2, const Rational& a3) {
  check_n(n);
  const Rational N(n);
  ConditionValues c;
  c.fixed = N * (N - 2) * ((N * N - 2 * N + 2) * a1 + N * (N - 1) * a2 + N * (N - 1) * a3);
  c.critical_at_points = -4 * a1 - 2 * (N - 1) * N * a2 + (N - 2) * (N - 1) * N * a3;
  c.critical_off_line = N * (-4 * a1 - 2 * (N - 2) * (N - 1) * a2 + (N - 3) * (N - 2) * (N - 1) * a3);
  return c;
}

CVec gamma(int n, const CVec& v) {
  check_n(n);
  if (v.size() != n - 1) throw DimensionError("gamma: expected n-1 coordinates");
  const auto c = alpha_coeffs(n);
  const double A2 = c.a2.get_d(), A3 = c.a3.get_d(), A4 = c.a4.get_d();
  // S_j over all coordinates, then remove v_k: S1' = S1 - v, S2' = S2 - v S1', S3' = S3 - v S2'
  std::vector<cplx> all(v.data(), v.data() + v.size());
  const cplx S1 = elem_sym<cplx>(1, all), S2 = elem_sym<cplx>(2, all), S3 = elem_sym<cplx>(3, all);
  CVec r(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    const cplx a = v[k];
    const cplx s1 = S1 - a, s2 = S2 - a * s1, s3 = S3 - a * s2;
    r[k] = a * (a * a * a - A2 * a * a * s1 + A3 * a * s2 - A4 * s3);
  }
  return r;
}

std::vector<MPoly<Rational>> gamma_form(int n) {
  check_n(n);
  if (n - 1 > Monomial::kMaxVars) throw DimensionError("gamma_form: at most 8 variables");
  const auto c = alpha_coeffs(n);
  const int m = n - 1;
  using P = MPoly<Rational>;
  std::vector<P> out;
  for (int k = 0; k < m; ++k) {
    std::vector<int> rest;
    for (int j = 0; j < m; ++j)
      if (j != k) rest.push_back(j);
    P v = P::variable(m, k);
    P T = v.pow(3) - c.a2 * v * v * elem_sym_poly<Rational>(1, m, rest) + c.a3 * v * elem_sym_poly<Rational>(2, m, rest) -
          c.a4 * elem_sym_poly<Rational>(3, m, rest);
    out.push_back(v * T);
  }
  return out;
}

CVec v_to_x(int n, const CVec& v) {
  if (v.size() != n - 1) throw DimensionError("v_to_x: expected n-1 coordinates");
  const cplx S = v.sum();
  CVec x(n);
  for (int i = 0; i < n - 1; ++i) x[i] = S - double(n) * v[i];
  x[n - 1] = S;
  return x;
}

CVec x_to_v(int n, const CVec& x) {
  if (x.size() != n) throw DimensionError("x_to_v: expected n coordinates");
  CVec v(n - 1);
  for (int i = 0; i < n - 1; ++i) v[i] = x[n - 1] - x[i];
  return v;
}

CVec z_swap(int n, const CVec& v) {
  CVec x = v_to_x(n, v);
  std::swap(x[0], x[n - 1]);
  return x_to_v(n, x);
}

namespace {

double jac_norm(const std::vector<std::vector<cplx>>& J) {
  double s = 0;
  for (const auto& r : J)
    for (const auto& e : r) s += std::norm(e);
  return std::sqrt(s);
}

std::vector<cplx> lifted_line(int n, cplx x, cplx y) {
  std::vector<cplx> p(n, x + y);
  p[n - 2] = (1.0 - n) * x + y;
  p[n - 1] = x + (1.0 - n) * y;
  return p;
}

// off-line eigenvalue: first component of J (e1 - e2)
cplx offline(int n, cplx a1, cplx a2, cplx a3, cplx x, cplx y, double* norm) {
  auto J = g_alpha_jacobian<cplx>(n, a1, a2, a3, lifted_line(n, x, y));
  if (norm) *norm = jac_norm(J);
  return J[0][0] - J[0][1];
}

}  // namespace

CriticalityReport criticality_residuals(int n, int samples, unsigned long long seed) {
  check_n(n);
  const auto c = alpha_coeffs(n);
  const cplx a1 = c.alpha1.get_d(), a2 = c.alpha2.get_d(), a3 = c.alpha3.get_d();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  auto cr = [&] { return cplx(U(rng), U(rng)); };
  CriticalityReport r;
  r.n = n;
  r.samples = samples;
  double nrm = 0;
  // A(x,y) = A1 (x^3 + y^3) + A2 xy(x+y)
  cplx A10 = offline(n, a1, a2, a3, 1.0, 0.0, &nrm);
  r.a1_residual = std::abs(A10) / nrm;
  double nrm11 = 0;
  cplx A11 = offline(n, a1, a2, a3, 1.0, 1.0, &nrm11);
  r.a2_residual = std::abs(A11 / 2.0 - A10) / std::max(nrm, nrm11);
  for (int s = 0; s < samples; ++s) {
    const cplx x = cr(), y = cr();
    auto P = lifted_line(n, x, y);
    auto J = g_alpha_jacobian<cplx>(n, a1, a2, a3, P);
    const double jn = jac_norm(J);
    r.offline_eigenvalue = std::max(r.offline_eigenvalue, std::abs(J[0][0] - J[0][1]) / jn);
    for (int k = 1; k < n - 2; ++k) {
      // w = e_0 - e_k
      double img = 0;
      for (int l = 0; l < n; ++l) img += std::norm(J[l][0] - J[l][k]);
      r.complement_image = std::max(r.complement_image, std::sqrt(img) / (jn * std::sqrt(2.0)));
    }
    // generic alpha: the eigenvalue is symmetric in x <-> y
    const cplx b1 = cr(), b2 = cr(), b3 = cr();
    double n1 = 0, n2 = 0;
    cplx Axy = offline(n, b1, b2, b3, x, y, &n1), Ayx = offline(n, b1, b2, b3, y, x, &n2);
    r.symmetry_residual = std::max(r.symmetry_residual, std::abs(Axy - Ayx) / std::max(n1, n2));
  }
  return r;
}

cplx line_model(int n, cplx z) {
  check_n(n);
  CVec X(n);
  auto p = lifted_line(n, z, 1.0);
  for (int i = 0; i < n; ++i) X[i] = p[i];
  CVec Y = v_to_x(n, gamma(n, x_to_v(n, X)));
  const cplx a = Y[0], b = Y[n - 2];
  return (a - b) / (double(n - 1) * a + b);
}

cplx line_model_closed(int n, cplx z) {
  const double m = n - 1;
  return -z * z * z * (m * z - 4.0) / (4.0 * z - m);
}

}  // namespace octaflow::equin

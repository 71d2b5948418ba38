#include <algorithm>

#include "doctest.h"
#include "octaflow/s8geom.hpp"
#include "test_util.hpp"

using namespace octaflow;
using namespace octaflow::s8;

namespace {

CVec p8(int k) {  // 1-based
  CVec x = CVec::Constant(8, 1.0);
  x[k - 1] = -7;
  return x;
}

Perm random_perm() {
  Perm p = perm_identity();
  std::shuffle(p.begin(), p.end(), tu::rng());
  return p;
}

CVec ux(std::initializer_list<double> v) {
  CVec x(8);
  int i = 0;
  for (double a : v) x[i++] = a;
  return x_to_u(x);
}

}  // namespace

TEST_CASE("H is unitary onto the zero-sum hyperplane") {
  const auto& h = hchange();
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      Cyclo8 s;
      for (int k = 0; k < 8; ++k) s += h.exact[a][k] * h.exact[b][k].conj();
      CHECK(s == Cyclo8(a == b ? 1 : 0));
    }
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      Cyclo8 s;
      for (int a = 0; a < 7; ++a) s += h.exact[a][i].conj() * h.exact[a][j];
      CHECK(s == Cyclo8(i == j ? rat(7, 8) : rat(-1, 8)));
    }
  CHECK((h.H * h.Hbt - Eigen::Matrix<cplx, 7, 7>::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("coordinate changes") {
  for (int t = 0; t < 100; ++t) {
    CVec u = tu::cvec(7);
    CHECK((x_to_u(u_to_x(u)) - u).norm() < 1e-12 * u.norm());
  }
  CVec bad = CVec::Ones(8);
  CHECK_THROWS_AS(x_to_u(bad), DomainError);
  CVec u = ux({1, -1, 0, 0, 0, 0, 0, 0});
  CHECK(std::abs(phi(2, u) - 2.0) < 1e-13);
  std::vector<Cyclo8> xe{1, -1, 0, 0, 0, 0, 0, 0};
  auto ue = x_to_u_exact(xe);
  auto xb = u_to_x_exact(ue);
  for (int i = 0; i < 8; ++i) CHECK(xb[i] == xe[i]);
}

TEST_CASE("printed Phi2 and Phi3") {
  auto v = [](int i) { return MPoly<Cyclo8>::variable(7, i - 1); };
  MPoly<Cyclo8> phi2 = v(4) * v(4) + Cyclo8(2) * (v(3) * v(5) + v(2) * v(6) + v(1) * v(7));
  CHECK(phi_form(2) == phi2);
  MPoly<Cyclo8> inner = v(2) * v(3) * v(3) + v(2) * v(2) * v(4) + Cyclo8(2) * v(1) * v(3) * v(4) +
                        Cyclo8(2) * v(1) * v(2) * v(5) + v(1) * v(1) * v(6) + v(5) * v(5) * v(6) +
                        v(4) * v(6) * v(6) + Cyclo8(2) * v(4) * v(5) * v(7) + Cyclo8(2) * v(3) * v(6) * v(7) +
                        v(2) * v(7) * v(7);
  Cyclo8 c = Cyclo8(3) * (Cyclo8(2) * Cyclo8::sqrt2()).inverse();
  CHECK(phi_form(3) == inner * c);
  // coefficient field: even k rational, odd k rational multiples of sqrt2
  for (int k = 2; k <= 8; ++k)
    for (const auto& t : phi_form(k).terms())
      CHECK((k % 2 == 0 ? t.c.is_rational() : t.c.is_rational_times_sqrt2()));
}

TEST_CASE("phi values") {
  CVec e4 = CVec::Zero(7);
  e4[3] = 1;
  CHECK(std::abs(phi(2, e4) - 1.0) < 1e-14);
  CHECK(std::abs(phi(2, x_to_u(p8(1))) - 56.0) < 1e-12);
  CHECK_THROWS_AS(phi(9, e4), DomainError);
  for (int t = 0; t < 20; ++t) {
    CVec u = tu::cvec(7);
    std::vector<cplx> pt(u.data(), u.data() + 7);
    for (int k = 2; k <= 8; ++k) CHECK(tu::rel(eval<cplx, cplx>(phi_form_c(k), pt), phi(k, u)) < 1e-12);
  }
}

TEST_CASE("power sums from bordered hessians") {
  for (int t = 0; t < 50; ++t) {
    CVec u = tu::cvec(7);
    for (int k = 4; k <= 8; ++k) CHECK(tu::rel(phi_bh(k, u), phi(k, u)) < 1e-10);
  }
}

TEST_CASE("basic equivariants") {
  // phi_1 = -8 id
  const auto& f1 = basic_equivariant_form(1);
  for (int i = 0; i < 7; ++i) CHECK(f1[i] == MPoly<Cyclo8>::variable(7, i) * Cyclo8(-8));
  for (int t = 0; t < 10; ++t) {
    CVec u = tu::cvec(7);
    for (int k = 1; k <= 7; ++k) {
      CVec a = basic_equivariant(k, u), b = basic_equivariant_x(k, u);
      CHECK((a - b).norm() < 1e-11 * b.norm());
    }
  }
  // single phi_k may have base points
  CVec e4 = CVec::Zero(7);
  e4[3] = 1;
  CHECK(basic_equivariant(2, e4).norm() == 0.0);
  // 8-points are fixed by every phi_k
  CVec p = x_to_u(p8(1));
  for (int k = 1; k <= 7; ++k) CHECK(proj_distance(basic_equivariant(k, p), p) < 1e-12);
  // equivariance
  for (int t = 0; t < 20; ++t) {
    auto A = perm_to_u(random_perm());
    CVec u = tu::cvec(7);
    for (int k = 1; k <= 7; ++k) CHECK(proj_distance(basic_equivariant(k, A * u), A * basic_equivariant(k, u)) < 1e-10);
  }
}

TEST_CASE("g4 forms agree") {
  for (int t = 0; t < 20; ++t) {
    CVec u = tu::cvec(7);
    CVec a = g4_u(u);
    CVec b = hchange().H * g4_x(u_to_x(u));
    CHECK(proj_distance(a, b) < 1e-12);
  }
  for (const auto& p : g4_form())
    for (const auto& t : p.terms()) CHECK(t.c.is_rational_times_sqrt2());
}

TEST_CASE("g4 fixes 8-points and is superattracting there") {
  for (int k = 1; k <= 8; ++k) {
    CVec p = x_to_u(p8(k));
    CHECK(proj_distance(g4_u(p), p) < 1e-12);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g4_chart_jacobian(p));
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("g4 equivariance under generators and random elements") {
  for (const auto& g : generators()) {
    auto A = perm_to_u(g);
    for (int t = 0; t < 50; ++t) {
      CVec u = tu::cvec(7);
      CHECK(proj_distance(g4_u(A * u), A * g4_u(u)) < 1e-10);
    }
  }
  for (int t = 0; t < 20; ++t) {
    auto A = perm_to_u(random_perm());
    CVec u = tu::cvec(7);
    CHECK(proj_distance(g4_u(A * u), A * g4_u(u)) < 1e-10);
  }
}

TEST_CASE("28-lines are critical off-line") {
  for (int t = 0; t < 20; ++t) {
    CVec x = p8(7) + tu::crand() * p8(8);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g4_chart_jacobian(x_to_u(x)));
    auto s = svd.singularValues();
    int small = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s[i] < 1e-8 * s[0]) ++small;
    CHECK(small >= 5);
  }
}

TEST_CASE("28-hyperplanes are forward invariant") {
  for (int t = 0; t < 20; ++t) {
    CVec x = tu::xvec();
    x[1] = x[0];
    x.array() -= x.sum() / 8.0;
    x[1] = x[0];
    CVec y = g4_x(x);
    CHECK(std::abs(y[0] - y[1]) < 1e-10 * y.norm());
  }
}

TEST_CASE("antiholomorphic equivariance") {
  for (int t = 0; t < 20; ++t) {
    CVec x = tu::xvec();
    CVec a = g4_x(x.conjugate()), b = g4_x(x).conjugate();
    CHECK((a - b).norm() < 1e-12 * b.norm());
  }
}

TEST_CASE("v-coordinate form") {
  CVec e1 = CVec::Zero(7);
  e1[0] = 1;
  CVec g = g4_v(e1);
  CHECK(std::abs(g[0] - 7.0) < 1e-15);
  CHECK(proj_distance(g, e1) < 1e-15);
  CVec ones = CVec::Ones(7);
  CHECK(proj_distance(g4_v(ones), ones) < 1e-14);
  for (int t = 0; t < 20; ++t) {
    CVec v = tu::cvec(7);
    CVec a = g4_v(v);
    CVec b = x_to_v(g4_x(v_to_x(v)));
    CHECK(proj_distance(a, b) < 1e-10);
    CHECK(proj_distance(g4_u(x_to_u(v_to_x(v))), x_to_u(v_to_x(a))) < 1e-10);
  }
}

TEST_CASE("special orbits") {
  auto p8s = special_orbit_points(Family::P8);
  CHECK(p8s.size() == 8);
  for (const auto& v : p8s) CHECK(std::count(v.begin(), v.end(), 1) + std::count(v.begin(), v.end(), -1) == 7);
  auto p28 = special_orbit_points(Family::P28);
  CHECK(p28.size() == 28);
  for (const auto& v : p28) CHECK(std::count(v.begin(), v.end(), 0) == 6);
  auto q28 = special_orbit_points(Family::Q28);
  CHECK(q28.size() == 28);
  for (const auto& v : q28) {
    long m = *std::max_element(v.begin(), v.end(), [](long a, long b) { return std::labs(a) < std::labs(b); });
    CHECK(std::count(v.begin(), v.end(), m) == 2);
  }
  CHECK(special_orbit(standard_descriptor(Family::P8)).size() == 8);
  for (Family f : {Family::L1_28, Family::L1_168, Family::L1_210, Family::L1_280, Family::M1_280, Family::L2_56,
                   Family::L2_105, Family::L2_280, Family::L2_420, Family::L2_840}) {
    auto d = standard_descriptor(f);
    auto orb = subspace_orbit(d);
    CHECK(static_cast<int>(orb.size()) == expected_orbit_size(f));
    CHECK(subspace_orbit_bruteforce(d).size() == orb.size());
  }
  CHECK_THROWS_AS(special_orbit_points(Family::L1_28), DomainError);
  CHECK_THROWS_AS(family_from_name("L9"), DomainError);
}

TEST_CASE("special subspaces") {
  auto s = special_subspace(standard_descriptor(Family::L1_28));
  CHECK(s.basis.size() == 2);
  for (int t = 0; t < 10; ++t) {
    CVec x = s.point({tu::crand(), tu::crand()});
    for (int i = 1; i < 6; ++i) CHECK(std::abs(x[i] - x[0]) < 1e-14);
    CHECK(std::abs(6.0 * x[0] + x[6] + x[7]) < 1e-14);
  }
  // printed L2_105 parametrization spans the computed plane
  auto s105 = special_subspace(standard_descriptor(Family::L2_105));
  auto c = chart(RestrictedTag::L2_105);
  RatMatrix M = s105.basis;
  for (const auto& f : c.frame) {
    std::vector<Rational> row;
    for (double a : f) row.push_back(Rational(a));
    M.push_back(row);
  }
  CHECK(rational_rank(M) == 3);
  for (Family f : {Family::L1_168, Family::L1_210, Family::L1_280, Family::M1_280, Family::L2_56, Family::L2_280,
                   Family::L2_420, Family::L2_840}) {
    auto d = standard_descriptor(f);
    auto sub = special_subspace(d);
    auto forms = defining_forms(d);
    std::vector<cplx> prm;
    for (std::size_t i = 0; i < sub.basis.size(); ++i) prm.push_back(tu::crand());
    CVec x = sub.point(prm);
    for (const auto& r : forms) {
      cplx v = 0;
      for (int i = 0; i < 8; ++i) v += r[i].get_d() * x[i];
      CHECK(std::abs(v) < 1e-14);
    }
  }
  OrbitDescriptor bad{Family::L1_28, {{0, 1}, {2, 3, 4, 5, 6}, {7}}};
  CHECK_THROWS_AS(special_subspace(bad), DomainError);
}

TEST_CASE("charts lie in their subspaces") {
  const std::pair<RestrictedTag, Family> pairs[] = {
      {RestrictedTag::Line28, Family::L1_28},  {RestrictedTag::L1_168, Family::L1_168},
      {RestrictedTag::L1_210, Family::L1_210}, {RestrictedTag::L1_280, Family::L1_280},
      {RestrictedTag::M1_280, Family::M1_280}, {RestrictedTag::L2_105, Family::L2_105},
      {RestrictedTag::L2_56, Family::L2_56},   {RestrictedTag::L2_280, Family::L2_280},
      {RestrictedTag::L2_420, Family::L2_420}, {RestrictedTag::L2_840, Family::L2_840}};
  for (auto [tag, fam] : pairs) {
    auto forms = defining_forms(standard_descriptor(fam));
    for (const auto& f : chart(tag).frame)
      for (const auto& r : forms) {
        double v = 0;
        for (int i = 0; i < 8; ++i) v += r[i].get_d() * f[i];
        CHECK(std::abs(v) < 1e-12);
      }
  }
}

TEST_CASE("restricted maps: closed forms equal the restriction of g4") {
  for (RestrictedTag t : {RestrictedTag::Line28, RestrictedTag::L1_168, RestrictedTag::L1_210, RestrictedTag::L1_280,
                          RestrictedTag::M1_280, RestrictedTag::L2_105}) {
    const int m = tag_is_line(t) ? 2 : 3;
    for (int k = 0; k < 20; ++k) {
      CVec h = tu::cvec(m);
      CHECK(proj_distance(restricted_closed(t, h), restricted_computed(t, h)) < 1e-9);
    }
  }
  for (int k = 0; k < 20; ++k) {
    cplx z = tu::crand();
    CVec h(2);
    h << 1.0, z;
    CVec g = restricted_computed(RestrictedTag::Line28, h);
    cplx want = -z * z * z * (7.0 * z - 4.0) / (4.0 * z - 7.0);
    CHECK(std::abs(g[1] / g[0] - want) < 1e-12 * std::max(1.0, std::abs(want)));
  }
  CHECK(std::abs(restricted_map(RestrictedTag::Line28, 1.0) - 1.0) < 1e-15);
  cplx z = 0.5;
  for (int i = 0; i < 10; ++i) z = restricted_map(RestrictedTag::Line28, z);
  CHECK(std::abs(z) < 1e-30);
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0}) {
      CVec h(3);
      h << sx, sy, 1.0;
      CHECK(proj_distance(restricted_closed(RestrictedTag::L2_105, h), h) < 1e-15);
    }
  CHECK_THROWS_AS(restricted_closed(RestrictedTag::L2_56, tu::cvec(3)), DomainError);
  CHECK_THROWS_AS(tag_from_name("nope"), DomainError);
}

TEST_CASE("plane chart landmarks") {
  // L2_56: 8-points at angles 0, +-120 degrees on the unit circle
  auto c56 = chart(RestrictedTag::L2_56);
  for (double th : {0.0, 2.0943951023931953, -2.0943951023931953}) {
    CVec h(3);
    h << std::cos(th), std::sin(th), 1.0;
    CHECK(proj_distance(restricted_computed(RestrictedTag::L2_56, h), h) < 1e-12);
  }
  for (RestrictedTag t : {RestrictedTag::L2_280, RestrictedTag::L2_420}) {
    CVec h(3);
    h << 1.0, 0.0, 1.0;
    CHECK(proj_distance(restricted_computed(t, h), h) < 1e-12);
  }
  CVec q(3);
  q << 1.0, 1.0, 1.0;
  CHECK(proj_distance(restricted_computed(RestrictedTag::L2_840, q), q) < 1e-12);
}

TEST_CASE("K invariants") {
  for (int t = 0; t < 50; ++t) {
    CVec u = tu::cvec(7);
    cplx c = tu::crand() * 3.0;
    auto a = k_invariants(u), b = k_invariants(c * u);
    for (int i = 0; i < 6; ++i) CHECK(tu::rel(a.K[i], b.K[i]) < 1e-12);
  }
  for (int t = 0; t < 20; ++t) {
    CVec u = tu::cvec(7);
    auto A = perm_to_u(random_perm());
    auto a = k_invariants(u), b = k_invariants(A * u);
    for (int i = 0; i < 6; ++i) CHECK(tu::rel(a.K[i], b.K[i]) < 1e-11);
  }
  // pinned x = [3,-1,2,-5,4,0,1,-4]
  auto k = k_invariants(ux({3, -1, 2, -5, 4, 0, 1, -4}));
  const double want[6] = {25.0 / 1152, 103.0 / 432, 95.0 / 216, 2051.0 / 31104, 133.0 / 360, 14681.0 / 746496};
  for (int i = 0; i < 6; ++i) CHECK(tu::rel(k.K[i], want[i]) < 1e-13);
  // Phi3 vanishes on [1,-1,0,...]
  CHECK_THROWS_AS(k_invariants(ux({1, -1, 0, 0, 0, 0, 0, 0})), ExceptionalSet);
}

TEST_CASE("selector forms") {
  for (int k = 1; k <= 8; ++k) {
    for (int l = 1; l <= 8; ++l) {
      auto s = selector_forms(k, x_to_u(p8(l)));
      if (l != k)
        CHECK(std::abs(s.G) < 1e-12);
      else {
        CHECK(std::abs(s.G) > 1);
        CHECK(std::abs(s.L - 56.0) < 1e-12);
        CHECK(std::abs(phi(2, x_to_u(p8(l))) / s.G - (-1.0 / 48)) < 1e-15);
      }
    }
  }
}

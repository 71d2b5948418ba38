#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "octaflow/dense.hpp"
#include "octaflow/mpoly.hpp"
#include "octaflow/proj.hpp"

namespace octaflow::s8 {

// u = H x, x = conj(H)^T u; H[j][k] = w^{(j+1)k} / (2 sqrt2), w = exp(i pi/4).
struct HChange {
  std::array<std::array<Cyclo8, 8>, 7> exact;
  Eigen::Matrix<cplx, 7, 8> H;
  Eigen::Matrix<cplx, 8, 7> Hbt;  // conj(H)^T
};

const HChange& hchange();

ProjPoint x_to_u(const CVec& x);  // throws DomainError if sum(x) != 0
ProjPoint u_to_x(const CVec& u);
std::vector<Cyclo8> x_to_u_exact(const std::vector<Cyclo8>& x);
std::vector<Cyclo8> u_to_x_exact(const std::vector<Cyclo8>& u);

// ---- invariants ----

// Exact power-sum form Phi_k(u) = F_k(conj(H)^T u), k = 2..8.
const MPoly<Cyclo8>& phi_form(int k);
const MPoly<cplx>& phi_form_c(int k);

// Phi_k at a numeric point (power sums of conj(H)^T u).
cplx phi(int k, const CVec& u);
std::array<cplx, 9> phis(const CVec& u);  // [2..8] filled

// Phi_4..Phi_8 assembled purely from Phi_2, Phi_3 by the bordered hessian
// chain G_4..G_8 (floating coefficients).
const MPoly<cplx>& phi_bh_form(int k);
const MPoly<cplx>& g_bh_form(int k);  // G_k
cplx phi_bh(int k, const CVec& u);

// ---- equivariants ----

// phi_k = -(8/(k+1)) grad^r Phi_{k+1}, k = 1..7
const std::vector<MPoly<Cyclo8>>& basic_equivariant_form(int k);
ProjPoint basic_equivariant(int k, const CVec& u);
// H f_k(conj(H)^T u), (f_k)_i = F_k - 8 x_i^k
CVec basic_equivariant_x(int k, const CVec& u);

// g4 = -2 Phi3 phi1 - 9 Phi2 phi2 + 84 phi4
const std::vector<MPoly<Cyclo8>>& g4_form();
const std::vector<MPoly<cplx>>& g4_form_c();
ProjPoint g4_u(const CVec& u);  // throws IndeterminatePoint
// same map in x coordinates (length 8, zero sum), not normalized
CVec g4_x(const CVec& x);
Eigen::MatrixXcd g4_x_jacobian(const CVec& x);
// [v_k T_k(v)], T_k = 7v_k^3 - 4v_k^2 S1 + 2 v_k S2 - S3 over the other six
ProjPoint g4_v(const CVec& v);
CVec v_to_x(const CVec& v);  // x = P v
CVec x_to_v(const CVec& x);  // v = Q x

bool is_indeterminate(const CVec& image, const CVec& input, int degree);

// Jacobian of g4 in the affine chart centred on the largest coordinate of u.
Eigen::MatrixXcd g4_chart_jacobian(const CVec& u);

// ---- group ----

using Perm = std::array<int, 8>;  // image of i under the permutation
Perm perm_identity();
Perm perm_compose(const Perm& a, const Perm& b);  // a after b
Eigen::Matrix<cplx, 7, 7> perm_to_u(const Perm& p);  // H T conj(H)^T
std::vector<Perm> generators();                      // (12) and (12345678)
CVec apply_perm_x(const Perm& p, const CVec& x);

// ---- special orbits and subspaces ----

enum class Family {
  P8,
  P28,
  Q28,
  L1_28,
  L1_168,
  L1_210,
  L1_280,
  M1_280,
  L2_56,
  L2_105,
  L2_280,
  L2_420,
  L2_840
};

// Subspaces: coordinates equal within each block (0-based indices).
// Points: blocks unused, representative used.
struct OrbitDescriptor {
  Family family;
  std::vector<std::vector<int>> blocks;
};

OrbitDescriptor standard_descriptor(Family f);
std::string family_name(Family f);
Family family_from_name(const std::string& s);
int expected_orbit_size(Family f);

std::vector<std::vector<long>> special_orbit_points(Family f);  // integer x-vectors
std::vector<ProjPoint> special_orbit(const OrbitDescriptor& d);  // in u coordinates
std::vector<std::vector<std::vector<int>>> subspace_orbit(const OrbitDescriptor& d);
std::vector<std::vector<std::vector<int>>> subspace_orbit_bruteforce(const OrbitDescriptor& d);

struct Subspace {
  OrbitDescriptor desc;
  RatMatrix basis;  // each row an x-vector; params combine rows
  CVec point(const std::vector<cplx>& params) const;
};

Subspace special_subspace(const OrbitDescriptor& d);
// the linear forms x_a - x_b and sum x that cut out the subspace
RatMatrix defining_forms(const OrbitDescriptor& d);

// ---- restricted maps ----

enum class RestrictedTag { Line28, L1_168, L1_210, L1_280, M1_280, L2_105, L2_56, L2_280, L2_420, L2_840 };

std::string tag_name(RestrictedTag t);
RestrictedTag tag_from_name(const std::string& s);
bool tag_is_line(RestrictedTag t);
bool tag_has_closed_form(RestrictedTag t);

// chart in x coordinates: line = A*s + B*t (z = t/s); plane = d1*X + d2*Y + O*Z
struct Chart {
  RestrictedTag tag;
  std::vector<std::vector<double>> frame;  // 2 or 3 vectors of length 8
};
Chart chart(RestrictedTag t);

// printed closed forms; lines take homogeneous (s,t), planes (X,Y,Z)
CVec restricted_closed(RestrictedTag t, const CVec& h);
// the restriction of g4 through the chart
CVec restricted_computed(RestrictedTag t, const CVec& h);
// affine convenience for lines: z -> f(z) (closed form)
cplx restricted_map(RestrictedTag t, cplx z);

// ---- K invariants and selector ----

struct KValues {
  std::array<cplx, 6> K{};  // K1..K6 in K[0..5]
};

// throws ExceptionalSet when Phi2, Phi3 or Phi5 vanishes (relative 1e-12)
KValues k_invariants(const CVec& u);

struct SelectorPair {
  cplx L, G;
};
// L_k = X_k(conj(H)^T u), G_k = Q_k - (3/4) L_k^2, k = 1..8
SelectorPair selector_forms(int k, const CVec& u);

}  // namespace octaflow::s8

#pragma once

#include <vector>

#include "octaflow/mpoly.hpp"
#include "octaflow/proj.hpp"

namespace octaflow::equin {

struct NMapCoeffs {
  int n = 0;
  Rational alpha1, alpha2, alpha3;
  Rational a2, a3, a4;
};

NMapCoeffs alpha_coeffs(int n);  // throws DomainError for n < 5

// Values of the three normalizing conditions computed from the line map
// gamma_alpha[x,y] with exact rationals: image of [1,1] (want 1), derivative
// of the dehomogenized map at 1 (want 0), off-line jacobian entry at [1,0]
// applied to (1,-1,0,...) (want 0).
struct ConditionValues {
  Rational fixed, critical_at_points, critical_off_line;
};
ConditionValues linear_conditions(int n, const Rational& a1, const Rational& a2, const Rational& a3);

// The same three conditions as closed linear forms in alpha.
ConditionValues linear_condition_forms(int n, const Rational& a1, const Rational& a2, const Rational& a3);

// g_alpha = a1 f4 + a2 F2 f2 + a3 F3 f1 on C^n, (f_k)_l = F_k - n x_l^k
template <class T>
std::vector<T> g_alpha_x(int n, const T& a1, const T& a2, const T& a3, const std::vector<T>& x);
template <class T>
std::vector<std::vector<T>> g_alpha_jacobian(int n, const T& a1, const T& a2, const T& a3, const std::vector<T>& x);

// [v_k T_k(v)], T_k = v_k^3 - a2 v_k^2 S1 + a3 v_k S2 - a4 S3 over the other n-2
CVec gamma(int n, const CVec& v);
// symbolic version, n <= 9
std::vector<MPoly<Rational>> gamma_form(int n);

CVec v_to_x(int n, const CVec& v);  // x = P v
CVec x_to_v(int n, const CVec& x);  // v = Q x
// swaps p_1 and p_n in v coordinates
CVec z_swap(int n, const CVec& v);

struct CriticalityReport {
  int n = 0;
  int samples = 0;
  double a1_residual = 0;        // |A1| / |J|
  double a2_residual = 0;        // |A2| / |J|
  double offline_eigenvalue = 0;  // max |A(x,y)| / |J| at random line points
  double complement_image = 0;   // max |J w| / (|J| |w|) over the complement basis
  double symmetry_residual = 0;  // |A(x,y) - A(y,x)| / scale for generic alpha
};

CriticalityReport criticality_residuals(int n, int samples = 20, unsigned long long seed = 7);

// restriction of gamma to the lifted line (x+y, ..., (1-n)x+y, x+(1-n)y), z = x/y
cplx line_model(int n, cplx z);
// -z^3((n-1)z-4)/(4z-(n-1))
cplx line_model_closed(int n, cplx z);

}  // namespace octaflow::equin

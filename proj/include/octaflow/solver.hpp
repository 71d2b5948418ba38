#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "octaflow/mpoly.hpp"
#include "octaflow/proj.hpp"
#include "octaflow/quad.hpp"
#include "octaflow/resgen.hpp"

namespace octaflow::solver {

// monic x^8 + a1 x^7 + ... + a8, a[0] = a1
struct Octic {
  std::array<cplx, 8> a{};
  cplx operator()(cplx x) const;
  cplx derivative(cplx x) const;
  double scale() const;  // max(1, max |a_k|)
};

// y^8 + b2 y^6 + ... + b8; b[k] = b_k, b[0] = 1, b[1] = 0
template <class C>
struct BasicReducedOctic {
  std::array<C, 9> b{};
};
using ReducedOctic = BasicReducedOctic<cplx>;

template <class C>
struct BasicReduction {
  BasicReducedOctic<C> q;
  C shift;  // a1/8: x = y - shift
};
using Reduction = BasicReduction<cplx>;

template <class C>
BasicReduction<C> reduce_octic_as(const Octic& p);
inline Reduction reduce_octic(const Octic& p) { return reduce_octic_as<cplx>(p); }

template <class C>
struct BasicKParams {
  std::array<C, 6> K{};
  C lambda;
  double roundtrip = 0;  // max_n |lambda^n C_n - b_n| / s^n
};
using KParams = BasicKParams<cplx>;

// Throws DegenerateReduction when b2, b3 or b2 b3 - b5 vanish relative to the
// coefficient scale.
template <class C>
BasicKParams<C> k_from_b(const BasicReducedOctic<C>& q, double tol = 1e-10);

// C_0..C_8 of R_K(s) = sum C_n s^{8-n}; DomainError if K1 = 0
template <class C>
std::array<C, 9> ck_coeffs(const std::array<C, 6>& K);

template <class C>
using Vec7 = std::array<C, 7>;
template <class C>
using Mat7 = std::array<std::array<C, 7>, 7>;

Eigen::Matrix<cplx, 7, 7> to_eigen(const Mat7<cplx>& m);

// Tables compiled for evaluation at numeric K.
template <class C>
class BasicTables {
 public:
  explicit BasicTables(const resgen::ResolventTables& t);

  struct At {
    Mat7<C> TK;
    C tK;
    std::vector<C> phi2c, phi3c, gammac;  // coefficients in w-monomial order
    C phi2(const Vec7<C>& w) const;
    C phi3(const Vec7<C>& w) const;
    C gamma(const Vec7<C>& w) const;
  };
  At at(const std::array<C, 6>& K) const;

 private:
  std::vector<CompiledPoly<C>> phi2_, phi3_, gamma_, tk_entries_;
  CompiledPoly<C> tK_;
};
using NumericTables = BasicTables<cplx>;
using ExtendedTables = BasicTables<cplxq>;

// g_K = T_K^{-1} ((84/5) grad^r Phi5K - 3 Phi2K grad^r Phi3K - Phi3K grad^r Phi2K)
template <class C>
class BasicGK {
 public:
  using Tables = BasicTables<C>;
  BasicGK(const Tables& nt, const std::array<C, 6>& K);  // SingularMatrix if t_K or T_K degenerate

  Vec7<C> operator()(const Vec7<C>& w) const;
  C phi2K(const Vec7<C>& w) const { return at_.phi2(w); }
  C gammaK(const Vec7<C>& w) const { return at_.gamma(w); }
  // polar form of Phi2K
  C bilinear(const Vec7<C>& a, const Vec7<C>& b) const;
  double condition() const { return cond_; }
  // -det(Hess Phi2K)/t_K, 128 for consistent tables
  C det_ratio() const { return det_ratio_; }
  const typename Tables::At& values() const { return at_; }
  // Phi2K(w) = w^T S w
  const Mat7<C>& gram() const { return S_; }

  CVec operator()(const CVec& w) const;
  cplx phi2K(const CVec& w) const;
  cplx gammaK(const CVec& w) const;
  cplx bilinear(const CVec& a, const CVec& b) const;

 private:
  typename Tables::At at_;
  std::vector<CompiledPoly<C>> num_;
  Mat7<C> S_, lu_;
  std::array<int, 7> piv_{};
  double cond_ = 0;
  C det_ratio_;
};
using GK = BasicGK<cplx>;
using ExtendedGK = BasicGK<cplxq>;

inline GK build_gK(const NumericTables& nt, const std::array<cplx, 6>& K) { return GK(nt, K); }

struct IterationConfig {
  double tol = 1e-12;
  int max_iter = 200;
  int restarts = 16;
  std::uint64_t seed = 1;
  // accept a run whose step stays below stall_tol for stall_window steps
  double stall_tol = 1e-8;
  int stall_window = 10;
};

struct IterResult {
  CVec w;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  // converged at the rounding floor above tol
};

// Renormalizes every step; throws IndeterminatePoint if the image vanishes.
IterResult iterate(const std::function<CVec(const CVec&)>& g, const CVec& w0, const IterationConfig& cfg);

// J_K(w) = -Gamma_K(w) / (48 Phi2K(w)); DomainError when Phi2K(w) vanishes
template <class C>
C select_root(const BasicGK<C>& g, const Vec7<C>& w);
cplx select_root(const GK& g, const CVec& w);

struct RootInfo {
  cplx root;
  double residual = 0;      // |p(root)|
  double rel_residual = 0;  // |p(root)| / max(1, max |a_k|)
  int iterations = 0;
  int restart = -1;
  bool dynamical = true;
};

struct RootReport {
  std::vector<RootInfo> roots;
  int attempts = 0;  // reductions tried (1 + re-randomized substitutions)
  int restarts_used = 0;
  int converged_runs = 0;
  int stalled_runs = 0;
  std::vector<cplx> shifts;  // t of each x = t + 1/y retry
  std::vector<std::string> diagnostics;
  std::string status;  // "ok", "partial", "total_failure"
  std::string precision;
  int dynamical_count() const;
  bool all_dynamical() const { return dynamical_count() == 8; }
};

RootReport solve(const Octic& p, const NumericTables& nt, const IterationConfig& cfg = {});
RootReport solve(const Octic& p, const ExtendedTables& nt, const IterationConfig& cfg = {});

cplx newton_polish(const Octic& p, cplx x, int max_steps = 50);
Octic taylor_shift(const Octic& p, cplx t);  // p(x + t)

}  // namespace octaflow::solver

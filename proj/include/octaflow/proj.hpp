#pragma once

#include <Eigen/Dense>

#include "octaflow/coeff.hpp"

namespace octaflow {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Homogeneous coordinates; equality is up to a nonzero complex scalar.
using ProjPoint = CVec;

// Divide by the entry of largest modulus (first one on ties).
template <class V>
V canonical_t(const V& p) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < p.size(); ++i)
    if (std::abs(p[i]) > std::abs(p[best])) best = i;
  if (std::abs(p[best]) == 0) return p;
  return p / p[best];
}

// min over unit phases c of |p/|p| - c q/|q||
template <class V>
auto proj_distance_t(const V& p, const V& q) {
  using R = typename V::RealScalar;
  const R np = p.norm(), nq = q.norm();
  if (np == R(0) || nq == R(0)) return (np == nq) ? R(0) : R(1);
  V a = p / np, b = q / nq;
  auto ip = b.dot(a);  // conj(b) . a
  const R m = std::abs(ip);
  if (m > R(0)) b *= ip / m;
  return (a - b).norm();
}

inline CVec canonical(const CVec& p) { return canonical_t(p); }
inline double proj_distance(const CVec& p, const CVec& q) { return proj_distance_t(p, q); }

}  // namespace octaflow

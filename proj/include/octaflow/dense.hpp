#pragma once

#include <vector>

#include "octaflow/cyclo8.hpp"

namespace octaflow {

using RatMatrix = std::vector<std::vector<Rational>>;

// Basis of {x : A x = 0} in reduced form (free variables set to unit vectors).
RatMatrix rational_nullspace(const RatMatrix& A, int ncols);

int rational_rank(RatMatrix A);

// Division-free cofactor determinant over any commutative ring.
template <class T>
T det_cofactor(const std::vector<std::vector<T>>& M) {
  const int n = static_cast<int>(M.size());
  if (n == 0) return T(1);
  std::vector<T> minor(std::size_t{1} << n, T(0));
  std::vector<bool> have(std::size_t{1} << n, false);
  minor[0] = T(1);
  have[0] = true;
  for (int r = 1; r <= n; ++r) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != r) continue;
      T acc(0);
      int idx = 0;
      for (int c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        T t = M[r - 1][c] * minor[mask & ~(1u << c)];
        if (((r - 1) + idx) % 2)
          acc -= t;
        else
          acc += t;
        ++idx;
      }
      minor[mask] = acc;
    }
  }
  return minor[(1u << n) - 1];
}

}  // namespace octaflow

#include "octaflow/dense.hpp"

namespace octaflow {

namespace {

// in-place RREF, returns pivot columns
std::vector<int> rref(RatMatrix& A, int ncols) {
  std::vector<int> piv;
  int row = 0;
  const int m = static_cast<int>(A.size());
  for (int c = 0; c < ncols && row < m; ++c) {
    int p = -1;
    for (int r = row; r < m; ++r)
      if (sgn(A[r][c]) != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(A[p], A[row]);
    Rational inv = 1 / A[row][c];
    for (auto& v : A[row]) v *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == row || sgn(A[r][c]) == 0) continue;
      Rational f = A[r][c];
      for (int k = 0; k < ncols; ++k) A[r][k] -= f * A[row][k];
    }
    piv.push_back(c);
    ++row;
  }
  return piv;
}

}  // namespace

RatMatrix rational_nullspace(const RatMatrix& A0, int ncols) {
  RatMatrix A = A0;
  auto piv = rref(A, ncols);
  std::vector<bool> is_piv(ncols, false);
  for (int c : piv) is_piv[c] = true;
  RatMatrix basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    std::vector<Rational> v(ncols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -A[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

int rational_rank(RatMatrix A) {
  if (A.empty()) return 0;
  return static_cast<int>(rref(A, static_cast<int>(A[0].size())).size());
}

}  // namespace octaflow

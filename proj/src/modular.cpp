#include "octaflow/modular.hpp"

#include "octaflow/errors.hpp"

namespace octaflow::modp {

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  a %= p;
  if (a == 0) throw DomainError("invmod: zero has no inverse");
  return powmod(a, p - 2, p);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while (!(d & 1)) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s && comp; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) comp = false;
    }
    if (comp) return false;
  }
  return true;
}

const std::vector<u64>& primes(int count) {
  static std::vector<u64> ps;
  static u64 next = (u64{1} << 62) - 1;
  while (static_cast<int>(ps.size()) < count) {
    while (!is_prime(next)) next -= 2;
    ps.push_back(next);
    next -= 2;
  }
  return ps;
}

u64 reduce(const mpz_class& z, u64 p) {
  static_assert(sizeof(unsigned long) == sizeof(u64));
  return mpz_fdiv_ui(z.get_mpz_t(), p);
}

u64 reduce(const Rational& q, u64 p) {
  u64 d = reduce(q.get_den(), p);
  if (d == 0) throw DomainError("reduce: prime divides denominator");
  return mulmod(reduce(q.get_num(), p), invmod(d, p), p);
}

Solution solve_mod(std::vector<std::vector<u64>> A, std::vector<std::vector<u64>> B, u64 p) {
  const std::size_t rows = A.size();
  const std::size_t cols = rows ? A[0].size() : 0;
  const std::size_t nr = rows ? B[0].size() : 0;
  Solution s;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t piv = r;
    while (piv < rows && A[piv][c] == 0) ++piv;
    if (piv == rows) return s;
    std::swap(A[r], A[piv]);
    std::swap(B[r], B[piv]);
    const u64 inv = invmod(A[r][c], p);
    for (std::size_t j = c; j < cols; ++j) A[r][j] = mulmod(A[r][j], inv, p);
    for (std::size_t j = 0; j < nr; ++j) B[r][j] = mulmod(B[r][j], inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      const u64 f = A[i][c];
      for (std::size_t j = c; j < cols; ++j) A[i][j] = submod(A[i][j], mulmod(f, A[r][j], p), p);
      for (std::size_t j = 0; j < nr; ++j) B[i][j] = submod(B[i][j], mulmod(f, B[r][j], p), p);
    }
    ++r;
  }
  s.full_rank = true;
  for (std::size_t i = cols; i < rows; ++i)
    for (std::size_t j = 0; j < nr; ++j)
      if (B[i][j]) s.consistent = false;
  s.X.assign(cols, std::vector<u64>(nr));
  for (std::size_t i = 0; i < cols; ++i) s.X[i] = B[i];
  return s;
}

std::optional<Rational> rational_reconstruct(const mpz_class& a, const mpz_class& m) {
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = a % m, t0 = 0, t1 = 1;
  if (r1 < 0) r1 += m;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  return rat(r1, t1);
}

void CrtAccumulator::add(const std::vector<u64>& residues, u64 p) {
  if (residues.size() != r_.size()) throw DimensionError("CRT: residue count mismatch");
  const mpz_class P(static_cast<unsigned long>(p));
  const u64 minv = invmod(reduce(m_, p), p);
  for (std::size_t i = 0; i < r_.size(); ++i) {
    // r + m * ((a - r) / m mod p)
    u64 cur = reduce(r_[i], p);
    u64 k = mulmod(submod(residues[i], cur, p), minv, p);
    r_[i] += m_ * static_cast<unsigned long>(k);
  }
  m_ *= P;
}

std::optional<std::vector<Rational>> CrtAccumulator::reconstruct() const {
  std::vector<Rational> out;
  out.reserve(r_.size());
  for (const auto& r : r_) {
    auto q = rational_reconstruct(r, m_);
    if (!q) return std::nullopt;
    out.push_back(std::move(*q));
  }
  return out;
}

}  // namespace octaflow::modp

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "octaflow/cyclo8.hpp"

namespace octaflow::modp {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((unsigned __int128)a * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
u64 powmod(u64 a, u64 e, u64 p);
u64 invmod(u64 a, u64 p);  // DomainError on 0

bool is_prime(u64 n);  // deterministic Miller-Rabin for 64-bit n

// first `count` primes below 2^62, descending
const std::vector<u64>& primes(int count);

u64 reduce(const mpz_class& z, u64 p);
u64 reduce(const Rational& q, u64 p);  // DomainError if p divides the denominator

struct Solution {
  bool full_rank = false;
  bool consistent = true;
  std::vector<std::vector<u64>> X;  // cols x nrhs
};

// A (rows x cols, rows >= cols) X = B (rows x nrhs) mod p by Gauss-Jordan.
Solution solve_mod(std::vector<std::vector<u64>> A, std::vector<std::vector<u64>> B, u64 p);

// n/d with |n|, d <= sqrt(m/2) and n = a d mod m
std::optional<Rational> rational_reconstruct(const mpz_class& a, const mpz_class& m);

// Incremental CRT over a vector of residues.
class CrtAccumulator {
 public:
  explicit CrtAccumulator(std::size_t n) : r_(n) {}
  void add(const std::vector<u64>& residues, u64 p);
  const mpz_class& modulus() const { return m_; }
  const std::vector<mpz_class>& residues() const { return r_; }
  // all entries reconstructed, or nullopt if any fails
  std::optional<std::vector<Rational>> reconstruct() const;

 private:
  std::vector<mpz_class> r_;
  mpz_class m_ = 1;
};

}  // namespace octaflow::modp

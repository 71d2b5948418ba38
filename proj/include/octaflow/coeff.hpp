#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include <gmpxx.h>

#include "octaflow/cyclo8.hpp"

namespace octaflow {

using cplx = std::complex<double>;
using cplxl = std::complex<long double>;

template <class T>
struct is_std_complex : std::false_type {};
template <class R>
struct is_std_complex<std::complex<R>> : std::true_type {};

inline bool coeff_is_zero(const mpz_class& c) { return sgn(c) == 0; }
inline bool coeff_is_zero(const mpq_class& c) { return sgn(c) == 0; }
inline bool coeff_is_zero(const Cyclo8& c) { return c.is_zero(); }
template <class R>
bool coeff_is_zero(const std::complex<R>& c) {
  return c.real() == R(0) && c.imag() == R(0);
}

// mpq -> floating; specialized for wider types elsewhere
template <class R>
struct RealFrom {
  static R from(const mpq_class& q) { return R(q.get_d()); }
};
template <>
struct RealFrom<long double> {
  static long double from(const mpq_class& q) {
    mpq_class r = q;
    const double hi = r.get_d();
    r -= hi;
    return static_cast<long double>(hi) + r.get_d();
  }
};

template <class R>
std::complex<R> cyclo_to(const Cyclo8& c) {
  using std::sqrt;
  const R s = R(1) / sqrt(R(2));
  const R a0 = RealFrom<R>::from(c[0]), a1 = RealFrom<R>::from(c[1]), a2 = RealFrom<R>::from(c[2]),
          a3 = RealFrom<R>::from(c[3]);
  return {a0 + (a1 - a3) * s, a2 + (a1 + a3) * s};
}

// Lossless where possible, rounding into floating types.
template <class To, class From>
To convert_coeff(const From& c) {
  if constexpr (std::is_same_v<To, From>) {
    return c;
  } else if constexpr (is_std_complex<To>::value) {
    using R = typename To::value_type;
    if constexpr (std::is_same_v<From, Cyclo8>) {
      if constexpr (std::is_same_v<R, double>)
        return c.to_complex();
      else
        return cyclo_to<R>(c);
    } else if constexpr (std::is_same_v<From, mpq_class> || std::is_same_v<From, mpz_class>) {
      return To(RealFrom<R>::from(mpq_class(c)), R(0));
    } else {
      return To(c);
    }
  } else if constexpr (std::is_same_v<To, Cyclo8>) {
    return Cyclo8(mpq_class(c));
  } else {
    return To(c);
  }
}

}  // namespace octaflow

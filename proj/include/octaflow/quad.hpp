#pragma once

#include <complex>

#include <boost/multiprecision/float128.hpp>
#include <gmpxx.h>

#include "octaflow/coeff.hpp"

namespace octaflow {

// 113-bit mantissa
using quad = boost::multiprecision::float128;
using cplxq = std::complex<quad>;

template <>
struct RealFrom<quad> {
  static quad from(const mpq_class& q) {
    mpf_class f(q, 192);
    quad r = 0;
    for (int i = 0; i < 3; ++i) {
      const double d = f.get_d();
      r += d;
      f -= d;
    }
    return r;
  }
};

inline cplx to_cplx(const cplxq& z) { return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())); }

}  // namespace octaflow

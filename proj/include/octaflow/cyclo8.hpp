#pragma once

#include <array>
#include <complex>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace octaflow {

using Rational = mpq_class;

// canonical n/d
inline Rational rat(const mpz_class& n, const mpz_class& d = 1) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& s);
// always "p/q", denominator 1 included
std::string format_rational(const Rational& q);

// Element a0 + a1 z + a2 z^2 + a3 z^3 of Q(z), z = exp(i pi/4), z^4 = -1.
class Cyclo8 {
 public:
  Cyclo8() = default;
  Cyclo8(long v) : c_{Rational(v), 0, 0, 0} {}
  Cyclo8(const Rational& r) : c_{r, 0, 0, 0} {}
  Cyclo8(Rational a0, Rational a1, Rational a2, Rational a3)
      : c_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {}

  static Cyclo8 zeta_pow(int k);  // z^k
  static Cyclo8 sqrt2();
  static Cyclo8 imag_unit();

  const Rational& operator[](int i) const { return c_[i]; }
  Rational& operator[](int i) { return c_[i]; }

  bool is_zero() const { return sgn(c_[0]) == 0 && sgn(c_[1]) == 0 && sgn(c_[2]) == 0 && sgn(c_[3]) == 0; }
  bool is_rational() const { return sgn(c_[1]) == 0 && sgn(c_[2]) == 0 && sgn(c_[3]) == 0; }
  // c * sqrt2 with c rational
  bool is_rational_times_sqrt2() const {
    return sgn(c_[0]) == 0 && sgn(c_[2]) == 0 && c_[1] == -c_[3];
  }

  Cyclo8& operator+=(const Cyclo8& o);
  Cyclo8& operator-=(const Cyclo8& o);
  Cyclo8& operator*=(const Cyclo8& o);
  Cyclo8& operator*=(const Rational& r);
  Cyclo8& operator/=(const Cyclo8& o) { return *this *= o.inverse(); }

  friend Cyclo8 operator+(Cyclo8 a, const Cyclo8& b) { return a += b; }
  friend Cyclo8 operator-(Cyclo8 a, const Cyclo8& b) { return a -= b; }
  friend Cyclo8 operator*(const Cyclo8& a, const Cyclo8& b);
  friend Cyclo8 operator/(Cyclo8 a, const Cyclo8& b) { return a /= b; }
  Cyclo8 operator-() const;

  friend bool operator==(const Cyclo8& a, const Cyclo8& b) {
    return a.c_[0] == b.c_[0] && a.c_[1] == b.c_[1] && a.c_[2] == b.c_[2] && a.c_[3] == b.c_[3];
  }

  // z -> z^m for m in {1,3,5,7}
  Cyclo8 galois(int m) const;
  Cyclo8 conj() const { return galois(7); }
  Rational norm() const;
  Cyclo8 inverse() const;

  std::complex<double> to_complex() const;
  std::complex<long double> to_complex_ld() const;

  friend std::ostream& operator<<(std::ostream& os, const Cyclo8& c);

 private:
  std::array<Rational, 4> c_{};
};

}  // namespace octaflow

#include "octaflow/cyclo8.hpp"

#include <cmath>

#include "octaflow/errors.hpp"

namespace octaflow {

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw DomainError("bad rational: " + s);
  if (q.get_den() == 0) throw DomainError("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Cyclo8 Cyclo8::zeta_pow(int k) {
  k %= 8;
  if (k < 0) k += 8;
  Cyclo8 r;
  if (k < 4)
    r.c_[k] = 1;
  else
    r.c_[k - 4] = -1;
  return r;
}

Cyclo8 Cyclo8::sqrt2() { return Cyclo8(0, 1, 0, -1); }
Cyclo8 Cyclo8::imag_unit() { return Cyclo8(0, 0, 1, 0); }

Cyclo8& Cyclo8::operator+=(const Cyclo8& o) {
  for (int i = 0; i < 4; ++i) c_[i] += o.c_[i];
  return *this;
}

Cyclo8& Cyclo8::operator-=(const Cyclo8& o) {
  for (int i = 0; i < 4; ++i) c_[i] -= o.c_[i];
  return *this;
}

Cyclo8 operator*(const Cyclo8& a, const Cyclo8& b) {
  Cyclo8 r;
  for (int i = 0; i < 4; ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (sgn(b.c_[j]) == 0) continue;
      int k = i + j;
      if (k < 4)
        r.c_[k] += a.c_[i] * b.c_[j];
      else
        r.c_[k - 4] -= a.c_[i] * b.c_[j];
    }
  }
  return r;
}

Cyclo8& Cyclo8::operator*=(const Cyclo8& o) { return *this = *this * o; }

Cyclo8& Cyclo8::operator*=(const Rational& r) {
  for (auto& c : c_) c *= r;
  return *this;
}

Cyclo8 Cyclo8::operator-() const { return Cyclo8(-c_[0], -c_[1], -c_[2], -c_[3]); }

Cyclo8 Cyclo8::galois(int m) const {
  Cyclo8 r(c_[0]);
  for (int i = 1; i < 4; ++i) {
    if (sgn(c_[i]) == 0) continue;
    Cyclo8 t = zeta_pow(i * m);
    t *= c_[i];
    r += t;
  }
  return r;
}

Rational Cyclo8::norm() const {
  Cyclo8 p = *this * galois(3) * galois(5) * galois(7);
  return p.c_[0];
}

Cyclo8 Cyclo8::inverse() const {
  if (is_zero()) throw DomainError("Cyclo8 inverse of zero");
  if (is_rational()) return Cyclo8(Rational(1) / c_[0]);
  Cyclo8 others = galois(3) * galois(5) * galois(7);
  Cyclo8 n = *this * others;
  others *= Rational(1) / n.c_[0];
  return others;
}

std::complex<double> Cyclo8::to_complex() const {
  const double h = std::sqrt(0.5);
  double a0 = c_[0].get_d(), a1 = c_[1].get_d(), a2 = c_[2].get_d(), a3 = c_[3].get_d();
  return {a0 + h * (a1 - a3), a2 + h * (a1 + a3)};
}

std::complex<long double> Cyclo8::to_complex_ld() const {
  const long double h = std::sqrt(0.5L);
  long double a[4];
  for (int i = 0; i < 4; ++i)
    a[i] = static_cast<long double>(c_[i].get_num().get_d()) / c_[i].get_den().get_d();
  return {a[0] + h * (a[1] - a[3]), a[2] + h * (a[1] + a[3])};
}

std::ostream& operator<<(std::ostream& os, const Cyclo8& c) {
  os << "(" << c.c_[0] << ", " << c.c_[1] << ", " << c.c_[2] << ", " << c.c_[3] << ")";
  return os;
}

}  // namespace octaflow

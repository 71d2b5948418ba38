#include "octaflow/mpoly.hpp"

#include <sstream>

namespace octaflow {

namespace {

void compositions(int nvars, int i, int left, Monomial cur, std::vector<Monomial>& out) {
  if (i == nvars - 1) {
    cur.set(i, left);
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur.set(i, e);
    compositions(nvars, i + 1, left - e, cur, out);
  }
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  if (nvars <= 0) {
    if (d == 0) out.push_back(Monomial{});
    return out;
  }
  compositions(nvars, 0, d, Monomial{}, out);
  return out;
}

std::string to_string(const MPoly<mpq_class>& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    if (!first) os << (sgn(t.c) < 0 ? " - " : " + ");
    else if (sgn(t.c) < 0) os << "-";
    first = false;
    mpq_class a = abs(t.c);
    bool unit = a == 1 && t.m.degree() > 0;
    if (!unit) os << a;
    bool lead = unit;
    for (int i = 0; i < p.nvars(); ++i) {
      int e = t.m.exp(i);
      if (!e) continue;
      if (!lead) os << "*";
      lead = false;
      os << (i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i + 1));
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace octaflow

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "octaflow/coeff.hpp"
#include "octaflow/errors.hpp"

namespace octaflow {

// Up to 8 exponents (each < 256) packed one byte per variable, variable 0 in
// the top byte, so lex order with x1 > x2 > ... is integer order on the key.
struct Monomial {
  std::uint64_t key = 0;

  static constexpr int kMaxVars = 8;

  int exp(int i) const { return static_cast<int>((key >> (8 * (7 - i))) & 0xffu); }
  void set(int i, int e) {
    const int s = 8 * (7 - i);
    key = (key & ~(std::uint64_t{0xff} << s)) | (std::uint64_t(e) << s);
  }
  int degree() const { return static_cast<int>((key * 0x0101010101010101ull) >> 56); }

  static Monomial var(int i, int e = 1) {
    Monomial m;
    m.set(i, e);
    return m;
  }
  static Monomial from_exps(std::span<const int> e) {
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i) m.set(static_cast<int>(i), e[i]);
    return m;
  }

  friend Monomial operator*(Monomial a, Monomial b) { return {a.key + b.key}; }
  friend bool operator==(Monomial a, Monomial b) { return a.key == b.key; }
};

// graded lex: total degree first, then lex
inline bool grlex_greater(Monomial a, Monomial b) {
  const int da = a.degree(), db = b.degree();
  return da != db ? da > db : a.key > b.key;
}

// all monomials of total degree d in n variables, grlex descending
std::vector<Monomial> monomials_of_degree(int nvars, int d);

template <class C>
struct Term {
  Monomial m;
  C c;
};

template <class C>
class MPoly {
 public:
  using coeff_type = C;

  MPoly() = default;
  explicit MPoly(int nvars) : nvars_(nvars) { check_nvars(nvars); }
  MPoly(int nvars, std::vector<Term<C>> terms) : nvars_(nvars), terms_(std::move(terms)) {
    check_nvars(nvars);
    normalize();
  }

  static MPoly constant(int nvars, const C& c) {
    MPoly p(nvars);
    if (!coeff_is_zero(c)) p.terms_.push_back({Monomial{}, c});
    return p;
  }
  static MPoly variable(int nvars, int i) {
    if (i < 0 || i >= nvars) throw DimensionError("variable index out of range");
    MPoly p(nvars);
    p.terms_.push_back({Monomial::var(i), C(1)});
    return p;
  }
  static MPoly monomial(int nvars, Monomial m, const C& c) {
    MPoly p(nvars);
    if (!coeff_is_zero(c)) p.terms_.push_back({m, c});
    return p;
  }

  int nvars() const { return nvars_; }
  const std::vector<Term<C>>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int degree() const { return terms_.empty() ? -1 : terms_.front().m.degree(); }

  bool is_homogeneous() const {
    for (const auto& t : terms_)
      if (t.m.degree() != degree()) return false;
    return true;
  }

  C coeff(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term<C>& t, Monomial x) { return grlex_greater(t.m, x); });
    if (it != terms_.end() && it->m == m) return it->c;
    return C(0);
  }

  C constant_term() const { return coeff(Monomial{}); }

  MPoly operator-() const {
    MPoly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  MPoly& operator+=(const MPoly& o) { return *this = add(*this, o, false); }
  MPoly& operator-=(const MPoly& o) { return *this = add(*this, o, true); }
  MPoly& operator*=(const MPoly& o) { return *this = mul(*this, o); }
  MPoly& operator*=(const C& c) {
    if (coeff_is_zero(c)) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.c *= c;
    drop_zeros();
    return *this;
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) { return add(a, b, false); }
  friend MPoly operator-(const MPoly& a, const MPoly& b) { return add(a, b, true); }
  friend MPoly operator*(const MPoly& a, const MPoly& b) { return mul(a, b); }
  friend MPoly operator*(MPoly a, const C& c) { return a *= c; }
  friend MPoly operator*(const C& c, MPoly a) { return a *= c; }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].m == b.terms_[i].m) || !(a.terms_[i].c == b.terms_[i].c)) return false;
    return true;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  MPoly pow(unsigned e) const {
    MPoly r = constant(nvars_, C(1)), b = *this;
    while (e) {
      if (e & 1u) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  MPoly derivative(int var) const {
    if (var < 0 || var >= nvars_) throw DimensionError("derivative variable out of range");
    std::vector<Term<C>> out;
    for (const auto& t : terms_) {
      int e = t.m.exp(var);
      if (e == 0) continue;
      Monomial m = t.m;
      m.set(var, e - 1);
      out.push_back({m, t.c * C(e)});
    }
    return MPoly(nvars_, std::move(out));
  }

  template <class D, class F>
  MPoly<D> map_coeffs(F f) const {
    std::vector<Term<D>> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.m, f(t.c)});
    return MPoly<D>(nvars_, std::move(out));
  }

  template <class D>
  MPoly<D> cast() const {
    return map_coeffs<D>([](const C& c) { return convert_coeff<D>(c); });
  }

  // Replace variable i by the polynomial subs[i]; all subs share an arity.
  MPoly compose(const std::vector<MPoly>& subs) const {
    if (static_cast<int>(subs.size()) != nvars_) throw DimensionError("compose arity");
    const int m = subs.empty() ? 0 : subs[0].nvars();
    int maxe = 0;
    for (const auto& t : terms_)
      for (int i = 0; i < nvars_; ++i) maxe = std::max(maxe, t.m.exp(i));
    std::vector<std::vector<MPoly>> pw(nvars_);
    for (int i = 0; i < nvars_; ++i) {
      pw[i].push_back(constant(m, C(1)));
      for (int e = 1; e <= maxe; ++e) pw[i].push_back(pw[i].back() * subs[i]);
    }
    MPoly r(m);
    for (const auto& t : terms_) {
      MPoly term = constant(m, t.c);
      for (int i = 0; i < nvars_; ++i)
        if (t.m.exp(i)) term *= pw[i][t.m.exp(i)];
      r += term;
    }
    return r;
  }

 private:
  static void check_nvars(int n) {
    if (n < 0 || n > Monomial::kMaxVars) throw DimensionError("MPoly supports 0..8 variables");
  }

  void drop_zeros() {
    std::erase_if(terms_, [](const Term<C>& t) { return coeff_is_zero(t.c); });
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term<C>& a, const Term<C>& b) { return grlex_greater(a.m, b.m); });
    std::vector<Term<C>> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().m == t.m)
        out.back().c += t.c;
      else
        out.push_back(std::move(t));
    }
    terms_ = std::move(out);
    drop_zeros();
  }

  static MPoly add(const MPoly& a, const MPoly& b, bool subtract) {
    if (a.nvars_ != b.nvars_) throw DimensionError("MPoly arity mismatch");
    MPoly r(a.nvars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && grlex_greater(a.terms_[i].m, b.terms_[j].m))) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || grlex_greater(b.terms_[j].m, a.terms_[i].m)) {
        r.terms_.push_back(b.terms_[j]);
        if (subtract) r.terms_.back().c = -r.terms_.back().c;
        ++j;
      } else {
        C c = subtract ? C(a.terms_[i].c - b.terms_[j].c) : C(a.terms_[i].c + b.terms_[j].c);
        if (!coeff_is_zero(c)) r.terms_.push_back({a.terms_[i].m, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  static MPoly mul(const MPoly& a, const MPoly& b) {
    if (a.nvars_ != b.nvars_) throw DimensionError("MPoly arity mismatch");
    MPoly r(a.nvars_);
    if (a.is_zero() || b.is_zero()) return r;
    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
      const MPoly& one = a.terms_.size() == 1 ? a : b;
      const MPoly& other = a.terms_.size() == 1 ? b : a;
      const auto& t = one.terms_[0];
      r.terms_.reserve(other.terms_.size());
      for (const auto& s : other.terms_) {
        C c = s.c * t.c;
        if (!coeff_is_zero(c)) r.terms_.push_back({s.m * t.m, std::move(c)});
      }
      return r;  // multiplying by a monomial preserves grlex order
    }
    std::unordered_map<std::uint64_t, C> acc;
    acc.reserve(std::min<std::size_t>(a.terms_.size() * b.terms_.size(), 1u << 22));
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) {
        auto [it, fresh] = acc.try_emplace((s.m * t.m).key);
        if (fresh)
          it->second = s.c * t.c;
        else
          it->second += s.c * t.c;
      }
    r.terms_.reserve(acc.size());
    for (auto& [k, c] : acc)
      if (!coeff_is_zero(c)) r.terms_.push_back({Monomial{k}, std::move(c)});
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term<C>& x, const Term<C>& y) { return grlex_greater(x.m, y.m); });
    return r;
  }

  int nvars_ = 0;
  std::vector<Term<C>> terms_;
};

namespace detail {

template <class T>
T ipow(const T& x, int e) {
  T r(1), b = x;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

// Horner over a block of lex-sorted (descending) terms sharing exponents of
// variables < var.
template <class C, class T>
T horner(const std::vector<const Term<C>*>& ts, std::size_t b, std::size_t e, int var, int nvars,
         std::span<const T> x) {
  if (var == nvars) return convert_coeff<T>(ts[b]->c);
  T acc(0);
  int prev = ts[b]->m.exp(var);
  std::size_t i = b;
  bool first = true;
  while (i < e) {
    const int ex = ts[i]->m.exp(var);
    std::size_t j = i;
    while (j < e && ts[j]->m.exp(var) == ex) ++j;
    T inner = horner<C, T>(ts, i, j, var + 1, nvars, x);
    if (first) {
      acc = inner;
      first = false;
    } else {
      acc = acc * ipow(x[var], prev - ex) + inner;
    }
    prev = ex;
    i = j;
  }
  if (prev) acc *= ipow(x[var], prev);
  return acc;
}

}  // namespace detail

// Exact substitution (or Horner evaluation for floating T).
template <class C, class T>
T eval(const MPoly<C>& p, std::span<const T> point) {
  if (static_cast<int>(point.size()) != p.nvars()) throw DimensionError("eval: point length mismatch");
  if (p.is_zero()) return T(0);
  std::vector<const Term<C>*> ts;
  ts.reserve(p.size());
  for (const auto& t : p.terms()) ts.push_back(&t);
  std::sort(ts.begin(), ts.end(), [](const Term<C>* a, const Term<C>* b) { return a->m.key > b->m.key; });
  return detail::horner<C, T>(ts, 0, ts.size(), 0, p.nvars(), point);
}

template <class C, class T>
T eval(const MPoly<C>& p, const std::vector<T>& point) {
  return eval<C, T>(p, std::span<const T>(point));
}

// Reversed: slot j holds dp/du_{n-1-j} (only for 7 variables).
template <class C>
std::vector<MPoly<C>> gradient(const MPoly<C>& p, bool reversed = false) {
  const int n = p.nvars();
  if (reversed && n != 7) throw DimensionError("reversed gradient needs 7 variables");
  std::vector<MPoly<C>> g;
  g.reserve(n);
  for (int j = 0; j < n; ++j) g.push_back(p.derivative(reversed ? n - 1 - j : j));
  return g;
}

template <class C>
struct PolyMatrix {
  int rows = 0, cols = 0;
  std::vector<MPoly<C>> a;

  PolyMatrix() = default;
  PolyMatrix(int r, int c, int nvars) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, MPoly<C>(nvars)) {}

  MPoly<C>& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const MPoly<C>& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

// Division-free Laplace expansion along rows, memoized on column subsets.
template <class C>
MPoly<C> poly_mat_det(const PolyMatrix<C>& M) {
  if (M.rows != M.cols) throw DimensionError("poly_mat_det: non-square matrix");
  const int n = M.rows;
  const int nv = n ? M.at(0, 0).nvars() : 0;
  if (n == 0) return MPoly<C>::constant(nv, C(1));
  if (n > 20) throw DimensionError("poly_mat_det: matrix too large");
  std::vector<std::optional<MPoly<C>>> minor(std::size_t{1} << n);
  minor[0] = MPoly<C>::constant(nv, C(1));
  for (int r = 1; r <= n; ++r) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != r) continue;
      MPoly<C> acc(nv);
      int idx = 0;
      for (int c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        const auto& e = M.at(r - 1, c);
        const auto& sub = minor[mask & ~(1u << c)];
        if (!e.is_zero() && sub && !sub->is_zero()) {
          MPoly<C> t = e * *sub;
          if (((r - 1) + idx) % 2)
            acc -= t;
          else
            acc += t;
        }
        ++idx;
      }
      minor[mask] = std::move(acc);
    }
    if (r >= 2)
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
        if (std::popcount(mask) == r - 1) minor[mask].reset();
  }
  return std::move(*minor[(1u << n) - 1]);
}

// det of [[Hess F, grad G], [grad J^T, 0]]
template <class C>
MPoly<C> bordered_hessian_det(const MPoly<C>& F, const MPoly<C>& G, const MPoly<C>& J) {
  const int n = F.nvars();
  if (G.nvars() != n || J.nvars() != n) throw DimensionError("bordered hessian arity mismatch");
  PolyMatrix<C> M(n + 1, n + 1, n);
  auto gF = gradient(F);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      M.at(i, j) = gF[i].derivative(j);
      if (j != i) M.at(j, i) = M.at(i, j);
    }
  auto gG = gradient(G), gJ = gradient(J);
  for (int i = 0; i < n; ++i) {
    M.at(i, n) = gG[i];
    M.at(n, i) = gJ[i];
  }
  return poly_mat_det(M);
}

template <class T>
T elem_sym(int k, std::span<const T> v) {
  const int n = static_cast<int>(v.size());
  if (k < 0 || k > n) throw DomainError("elem_sym: k out of range");
  std::vector<T> e(k + 1, T(0));
  e[0] = T(1);
  for (int i = 0; i < n; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += e[j - 1] * v[i];
  return e[k];
}

template <class T>
T elem_sym(int k, const std::vector<T>& v) {
  return elem_sym<T>(k, std::span<const T>(v));
}

// Symbolic S_k in the listed variables of an nvars-variable ring.
template <class C>
MPoly<C> elem_sym_poly(int k, int nvars, const std::vector<int>& vars) {
  if (k < 0 || k > static_cast<int>(vars.size())) throw DomainError("elem_sym: k out of range");
  std::vector<MPoly<C>> e(k + 1, MPoly<C>(nvars));
  e[0] = MPoly<C>::constant(nvars, C(1));
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto x = MPoly<C>::variable(nvars, vars[i]);
    for (int j = std::min<int>(k, static_cast<int>(i) + 1); j >= 1; --j) e[j] += e[j - 1] * x;
  }
  return e[k];
}

// Fast repeated evaluation of a fixed polynomial at floating points.
template <class T>
class CompiledPoly {
 public:
  CompiledPoly() = default;
  template <class C>
  explicit CompiledPoly(const MPoly<C>& p) : nvars_(p.nvars()) {
    for (const auto& t : p.terms()) {
      coeffs_.push_back(convert_coeff<T>(t.c));
      std::array<std::uint8_t, 8> e{};
      for (int i = 0; i < nvars_; ++i) {
        e[i] = static_cast<std::uint8_t>(t.m.exp(i));
        maxe_ = std::max(maxe_, int(e[i]));
      }
      exps_.push_back(e);
    }
  }

  int nvars() const { return nvars_; }
  int max_exp() const { return maxe_; }

  // pw[i*(max_exp+1)+e] = x_i^e
  T eval_powers(const std::vector<T>& pw) const {
    T acc(0);
    const int stride = maxe_ + 1;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
      T m = coeffs_[t];
      for (int i = 0; i < nvars_; ++i)
        if (exps_[t][i]) m *= pw[i * stride + exps_[t][i]];
      acc += m;
    }
    return acc;
  }

  T operator()(std::span<const T> x) const {
    std::vector<T> pw;
    fill_powers(x, maxe_, pw);
    return eval_powers(pw);
  }

  static void fill_powers(std::span<const T> x, int maxe, std::vector<T>& pw) {
    const int stride = maxe + 1;
    pw.assign(x.size() * stride, T(1));
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int e = 1; e <= maxe; ++e) pw[i * stride + e] = pw[i * stride + e - 1] * x[i];
  }

 private:
  int nvars_ = 0, maxe_ = 0;
  std::vector<T> coeffs_;
  std::vector<std::array<std::uint8_t, 8>> exps_;
};

std::string to_string(const MPoly<mpq_class>& p, const std::vector<std::string>& names = {});

}  // namespace octaflow

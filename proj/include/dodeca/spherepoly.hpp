#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <type_traits>
#include <stdexcept>
#include <vector>

#include "dodeca/binform.hpp"
#include "dodeca/exactnum.hpp"
#include "dodeca/quatgroup.hpp"

namespace dodeca {

using Exponent = std::array<int, 4>;

inline bool scalar_is_zero(const Rational& x) { return sgn(x) == 0; }

// Polynomial on ℝ^dim (dim 3 or 4), sparse in monomials.
template <class T>
class SpherePolynomial {
 public:
  SpherePolynomial() : dim_(4) {}
  // Constant polynomial on ℝ⁴.
  template <class U, class = std::enable_if_t<std::is_constructible_v<T, const U&>>>
  SpherePolynomial(const U& c) : dim_(4) {
    T v(c);
    if (!scalar_is_zero(v)) terms_[Exponent{}] = v;
  }

  static SpherePolynomial zero(int dim) {
    if (dim < 1 || dim > 4) throw std::invalid_argument("SpherePolynomial: dimension must be 1..4");
    SpherePolynomial p;
    p.dim_ = dim;
    return p;
  }

  static SpherePolynomial constant(int dim, const T& c) {
    SpherePolynomial p = zero(dim);
    p.add_term(Exponent{}, c);
    return p;
  }
  static SpherePolynomial variable(int dim, int k, const T& coef = T(1)) {
    SpherePolynomial p = zero(dim);
    Exponent e{};
    e.at(k) = 1;
    p.add_term(e, coef);
    return p;
  }
  // |x|^{2k}
  static SpherePolynomial radius_power(int dim, int k) {
    SpherePolynomial r2 = zero(dim), out = constant(dim, T(1));
    for (int i = 0; i < dim; ++i) {
      Exponent e{};
      e[i] = 2;
      r2.add_term(e, T(1));
    }
    for (int i = 0; i < k; ++i) out = out * r2;
    return out;
  }

  int dim() const { return dim_; }
  const std::map<Exponent, T>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const T& c) {
    if (scalar_is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (scalar_is_zero(it->second)) terms_.erase(it);
    }
  }

  T coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T(0) : it->second;
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    return d;
  }
  bool is_homogeneous(int n) const {
    for (const auto& [e, c] : terms_)
      if (e[0] + e[1] + e[2] + e[3] != n) return false;
    return true;
  }

  SpherePolynomial& operator+=(const SpherePolynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  SpherePolynomial& operator-=(const SpherePolynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, T(0) - c);
    return *this;
  }
  friend SpherePolynomial operator+(SpherePolynomial a, const SpherePolynomial& b) { return a += b; }
  friend SpherePolynomial operator-(SpherePolynomial a, const SpherePolynomial& b) { return a -= b; }
  SpherePolynomial operator-() const { return zero(dim_) - *this; }

  friend SpherePolynomial operator*(const SpherePolynomial& a, const SpherePolynomial& b) {
    int dim = std::max(a.dim_, b.dim_);
    SpherePolynomial r = zero(dim);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend SpherePolynomial operator*(const T& s, const SpherePolynomial& p) {
    SpherePolynomial r = zero(p.dim_);
    for (const auto& [e, c] : p.terms_) r.add_term(e, s * c);
    return r;
  }
  friend bool operator==(const SpherePolynomial& a, const SpherePolynomial& b) {
    return (a - b).terms_.empty();
  }

  template <class U, class Fn>
  SpherePolynomial<U> map_coefficients(Fn fn) const {
    SpherePolynomial<U> r = SpherePolynomial<U>::zero(dim_);
    for (const auto& [e, c] : terms_) r.add_term(e, fn(c));
    return r;
  }

  SpherePolynomial derivative(int k) const {
    SpherePolynomial r = zero(dim_);
    for (const auto& [e, c] : terms_) {
      if (e[k] == 0) continue;
      Exponent f = e;
      f[k] -= 1;
      r.add_term(f, T(e[k]) * c);
    }
    return r;
  }

  SpherePolynomial laplacian() const {
    SpherePolynomial r = zero(dim_);
    for (int k = 0; k < dim_; ++k) r += derivative(k).derivative(k);
    return r;
  }

  template <class U>
  auto evaluate(const std::array<U, 4>& x) const {
    using R = decltype(T() * U());
    R acc = R(0);
    for (const auto& [e, c] : terms_) {
      R m = R(c);
      for (int k = 0; k < dim_; ++k)
        for (int p = 0; p < e[k]; ++p) m = m * x[k];
      acc = acc + m;
    }
    return acc;
  }
  double evaluate(const Quatd& q) const { return to_real(evaluate(std::array<double, 4>{q.a, q.b, q.c, q.d})); }

  // Substitute polynomials for the variables.
  SpherePolynomial<T> compose(const std::vector<SpherePolynomial<T>>& subs) const {
    if (static_cast<int>(subs.size()) != dim_) throw std::invalid_argument("compose: wrong substitution count");
    int out_dim = subs.empty() ? dim_ : subs[0].dim();
    std::vector<std::vector<SpherePolynomial<T>>> powers(dim_);
    int deg = std::max(degree(), 0);
    for (int k = 0; k < dim_; ++k) {
      powers[k].push_back(SpherePolynomial::constant(out_dim, T(1)));
      for (int p = 1; p <= deg; ++p) powers[k].push_back(powers[k].back() * subs[k]);
    }
    SpherePolynomial r = zero(out_dim);
    for (const auto& [e, c] : terms_) {
      SpherePolynomial m = SpherePolynomial::constant(out_dim, c);
      for (int k = 0; k < dim_; ++k)
        if (e[k]) m = m * powers[k][e[k]];
      r += m;
    }
    return r;
  }

  // Normal form modulo |x|² − 1: the last variable appears with exponent ≤ 1.
  SpherePolynomial canonical() const {
    SpherePolynomial r = zero(dim_);
    std::map<Exponent, T> work = terms_;
    const int last = dim_ - 1;
    while (!work.empty()) {
      auto it = work.begin();
      Exponent e = it->first;
      T c = it->second;
      work.erase(it);
      if (scalar_is_zero(c)) continue;
      if (e[last] < 2) {
        r.add_term(e, c);
        continue;
      }
      Exponent base = e;
      base[last] -= 2;
      auto push = [&](const Exponent& f, const T& v) {
        auto jt = work.find(f);
        if (jt == work.end())
          work.emplace(f, v);
        else
          jt->second = jt->second + v;
      };
      push(base, c);
      for (int k = 0; k < last; ++k) {
        Exponent f = base;
        f[k] += 2;
        push(f, T(0) - c);
      }
    }
    return r;
  }

  bool equal_on_sphere(const SpherePolynomial& o) const { return (*this - o).canonical().is_zero(); }

 private:
  void check_dim(const SpherePolynomial& o) {
    if (o.dim_ > dim_) dim_ = o.dim_;
  }
  static double to_real(double x) { return x; }
  static double to_real(const std::complex<double>& x) { return x.real(); }

  int dim_;
  std::map<Exponent, T> terms_;
};

template <class T>
SpherePolynomial<T> conj_of(const SpherePolynomial<T>& p) {
  return p.template map_coefficients<T>([](const T& c) { return conj_of(c); });
}
template <class T>
bool scalar_is_zero(const SpherePolynomial<T>& p) {
  return p.is_zero();
}

using PolyQ = SpherePolynomial<Rational>;
using PolyNF = SpherePolynomial<NF>;
using PolyD = SpherePolynomial<double>;
using PolyC = SpherePolynomial<std::complex<double>>;

// ∫_{S^{d−1}} x^e = coef · π^pi_power
struct PiMultiple {
  Rational coef;
  int pi_power = 0;
  double value() const { return coef.get_d() * std::pow(M_PI, pi_power); }
};

inline Rational factorial(int n) {
  mpz_class f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

// Γ(m + 1/2)/√π = (2m)!/(4^m m!)
inline Rational half_gamma_ratio(int m) {
  mpz_class four_m;
  mpz_ui_pow_ui(four_m.get_mpz_t(), 4, m);
  Rational r = factorial(2 * m) / (Rational(four_m) * factorial(m));
  r.canonicalize();
  return r;
}

// 2 Π Γ((e_i+1)/2) / Γ(Σ(e_i+1)/2)
inline PiMultiple sphere_moment(const Exponent& e, int dim) {
  PiMultiple out;
  for (int k = 0; k < dim; ++k)
    if (e[k] % 2) return {Rational(0), 0};
  Rational num = 2;
  int msum = 0;
  for (int k = 0; k < dim; ++k) {
    num *= half_gamma_ratio(e[k] / 2);
    msum += e[k] / 2;
  }
  if (dim % 2 == 0) {
    out.coef = num / factorial(msum + dim / 2 - 1);
    out.pi_power = dim / 2;
  } else {
    out.coef = num / half_gamma_ratio(msum + (dim - 1) / 2);
    out.pi_power = (dim - 1) / 2;
  }
  out.coef.canonicalize();
  return out;
}

inline double coefficient_to_double(double c) { return c; }
inline double coefficient_to_double(const std::complex<double>& c) { return c.real(); }
inline double coefficient_to_double(const Rational& c) { return c.get_d(); }
inline double coefficient_to_double(const NF& c) { return c.to_double(); }

// Exact integral as (field element)·π^k; available for exact coefficients.
template <class T>
std::pair<T, int> sphere_integral_exact(const SpherePolynomial<T>& f) {
  T acc(0);
  int pw = f.dim() / 2;
  for (const auto& [e, c] : f.terms()) {
    PiMultiple m = sphere_moment(e, f.dim());
    if (sgn(m.coef) == 0) continue;
    acc = acc + c * T(m.coef);
  }
  return {acc, pw};
}

template <class T>
double sphere_integral(const SpherePolynomial<T>& f) {
  double acc = 0;
  for (const auto& [e, c] : f.terms()) {
    PiMultiple m = sphere_moment(e, f.dim());
    if (sgn(m.coef) == 0) continue;
    acc += coefficient_to_double(c) * m.value();
  }
  return acc;
}

inline constexpr int kGroupOrder = 120;
inline double volume_M() { return 2 * M_PI * M_PI / kGroupOrder; }

template <class T>
double integral_over_M(const SpherePolynomial<T>& f) {
  return sphere_integral(f) / kGroupOrder;
}

template <class T>
SpherePolynomial<T> euclidean_laplacian(const SpherePolynomial<T>& f) {
  return f.laplacian();
}

// Harmonic part of a homogeneous degree-m polynomial on ℝ^d:
// Σ_j (−1)^j |x|^{2j} Δ^j p / (2^j j! Π_{k=1}^{j} (d + 2m − 2 − 2k)).
template <class T>
SpherePolynomial<T> harmonic_projection(const SpherePolynomial<T>& p, int m) {
  if (!p.is_homogeneous(m)) throw std::invalid_argument("harmonic_projection: input not homogeneous");
  const int d = p.dim();
  SpherePolynomial<T> out = p;
  SpherePolynomial<T> lap = p;
  Rational c = 1;
  for (int j = 1; 2 * j <= m; ++j) {
    lap = lap.laplacian();
    if (lap.is_zero()) break;
    c = -c / Rational(2 * j * (d + 2 * m - 2 - 2 * j));
    out += T(c) * (SpherePolynomial<T>::radius_power(d, j) * lap);
  }
  return out;
}

template <>
inline SpherePolynomial<double> harmonic_projection(const SpherePolynomial<double>& p, int m) {
  if (!p.is_homogeneous(m)) throw std::invalid_argument("harmonic_projection: input not homogeneous");
  const int d = p.dim();
  SpherePolynomial<double> out = p, lap = p;
  double c = 1;
  for (int j = 1; 2 * j <= m; ++j) {
    lap = lap.laplacian();
    if (lap.is_zero()) break;
    c = -c / (2.0 * j * (d + 2 * m - 2 - 2 * j));
    out += c * (SpherePolynomial<double>::radius_power(d, j) * lap);
  }
  return out;
}

struct HarmonicCorrection {
  PolyNF corrected;
  NF kappa;  // ΔP = κ |x|^{n−2}
  NF c;      // P̃ = P + c |x|^n
};

inline HarmonicCorrection harmonic_correction(const PolyNF& P) {
  const int n = P.degree();
  const int d = P.dim();
  if (n < 2 || n % 2 || !P.is_homogeneous(n)) throw std::invalid_argument("harmonic_correction: need even homogeneous input");
  PolyNF lap = P.laplacian();
  PolyNF q = PolyNF::radius_power(d, (n - 2) / 2);
  Exponent lead{};
  lead[0] = n - 2;
  NF kappa = lap.coefficient(lead) / q.coefficient(lead);
  if (!(lap - kappa * q).is_zero()) throw std::invalid_argument("harmonic_correction: ΔP not a multiple of |x|^{n-2}");
  NF c = -kappa / NF(static_cast<long>(n * (n + d - 2)));
  return {P + c * PolyNF::radius_power(d, n / 2), kappa, c};
}

// P = (τ²x²−y²)(τ²y²−z²)(τ²z²−x²)
inline PolyNF invariant_sextic() {
  const NF t2 = NF::tau() * NF::tau();
  auto X = PolyNF::variable(3, 0), Y = PolyNF::variable(3, 1), Z = PolyNF::variable(3, 2);
  return (t2 * (X * X) - Y * Y) * (t2 * (Y * Y) - Z * Z) * (t2 * (Z * Z) - X * X);
}

// The Hopf map in real coordinates (a,b,c,d) of ℝ⁴.
template <class T>
std::vector<SpherePolynomial<T>> hopf_components() {
  using P = SpherePolynomial<T>;
  auto a = P::variable(4, 0), b = P::variable(4, 1), c = P::variable(4, 2), d = P::variable(4, 3);
  T two(2);
  return {two * (a * c + b * d), two * (b * c - a * d), a * a + b * b - c * c - d * d};
}

template <class T>
SpherePolynomial<T> hopf_lift(const SpherePolynomial<T>& f) {
  if (f.dim() != 3) throw std::invalid_argument("hopf_lift: expects a polynomial on R^3");
  return f.compose(hopf_components<T>());
}

struct EigenCheck {
  bool is_eigenfunction = false;
  int eigenvalue = 0;
};

// Δ_{S^{d−1}} f = n(n+d−2) f holds iff f agrees on the sphere with its harmonic projection.
template <class T>
EigenCheck sphere_laplacian_eigencheck(const SpherePolynomial<T>& f, int n) {
  if (!f.is_homogeneous(n)) throw std::invalid_argument("sphere_laplacian_eigencheck: not homogeneous");
  auto h = harmonic_projection(f, n);
  bool ok = h.laplacian().is_zero() && f.equal_on_sphere(h) && !f.is_zero();
  return {ok, n * (n + f.dim() - 2)};
}

template <>
inline EigenCheck sphere_laplacian_eigencheck(const SpherePolynomial<double>& f, int n) {
  if (!f.is_homogeneous(n)) throw std::invalid_argument("sphere_laplacian_eigencheck: not homogeneous");
  auto h = harmonic_projection(f, n);
  double scale = 0;
  for (const auto& [e, c] : f.terms()) scale = std::max(scale, std::abs(c));
  auto small = [&](const SpherePolynomial<double>& p) {
    for (const auto& [e, c] : p.terms())
      if (std::abs(c) > 1e-9 * scale) return false;
    return true;
  };
  bool ok = small(h.laplacian()) && small((f - h).canonical()) && scale > 0;
  return {ok, n * (n + f.dim() - 2)};
}

// Polynomial in α, ᾱ, β, β̄ with exponents (p, q, r, s).
class WirtingerPolynomial {
 public:
  WirtingerPolynomial() = default;
  WirtingerPolynomial(long c) {
    if (c) terms_[Exponent{}] = NF(c);
  }
  WirtingerPolynomial(const NF& c) {
    if (!c.is_zero()) terms_[Exponent{}] = c;
  }
  static WirtingerPolynomial alpha() { return mono({1, 0, 0, 0}); }
  static WirtingerPolynomial alpha_bar() { return mono({0, 1, 0, 0}); }
  static WirtingerPolynomial beta() { return mono({0, 0, 1, 0}); }
  static WirtingerPolynomial beta_bar() { return mono({0, 0, 0, 1}); }

  const std::map<Exponent, NF>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const NF& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  friend WirtingerPolynomial operator+(WirtingerPolynomial a, const WirtingerPolynomial& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend WirtingerPolynomial operator-(WirtingerPolynomial a, const WirtingerPolynomial& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
    return a;
  }
  friend WirtingerPolynomial operator*(const WirtingerPolynomial& a, const WirtingerPolynomial& b) {
    WirtingerPolynomial r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_)
        r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]}, ca * cb);
    return r;
  }
  WirtingerPolynomial conj() const {
    WirtingerPolynomial r;
    for (const auto& [e, c] : terms_) r.add_term({e[1], e[0], e[3], e[2]}, c.conj());
    return r;
  }
  WirtingerPolynomial real_part() const { return (*this + conj()) * WirtingerPolynomial(NF(rat(1, 2))); }
  WirtingerPolynomial imag_part() const {
    return (*this - conj()) * WirtingerPolynomial(-NF::i() * NF(rat(1, 2)));
  }

  // ∫_{S³} = π² · (returned value); ∫ α^pᾱ^qβ^rβ̄^s = δ_pq δ_rs 2π² p! r!/(p+r+1)!
  NF integral_over_pi2() const {
    NF acc;
    for (const auto& [e, c] : terms_) {
      if (e[0] != e[1] || e[2] != e[3]) continue;
      Rational m = 2 * factorial(e[0]) * factorial(e[2]) / factorial(e[0] + e[2] + 1);
      acc += c * NF(m);
    }
    return acc;
  }

 private:
  static WirtingerPolynomial mono(Exponent e) {
    WirtingerPolynomial w;
    w.terms_[e] = NF(1);
    return w;
  }
  std::map<Exponent, NF> terms_;
};

inline WirtingerPolynomial conj_of(const WirtingerPolynomial& w) { return w.conj(); }
inline bool scalar_is_zero(const WirtingerPolynomial& w) { return w.is_zero(); }

// A_j as polynomial in α, ᾱ, β, β̄ (exact integer coefficients).
inline std::vector<WirtingerPolynomial> coefficient_polynomials_wirtinger() {
  using W = WirtingerPolynomial;
  return act_ab(W::alpha(), W::beta(), invariant_I12<NF>()).coeffs;
}

// A_j as complex polynomial in the real coordinates (a,b,c,d).
inline std::vector<PolyC> coefficient_polynomials() {
  using cd = std::complex<double>;
  auto a = PolyC::variable(4, 0), b = PolyC::variable(4, 1), c = PolyC::variable(4, 2), d = PolyC::variable(4, 3);
  PolyC al = a + cd(0, 1) * b, be = c + cd(0, 1) * d;
  return act_ab(al, be, invariant_I12<cd>()).coeffs;
}

inline PolyD real_part(const PolyC& p) {
  return p.map_coefficients<double>([](const std::complex<double>& c) { return c.real(); });
}
inline PolyD imag_part(const PolyC& p) {
  return p.map_coefficients<double>([](const std::complex<double>& c) { return c.imag(); });
}

inline PolyD to_double_poly(const PolyNF& p) {
  return p.map_coefficients<double>([](const NF& c) { return c.to_double(); });
}

using Mat3 = std::array<std::array<double, 3>, 3>;

inline PolyD rotate_polynomial(const PolyD& f, const Mat3& R) {
  std::vector<PolyD> subs;
  for (int i = 0; i < 3; ++i) {
    PolyD row = PolyD::zero(3);
    for (int j = 0; j < 3; ++j) row += R[i][j] * PolyD::variable(3, j);
    subs.push_back(row);
  }
  return f.compose(subs);
}

// Rotations taking Klein's vertex (0,0,1) to the sextic's vertex (1,0,τ)/|·| and
// Klein's 2-fold axis (0,1,0) to ±(0,1,0); the two mirror-image frames.
inline Mat3 klein_to_sextic_rotation(int variant) {
  const double tau = (1 + std::sqrt(5.0)) / 2;
  const double n = std::sqrt(1 + tau * tau);
  Vec3 v{1 / n, 0, tau / n};
  Vec3 w{0, variant == 0 ? 1.0 : -1.0, 0};
  Vec3 u{w[1] * v[2] - w[2] * v[1], w[2] * v[0] - w[0] * v[2], w[0] * v[1] - w[1] * v[0]};
  Mat3 R;
  for (int i = 0; i < 3; ++i) {
    R[i][0] = u[i];
    R[i][1] = w[i];
    R[i][2] = v[i];
  }
  return R;
}

// The sextic's harmonic correction transported to Klein's frame: the variant invariant
// under every rotation induced by the group.
inline PolyD sextic_in_klein_frame() {
  PolyD pt = to_double_poly(harmonic_correction(invariant_sextic()).corrected);
  const auto& g = binary_icosahedral();
  for (int variant = 0; variant < 2; ++variant) {
    PolyD f = rotate_polynomial(pt, klein_to_sextic_rotation(variant));
    double worst = 0;
    for (const auto& h : g.elements) {
      auto cols = hopf_rotation(h);
      for (const Vec3& x : {Vec3{0.3, -0.5, 0.81}, Vec3{-0.7, 0.2, 0.1}}) {
        std::array<double, 4> p{x[0], x[1], x[2], 0};
        std::array<double, 4> q{0, 0, 0, 0};
        for (int k = 0; k < 3; ++k)
          for (int i = 0; i < 3; ++i) q[i] += cols[k][i] * x[k];
        worst = std::max(worst, std::abs(f.evaluate(q) - f.evaluate(p)));
      }
    }
    if (worst < 1e-9) return f;
  }
  throw std::logic_error("sextic_in_klein_frame: no invariant orientation");
}

// Hopf lift of the Klein-frame sextic: a degree-12 polynomial on ℝ⁴.
inline PolyD hopf_seed_polynomial() { return hopf_lift(sextic_in_klein_frame()); }

// Gauss–Legendre nodes and weights on [0,1] (Golub–Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    x[k] = 0.5 * (es.eigenvalues()(k) + 1.0);
    double v = es.eigenvectors()(0, k);
    w[k] = v * v;  // total weight 1 on [0,1]
  }
  return {x, w};
}

// Product rule on S³ in Hopf coordinates α = cos η e^{iξ₁}, β = sin η e^{iξ₂}, t = sin²η.
// Exact for polynomials of total degree ≤ degree.
struct S3Quadrature {
  int degree = 0;
  std::vector<Quatd> points;
  std::vector<double> weights;
};

inline S3Quadrature make_s3_quadrature(int degree) {
  S3Quadrature q;
  q.degree = degree;
  const int nxi = degree + 1;
  const int nt = (degree / 2 + 2) / 2 + 1;
  auto [tx, tw] = gauss_legendre_unit(nt);
  const double dxi = 2 * M_PI / nxi;
  q.points.reserve(static_cast<std::size_t>(nxi) * nxi * nt);
  for (int it = 0; it < nt; ++it) {
    double ce = std::sqrt(1 - tx[it]), se = std::sqrt(tx[it]);
    for (int i = 0; i < nxi; ++i)
      for (int j = 0; j < nxi; ++j) {
        double x1 = i * dxi, x2 = j * dxi;
        q.points.push_back({ce * std::cos(x1), ce * std::sin(x1), se * std::cos(x2), se * std::sin(x2)});
        q.weights.push_back(tw[it] * 0.5 * dxi * dxi);
      }
  }
  return q;
}

// Checks the rule against exact moments of all monomials up to its degree in a sparse sample.
inline double quadrature_self_test(const S3Quadrature& q) {
  double worst = 0;
  const int D = q.degree;
  for (int p = 0; p <= D; p += std::max(1, D / 6))
    for (int r = 0; p + r <= D; r += std::max(1, D / 5))
      for (int s = 0; p + r + s <= D; s += std::max(1, D / 4)) {
        int t = std::max(0, std::min(D - p - r - s, 2));
        if ((p + r + s + t) % 2) t = (t > 0) ? t - 1 : t + 1;
        if (p + r + s + t > D) continue;
        Exponent e{p, r, s, t};
        double exact = sphere_moment(e, 4).value();
        double acc = 0;
        for (std::size_t k = 0; k < q.points.size(); ++k) {
          const auto& x = q.points[k];
          acc += q.weights[k] * std::pow(x.a, p) * std::pow(x.b, r) * std::pow(x.c, s) * std::pow(x.d, t);
        }
        worst = std::max(worst, std::abs(acc - exact));
      }
  return worst;
}

}  // namespace dodeca

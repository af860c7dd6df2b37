#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dodeca/exactnum.hpp"
#include "dodeca/quatgroup.hpp"

namespace dodeca {

inline bool scalar_is_zero(double x) { return x == 0.0; }
inline bool scalar_is_zero(const std::complex<double>& x) { return x == std::complex<double>(0.0); }
inline bool scalar_is_zero(const NF& x) { return x.is_zero(); }
template <class Tag>
bool scalar_is_zero(const Ext<Tag>& x) {
  return x.is_zero();
}

// Homogeneous degree-n form Σ coeffs[j] x^{n−j} y^j.
template <class S>
struct BinaryForm {
  int degree = 0;
  std::vector<S> coeffs;

  BinaryForm() : coeffs(1, S(0)) {}
  explicit BinaryForm(int n) : degree(n), coeffs(n + 1, S(0)) {}
  BinaryForm(int n, std::vector<S> c) : degree(n), coeffs(std::move(c)) {
    if (static_cast<int>(coeffs.size()) != n + 1) throw std::invalid_argument("BinaryForm: wrong coefficient count");
  }

  static BinaryForm from_ints(int n, const std::vector<std::pair<int, long>>& terms) {
    BinaryForm f(n);
    for (auto [j, v] : terms) f.coeffs.at(j) = S(v);
    return f;
  }

  template <class T, class Fn>
  BinaryForm<T> map(Fn fn) const {
    BinaryForm<T> out(degree);
    for (int j = 0; j <= degree; ++j) out.coeffs[j] = fn(coeffs[j]);
    return out;
  }

  friend BinaryForm operator*(const BinaryForm& f, const BinaryForm& g) {
    BinaryForm h(f.degree + g.degree);
    for (int i = 0; i <= f.degree; ++i) {
      if (scalar_is_zero(f.coeffs[i])) continue;
      for (int j = 0; j <= g.degree; ++j) h.coeffs[i + j] = h.coeffs[i + j] + f.coeffs[i] * g.coeffs[j];
    }
    return h;
  }
  friend BinaryForm operator+(const BinaryForm& f, const BinaryForm& g) {
    if (f.degree != g.degree) throw std::invalid_argument("BinaryForm: degree mismatch");
    BinaryForm h(f.degree);
    for (int j = 0; j <= f.degree; ++j) h.coeffs[j] = f.coeffs[j] + g.coeffs[j];
    return h;
  }
  friend BinaryForm operator-(const BinaryForm& f, const BinaryForm& g) {
    if (f.degree != g.degree) throw std::invalid_argument("BinaryForm: degree mismatch");
    BinaryForm h(f.degree);
    for (int j = 0; j <= f.degree; ++j) h.coeffs[j] = f.coeffs[j] - g.coeffs[j];
    return h;
  }
  friend bool operator==(const BinaryForm& f, const BinaryForm& g) {
    return f.degree == g.degree && f.coeffs == g.coeffs;
  }

  BinaryForm d_dx() const {
    if (degree == 0) return BinaryForm(0);
    BinaryForm h(degree - 1);
    for (int j = 0; j < degree; ++j) h.coeffs[j] = S(degree - j) * coeffs[j];
    return h;
  }
  BinaryForm d_dy() const {
    if (degree == 0) return BinaryForm(0);
    BinaryForm h(degree - 1);
    for (int j = 1; j <= degree; ++j) h.coeffs[j - 1] = S(j) * coeffs[j];
    return h;
  }
};

template <class S>
BinaryForm<S> invariant_I12() {
  return BinaryForm<S>::from_ints(12, {{1, 1}, {6, 11}, {11, -1}});
}

// Hessian f_xx f_yy − f_xy² of I₁₂, degree 20.
template <class S>
BinaryForm<S> invariant_T20() {
  auto f = invariant_I12<S>();
  auto fx = f.d_dx(), fy = f.d_dy();
  return fx.d_dx() * fy.d_dy() - fx.d_dy() * fx.d_dy();
}

// Jacobian of I₁₂ and T₂₀, degree 30.
template <class S>
BinaryForm<S> invariant_T30() {
  auto f = invariant_I12<S>();
  auto g = invariant_T20<S>();
  return f.d_dx() * g.d_dy() - f.d_dy() * g.d_dx();
}

// f(αx − β̄y, βx + ᾱy), expanded in the monomial basis.
template <class C, class S>
BinaryForm<C> act_ab(const C& al, const C& be, const BinaryForm<S>& f) {
  const int n = f.degree;
  const C zero(0);
  // u = αx − β̄y, v = βx + ᾱy as coefficient vectors in y
  std::vector<std::vector<C>> upow(n + 1), vpow(n + 1);
  upow[0] = {C(1)};
  vpow[0] = {C(1)};
  const C u0 = al, u1 = zero - conj_of(be), v0 = be, v1 = conj_of(al);
  for (int k = 1; k <= n; ++k) {
    upow[k].assign(k + 1, zero);
    vpow[k].assign(k + 1, zero);
    for (int j = 0; j < k; ++j) {
      upow[k][j] = upow[k][j] + upow[k - 1][j] * u0;
      upow[k][j + 1] = upow[k][j + 1] + upow[k - 1][j] * u1;
      vpow[k][j] = vpow[k][j] + vpow[k - 1][j] * v0;
      vpow[k][j + 1] = vpow[k][j + 1] + vpow[k - 1][j] * v1;
    }
  }
  BinaryForm<C> out(n);
  for (int k = 0; k <= n; ++k) {
    if (scalar_is_zero(f.coeffs[k])) continue;
    const auto& a = upow[n - k];
    const auto& b = vpow[k];
    const C fk = C(f.coeffs[k]);
    for (int i = 0; i <= n - k; ++i) {
      if (scalar_is_zero(a[i])) continue;
      C ai = a[i] * fk;
      for (int j = 0; j <= k; ++j) out.coeffs[i + j] = out.coeffs[i + j] + ai * b[j];
    }
  }
  return out;
}

template <class R, class S>
auto act(const Quaternion<R>& z, const BinaryForm<S>& f) {
  return act_ab(alpha_of(z), beta_of(z), f);
}

// A_j(z): the e_j-coefficient of I₁₂ transported by z.
template <class R>
auto coefficient_A(int j, const Quaternion<R>& z) {
  if (j < 0 || j > 12) throw std::out_of_range("coefficient_A: j outside 0..12");
  using C = decltype(alpha_of(z));
  return act(z, invariant_I12<C>()).coeffs[j];
}

template <class R>
auto all_coefficients_A(const Quaternion<R>& z) {
  using C = decltype(alpha_of(z));
  return act(z, invariant_I12<C>()).coeffs;
}

// Winding number ℓ/(2m) of the weight-ℓ function A_j on an order-m exceptional circle.
inline std::optional<int> restriction_frequency(int j, int m) {
  int ell = 12 - 2 * j;
  if (ell % (2 * m) != 0) return std::nullopt;
  return ell / (2 * m);
}

}  // namespace dodeca

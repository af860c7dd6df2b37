#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <map>
#include <stdexcept>
#include <vector>

#include "dodeca/exactnum.hpp"

namespace dodeca {

// q = a + b𝑖 + c𝑗 + d𝑘, identified with (α, β) = (a + bi, c + di).
template <class S>
struct Quaternion {
  S a{}, b{}, c{}, d{};

  friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d, p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b, p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
  }
  friend Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
  }
  friend Quaternion operator-(const Quaternion& p, const Quaternion& q) {
    return {p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d};
  }
  Quaternion operator-() const { return {-a, -b, -c, -d}; }
  friend bool operator==(const Quaternion& p, const Quaternion& q) {
    return p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d;
  }
  Quaternion conjugate() const { return {a, -b, -c, -d}; }
  S norm2() const { return a * a + b * b + c * c + d * d; }
};

using Quatd = Quaternion<double>;
using ExactScalar = Ext<Sin36Tag>;
using ExactQuat = Quaternion<ExactScalar>;
using UnitQuaternion = Quatd;

inline std::complex<double> make_complex(double re, double im) { return {re, im}; }
inline NF make_complex(const NF& re, const NF& im) { return re + NF::i() * im; }
template <class Tag>
Ext<Tag> make_complex(const Ext<Tag>& re, const Ext<Tag>& im) {
  return re + Ext<Tag>(NF::i()) * im;
}

template <class S>
auto alpha_of(const Quaternion<S>& q) {
  return make_complex(q.a, q.b);
}
template <class S>
auto beta_of(const Quaternion<S>& q) {
  return make_complex(q.c, q.d);
}

inline Quatd from_alpha_beta(std::complex<double> al, std::complex<double> be) {
  return {al.real(), al.imag(), be.real(), be.imag()};
}

template <class S>
Quatd to_double(const Quaternion<S>& q) {
  return {q.a.to_double(), q.b.to_double(), q.c.to_double(), q.d.to_double()};
}
inline Quatd to_double(const Quatd& q) { return q; }

inline double distance(const Quatd& p, const Quatd& q) { return std::sqrt((p - q).norm2()); }
inline double dot(const Quatd& p, const Quatd& q) { return p.a * q.a + p.b * q.b + p.c * q.c + p.d * q.d; }
inline Quatd normalized(const Quatd& q) {
  double n = std::sqrt(q.norm2());
  return {q.a / n, q.b / n, q.c / n, q.d / n};
}

// exp(s₁𝑖 + s₂𝑗 + s₃𝑘)
inline Quatd exp_pure(double s1, double s2, double s3) {
  double t = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
  if (t < 1e-300) return {1, 0, 0, 0};
  double f = std::sin(t) / t;
  return {std::cos(t), s1 * f, s2 * f, s3 * f};
}

using Vec3 = std::array<double, 3>;

// 𝔥(α,β) = (2Re(αβ̄), 2Im(αβ̄), |α|²−|β|²)
template <class S>
std::array<S, 3> hopf(const Quaternion<S>& q) {
  S two(2);
  return {two * (q.a * q.c + q.b * q.d), two * (q.b * q.c - q.a * q.d),
          q.a * q.a + q.b * q.b - q.c * q.c - q.d * q.d};
}

inline double dist3(const Vec3& x, const Vec3& y) {
  return std::sqrt((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]) + (x[2] - y[2]) * (x[2] - y[2]));
}

// A point of S³ over n ∈ S² (n ≠ south pole).
inline Quatd hopf_section(const Vec3& n) {
  double al = std::sqrt((1 + n[2]) / 2);
  std::complex<double> be = std::complex<double>(n[0], -n[1]) / (2 * al);
  return from_alpha_beta(al, be);
}

struct GroupTable {
  std::vector<ExactQuat> exact;
  std::vector<Quatd> elements;
  std::vector<std::vector<int>> product;
  std::vector<int> inverse;
  int identity = 0;

  std::size_t size() const { return elements.size(); }

  int find(const Quatd& q, double tol = 1e-9) const {
    for (std::size_t k = 0; k < elements.size(); ++k)
      if (distance(elements[k], q) < tol) return static_cast<int>(k);
    return -1;
  }

  int element_order(int k) const {
    int ord = 1;
    int x = k;
    while (x != identity) {
      x = product[x][k];
      ++ord;
    }
    return ord;
  }

  std::map<int, int> order_histogram() const {
    std::map<int, int> h;
    for (std::size_t k = 0; k < size(); ++k) ++h[element_order(static_cast<int>(k))];
    return h;
  }
};

// Closure of the generators under multiplication, exact throughout.
inline GroupTable generate_group(const std::vector<ExactQuat>& generators, std::size_t product_bound = 10000) {
  GroupTable g;
  ExactQuat one{ExactScalar(1), ExactScalar(0), ExactScalar(0), ExactScalar(0)};
  auto lookup = [&](const ExactQuat& q, const Quatd& qd) -> int {
    for (std::size_t k = 0; k < g.elements.size(); ++k)
      if (distance(g.elements[k], qd) < 1e-9 && g.exact[k] == q) return static_cast<int>(k);
    return -1;
  };
  g.exact.push_back(one);
  g.elements.push_back(to_double(one));
  std::deque<int> queue{0};
  std::size_t products = 0;
  while (!queue.empty()) {
    int k = queue.front();
    queue.pop_front();
    for (const auto& gen : generators) {
      if (++products > product_bound) throw std::runtime_error("generate_group: no closure within product bound");
      ExactQuat y = g.exact[k] * gen;
      Quatd yd = to_double(y);
      if (lookup(y, yd) < 0) {
        g.exact.push_back(y);
        g.elements.push_back(yd);
        queue.push_back(static_cast<int>(g.exact.size() - 1));
      }
    }
  }
  const std::size_t n = g.size();
  g.product.assign(n, std::vector<int>(n, -1));
  g.inverse.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ExactQuat y = g.exact[i] * g.exact[j];
      int k = lookup(y, to_double(y));
      if (k < 0) throw std::logic_error("generate_group: table not closed");
      g.product[i][j] = k;
      if (k == 0) g.inverse[i] = static_cast<int>(j);
    }
  for (std::size_t i = 0; i < n; ++i)
    if (g.inverse[i] < 0) throw std::logic_error("generate_group: missing inverse");
  return g;
}

// Generators of Klein's icosahedral stabilizer of I₁₂ = x¹¹y + 11x⁶y⁶ − xy¹¹.
inline std::vector<ExactQuat> klein_generators() {
  const NF tau = NF::tau();
  const NF inv_sqrt5 = NF::basis(4, rat(1, 5));
  const NF cos72 = tau * NF(rat(1, 2)) - NF(rat(1, 2));
  const ExactScalar sigma = ExactScalar::root();  // sin 36°
  const ExactScalar sin72 = ExactScalar(tau) * sigma;
  ExactQuat s{ExactScalar(cos72), sin72, ExactScalar(0), ExactScalar(0)};
  ExactQuat u{ExactScalar(0), ExactScalar(0), ExactScalar(-1), ExactScalar(0)};
  ExactQuat t{ExactScalar(0), ExactScalar(NF(-2) * inv_sqrt5) * sin72, ExactScalar(0),
              ExactScalar(NF(2) * inv_sqrt5) * sigma};
  return {s, u, t};
}

// Icosian pair: ½(1,1,1,1) and (τ/2, 1/(2τ), ½, 0).
inline std::vector<ExactQuat> icosian_generators() {
  const NF half(rat(1, 2));
  const NF tau = NF::tau();
  ExactQuat g1{ExactScalar(half), ExactScalar(half), ExactScalar(half), ExactScalar(half)};
  ExactQuat g2{ExactScalar(tau * half), ExactScalar((tau - NF(1)) * half), ExactScalar(half), ExactScalar(0)};
  return {g1, g2};
}

inline const GroupTable& binary_icosahedral() {
  static const GroupTable g = generate_group(klein_generators());
  return g;
}

inline int fiber_stabilizer_order(const Quatd& z, const GroupTable& g, double tol = 1e-9) {
  Vec3 hz = hopf(z);
  int count = 0;
  for (const auto& h : g.elements)
    if (dist3(hopf(z * h), hz) < tol) ++count;
  return count;
}

inline bool same_coset(const Quatd& z1, const Quatd& z2, const GroupTable& g, double tol = 1e-9) {
  for (const auto& h : g.elements)
    if (distance(z1 * h, z2) < tol) return true;
  return false;
}

inline double min_coset_separation(const GroupTable& g) {
  double best = 1e300;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (static_cast<int>(k) != g.identity) best = std::min(best, distance(g.elements[k], Quatd{1, 0, 0, 0}));
  return best;
}

inline std::vector<Vec3> hopf_orbit(const Quatd& z, const GroupTable& g, double tol = 1e-9) {
  std::vector<Vec3> orbit;
  for (const auto& h : g.elements) {
    Vec3 p = hopf(z * h);
    bool seen = false;
    for (const auto& o : orbit)
      if (dist3(o, p) < tol) {
        seen = true;
        break;
      }
    if (!seen) orbit.push_back(p);
  }
  return orbit;
}

// Exact exceptional lifts.
inline ExactQuat z5_exact() { return {ExactScalar(1), ExactScalar(0), ExactScalar(0), ExactScalar(0)}; }
inline ExactQuat z2_exact() {
  ExactScalar h(NF::basis(1, rat(1, 2)));  // 1/√2
  return {ExactScalar(0), h, h, ExactScalar(0)};
}

// The order-3 point (r, s e^{-iπ/4}) with r² = (1+1/√3)/2, s² = (1−1/√3)/2.
using Z3Scalar = Ext<Z3Tag>;
inline Quaternion<Z3Scalar> z3_exact() {
  const Z3Scalar r = Z3Scalar::root();
  // s = r / (√6 r²)
  const NF k = (NF::basis(3) * Z3Tag::square()).inverse();
  const Z3Scalar s = r * Z3Scalar(k);
  const Z3Scalar over_sqrt2(NF::basis(1, rat(1, 2)));
  return {r, Z3Scalar(0), s * over_sqrt2, -(s * over_sqrt2)};
}

inline Quatd z5() { return to_double(z5_exact()); }
inline Quatd z2() { return to_double(z2_exact()); }
inline Quatd z3() { return to_double(z3_exact()); }

// Rotation of S² induced by z ↦ z·h through the Hopf map.
inline std::array<Vec3, 3> hopf_rotation(const Quatd& h) {
  std::array<Vec3, 3> cols;
  const Vec3 e[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int k = 0; k < 3; ++k) cols[k] = hopf(hopf_section(e[k]) * h);
  return cols;
}

// A genuine order-3 exceptional lift: the face center nearest the vertex 𝔥(z₅), largest x.
inline Quatd z3_face_lift(const GroupTable& g) {
  std::vector<Vec3> axes;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.element_order(static_cast<int>(k)) != 6) continue;
    auto R = hopf_rotation(g.elements[k]);
    // axis from the antisymmetric part of the rotation matrix (columns R[j])
    Vec3 ax{R[1][2] - R[2][1], R[2][0] - R[0][2], R[0][1] - R[1][0]};
    double n = std::sqrt(ax[0] * ax[0] + ax[1] * ax[1] + ax[2] * ax[2]);
    for (double sgn : {1.0, -1.0}) axes.push_back({sgn * ax[0] / n, sgn * ax[1] / n, sgn * ax[2] / n});
  }
  std::sort(axes.begin(), axes.end(), [](const Vec3& p, const Vec3& q) {
    if (std::abs(p[2] - q[2]) > 1e-9) return p[2] > q[2];
    return p[0] > q[0];
  });
  return hopf_section(axes.front());
}

}  // namespace dodeca

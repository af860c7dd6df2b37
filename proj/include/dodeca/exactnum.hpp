#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dodeca {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace detail {

// Basis index bits: 1 = √2, 2 = √3, 4 = √5, 8 = i.
constexpr int kFieldDim = 16;

constexpr int basis_product_factor(int a, int b) {
  int common = a & b;
  int f = 1;
  if (common & 1) f *= 2;
  if (common & 2) f *= 3;
  if (common & 4) f *= 5;
  if (common & 8) f *= -1;
  return f;
}

constexpr std::array<int, 256> make_product_table() {
  std::array<int, 256> t{};
  for (int a = 0; a < kFieldDim; ++a)
    for (int b = 0; b < kFieldDim; ++b) t[a * kFieldDim + b] = basis_product_factor(a, b);
  return t;
}

inline constexpr std::array<int, 256> kProductTable = make_product_table();

constexpr int popcount4(int x) { return (x & 1) + ((x >> 1) & 1) + ((x >> 2) & 1) + ((x >> 3) & 1); }

inline constexpr unsigned kFloatBits = 256;

inline const std::array<mpf_class, 8>& surds() {
  static const std::array<mpf_class, 8> s = [] {
    std::array<mpf_class, 8> out;
    for (int k = 0; k < 8; ++k) {
      long v = 1;
      if (k & 1) v *= 2;
      if (k & 2) v *= 3;
      if (k & 4) v *= 5;
      mpf_class x(v, kFloatBits);
      out[k] = mpf_class(sqrt(x), kFloatBits);
    }
    return out;
  }();
  return s;
}

}  // namespace detail

class NumberFieldElement {
 public:
  NumberFieldElement() = default;
  NumberFieldElement(long v) { c_[0] = v; }
  NumberFieldElement(const Rational& v) { c_[0] = v; }

  static NumberFieldElement basis(int k, const Rational& coef = 1) {
    NumberFieldElement e;
    e.c_.at(k) = coef;
    return e;
  }
  static NumberFieldElement i() { return basis(8); }
  static NumberFieldElement sqrt2() { return basis(1); }
  static NumberFieldElement sqrt3() { return basis(2); }
  static NumberFieldElement sqrt5() { return basis(4); }
  static NumberFieldElement tau() { return basis(0, rat(1, 2)) + basis(4, rat(1, 2)); }

  const Rational& coord(int k) const { return c_.at(k); }
  const std::array<Rational, 16>& coords() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (sgn(x) != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (int k = 1; k < 16; ++k)
      if (sgn(c_[k]) != 0) return false;
    return true;
  }
  bool is_real() const {
    for (int k = 8; k < 16; ++k)
      if (sgn(c_[k]) != 0) return false;
    return true;
  }

  NumberFieldElement& operator+=(const NumberFieldElement& o) {
    for (int k = 0; k < 16; ++k) c_[k] += o.c_[k];
    return *this;
  }
  NumberFieldElement& operator-=(const NumberFieldElement& o) {
    for (int k = 0; k < 16; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  NumberFieldElement& operator*=(const NumberFieldElement& o) { return *this = *this * o; }
  NumberFieldElement& operator/=(const NumberFieldElement& o) { return *this = *this * o.inverse(); }

  friend NumberFieldElement operator+(NumberFieldElement a, const NumberFieldElement& b) { return a += b; }
  friend NumberFieldElement operator-(NumberFieldElement a, const NumberFieldElement& b) { return a -= b; }
  friend NumberFieldElement operator/(NumberFieldElement a, const NumberFieldElement& b) { return a /= b; }
  NumberFieldElement operator-() const {
    NumberFieldElement r;
    for (int k = 0; k < 16; ++k) r.c_[k] = -c_[k];
    return r;
  }

  friend NumberFieldElement operator*(const NumberFieldElement& a, const NumberFieldElement& b) {
    NumberFieldElement r;
    Rational t;
    for (int p = 0; p < 16; ++p) {
      if (sgn(a.c_[p]) == 0) continue;
      for (int q = 0; q < 16; ++q) {
        if (sgn(b.c_[q]) == 0) continue;
        t = a.c_[p] * b.c_[q];
        int f = detail::kProductTable[p * 16 + q];
        if (f != 1) t *= f;
        r.c_[p ^ q] += t;
      }
    }
    return r;
  }

  friend bool operator==(const NumberFieldElement& a, const NumberFieldElement& b) { return a.c_ == b.c_; }
  friend bool operator!=(const NumberFieldElement& a, const NumberFieldElement& b) { return !(a == b); }

  // Field automorphism flipping the signs of the generators selected by mask.
  NumberFieldElement galois(int mask) const {
    NumberFieldElement r = *this;
    for (int k = 0; k < 16; ++k)
      if (detail::popcount4(k & mask) & 1) r.c_[k] = -r.c_[k];
    return r;
  }
  NumberFieldElement conj() const { return galois(8); }

  NumberFieldElement real_part() const {
    NumberFieldElement r = *this;
    for (int k = 8; k < 16; ++k) r.c_[k] = 0;
    return r;
  }
  NumberFieldElement imag_part() const {
    NumberFieldElement r;
    for (int k = 0; k < 8; ++k) r.c_[k] = c_[k + 8];
    return r;
  }

  NumberFieldElement inverse() const {
    if (is_zero()) throw std::domain_error("NumberFieldElement: division by zero");
    NumberFieldElement x = *this;
    NumberFieldElement num(1);
    for (int mask : {1, 2, 4, 8}) {
      NumberFieldElement c = x.galois(mask);
      num = num * c;
      x = x * c;
    }
    if (!x.is_rational()) throw std::logic_error("NumberFieldElement: norm is not rational");
    Rational inv_norm = 1 / x.c_[0];
    for (auto& v : num.c_) v *= inv_norm;
    return num;
  }

  // Real and imaginary parts at extended precision.
  std::pair<mpf_class, mpf_class> to_mpf() const {
    const auto& s = detail::surds();
    mpf_class re(0, detail::kFloatBits), im(0, detail::kFloatBits);
    for (int k = 0; k < 8; ++k) {
      if (sgn(c_[k]) != 0) re += mpf_class(c_[k], detail::kFloatBits) * s[k];
      if (sgn(c_[k + 8]) != 0) im += mpf_class(c_[k + 8], detail::kFloatBits) * s[k];
    }
    return {re, im};
  }

  std::complex<double> to_complex() const {
    auto [re, im] = to_mpf();
    return {re.get_d(), im.get_d()};
  }
  double to_double() const { return to_complex().real(); }

  std::string to_string() const {
    static const char* names[8] = {"", "√2", "√3", "√6", "√5", "√10", "√15", "√30"};
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < 16; ++k) {
      if (sgn(c_[k]) == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << c_[k].get_str() << ")";
      if (k & 7) os << names[k & 7];
      if (k & 8) os << "i";
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  std::array<Rational, 16> c_{};
};

using NF = NumberFieldElement;

inline NF nf_add(const NF& a, const NF& b) { return a + b; }
inline NF nf_mul(const NF& a, const NF& b) { return a * b; }
inline NF nf_neg(const NF& a) { return -a; }
inline NF nf_inv(const NF& a) { return a.inverse(); }
inline std::complex<double> nf_to_float(const NF& a) { return a.to_complex(); }

// Exact quadratic extension NF(r), r = sqrt(Tag::square()) with Tag::square() real and positive.
template <class Tag>
class Ext {
 public:
  Ext() = default;
  Ext(long v) : a_(v) {}
  Ext(const NF& a) : a_(a) {}
  Ext(const NF& a, const NF& b) : a_(a), b_(b) {}

  static Ext root() { return Ext(NF(0), NF(1)); }

  const NF& base() const { return a_; }
  const NF& radical() const { return b_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool in_base() const { return b_.is_zero(); }

  Ext& operator+=(const Ext& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  Ext& operator-=(const Ext& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  Ext& operator*=(const Ext& o) { return *this = *this * o; }
  friend Ext operator+(Ext x, const Ext& y) { return x += y; }
  friend Ext operator-(Ext x, const Ext& y) { return x -= y; }
  Ext operator-() const { return Ext(-a_, -b_); }
  friend Ext operator*(const Ext& x, const Ext& y) {
    NF bb = x.b_ * y.b_;
    NF re = x.a_ * y.a_;
    if (!bb.is_zero()) re += bb * Tag::square();
    return Ext(re, x.a_ * y.b_ + x.b_ * y.a_);
  }
  friend Ext operator/(const Ext& x, const Ext& y) { return x * y.inverse(); }
  friend bool operator==(const Ext& x, const Ext& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator!=(const Ext& x, const Ext& y) { return !(x == y); }

  Ext conj() const { return Ext(a_.conj(), b_.conj()); }
  Ext real_part() const { return Ext(a_.real_part(), b_.real_part()); }
  Ext imag_part() const { return Ext(a_.imag_part(), b_.imag_part()); }

  Ext inverse() const {
    NF n = a_ * a_ - b_ * b_ * Tag::square();
    NF ni = n.inverse();
    return Ext(a_ * ni, -(b_ * ni));
  }

  static const mpf_class& root_mpf() {
    static const mpf_class r = [] {
      auto [re, im] = Tag::square().to_mpf();
      return mpf_class(sqrt(re), detail::kFloatBits);
    }();
    return r;
  }

  std::complex<double> to_complex() const {
    auto [ar, ai] = a_.to_mpf();
    auto [br, bi] = b_.to_mpf();
    const mpf_class& r = root_mpf();
    mpf_class re = ar + br * r;
    mpf_class im = ai + bi * r;
    return {re.get_d(), im.get_d()};
  }
  double to_double() const { return to_complex().real(); }

  std::string to_string() const {
    if (b_.is_zero()) return a_.to_string();
    return a_.to_string() + " + [" + b_.to_string() + "]r";
  }

 private:
  NF a_, b_;
};

// sin 36°, sin²36° = (5 - √5)/8.
struct Sin36Tag {
  static const NF& square() {
    static const NF s = NF(rat(5, 8)) - NF::basis(4, rat(1, 8));
    return s;
  }
};

// r = sqrt((1 + 1/√3)/2), r² = (3 + √3)/6.
struct Z3Tag {
  static const NF& square() {
    static const NF s = NF(rat(1, 2)) + NF::basis(2, rat(1, 6));
    return s;
  }
};

inline NF conj_of(const NF& x) { return x.conj(); }
template <class Tag>
Ext<Tag> conj_of(const Ext<Tag>& x) {
  return x.conj();
}
inline std::complex<double> conj_of(const std::complex<double>& x) { return std::conj(x); }
inline double conj_of(double x) { return x; }

}  // namespace dodeca

#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include "dodeca/binform.hpp"
#include "dodeca/spherepoly.hpp"

namespace dodeca {

using cd = std::complex<double>;
using Mat3d = std::array<std::array<double, 3>, 3>;

// Value, gradient and Hessian of a function on S³ in the orthonormal frame V_a(p) = e_a·p,
// e = (𝑖, 𝑗, 𝑘). The frame fields are Killing, so the Riemannian Hessian is ½(V_aV_b + V_bV_a)f.
struct Jet {
  double value = 0;
  std::array<double, 3> grad{};
  Mat3d hess{};
};

inline Quatd frame_vector(int a, const Quatd& p) {
  static const Quatd e[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  return e[a] * p;
}

// d/dt B(exp(t e_a)·z) for B(z) = act(z, f) of degree n.
inline std::vector<cd> frame_derivative(int a, const std::vector<cd>& B) {
  const int n = static_cast<int>(B.size()) - 1;
  std::vector<cd> out(n + 1);
  const cd I(0, 1);
  for (int m = 0; m <= n; ++m) {
    cd up = m < n ? B[m + 1] : cd(0);
    cd dn = m > 0 ? B[m - 1] : cd(0);
    switch (a) {
      case 0: out[m] = I * double(n - 2 * m) * B[m]; break;
      case 1: out[m] = double(m + 1) * up - double(n - m + 1) * dn; break;
      default: out[m] = I * (double(m + 1) * up + double(n - m + 1) * dn); break;
    }
  }
  return out;
}

inline cd weighted_sum(const std::vector<cd>& w, const std::vector<cd>& B) {
  cd s = 0;
  for (std::size_t m = 0; m < w.size(); ++m) s += w[m] * B[m];
  return s;
}

class S3Function {
 public:
  virtual ~S3Function() = default;
  virtual double value(const Quatd& z) const = 0;
  virtual Jet jet(const Quatd& z) const = 0;
};

// f(z) = Re Σ_terms Σ_m w_m ⟨e_m, act(z, form)⟩
class FormFunction : public S3Function {
 public:
  struct Term {
    BinaryForm<cd> form;
    std::vector<cd> weights;
  };

  FormFunction() = default;
  FormFunction(const BinaryForm<cd>& form, std::vector<cd> weights) { add_term(form, std::move(weights)); }

  const std::vector<Term>& terms() const { return terms_; }

  void add_term(const BinaryForm<cd>& form, std::vector<cd> weights) {
    if (static_cast<int>(weights.size()) != form.degree + 1)
      throw std::invalid_argument("FormFunction: weight length must be degree + 1");
    for (auto& t : terms_)
      if (t.form == form) {
        for (std::size_t m = 0; m < weights.size(); ++m) t.weights[m] += weights[m];
        return;
      }
    terms_.push_back({form, std::move(weights)});
  }

  friend FormFunction operator+(FormFunction f, const FormFunction& g) {
    for (const auto& t : g.terms_) f.add_term(t.form, t.weights);
    return f;
  }
  friend FormFunction operator*(double s, FormFunction f) {
    for (auto& t : f.terms_)
      for (auto& w : t.weights) w *= s;
    return f;
  }
  friend FormFunction operator-(const FormFunction& f, const FormFunction& g) { return f + (-1.0) * g; }

  double value(const Quatd& z) const override {
    double v = 0;
    for (const auto& t : terms_) v += weighted_sum(t.weights, act(z, t.form).coeffs).real();
    return v;
  }

  Jet jet(const Quatd& z) const override {
    Jet J;
    for (const auto& t : terms_) {
      auto B = act(z, t.form).coeffs;
      J.value += weighted_sum(t.weights, B).real();
      std::array<std::vector<cd>, 3> D;
      for (int a = 0; a < 3; ++a) {
        D[a] = frame_derivative(a, B);
        J.grad[a] += weighted_sum(t.weights, D[a]).real();
      }
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
          auto ab = frame_derivative(a, D[b]);
          auto ba = frame_derivative(b, D[a]);
          double h = 0.5 * (weighted_sum(t.weights, ab) + weighted_sum(t.weights, ba)).real();
          J.hess[a][b] += h;
          if (a != b) J.hess[b][a] += h;
        }
    }
    return J;
  }

 private:
  std::vector<Term> terms_;
};

// A real polynomial on ℝ⁴ restricted to S³; derivatives through the ambient gradient and Hessian.
class PolyFunction : public S3Function {
 public:
  explicit PolyFunction(PolyD f) : f_(std::move(f)) {
    for (int i = 0; i < 4; ++i) {
      grad_[i] = f_.derivative(i);
      for (int j = 0; j < 4; ++j) hess_[i][j] = grad_[i].derivative(j);
    }
  }
  double value(const Quatd& z) const override { return f_.evaluate(z); }
  Jet jet(const Quatd& z) const override {
    std::array<double, 4> g;
    std::array<std::array<double, 4>, 4> H;
    for (int i = 0; i < 4; ++i) {
      g[i] = grad_[i].evaluate(z);
      for (int j = 0; j < 4; ++j) H[i][j] = hess_[i][j].evaluate(z);
    }
    auto vec = [](const Quatd& q) { return std::array<double, 4>{q.a, q.b, q.c, q.d}; };
    std::array<std::array<double, 4>, 3> V;
    for (int a = 0; a < 3; ++a) V[a] = vec(frame_vector(a, z));
    Jet J;
    J.value = f_.evaluate(z);
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 4; ++i) J.grad[a] += g[i] * V[a][i];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double h = 0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) h += V[a][i] * H[i][j] * V[b][j];
        // first-order term ∇f·(e_b e_a p), symmetrized
        auto ba = vec(frame_vector(b, frame_vector(a, z)));
        auto ab = vec(frame_vector(a, frame_vector(b, z)));
        for (int i = 0; i < 4; ++i) h += 0.5 * g[i] * (ba[i] + ab[i]);
        J.hess[a][b] = h;
      }
    return J;
  }

 private:
  PolyD f_;
  std::array<PolyD, 4> grad_;
  std::array<std::array<PolyD, 4>, 4> hess_;
};

// Finite-difference jet along exp(s e_a)·z; used to cross-check the exact frame derivatives.
inline Jet finite_difference_jet(const S3Function& f, const Quatd& z, double h = 1e-4) {
  Jet J;
  J.value = f.value(z);
  auto shifted = [&](double s0, double s1, double s2) { return f.value(exp_pure(s0, s1, s2) * z); };
  for (int a = 0; a < 3; ++a) {
    std::array<double, 3> e{};
    e[a] = h;
    double fp = shifted(e[0], e[1], e[2]), fm = shifted(-e[0], -e[1], -e[2]);
    J.grad[a] = (fp - fm) / (2 * h);
    J.hess[a][a] = (fp - 2 * J.value + fm) / (h * h);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      std::array<double, 3> p{}, q{};
      p[a] = h;
      p[b] = h;
      q[a] = h;
      q[b] = -h;
      double fpp = shifted(p[0], p[1], p[2]), fmm = shifted(-p[0], -p[1], -p[2]);
      double fpm = shifted(q[0], q[1], q[2]), fmp = shifted(-q[0], -q[1], -q[2]);
      J.hess[a][b] = J.hess[b][a] = (fpp + fmm - fpm - fmp) / (4 * h * h);
    }
  return J;
}

inline BinaryForm<cd> I12_form() { return invariant_I12<cd>(); }

// ∫_M |A_j|² exactly, as (field element)·π²/120.
inline std::vector<double> coefficient_norms2() {
  auto W = coefficient_polynomials_wirtinger();
  std::vector<double> out;
  for (const auto& w : W)
    out.push_back((w * w.conj()).integral_over_pi2().to_double() * M_PI * M_PI / kGroupOrder);
  return out;
}

// Re(c·A_j) as a FormFunction.
inline FormFunction coefficient_function(int j, cd c = 1.0) {
  std::vector<cd> w(13, 0.0);
  w.at(j) = c;
  return FormFunction(I12_form(), w);
}

// F₀ = hopf_lift(P̃ in Klein's frame) = c·A₆, with c read off at the identity where A₆ = 11.
inline double seed_scale() {
  static const double c = sextic_in_klein_frame().evaluate(std::array<double, 4>{0, 0, 1, 0}) / 11.0;
  return c;
}

inline FormFunction seed_function() { return coefficient_function(6, seed_scale()); }

// F_{a,b} = F₀ + a·Re A₀ + b·Re A₁
inline FormFunction fab_function(double a, double b) {
  return seed_function() + coefficient_function(0, a) + coefficient_function(1, b);
}

// Ψ = F₀ + ε₂·Re A₄ + ε₃·Re A₃ + ε₅·Re A₁
inline FormFunction psi_function(double e2, double e3, double e5) {
  return seed_function() + coefficient_function(4, e2) + coefficient_function(3, e3) + coefficient_function(1, e5);
}

// Real L²(M)-orthonormal basis of E: φ₀ = A₆/‖A₆‖, then √2 Re A_j/‖A_j‖, √2 Im A_j/‖A_j‖ for j = 0..5.
struct EigenBasis {
  std::vector<FormFunction> phi;
  // complex weights on (A_0..A_12) of each φ_i
  std::vector<std::vector<cd>> weights;

  std::size_t size() const { return phi.size(); }

  FormFunction combine(const Eigen::VectorXd& c) const {
    std::vector<cd> w(13, 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i)
      for (int m = 0; m <= 12; ++m) w[m] += c(i) * weights[i][m];
    return FormFunction(I12_form(), w);
  }
  Eigen::VectorXd values(const Quatd& z) const {
    auto B = all_coefficients_A(z);
    Eigen::VectorXd v(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) v(i) = weighted_sum(weights[i], B).real();
    return v;
  }
  // rows: basis functions; columns: frame directions
  Eigen::MatrixXd gradients(const Quatd& z) const {
    auto B = all_coefficients_A(z);
    Eigen::MatrixXd G(weights.size(), 3);
    for (int a = 0; a < 3; ++a) {
      auto D = frame_derivative(a, B);
      for (std::size_t i = 0; i < weights.size(); ++i) G(i, a) = weighted_sum(weights[i], D).real();
    }
    return G;
  }
};

inline const EigenBasis& eigen_basis() {
  static const EigenBasis basis = [] {
    EigenBasis b;
    auto n2 = coefficient_norms2();
    auto push = [&](int j, cd c) {
      std::vector<cd> w(13, 0.0);
      w[j] = c;
      b.weights.push_back(w);
      b.phi.emplace_back(I12_form(), w);
    };
    push(6, 1.0 / std::sqrt(n2[6]));
    for (int j = 0; j <= 5; ++j) {
      double s = std::sqrt(2.0 / n2[j]);
      push(j, s);
      push(j, cd(0, -s));
    }
    return b;
  }();
  return basis;
}

// dim (Sym^n)^{I*} by averaging the character sin((n+1)θ)/sin θ, cos θ = Re h.
inline int invariant_dimension(int n, const GroupTable& g) {
  double acc = 0;
  for (const auto& h : g.elements) {
    double c = std::clamp(h.a, -1.0, 1.0);
    if (std::abs(c - 1) < 1e-12) {
      acc += n + 1;
    } else if (std::abs(c + 1) < 1e-12) {
      acc += (n % 2 ? -1.0 : 1.0) * (n + 1);
    } else {
      double th = std::acos(c);
      acc += std::sin((n + 1) * th) / std::sin(th);
    }
  }
  return static_cast<int>(std::lround(acc / g.size()));
}

// Invariant forms of degree n: monomials I₁₂^a T₂₀^b T₃₀^c with c ≤ 1.
inline std::vector<BinaryForm<cd>> invariant_forms(int n) {
  std::vector<BinaryForm<cd>> out;
  auto I = invariant_I12<cd>(), T = invariant_T20<cd>(), J = invariant_T30<cd>();
  for (int c = 0; c <= 1; ++c)
    for (int b = 0; 20 * b + 30 * c <= n; ++b) {
      int rest = n - 20 * b - 30 * c;
      if (rest % 12) continue;
      BinaryForm<cd> f(0, {cd(1)});
      for (int k = 0; k < rest / 12; ++k) f = f * I;
      for (int k = 0; k < b; ++k) f = f * T;
      if (c) f = f * J;
      out.push_back(f);
    }
  return out;
}

// One degree-n block: functions Re(W.row(r)·act(z, forms[s])) summed over s, orthonormal on M.
struct InvariantBlock {
  int degree = 0;
  std::vector<BinaryForm<cd>> forms;
  // weights[r][s] is the weight vector for basis function r on forms[s]
  std::vector<std::vector<std::vector<cd>>> weights;
  int dimension() const { return static_cast<int>(weights.size()); }
  double eigenvalue() const { return degree * (degree + 2.0); }
};

struct InvariantBasis {
  int N = 0;
  std::vector<InvariantBlock> blocks;
  int size() const {
    int s = 0;
    for (const auto& b : blocks) s += b.dimension();
    return s;
  }
  std::vector<double> eigenvalues() const {
    std::vector<double> ev;
    for (const auto& b : blocks)
      for (int r = 0; r < b.dimension(); ++r) ev.push_back(b.eigenvalue());
    return ev;
  }
  int offset(int degree) const {
    int s = 0;
    for (const auto& b : blocks) {
      if (b.degree == degree) return s;
      s += b.dimension();
    }
    return -1;
  }

  // Values and frame derivatives of all basis functions at z.
  void evaluate(const Quatd& z, double* val, double* d0, double* d1, double* d2) const {
    int col = 0;
    double* ds[3] = {d0, d1, d2};
    for (const auto& b : blocks) {
      std::vector<std::vector<cd>> B, D[3];
      for (const auto& f : b.forms) {
        B.push_back(act(z, f).coeffs);
        if (d0)
          for (int a = 0; a < 3; ++a) D[a].push_back(frame_derivative(a, B.back()));
      }
      for (int r = 0; r < b.dimension(); ++r, ++col) {
        cd v = 0, g[3] = {0, 0, 0};
        for (std::size_t s = 0; s < b.forms.size(); ++s) {
          v += weighted_sum(b.weights[r][s], B[s]);
          if (d0)
            for (int a = 0; a < 3; ++a) g[a] += weighted_sum(b.weights[r][s], D[a][s]);
        }
        val[col] = v.real();
        if (d0)
          for (int a = 0; a < 3; ++a) ds[a][col] = g[a].real();
      }
    }
  }

  FormFunction combine(const Eigen::VectorXd& c) const {
    FormFunction f;
    int col = 0;
    for (const auto& b : blocks)
      for (int r = 0; r < b.dimension(); ++r, ++col)
        for (std::size_t s = 0; s < b.forms.size(); ++s) {
          std::vector<cd> w = b.weights[r][s];
          for (auto& x : w) x *= c(col);
          f.add_term(b.forms[s], w);
        }
    return f;
  }
};

// Orthonormal real basis of right-I*-invariant functions of degree ≤ N (even degrees only carry invariants).
inline InvariantBasis build_invariant_basis(int N, int quad_degree = -1) {
  const auto& g = binary_icosahedral();
  InvariantBasis basis;
  basis.N = N;
  auto quad = make_s3_quadrature(quad_degree > 0 ? quad_degree : 2 * N);
  const double to_M = 1.0 / kGroupOrder;
  for (int n = 0; n <= N; ++n) {
    int k = invariant_dimension(n, g);
    if (k == 0) continue;
    auto forms = invariant_forms(n);
    if (static_cast<int>(forms.size()) != k)
      throw std::runtime_error("build_invariant_basis: invariant forms disagree with character count");
    // raw real functions: Re and Im of every matrix coefficient of every form
    struct Raw {
      int s, m;
      cd c;
    };
    std::vector<Raw> raw;
    for (int s = 0; s < k; ++s)
      for (int m = 0; m <= n; ++m) {
        raw.push_back({s, m, 1.0});
        raw.push_back({s, m, cd(0, -1)});
      }
    const int R = static_cast<int>(raw.size());
    const int P = static_cast<int>(quad.points.size());
    Eigen::MatrixXd V(P, R);
    for (int p = 0; p < P; ++p) {
      std::vector<std::vector<cd>> B;
      for (const auto& f : forms) B.push_back(act(quad.points[p], f).coeffs);
      double w = std::sqrt(quad.weights[p] * to_M);
      for (int r = 0; r < R; ++r) V(p, r) = w * (raw[r].c * B[raw[r].s][raw[r].m]).real();
    }
    Eigen::MatrixXd G = V.transpose() * V;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double top = es.eigenvalues().maxCoeff();
    InvariantBlock block;
    block.degree = n;
    block.forms = forms;
    for (int c = R - 1; c >= 0; --c) {
      double ev = es.eigenvalues()(c);
      if (ev < 1e-10 * top) continue;
      Eigen::VectorXd u = es.eigenvectors().col(c) / std::sqrt(ev);
      std::vector<std::vector<cd>> w(k, std::vector<cd>(n + 1, 0.0));
      for (int r = 0; r < R; ++r) w[raw[r].s][raw[r].m] += u(r) * raw[r].c;
      block.weights.push_back(w);
    }
    if (block.dimension() != (n + 1) * k)
      throw std::runtime_error("build_invariant_basis: block rank differs from (n+1)·dim invariants");
    basis.blocks.push_back(std::move(block));
  }
  return basis;
}

}  // namespace dodeca

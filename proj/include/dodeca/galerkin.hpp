#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dodeca/critscan.hpp"
#include "dodeca/formfield.hpp"
#include "dodeca/splitting.hpp"

namespace dodeca {

struct PerturbedForms {
  double eps = 0;
  Eigen::MatrixXd a;  // ∫ e^{ερ}⟨∇ψ_i,∇ψ_j⟩
  Eigen::MatrixXd m;  // ∫ e^{3ερ}ψ_iψ_j
};

struct GalerkinProblem {
  InvariantBasis V;
  int quad_degree = 0;
  double quad_self_test = 0;
  Eigen::MatrixXd embed_E;  // dim V × 13: V coordinates of φ_i
  std::vector<PerturbedForms> forms;
  const PerturbedForms& at(double eps) const {
    for (const auto& f : forms)
      if (f.eps == eps) return f;
    throw std::out_of_range("GalerkinProblem: no forms at this ε");
  }
};

// Assembles a_ε, m_ε for every ε in the list in one pass over the quadrature.
inline GalerkinProblem assemble_forms(const InvariantBasis& V, const S3Function& rho, const std::vector<double>& eps_list,
                                      int quad_degree = 0, int chunk = 2048) {
  GalerkinProblem gp;
  gp.V = V;
  gp.quad_degree = quad_degree > 0 ? quad_degree : 2 * V.N + 16;
  auto quad = make_s3_quadrature(gp.quad_degree);
  gp.quad_self_test = quadrature_self_test(quad);
  if (gp.quad_self_test > 1e-10) throw std::runtime_error("assemble_forms: quadrature self-test failed");
  const int K = V.size();
  const int P = static_cast<int>(quad.points.size());
  const auto& E = eigen_basis();
  gp.embed_E = Eigen::MatrixXd::Zero(K, 13);
  for (double e : eps_list) {
    if (std::abs(e) > 0.05) throw std::invalid_argument("assemble_forms: |ε| above 0.05");
    gp.forms.push_back({e, Eigen::MatrixXd::Zero(K, K), Eigen::MatrixXd::Zero(K, K)});
  }
  Eigen::MatrixXd val(chunk, K), G[3] = {Eigen::MatrixXd(chunk, K), Eigen::MatrixXd(chunk, K), Eigen::MatrixXd(chunk, K)};
  Eigen::MatrixXd ph(chunk, 13);
  Eigen::VectorXd w(chunk), r(chunk);
  std::vector<double> row(K), d0(K), d1(K), d2(K);
  for (int start = 0; start < P; start += chunk) {
    const int n = std::min(chunk, P - start);
    for (int p = 0; p < n; ++p) {
      const Quatd& z = quad.points[start + p];
      V.evaluate(z, row.data(), d0.data(), d1.data(), d2.data());
      for (int k = 0; k < K; ++k) {
        val(p, k) = row[k];
        G[0](p, k) = d0[k];
        G[1](p, k) = d1[k];
        G[2](p, k) = d2[k];
      }
      ph.row(p) = E.values(z).transpose();
      w(p) = quad.weights[start + p] / kGroupOrder;
      r(p) = rho.value(z);
    }
    auto vt = val.topRows(n);
    gp.embed_E += vt.transpose() * w.head(n).asDiagonal() * ph.topRows(n);
    for (auto& f : gp.forms) {
      Eigen::VectorXd wa = w.head(n).array() * (f.eps * r.head(n).array()).exp();
      Eigen::VectorXd wm = w.head(n).array() * (3 * f.eps * r.head(n).array()).exp();
      for (int a = 0; a < 3; ++a) f.a.noalias() += G[a].topRows(n).transpose() * wa.asDiagonal() * G[a].topRows(n);
      f.m.noalias() += vt.transpose() * wm.asDiagonal() * vt;
    }
  }
  for (auto& f : gp.forms) {
    f.a = 0.5 * (f.a + f.a.transpose());
    f.m = 0.5 * (f.m + f.m.transpose());
  }
  return gp;
}

struct SpectralReport {
  double eps = 0;
  Eigen::VectorXd values;   // ascending, λ₀ = 0 is the constant mode
  Eigen::MatrixXd vectors;  // m_ε-orthonormal columns in V coordinates
  double residual = 0;      // max_k ‖aψ − λmψ‖ / (|λ|‖mψ‖ + ‖aψ‖)
  double lambda1() const { return values(1); }
  double gap() const { return values(2) - values(1); }
  Eigen::VectorXd cluster() const { return values.segment(1, 13); }
  Eigen::VectorXd slopes() const { return (cluster().array() - kLambda) / eps; }
  Eigen::VectorXd phi1() const { return vectors.col(1); }
};

inline SpectralReport solve_branch(const PerturbedForms& f) {
  Eigen::LLT<Eigen::MatrixXd> llt(f.m);
  if (llt.info() != Eigen::Success) throw std::runtime_error("solve_branch: mass matrix not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(f.a, f.m);
  SpectralReport s;
  s.eps = f.eps;
  s.values = es.eigenvalues();
  s.vectors = es.eigenvectors();
  for (int k = 0; k < s.values.size(); ++k) {
    Eigen::VectorXd x = s.vectors.col(k);
    Eigen::VectorXd ax = f.a * x, mx = f.m * x;
    s.residual = std::max(s.residual, (ax - s.values(k) * mx).norm() / (std::abs(s.values(k)) * mx.norm() + ax.norm()));
  }
  return s;
}

// |cos| between a V-coordinate vector and an E-coordinate vector in L²(M, g₀).
inline double alignment_with_E(const GalerkinProblem& gp, const Eigen::VectorXd& xV, const Eigen::VectorXd& yE) {
  Eigen::VectorXd y = gp.embed_E * yE;
  return std::abs(xV.dot(y)) / (xV.norm() * y.norm());
}

struct SlopeComparison {
  Eigen::VectorXd slopes;
  Eigen::VectorXd predicted;
  double error = 0;            // max |sorted slope − sorted eig B^(ρ)|
  double lowest_alignment = 0; // |cos| between φ_ε and the lowest eigenvector of B^(ρ)
};

inline SlopeComparison compare_slopes(const GalerkinProblem& gp, const SpectralReport& s, const SymmetricOperator& Brho) {
  SlopeComparison c;
  c.slopes = s.slopes();
  Spectrum b = spectrum(Brho);
  c.predicted = b.values;
  c.error = (c.slopes - c.predicted).cwiseAbs().maxCoeff();
  c.lowest_alignment = alignment_with_E(gp, s.phi1(), b.lowest());
  return c;
}

// Sample points with values and frame gradients of the basis for the heat-demo distances.
struct SampleSet {
  Eigen::MatrixXd val;
  Eigen::MatrixXd grad[3];
};

inline SampleSet sample_basis(const InvariantBasis& V, int count) {
  SampleSet s;
  const int K = V.size();
  s.val.resize(count, K);
  for (auto& g : s.grad) g.resize(count, K);
  std::vector<double> row(K), d0(K), d1(K), d2(K);
  for (int p = 0; p < count; ++p) {
    V.evaluate(halton_s3(p + 1), row.data(), d0.data(), d1.data(), d2.data());
    for (int k = 0; k < K; ++k) {
      s.val(p, k) = row[k];
      s.grad[0](p, k) = d0[k];
      s.grad[1](p, k) = d1[k];
      s.grad[2](p, k) = d2[k];
    }
  }
  return s;
}

struct HeatReport {
  std::vector<double> times;
  std::vector<double> c0_distance;  // sup |e^{λ₁t}(u − f₀) − f₁φ₁| over the samples
  std::vector<double> c1_distance;  // same for frame gradients
  std::vector<double> norm_identity_error;
  double first_mode = 0;            // f₁ = ⟨f, φ₁⟩_{m_ε}
  double fitted_rate = 0;
  double predicted_rate = 0;        // λ₂ − λ₁
  bool exceptional = false;         // Π₁f = 0
  Eigen::VectorXd final_rescaled;   // e^{λ₁T}(u(T) − f₀) in V coordinates
};

// u(t) = Σ e^{−λ_k t} f_k ψ_k from f in V coordinates.
inline HeatReport heat_demo(const PerturbedForms& forms, const SpectralReport& s, const Eigen::VectorXd& f,
                            const std::vector<double>& times, const SampleSet& samples, double exceptional_tol = 1e-10) {
  HeatReport h;
  h.times = times;
  Eigen::VectorXd fk = s.vectors.transpose() * (forms.m * f);
  const double l1 = s.lambda1();
  h.first_mode = fk(1);
  h.predicted_rate = s.gap();
  h.exceptional = std::abs(fk(1)) <= exceptional_tol * fk.norm();
  for (double t : times) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(fk.size());
    for (int k = 1; k < fk.size(); ++k) c(k) = std::exp(-(s.values(k) - l1) * t) * fk(k);
    Eigen::VectorXd rescaled = s.vectors * c;
    c(1) = 0;
    Eigen::VectorXd diff = s.vectors * c;
    h.c0_distance.push_back((samples.val * diff).cwiseAbs().maxCoeff());
    Eigen::VectorXd g2 = Eigen::VectorXd::Zero(samples.val.rows());
    for (const auto& G : samples.grad) g2 += (G * diff).cwiseAbs2();
    h.c1_distance.push_back(std::sqrt(g2.maxCoeff()));
    // ‖u(t)‖²_{m_ε} against Σ e^{−2λ_k t}|f_k|²
    Eigen::VectorXd uk(fk.size());
    for (int k = 0; k < fk.size(); ++k) uk(k) = std::exp(-s.values(k) * t) * fk(k);
    Eigen::VectorXd u = s.vectors * uk;
    h.norm_identity_error.push_back(std::abs(u.dot(forms.m * u) - uk.squaredNorm()) / std::max(fk.squaredNorm(), 1e-300));
    h.final_rescaled = rescaled;
  }
  if (!h.exceptional && times.size() >= 2) {
    // least-squares slope of log distance against t
    double st = 0, sl = 0, stt = 0, stl = 0;
    const double n = static_cast<double>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      double l = std::log(h.c0_distance[i]);
      st += times[i];
      sl += l;
      stt += times[i] * times[i];
      stl += times[i] * l;
    }
    h.fitted_rate = -(n * stl - st * sl) / (n * stt - st * st);
  }
  return h;
}

// Late-time window: modes decaying faster than 1.5(λ₂ − λ₁) are suppressed by e^{−7}; the window spans three
// e-folds of the slowest remainder mode.
inline std::vector<double> default_heat_times(const SpectralReport& s, int count = 9) {
  const double g12 = s.values(2) - s.values(1);
  int j = 3;
  while (j + 1 < s.values.size() && s.values(j) - s.values(1) <= 1.5 * g12) ++j;
  const double t0 = 7.0 / (s.values(j) - s.values(2)), span = 3.0 / g12;
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(t0 + span * i / (count - 1));
  return t;
}

}  // namespace dodeca

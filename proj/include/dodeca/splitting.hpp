#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dodeca/formfield.hpp"

namespace dodeca {

inline constexpr double kLambda = 168.0;

using SymmetricOperator = Eigen::MatrixXd;

struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  double gap() const { return values(1) - values(0); }
  Eigen::VectorXd lowest() const { return vectors.col(0); }
};

inline Spectrum spectrum(const SymmetricOperator& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double line_angle(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double c = std::abs(x.dot(y)) / (x.norm() * y.norm());
  return std::acos(std::min(1.0, c));
}

// Quadrature data shared by every splitting computation: E values and the invariant basis of degree ≤ 24
// (which contains 𝓟) on a rule exact for degree 48.
struct SplittingContext {
  S3Quadrature quad;
  std::vector<double> w;  // weights for ∫_M
  InvariantBasis V;
  Eigen::MatrixXd phi;  // P × 13
  Eigen::MatrixXd psi;  // P × dim V
  std::vector<Eigen::MatrixXd> T;  // T[k]_ij = ∫ ψ_k φ_i φ_j
  Eigen::MatrixXd C;  // dim V × 91: coordinates of φ_iφ_j (i ≤ j)
  Eigen::MatrixXd UP;  // dim V × d_𝓟, orthonormal basis of 𝓟 in V coordinates
  Eigen::VectorXd product_singular_values;
  double product_residual = 0;  // max_ij |‖φ_iφ_j‖² − Σ_k C_k²| / ‖φ_iφ_j‖²
  int dP = 0;
  Quatd o{1, 0, 0, 0};

  int dimV() const { return V.size(); }

  // ∫_M f·g for pointwise samples
  double integrate(const Eigen::VectorXd& f) const {
    double s = 0;
    for (int p = 0; p < f.size(); ++p) s += w[p] * f(p);
    return s;
  }
};

inline SplittingContext build_splitting_context(double rank_tol = 1e-10) {
  SplittingContext c;
  c.quad = make_s3_quadrature(48);
  const int P = static_cast<int>(c.quad.points.size());
  c.w.resize(P);
  for (int p = 0; p < P; ++p) c.w[p] = c.quad.weights[p] / kGroupOrder;
  c.V = build_invariant_basis(24);
  const int K = c.V.size();
  const auto& E = eigen_basis();
  c.phi.resize(P, 13);
  c.psi.resize(P, K);
  Eigen::VectorXd tmp(K);
  for (int p = 0; p < P; ++p) {
    c.phi.row(p) = E.values(c.quad.points[p]).transpose();
    c.V.evaluate(c.quad.points[p], tmp.data(), nullptr, nullptr, nullptr);
    c.psi.row(p) = tmp.transpose();
  }
  Eigen::Map<const Eigen::VectorXd> wv(c.w.data(), P);
  c.T.resize(K);
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd d = wv.cwiseProduct(c.psi.col(k));
    c.T[k] = c.phi.transpose() * d.asDiagonal() * c.phi;
  }
  c.C.resize(K, 91);
  int col = 0;
  for (int i = 0; i < 13; ++i)
    for (int j = i; j < 13; ++j, ++col) {
      for (int k = 0; k < K; ++k) c.C(k, col) = c.T[k](i, j);
      Eigen::VectorXd prod = c.phi.col(i).cwiseProduct(c.phi.col(j));
      double n2 = wv.dot(prod.cwiseProduct(prod));
      c.product_residual = std::max(c.product_residual, std::abs(n2 - c.C.col(col).squaredNorm()) / n2);
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c.C, Eigen::ComputeThinU);
  c.product_singular_values = svd.singularValues();
  const double top = c.product_singular_values(0);
  c.dP = 0;
  for (int k = 0; k < c.product_singular_values.size(); ++k)
    if (c.product_singular_values(k) > rank_tol * top) ++c.dP;
  c.UP = svd.matrixU().leftCols(c.dP);
  return c;
}

inline const SplittingContext& splitting_context() {
  static const SplittingContext c = build_splitting_context();
  return c;
}

// B(q)_ij = −∫_M q φ_i φ_j for q given by coordinates in the invariant basis V.
inline SymmetricOperator splitting_matrix_coords(const Eigen::VectorXd& qV) {
  const auto& c = splitting_context();
  SymmetricOperator B = SymmetricOperator::Zero(13, 13);
  for (int k = 0; k < c.dimV(); ++k)
    if (qV(k) != 0) B -= qV(k) * c.T[k];
  return 0.5 * (B + B.transpose());
}

// B(q) for q sampled at the quadrature points (exact when q has degree ≤ 24).
inline SymmetricOperator splitting_matrix_samples(const Eigen::VectorXd& q) {
  const auto& c = splitting_context();
  Eigen::Map<const Eigen::VectorXd> wv(c.w.data(), c.w.size());
  Eigen::VectorXd d = wv.cwiseProduct(q);
  SymmetricOperator B = -(c.phi.transpose() * d.asDiagonal() * c.phi);
  return 0.5 * (B + B.transpose());
}

inline SymmetricOperator splitting_matrix(const S3Function& q) {
  const auto& c = splitting_context();
  Eigen::VectorXd s(c.quad.points.size());
  for (int p = 0; p < s.size(); ++p) s(p) = q.value(c.quad.points[p]);
  return splitting_matrix_samples(s);
}

// Coordinates in V of a sampled function (projection by quadrature).
inline Eigen::VectorXd project_to_V(const Eigen::VectorXd& samples) {
  const auto& c = splitting_context();
  Eigen::Map<const Eigen::VectorXd> wv(c.w.data(), c.w.size());
  return c.psi.transpose() * wv.cwiseProduct(samples);
}

// Coordinates in the E basis of a function in E.
inline Eigen::VectorXd e_coordinates(const S3Function& f) {
  const auto& c = splitting_context();
  Eigen::Map<const Eigen::VectorXd> wv(c.w.data(), c.w.size());
  Eigen::VectorXd s(c.quad.points.size());
  for (int p = 0; p < s.size(); ++p) s(p) = f.value(c.quad.points[p]);
  return c.phi.transpose() * wv.cwiseProduct(s);
}

struct SeedOperator {
  SymmetricOperator A;
  Eigen::VectorXd q;   // coordinates in the orthonormal basis of 𝓟
  Eigen::VectorXd qV;  // coordinates in V
  double gram_condition = 1;
};

// Riesz representer in 𝓟 of the functional ℓ, given by its values on the basis of 𝓟.
inline SeedOperator seed_from_functional(const Eigen::VectorXd& ell) {
  const auto& c = splitting_context();
  Eigen::Map<const Eigen::VectorXd> wv(c.w.data(), c.w.size());
  Eigen::MatrixXd Pi = c.psi * c.UP;
  Eigen::MatrixXd G = Pi.transpose() * wv.asDiagonal() * Pi;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  if (cond > 1e12) throw std::runtime_error("seed operator: Gram system ill-conditioned");
  SeedOperator s;
  s.q = G.ldlt().solve(ell);
  s.qV = c.UP * s.q;
  s.A = splitting_matrix_coords(s.qV);
  s.gram_condition = cond;
  return s;
}

// q_o with h(o) = ∫ q_o h for all h ∈ 𝓟, and A₀ = B(q_o).
inline SeedOperator seed_operator() {
  const auto& c = splitting_context();
  Eigen::VectorXd vo(c.dimV());
  c.V.evaluate(c.o, vo.data(), nullptr, nullptr, nullptr);
  return seed_from_functional(c.UP.transpose() * vo);
}

// q_fib with (1/2π)∫ h(e^{𝑖t}o) dt = ∫ q_fib h for all h ∈ 𝓟; its lowest line is the Hopf seed.
inline SeedOperator fiber_seed_operator(int samples = 64) {
  const auto& c = splitting_context();
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(c.dimV()), tmp(c.dimV());
  for (int s = 0; s < samples; ++s) {
    c.V.evaluate(exp_pure(2 * M_PI * s / samples, 0, 0) * c.o, tmp.data(), nullptr, nullptr, nullptr);
    avg += tmp / samples;
  }
  return seed_from_functional(c.UP.transpose() * avg);
}

// K₀ = Σ φ_i(o) φ_i, in E coordinates.
inline Eigen::VectorXd reproducing_kernel() { return eigen_basis().values(splitting_context().o); }

// Hopf seed line F₀ ∝ A₆ = φ₀ in E coordinates.
inline Eigen::VectorXd hopf_seed_line() {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(13);
  v(0) = 1;
  return v;
}

// Projector onto the left-I*-fixed subspace of E: average of f ↦ f(h⁻¹·) over h ∈ I*.
inline Eigen::MatrixXd isotropy_projector() {
  const auto& c = splitting_context();
  const auto& E = eigen_basis();
  const auto& g = binary_icosahedral();
  auto q = make_s3_quadrature(24);
  Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(13, 13);
  for (std::size_t p = 0; p < q.points.size(); ++p) {
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(13);
    for (const auto& h : g.elements) avg += E.values(h.conjugate() * q.points[p]);
    avg /= static_cast<double>(g.size());
    Pm += q.weights[p] / kGroupOrder * E.values(q.points[p]) * avg.transpose();
  }
  (void)c;
  return Pm;
}

// The unique isotropy-invariant line of E (eigenvector of the projector with eigenvalue 1).
inline Eigen::VectorXd isotropy_line(int* fixed_dimension = nullptr) {
  Eigen::MatrixXd Pm = isotropy_projector();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Pm + Pm.transpose()));
  if (fixed_dimension) {
    *fixed_dimension = 0;
    for (int k = 0; k < 13; ++k)
      if (es.eigenvalues()(k) > 0.5) ++*fixed_dimension;
  }
  return es.eigenvectors().col(12);
}

struct NotInOmega : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dℓ_A(H) = −(A − λ₁I)⁻¹ P_{v⊥}(Hv), v the unit lowest eigenvector of A.
inline Eigen::VectorXd eigenline_differential(const SymmetricOperator& A, const SymmetricOperator& H,
                                              double gap_floor = 1e-8) {
  Spectrum s = spectrum(A);
  double scale = std::max(s.values.cwiseAbs().maxCoeff(), 1e-300);
  if (s.gap() < gap_floor * scale) throw NotInOmega("eigenline_differential: lowest eigenvalue not simple");
  Eigen::VectorXd v = s.lowest(), Hv = H * v, out = Eigen::VectorXd::Zero(A.rows());
  for (int k = 1; k < A.rows(); ++k) {
    Eigen::VectorXd u = s.vectors.col(k);
    out -= u.dot(Hv) / (s.values(k) - s.values(0)) * u;
  }
  return out;
}

// Lowest eigenvector with a sign chosen to agree with ref.
inline Eigen::VectorXd aligned_lowest(const SymmetricOperator& A, const Eigen::VectorXd& ref) {
  Eigen::VectorXd v = spectrum(A).lowest();
  return v.dot(ref) < 0 ? Eigen::VectorXd(-v) : v;
}

// Basis of 𝓑: B(π_k) for the orthonormal basis π_k of 𝓟.
inline std::vector<SymmetricOperator> realizable_basis() {
  const auto& c = splitting_context();
  std::vector<SymmetricOperator> out;
  for (int k = 0; k < c.dP; ++k) out.push_back(splitting_matrix_coords(c.UP.col(k)));
  return out;
}

struct RankReport {
  int rank = 0;
  Eigen::VectorXd singular_values;
};

inline RankReport numerical_rank(const Eigen::MatrixXd& M, double rel = 1e-8) {
  RankReport r;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  r.singular_values = svd.singularValues();
  double top = r.singular_values.size() ? r.singular_values(0) : 0;
  for (int k = 0; k < r.singular_values.size(); ++k)
    if (top > 0 && r.singular_values(k) > rel * top) ++r.rank;
  return r;
}

// Rank of H ↦ P_{v⊥}(Hv) over the given operators.
inline RankReport submersion_rank(const SymmetricOperator& A, const std::vector<SymmetricOperator>& basis) {
  Spectrum s = spectrum(A);
  if (s.gap() < 1e-8 * s.values.cwiseAbs().maxCoeff()) throw NotInOmega("submersion_rank: lowest eigenvalue not simple");
  Eigen::VectorXd v = s.lowest();
  Eigen::MatrixXd M(A.rows(), basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Eigen::VectorXd hv = basis[k] * v;
    M.col(k) = hv - v.dot(hv) * v;
  }
  return numerical_rank(M);
}

// Singular values of w ↦ proj_𝓟(v·w) on v⊥, computed from pointwise products.
inline Eigen::VectorXd multiplication_singular_values(const Eigen::VectorXd& v) {
  const auto& c = splitting_context();
  Eigen::Map<const Eigen::VectorXd> wv(c.w.data(), c.w.size());
  Eigen::VectorXd vn = v.normalized();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(13, 13) - vn * vn.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  Eigen::MatrixXd Wb = es.eigenvectors().rightCols(12);  // orthonormal basis of v⊥
  Eigen::VectorXd vf = c.phi * vn;
  Eigen::MatrixXd Pi = c.psi * c.UP;
  Eigen::MatrixXd M(c.dP, 12);
  for (int k = 0; k < 12; ++k) {
    Eigen::VectorXd prod = vf.cwiseProduct(c.phi * Wb.col(k));
    M.col(k) = Pi.transpose() * wv.cwiseProduct(prod);
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
}

// min over sampled unit w ⊥ K₀ of ‖K₀·w‖_{L²}.
inline double kernel_multiplication_margin(int samples, unsigned seed) {
  const auto& c = splitting_context();
  Eigen::Map<const Eigen::VectorXd> wv(c.w.data(), c.w.size());
  Eigen::VectorXd k = reproducing_kernel();
  Eigen::VectorXd kf = c.phi * k;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  double best = 1e300;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(13);
    for (int i = 0; i < 13; ++i) x(i) = n(rng);
    x -= x.dot(k) / k.squaredNorm() * k;
    x.normalize();
    Eigen::VectorXd prod = kf.cwiseProduct(c.phi * x);
    best = std::min(best, std::sqrt(wv.dot(prod.cwiseProduct(prod))));
  }
  return best;
}

struct Realization {
  Eigen::VectorXd q;    // q_A in 𝓟 coordinates
  Eigen::VectorXd qV;   // q_A in V
  Eigen::VectorXd rhoV; // ρ_A in V
  double residual = 0;  // relative residual of B(q) = A over 𝓟
};

// Solves B(q) = A over 𝓟, then inverts ½Δ + 2·168 on each degree-n block: ρ = q/(n(n+2)/2 + 336).
inline Realization realize_conformal_factor(const SymmetricOperator& A, double tol = 1e-9) {
  const auto& c = splitting_context();
  auto basis = realizable_basis();
  Eigen::MatrixXd L(169, c.dP);
  for (int k = 0; k < c.dP; ++k) L.col(k) = Eigen::Map<const Eigen::VectorXd>(basis[k].data(), 169);
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(A.data(), 169);
  Realization r;
  r.q = L.colPivHouseholderQr().solve(a);
  r.residual = (L * r.q - a).norm() / std::max(a.norm(), 1e-300);
  if (r.residual > tol) throw std::domain_error("realize_conformal_factor: operator not in the realizable space");
  r.qV = c.UP * r.q;
  r.rhoV = r.qV;
  int col = 0;
  for (const auto& b : c.V.blocks)
    for (int k = 0; k < b.dimension(); ++k, ++col) r.rhoV(col) /= b.eigenvalue() / 2 + 2 * kLambda;
  return r;
}

// B^(ρ) = B(2·168ρ + ½Δρ) with Δρ (nonnegative convention) from pointwise frame Hessians.
inline SymmetricOperator splitting_operator_of_rho(const FormFunction& rho) {
  const auto& c = splitting_context();
  Eigen::VectorXd q(c.quad.points.size());
  for (int p = 0; p < q.size(); ++p) {
    Jet J = rho.jet(c.quad.points[p]);
    double lap = -(J.hess[0][0] + J.hess[1][1] + J.hess[2][2]);
    q(p) = 2 * kLambda * J.value + 0.5 * lap;
  }
  return splitting_matrix_samples(q);
}

// a₀′ − 168·m₀′ with a₀′ = ∫ρ⟨∇φ_i,∇φ_j⟩ and m₀′ = 3∫ρφ_iφ_j.
inline SymmetricOperator variational_operator(const FormFunction& rho) {
  const auto& c = splitting_context();
  const auto& E = eigen_basis();
  SymmetricOperator a = SymmetricOperator::Zero(13, 13), m = SymmetricOperator::Zero(13, 13);
  for (std::size_t p = 0; p < c.quad.points.size(); ++p) {
    double r = c.w[p] * rho.value(c.quad.points[p]);
    Eigen::MatrixXd G = E.gradients(c.quad.points[p]);
    a += r * G * G.transpose();
    Eigen::VectorXd v = c.phi.row(p).transpose();
    m += 3 * r * v * v.transpose();
  }
  SymmetricOperator B = a - kLambda * m;
  return 0.5 * (B + B.transpose());
}

struct LineRealization {
  SymmetricOperator A;
  std::string start;  // "A0" or "fiber"
  int iterations = 0;
  double angle = 0;
  double start_angle = 0;
  double gap = 0;
  bool converged = false;
  bool in_chart = true;
};

// Newton / minimum-norm least squares in 𝓑 for an operator whose lowest line is the target.
inline LineRealization line_realization(const Eigen::VectorXd& target_in, double radius = 0.2, double tol = 1e-10,
                                        int max_iter = 50) {
  Eigen::VectorXd t = target_in.normalized();
  auto seeds = std::vector<std::pair<std::string, SymmetricOperator>>{{"A0", seed_operator().A},
                                                                      {"fiber", fiber_seed_operator().A}};
  LineRealization out;
  double best = 1e300;
  for (auto& [name, A] : seeds) {
    double ang = line_angle(spectrum(A).lowest(), t);
    if (ang < best) {
      best = ang;
      out.start = name;
      out.A = A;
    }
  }
  out.start_angle = best;
  out.in_chart = best <= radius;
  auto basis = realizable_basis();
  auto angle_of = [&](const SymmetricOperator& A) { return line_angle(spectrum(A).lowest(), t); };
  out.angle = best;
  for (int it = 0; it < max_iter && out.angle > tol; ++it) {
    Eigen::VectorXd v = aligned_lowest(out.A, t);
    Eigen::VectorXd r = v - v.dot(t) * t;
    // eigenline_differential follows the sign of the solver's eigenvector
    const double sign = spectrum(out.A).lowest().dot(v) < 0 ? -1.0 : 1.0;
    Eigen::MatrixXd J(13, basis.size());
    try {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        Eigen::VectorXd d = sign * eigenline_differential(out.A, basis[k]);
        J.col(k) = d - d.dot(t) * t;
      }
    } catch (const NotInOmega&) {
      break;
    }
    Eigen::VectorXd dx = -J.completeOrthogonalDecomposition().solve(r);
    double step = 1;
    bool improved = false;
    for (int h = 0; h < 30; ++h, step /= 2) {
      SymmetricOperator trial = out.A;
      for (std::size_t k = 0; k < basis.size(); ++k) trial += step * dx(k) * basis[k];
      Spectrum s = spectrum(trial);
      double ang = angle_of(trial);
      if (ang < out.angle && s.gap() > 0) {
        out.A = trial;
        out.angle = ang;
        improved = true;
        break;
      }
    }
    out.iterations = it + 1;
    if (!improved) break;
  }
  out.gap = spectrum(out.A).gap();
  out.converged = out.angle <= 1e-8 && out.gap > 0;
  return out;
}

// Ψ's E coordinates and the Ψ-target operator with its realized conformal factor.
struct PsiRealization {
  Eigen::VectorXd psi;  // unit E coordinates
  LineRealization line;
  Realization rho;
  SymmetricOperator B_rho;  // B^(ρ_Ψ), via the pointwise Laplacian
  double roundtrip = 0;     // ‖B^(ρ) − A‖
  double lowest_angle = 0;  // angle between the lowest line of B^(ρ) and Ψ
};

inline PsiRealization realize_psi(double e2, double e3, double e5) {
  PsiRealization r;
  r.psi = e_coordinates(psi_function(e2, e3, e5)).normalized();
  r.line = line_realization(r.psi);
  r.rho = realize_conformal_factor(r.line.A);
  r.B_rho = splitting_operator_of_rho(splitting_context().V.combine(r.rho.rhoV));
  r.roundtrip = (r.B_rho - r.line.A).norm();
  r.lowest_angle = line_angle(spectrum(r.B_rho).lowest(), r.psi);
  return r;
}

}  // namespace dodeca

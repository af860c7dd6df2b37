#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "dodeca/formfield.hpp"

namespace dodeca {

enum class OrbitLabel { Vertex5, Face3, Edge2, Other };

inline std::string label_name(OrbitLabel l) {
  switch (l) {
    case OrbitLabel::Vertex5: return "vertex/5";
    case OrbitLabel::Face3: return "face/3";
    case OrbitLabel::Edge2: return "edge/2";
    default: return "other";
  }
}

struct CriticalPointRecord {
  std::vector<double> location;
  double value = 0;
  double multiplier = 0;
  std::vector<double> hessian_eigenvalues;
  int morse_index = 0;
  OrbitLabel label = OrbitLabel::Other;
  double gradient_norm = 0;
  int orbit_size = 0;  // S²: icosahedral orbit size; M: number of distinct S³ lifts
  bool bott = false;
  double fiber_alignment = 0;  // |⟨kernel direction, fiber direction⟩| for Bott records
};

struct MorseCensus {
  std::string function_label;
  std::vector<CriticalPointRecord> records;
  std::vector<CriticalPointRecord> circles;
  std::map<int, int> counts_by_index;
  std::map<OrbitLabel, int> counts_by_label;
  int total = 0;
  int euler_sum = 0;
  bool complete = true;
  long s3_count = 0;
  int starts = 0;
  int converged = 0;
  double max_gradient = 0;

  std::map<OrbitLabel, int> circles_by_label() const {
    std::map<OrbitLabel, int> c;
    for (const auto& r : circles) ++c[r.label];
    return c;
  }
  bool same_signature(const MorseCensus& o) const {
    return total == o.total && counts_by_index == o.counts_by_index && counts_by_label == o.counts_by_label &&
           circles.size() == o.circles.size();
  }
};

inline void finalize_census(MorseCensus& c) {
  c.counts_by_index.clear();
  c.counts_by_label.clear();
  c.euler_sum = 0;
  c.max_gradient = 0;
  for (const auto& r : c.records) {
    ++c.counts_by_index[r.morse_index];
    ++c.counts_by_label[r.label];
    c.euler_sum += (r.morse_index % 2 ? -1 : 1);
    c.max_gradient = std::max(c.max_gradient, r.gradient_norm);
  }
  c.total = static_cast<int>(c.records.size());
}

// ---------------------------------------------------------------- S²

using Vec3d = Eigen::Vector3d;

inline Mat3 rotation_matrix(const Quatd& q) {
  const double a = q.a, b = q.b, c = q.c, d = q.d;
  return {{{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
           {2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)},
           {2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d}}};
}

inline Vec3d apply(const Mat3& R, const Vec3d& x) {
  Vec3d y;
  for (int i = 0; i < 3; ++i) y(i) = R[i][0] * x(0) + R[i][1] * x(1) + R[i][2] * x(2);
  return y;
}

// Rotation group of the sextic's frame (vertices (±τ,±1,0) and cyclic permutations).
inline const std::vector<Mat3>& sextic_rotation_group() {
  static const std::vector<Mat3> group = [] {
    const double t = (1 + std::sqrt(5.0)) / 2;
    std::vector<Mat3> gens{rotation_matrix({t / 2, 0.5, 1 / (2 * t), 0}), rotation_matrix({0.5, 0.5, 0.5, 0.5})};
    auto mul = [](const Mat3& A, const Mat3& B) {
      Mat3 C{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) C[i][j] += A[i][k] * B[k][j];
      return C;
    };
    auto same = [](const Mat3& A, const Mat3& B) {
      double d = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(A[i][j] - B[i][j]));
      return d < 1e-9;
    };
    std::vector<Mat3> g{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
    for (std::size_t k = 0; k < g.size(); ++k)
      for (const auto& s : gens) {
        Mat3 h = mul(g[k], s);
        if (std::none_of(g.begin(), g.end(), [&](const Mat3& x) { return same(x, h); })) g.push_back(h);
        if (g.size() > 200) throw std::logic_error("sextic_rotation_group: no closure");
      }
    return g;
  }();
  return group;
}

struct S2CensusOptions {
  int starts = 4000;
  double merge_tol = 1e-6;
  double grad_tol = 1e-10;
  int max_iter = 100;
  double degeneracy_floor = 1e-7;
  const std::vector<Mat3>* symmetry = nullptr;  // orbit labels and completeness when set
};

namespace detail {

inline std::pair<Vec3d, Vec3d> tangent_frame(const Vec3d& p) {
  Vec3d a = std::abs(p(0)) < 0.9 ? Vec3d(1, 0, 0) : Vec3d(0, 1, 0);
  Vec3d e1 = (a - a.dot(p) * p).normalized();
  return {e1, p.cross(e1)};
}

struct S2Local {
  double value, multiplier;
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
};

inline S2Local s2_local(const PolyD& f, const std::array<PolyD, 3>& g, const std::array<std::array<PolyD, 3>, 3>& H,
                        const Vec3d& p) {
  std::array<double, 4> x{p(0), p(1), p(2), 0};
  Vec3d gv;
  Eigen::Matrix3d Hm;
  for (int i = 0; i < 3; ++i) {
    gv(i) = g[i].evaluate(x);
    for (int j = 0; j < 3; ++j) Hm(i, j) = H[i][j].evaluate(x);
  }
  auto [e1, e2] = tangent_frame(p);
  S2Local L;
  L.value = f.evaluate(x);
  L.multiplier = gv.dot(p) / 2;
  L.grad << gv.dot(e1), gv.dot(e2);
  Eigen::Matrix<double, 3, 2> U;
  U << e1, e2;
  L.hess = U.transpose() * (Hm - 2 * L.multiplier * Eigen::Matrix3d::Identity()) * U;
  return L;
}

}  // namespace detail

inline std::vector<Vec3d> fibonacci_sphere(int n) {
  std::vector<Vec3d> pts;
  const double ga = M_PI * (3 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    double z = 1 - (2 * k + 1.0) / n;
    double r = std::sqrt(1 - z * z);
    pts.emplace_back(r * std::cos(ga * k), r * std::sin(ga * k), z);
  }
  return pts;
}

// Critical points of f|_{S²} via multistart Newton on ∇f = 2λp.
inline MorseCensus s2_critical_census(const PolyD& f, const S2CensusOptions& opt = {}) {
  if (f.dim() != 3) throw std::invalid_argument("s2_critical_census: polynomial must live on R^3");
  std::array<PolyD, 3> g;
  std::array<std::array<PolyD, 3>, 3> H;
  for (int i = 0; i < 3; ++i) {
    g[i] = f.derivative(i);
    for (int j = 0; j < 3; ++j) H[i][j] = g[i].derivative(j);
  }
  MorseCensus census;
  census.function_label = "S2";
  census.starts = opt.starts;
  std::vector<Vec3d> found;
  for (const Vec3d& start : fibonacci_sphere(opt.starts)) {
    Vec3d p = start;
    double gn = 1e300;
    for (int it = 0; it < opt.max_iter; ++it) {
      auto L = detail::s2_local(f, g, H, p);
      gn = L.grad.norm();
      if (gn < 1e-14) break;
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(L.hess);
      double top = es.eigenvalues().cwiseAbs().maxCoeff();
      Eigen::Vector2d s = Eigen::Vector2d::Zero();
      for (int k = 0; k < 2; ++k) {
        double mu = es.eigenvalues()(k);
        if (std::abs(mu) < 1e-12 * top) continue;
        double clamped = (mu < 0 ? -1 : 1) * std::max(std::abs(mu), 1e-3 * top);
        s -= es.eigenvectors().col(k).dot(L.grad) / clamped * es.eigenvectors().col(k);
      }
      if (s.norm() > 0.2) s *= 0.2 / s.norm();
      auto [e1, e2] = detail::tangent_frame(p);
      p = (p + s(0) * e1 + s(1) * e2).normalized();
    }
    if (gn > opt.grad_tol) continue;
    ++census.converged;
    if (std::none_of(found.begin(), found.end(), [&](const Vec3d& q) { return (q - p).norm() < opt.merge_tol; }))
      found.push_back(p);
  }
  std::sort(found.begin(), found.end(), [](const Vec3d& a, const Vec3d& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  });
  for (const Vec3d& p : found) {
    auto L = detail::s2_local(f, g, H, p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(L.hess);
    CriticalPointRecord r;
    r.location = {p(0), p(1), p(2)};
    r.value = L.value;
    r.multiplier = L.multiplier;
    r.gradient_norm = L.grad.norm();
    r.hessian_eigenvalues = {es.eigenvalues()(0), es.eigenvalues()(1)};
    double top = es.eigenvalues().cwiseAbs().maxCoeff();
    for (double mu : r.hessian_eigenvalues) {
      if (mu < 0) ++r.morse_index;
      if (std::abs(mu) < opt.degeneracy_floor * top) r.bott = true;
    }
    if (opt.symmetry) {
      std::vector<Vec3d> orbit;
      for (const auto& R : *opt.symmetry) {
        Vec3d q = apply(R, p);
        if (std::none_of(orbit.begin(), orbit.end(), [&](const Vec3d& o) { return (o - q).norm() < 1e-7; }))
          orbit.push_back(q);
      }
      r.orbit_size = static_cast<int>(orbit.size());
      r.label = r.orbit_size == 12   ? OrbitLabel::Vertex5
                : r.orbit_size == 20 ? OrbitLabel::Face3
                : r.orbit_size == 30 ? OrbitLabel::Edge2
                                     : OrbitLabel::Other;
      // every image must itself have been found
      for (const Vec3d& q : orbit)
        if (std::none_of(found.begin(), found.end(), [&](const Vec3d& x) { return (x - q).norm() < 1e-6; }))
          census.complete = false;
    }
    census.records.push_back(r);
  }
  finalize_census(census);
  return census;
}

// Orbit sizes present in an S² census (one entry per orbit).
inline std::vector<int> orbit_sizes(const MorseCensus& c) {
  std::map<int, int> points;
  for (const auto& r : c.records) ++points[r.orbit_size];
  std::vector<int> out;
  for (auto [size, n] : points)
    for (int k = 0; k < n / std::max(size, 1); ++k) out.push_back(size);
  return out;
}

// Roots c = z² of the reduced quartic c⁴ − 4c³/3 + 7c²/12 − 19c/192 + 1/192 in the all-coordinates-nonzero case.
inline std::vector<NF> case1_quartic_roots() {
  const NF s5 = NF::sqrt5();
  return {NF(rat(1, 3)), NF(rat(1, 4)), (NF(3) - s5) * NF(rat(1, 8)), (NF(3) + s5) * NF(rat(1, 8))};
}

inline NF case1_quartic(const NF& c) {
  return c * c * c * c - NF(rat(4, 3)) * c * c * c + NF(rat(7, 12)) * c * c - NF(rat(19, 192)) * c + NF(rat(1, 192));
}

using ExactVec3 = std::array<NF, 3>;
using ExactMat2 = std::array<std::array<NF, 2>, 2>;

struct ExactTangentHessian {
  ExactMat2 matrix;
  NF multiplier;
  NF determinant() const { return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]; }
  // definiteness from exact entries: +1 positive, −1 negative, 0 indefinite or degenerate
  int definiteness() const {
    double a = matrix[0][0].to_double(), d = determinant().to_double();
    if (d > 0) return a > 0 ? 1 : -1;
    return 0;
  }
};

// (Hess P(p) − 2λI) restricted to span(u, v), with p given up to scale; f homogeneous of even degree k.
// At p̂ = p/|p|: ∇f(p̂)·p̂ = 2λ, Hess f(p̂) = Hess f(p)/|p|^{k−2}.
inline ExactTangentHessian exact_hessian_at(const PolyNF& f, const ExactVec3& p, const ExactVec3& u,
                                            const ExactVec3& v) {
  const int k = f.degree();
  if (f.dim() != 3 || !f.is_homogeneous(k) || k % 2)
    throw std::invalid_argument("exact_hessian_at: need a homogeneous even-degree polynomial on R^3");
  std::array<NF, 4> x{p[0], p[1], p[2], NF(0)};
  ExactVec3 g;
  std::array<ExactVec3, 3> H;
  for (int i = 0; i < 3; ++i) {
    PolyNF gi = f.derivative(i);
    g[i] = gi.evaluate(x);
    for (int j = 0; j < 3; ++j) H[i][j] = gi.derivative(j).evaluate(x);
  }
  auto dot = [](const ExactVec3& a, const ExactVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  // criticality: ∇f(p) ∥ p
  ExactVec3 cross{g[1] * p[2] - g[2] * p[1], g[2] * p[0] - g[0] * p[2], g[0] * p[1] - g[1] * p[0]};
  for (const auto& c : cross)
    if (!c.is_zero()) throw std::invalid_argument("exact_hessian_at: point is not critical");
  if (!dot(u, p).is_zero() || !dot(v, p).is_zero())
    throw std::invalid_argument("exact_hessian_at: tangent vectors not orthogonal to p");
  const NF n2 = dot(p, p);
  NF pw(1);
  for (int i = 0; i < (k - 2) / 2; ++i) pw = pw * n2;
  const NF lam = dot(g, p) / (NF(2) * pw * n2);
  ExactTangentHessian out;
  out.multiplier = lam;
  const ExactVec3* basis[2] = {&u, &v};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      NF s;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += (*basis[a])[i] * H[i][j] * (*basis[b])[j];
      out.matrix[a][b] = s / pw - NF(2) * lam * dot(*basis[a], *basis[b]);
    }
  return out;
}

// ---------------------------------------------------------------- M = S³/I*

struct MCensusOptions {
  int starts = 1 << 14;
  double merge_tol = 1e-6;
  double grad_tol = 1e-10;
  double bott_floor = 1e-7;
  int max_iter = 200;
  int threads = 0;
  double label_radius = 0.35;
  int homogeneous_degree = 12;
};

inline double radical_inverse(int base, long k) {
  double inv = 1.0 / base, f = inv, r = 0;
  while (k > 0) {
    r += f * (k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

// Halton point k mapped to S³ with uniform measure (t = sin²η uniform, both angles uniform).
inline Quatd halton_s3(long k) {
  double t = radical_inverse(2, k + 1), x1 = 2 * M_PI * radical_inverse(3, k + 1), x2 = 2 * M_PI * radical_inverse(5, k + 1);
  double ce = std::sqrt(1 - t), se = std::sqrt(t);
  return {ce * std::cos(x1), ce * std::sin(x1), se * std::cos(x2), se * std::sin(x2)};
}

struct ExceptionalOrbits {
  std::vector<Vec3> vertex, face, edge;
};

inline const ExceptionalOrbits& exceptional_orbits() {
  static const ExceptionalOrbits o = [] {
    const auto& g = binary_icosahedral();
    return ExceptionalOrbits{hopf_orbit(z5(), g), hopf_orbit(z3_face_lift(g), g), hopf_orbit(z2(), g)};
  }();
  return o;
}

inline std::pair<OrbitLabel, double> nearest_exceptional(const Quatd& z) {
  Vec3 h = hopf(z);
  const auto& o = exceptional_orbits();
  std::pair<OrbitLabel, double> best{OrbitLabel::Other, 1e300};
  auto scan = [&](const std::vector<Vec3>& pts, OrbitLabel l) {
    for (const auto& p : pts) {
      double d = dist3(p, h);
      if (d < best.second) best = {l, d};
    }
  };
  scan(o.vertex, OrbitLabel::Vertex5);
  scan(o.face, OrbitLabel::Face3);
  scan(o.edge, OrbitLabel::Edge2);
  return best;
}

inline double coset_distance(const Quatd& z, const Quatd& w, const GroupTable& g) {
  double best = 1e300;
  for (const auto& h : g.elements) best = std::min(best, distance(z * h, w));
  return best;
}

inline double hopf_orbit_distance(const Quatd& z, const Quatd& w, const GroupTable& g) {
  Vec3 hw = hopf(w);
  double best = 1e300;
  for (const auto& h : g.elements) best = std::min(best, dist3(hopf(z * h), hw));
  return best;
}

// Largest deviation |f(z·h) − f(z)| over a few random z and all h.
inline double right_invariance_defect(const S3Function& f, int samples = 3) {
  const auto& g = binary_icosahedral();
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    Quatd z = halton_s3(977 + 131 * s);
    double v = f.value(z);
    for (const auto& h : g.elements) worst = std::max(worst, std::abs(f.value(z * h) - v));
  }
  return worst;
}

struct NewtonResult {
  Quatd z;
  Jet jet;
  double grad_norm = 1e300;
};

// Newton on S³ in the frame e_a·p with eigenvalue clamping; directions below the Bott floor are dropped.
inline NewtonResult newton_s3(const S3Function& f, Quatd z, const MCensusOptions& opt) {
  NewtonResult r;
  for (int it = 0; it < opt.max_iter; ++it) {
    Jet J = f.jet(z);
    Eigen::Vector3d g(J.grad[0], J.grad[1], J.grad[2]);
    r = {z, J, g.norm()};
    if (r.grad_norm < 1e-13) break;
    Eigen::Matrix3d H;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) H(a, b) = J.hess[a][b];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H);
    double top = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::Vector3d s = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k) {
      double mu = es.eigenvalues()(k);
      if (std::abs(mu) < opt.bott_floor * top) continue;
      double clamped = (mu < 0 ? -1 : 1) * std::max(std::abs(mu), 1e-3 * top);
      s -= es.eigenvectors().col(k).dot(g) / clamped * es.eigenvectors().col(k);
    }
    if (s.norm() > 0.2) s *= 0.2 / s.norm();
    if (s.norm() < 1e-17) break;
    z = normalized(exp_pure(s(0), s(1), s(2)) * z);
  }
  return r;
}

// Critical points of a right-I*-invariant function, one record per point of M (Morse) or per circle (Bott).
inline MorseCensus m_critical_census(const S3Function& f, const std::string& label, const MCensusOptions& opt = {}) {
  const auto& g = binary_icosahedral();
  MorseCensus census;
  census.function_label = label;
  census.starts = opt.starts;
  {
    double scale = std::abs(f.value(halton_s3(5))) + std::abs(f.value(halton_s3(6))) + 1e-300;
    if (right_invariance_defect(f) > 1e-9 * std::max(scale, 1.0))
      throw std::invalid_argument("m_critical_census: function is not right I*-invariant");
  }

  std::vector<NewtonResult> results(opt.starts);
  int nthreads = opt.threads > 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, opt.starts);
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        for (int k = t; k < opt.starts; k += nthreads) results[k] = newton_s3(f, halton_s3(k), opt);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<Quatd> morse_reps, bott_reps;
  for (const auto& r : results) {
    if (r.grad_norm > opt.grad_tol) continue;
    ++census.converged;
    Eigen::Matrix3d H;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) H(a, b) = r.jet.hess[a][b];
    Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(H).eigenvalues();
    bool bott = ev.cwiseAbs().minCoeff() < opt.bott_floor * ev.cwiseAbs().maxCoeff();
    if (bott) {
      if (std::none_of(bott_reps.begin(), bott_reps.end(),
                       [&](const Quatd& q) { return hopf_orbit_distance(r.z, q, g) < opt.merge_tol; }))
        bott_reps.push_back(r.z);
    } else if (std::none_of(morse_reps.begin(), morse_reps.end(),
                            [&](const Quatd& q) { return coset_distance(r.z, q, g) < opt.merge_tol; })) {
      morse_reps.push_back(r.z);
    }
  }

  auto make_record = [&](const Quatd& z, bool bott) {
    Jet J = f.jet(z);
    Eigen::Matrix3d H;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) H(a, b) = J.hess[a][b];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H);
    CriticalPointRecord rec;
    rec.location = {z.a, z.b, z.c, z.d};
    rec.value = J.value;
    rec.multiplier = opt.homogeneous_degree * J.value / 2;
    rec.gradient_norm = Eigen::Vector3d(J.grad[0], J.grad[1], J.grad[2]).norm();
    rec.bott = bott;
    double top = es.eigenvalues().cwiseAbs().maxCoeff();
    for (int k = 0; k < 3; ++k) {
      double mu = es.eigenvalues()(k);
      rec.hessian_eigenvalues.push_back(mu);
      bool degenerate = std::abs(mu) < opt.bott_floor * top;
      if (degenerate) rec.fiber_alignment = std::abs(es.eigenvectors()(0, k));
      if (mu < 0 && !degenerate) ++rec.morse_index;
    }
    auto [l, d] = nearest_exceptional(z);
    rec.label = d < opt.label_radius ? l : OrbitLabel::Other;
    // distinct lifts of the orbit z·I*
    std::vector<Quatd> lifts;
    for (const auto& h : g.elements) {
      Quatd w = z * h;
      if (std::none_of(lifts.begin(), lifts.end(), [&](const Quatd& q) { return distance(q, w) < opt.merge_tol; }))
        lifts.push_back(w);
    }
    rec.orbit_size = static_cast<int>(lifts.size());
    return rec;
  };

  for (const auto& z : morse_reps) {
    auto rec = make_record(z, false);
    census.s3_count += rec.orbit_size;
    census.records.push_back(rec);
  }
  for (const auto& z : bott_reps) census.circles.push_back(make_record(z, true));
  // deterministic order: by label, then value
  auto order = [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.value < b.value;
  };
  std::sort(census.records.begin(), census.records.end(), order);
  std::sort(census.circles.begin(), census.circles.end(), order);
  if (census.s3_count % kGroupOrder) census.complete = false;
  finalize_census(census);
  return census;
}

struct SweepResult {
  std::vector<double> scales;
  std::vector<MorseCensus> censuses;
  bool stable = false;
  int stable_level = -1;  // index of the first of two consecutive agreeing levels
};

// Runs family(scale) over decreasing scales until two consecutive censuses agree.
inline SweepResult sweep_census(const std::function<FormFunction(double)>& family, const std::string& label,
                                const std::vector<double>& scales, const MCensusOptions& opt = {}) {
  SweepResult s;
  for (double sc : scales) {
    s.scales.push_back(sc);
    s.censuses.push_back(m_critical_census(family(sc), label, opt));
    std::size_t n = s.censuses.size();
    if (n >= 2 && s.censuses[n - 1].same_signature(s.censuses[n - 2]) && s.censuses[n - 1].complete) {
      s.stable = true;
      s.stable_level = static_cast<int>(n) - 2;
      break;
    }
  }
  return s;
}

// ---------------------------------------------------------------- tube reduction

struct TubeReduction {
  int m = 1;
  std::vector<double> theta, g, g_prime, schur_second, normal_min_eig;
  std::vector<std::array<double, 2>> xi;
  bool constant = false;
  std::vector<double> critical_theta, critical_second;
  int circle_critical_points() const { return constant ? -1 : static_cast<int>(critical_theta.size()); }
};

namespace detail {

// p(θ, u) = e^{𝑖θ}·exp(u₁𝑗 + u₂𝑘)·z
inline Quatd tube_point(const Quatd& z, double th, double u1, double u2) {
  return exp_pure(th, 0, 0) * exp_pure(0, u1, u2) * z;
}

// (∂_θF, ∂_{u₁}F, ∂_{u₂}F): exact frame gradient paired with exact chart velocities.
inline Eigen::Vector3d tube_gradient(const S3Function& f, const Quatd& z, double th, double u1, double u2) {
  Quatd p = tube_point(z, th, u1, u2);
  Jet J = f.jet(p);
  Eigen::Vector3d out;
  out(0) = J.grad[0];
  const double r = std::sqrt(u1 * u1 + u2 * u2);
  const Quatd E = exp_pure(th, 0, 0);
  for (int a = 0; a < 2; ++a) {
    const double ua = a == 0 ? u1 : u2;
    Quatd dX;
    Quatd ea = a == 0 ? Quatd{0, 0, 1, 0} : Quatd{0, 0, 0, 1};
    if (r < 1e-7) {
      dX = Quatd{-ua, 0, 0, 0} + ea;
    } else {
      double sr = std::sin(r), cr = std::cos(r);
      double dsinc = (r * cr - sr) / (r * r);
      Quatd U{0, 0, u1, u2};
      auto scale = [](double s, const Quatd& q) { return Quatd{s * q.a, s * q.b, s * q.c, s * q.d}; };
      dX = Quatd{-sr * ua / r, 0, 0, 0} + scale(dsinc * ua / r, U) + scale(sr / r, ea);
    }
    Quatd dp = E * dX * z;
    double s = 0;
    for (int b = 0; b < 3; ++b) s += J.grad[b] * dot(frame_vector(b, p), dp);
    out(a + 1) = s;
  }
  return out;
}

inline Eigen::Matrix3d tube_hessian(const S3Function& f, const Quatd& z, double th, double u1, double u2,
                                    double h = 1e-5) {
  Eigen::Matrix3d H;
  for (int c = 0; c < 3; ++c) {
    double d[3] = {0, 0, 0};
    d[c] = h;
    Eigen::Vector3d gp = tube_gradient(f, z, th + d[0], u1 + d[1], u2 + d[2]);
    Eigen::Vector3d gm = tube_gradient(f, z, th - d[0], u1 - d[1], u2 - d[2]);
    H.col(c) = (gp - gm) / (2 * h);
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace detail

// Solves the normal equations ∂_uF = 0 along the circle e^{𝑖θ}z, θ ∈ [0, π/m), and returns
// g(θ) = F(θ, ξ(θ)) with G″ = F_θθ − F_θu (F_uu)⁻¹ F_uθ.
inline TubeReduction tube_reduce(const S3Function& f, const Quatd& z, int m, int samples = 256,
                                 double normal_floor = 1e-6) {
  TubeReduction T;
  T.m = m;
  const double period = M_PI / m;
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  double scale = 0;
  for (int s = 0; s < samples; ++s) {
    double th = period * s / samples;
    for (int it = 0; it < 50; ++it) {
      Eigen::Vector3d gr = detail::tube_gradient(f, z, th, u(0), u(1));
      if (gr.tail<2>().norm() < 1e-13 * (1 + std::abs(f.value(z)))) break;
      Eigen::Matrix3d H = detail::tube_hessian(f, z, th, u(0), u(1));
      u -= H.bottomRightCorner<2, 2>().ldlt().solve(gr.tail<2>());
    }
    Eigen::Matrix3d H = detail::tube_hessian(f, z, th, u(0), u(1));
    Eigen::Matrix2d Huu = H.bottomRightCorner<2, 2>();
    Eigen::Vector2d Hut = H.block<2, 1>(1, 0);
    double mineig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(Huu).eigenvalues().cwiseAbs().minCoeff();
    double maxeig = H.cwiseAbs().maxCoeff();
    scale = std::max(scale, maxeig);
    if (mineig < normal_floor * std::max(maxeig, 1.0))
      throw std::runtime_error("tube_reduce: normal Hessian not invertible along the circle");
    Eigen::Vector3d gr = detail::tube_gradient(f, z, th, u(0), u(1));
    T.theta.push_back(th);
    T.xi.push_back({u(0), u(1)});
    T.g.push_back(f.value(detail::tube_point(z, th, u(0), u(1))));
    T.g_prime.push_back(gr(0));
    T.schur_second.push_back(H(0, 0) - Hut.dot(Huu.ldlt().solve(Hut)));
    T.normal_min_eig.push_back(mineig);
  }
  double gmax = 0;
  for (double v : T.g_prime) gmax = std::max(gmax, std::abs(v));
  if (gmax < 1e-11 * std::max(scale, 1.0)) {
    T.constant = true;
    return T;
  }
  // zeros of g′ on the periodic grid, refined by secant steps
  auto gprime = [&](double th, Eigen::Vector2d& uu) {
    for (int it = 0; it < 50; ++it) {
      Eigen::Vector3d gr = detail::tube_gradient(f, z, th, uu(0), uu(1));
      if (gr.tail<2>().norm() < 1e-13 * (1 + std::abs(f.value(z)))) return gr(0);
      Eigen::Matrix3d H = detail::tube_hessian(f, z, th, uu(0), uu(1));
      uu -= H.bottomRightCorner<2, 2>().ldlt().solve(gr.tail<2>());
    }
    return detail::tube_gradient(f, z, th, uu(0), uu(1))(0);
  };
  const int n = samples;
  for (int s = 0; s < n; ++s) {
    int t = (s + 1) % n;
    double a = T.g_prime[s], b = T.g_prime[t];
    if (a == 0 || (a < 0) != (b < 0)) {
      double ta = T.theta[s], tb = t ? T.theta[t] : period;
      Eigen::Vector2d uu(T.xi[s][0], T.xi[s][1]);
      for (int it = 0; it < 60 && std::abs(tb - ta) > 1e-14; ++it) {
        double tm = 0.5 * (ta + tb);
        double c = gprime(tm, uu);
        if ((c < 0) == (a < 0)) {
          ta = tm;
          a = c;
        } else {
          tb = tm;
        }
      }
      double root = 0.5 * (ta + tb);
      Eigen::Matrix3d H = detail::tube_hessian(f, z, root, uu(0), uu(1));
      Eigen::Matrix2d Huu = H.bottomRightCorner<2, 2>();
      Eigen::Vector2d Hut = H.block<2, 1>(1, 0);
      T.critical_theta.push_back(root);
      T.critical_second.push_back(H(0, 0) - Hut.dot(Huu.ldlt().solve(Hut)));
    }
  }
  return T;
}

// C² distance between (g_ε − c)/ε and the restriction h(θ, 0, 0) of the perturbation to the circle.
inline double tube_scaling_error(const FormFunction& base, const FormFunction& h, double eps, const Quatd& z, int m,
                                 int samples = 64) {
  FormFunction f = base + eps * h;
  TubeReduction T = tube_reduce(f, z, m, samples);
  const double c = base.value(z);
  double err = 0;
  for (int s = 0; s < samples; ++s) {
    Quatd p = exp_pure(T.theta[s], 0, 0) * z;
    Jet J = h.jet(p);
    err = std::max(err, std::abs((T.g[s] - c) / eps - J.value));
    err = std::max(err, std::abs(T.g_prime[s] / eps - J.grad[0]));
    err = std::max(err, std::abs(T.schur_second[s] / eps - J.hess[0][0]));
  }
  return err;
}

}  // namespace dodeca

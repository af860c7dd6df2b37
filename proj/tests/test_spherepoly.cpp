#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "dodeca/spherepoly.hpp"

using namespace dodeca;

namespace {

PolyQ var3(int k) { return PolyQ::variable(3, k); }
PolyQ var4(int k) { return PolyQ::variable(4, k); }

void quaternion_rotation(const NF& a, const NF& b, const NF& c, const NF& d, std::array<std::array<NF, 3>, 3>& R) {
  R = {{{a * a + b * b - c * c - d * d, NF(2) * (b * c - a * d), NF(2) * (b * d + a * c)},
        {NF(2) * (b * c + a * d), a * a - b * b + c * c - d * d, NF(2) * (c * d - a * b)},
        {NF(2) * (b * d - a * c), NF(2) * (c * d + a * b), a * a - b * b - c * c + d * d}}};
}

PolyNF rotate_exact(const PolyNF& f, const std::array<std::array<NF, 3>, 3>& R) {
  std::vector<PolyNF> subs;
  for (int i = 0; i < 3; ++i) {
    PolyNF row = PolyNF::zero(3);
    for (int j = 0; j < 3; ++j) row += R[i][j] * PolyNF::variable(3, j);
    subs.push_back(row);
  }
  return f.compose(subs);
}

}  // namespace

TEST(SpherePoly, LaplacianExamples) {
  auto r6 = PolyQ::radius_power(3, 3);
  EXPECT_EQ(euclidean_laplacian(r6), Rational(42) * PolyQ::radius_power(3, 2));
  EXPECT_EQ(euclidean_laplacian(var3(0) * var3(0)), PolyQ::constant(3, 2));
}

TEST(SpherePoly, SexticLaplacianProportional) {
  PolyNF P = invariant_sextic();
  NF kappa = NF(-4) - NF(2) * NF::sqrt5();
  EXPECT_EQ(euclidean_laplacian(P), kappa * PolyNF::radius_power(3, 2));
  auto hc = harmonic_correction(P);
  EXPECT_EQ(hc.kappa, kappa);
  EXPECT_EQ(hc.c, -kappa / NF(42));
  EXPECT_TRUE(euclidean_laplacian(hc.corrected).is_zero());
}

TEST(SpherePoly, HarmonicCorrectionEdgeCases) {
  PolyNF h = PolyNF::variable(3, 0) * PolyNF::variable(3, 1);
  h = h * h - PolyNF::variable(3, 2) * PolyNF::variable(3, 2) * PolyNF::variable(3, 2) * PolyNF::variable(3, 2);
  // xy is harmonic of degree 2; use an even-degree harmonic: x² − y²
  PolyNF g = PolyNF::variable(3, 0) * PolyNF::variable(3, 0) - PolyNF::variable(3, 1) * PolyNF::variable(3, 1);
  auto hg = harmonic_correction(g);
  EXPECT_TRUE(hg.c.is_zero());
  EXPECT_EQ(hg.corrected, g);
  auto hr = harmonic_correction(PolyNF::radius_power(3, 3));
  EXPECT_TRUE(hr.corrected.is_zero());
  EXPECT_THROW(harmonic_correction(h), std::invalid_argument);
}

TEST(SpherePoly, HopfLiftBasics) {
  EXPECT_EQ(hopf_lift(PolyQ::constant(3, 1)), PolyQ::constant(4, 1));
  PolyQ expect = var4(0) * var4(0) + var4(1) * var4(1) - var4(2) * var4(2) - var4(3) * var4(3);
  EXPECT_EQ(hopf_lift(var3(2)), expect);
}

TEST(SpherePoly, SeedEigenfunctionExact) {
  PolyNF F = hopf_lift(harmonic_correction(invariant_sextic()).corrected);
  ASSERT_TRUE(F.is_homogeneous(12));
  auto ec = sphere_laplacian_eigencheck(F, 12);
  EXPECT_TRUE(ec.is_eigenfunction);
  EXPECT_EQ(ec.eigenvalue, 168);
}

TEST(SpherePoly, EigencheckSmallCases) {
  auto ec = sphere_laplacian_eigencheck(var4(2), 1);
  EXPECT_TRUE(ec.is_eigenfunction);
  EXPECT_EQ(ec.eigenvalue, 3);
  // a⁴ is not an eigenfunction on S³
  EXPECT_FALSE(sphere_laplacian_eigencheck(var4(0) * var4(0) * var4(0) * var4(0), 4).is_eigenfunction);
  EXPECT_THROW(sphere_laplacian_eigencheck(var4(0) + var4(0) * var4(1), 2), std::invalid_argument);
}

TEST(SpherePoly, CoefficientFunctionsAreEigenfunctions) {
  auto A = coefficient_polynomials();
  for (int j : {0, 4, 6}) {
    EXPECT_TRUE(sphere_laplacian_eigencheck(real_part(A[j]), 12).is_eigenfunction) << j;
    if (j != 6) EXPECT_TRUE(sphere_laplacian_eigencheck(imag_part(A[j]), 12).is_eigenfunction) << j;
  }
}

TEST(SpherePoly, ExactIntegrals) {
  auto one = sphere_integral_exact(PolyQ::constant(4, 1));
  EXPECT_EQ(one.first, Rational(2));
  EXPECT_EQ(one.second, 2);
  auto half = sphere_integral_exact(var4(0) * var4(0) + var4(1) * var4(1));
  EXPECT_EQ(half.first, Rational(1));
  EXPECT_EQ(sphere_integral_exact(PolyQ::constant(3, 1)).first, Rational(4));
  EXPECT_EQ(sphere_integral_exact(var4(0) * var4(1) * var4(1)).first, Rational(0));
}

TEST(SpherePoly, MomentMatchesMonteCarlo) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  Exponent e{4, 2, 0, 2};
  const int N = 10000000;
  double sum = 0, sum2 = 0;
  for (int k = 0; k < N; ++k) {
    double x[4] = {n(rng), n(rng), n(rng), n(rng)};
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    double v = std::pow(x[0] / r, 4) * std::pow(x[1] / r, 2) * std::pow(x[3] / r, 2);
    sum += v;
    sum2 += v * v;
  }
  double area = 2 * M_PI * M_PI;
  double mean = sum / N, var = sum2 / N - mean * mean;
  double se = area * std::sqrt(var / N);
  EXPECT_LT(std::abs(area * mean - sphere_moment(e, 4).value()), 3 * se);
}

TEST(SpherePoly, DistinctDegreeHarmonicsOrthogonal) {
  PolyQ h2 = var4(0) * var4(1);
  PolyQ h4 = harmonic_projection(var4(0) * var4(0) * var4(0) * var4(0), 4);
  EXPECT_TRUE(h4.laplacian().is_zero());
  EXPECT_EQ(sphere_integral_exact(h2 * h4).first, Rational(0));
  PolyQ h6 = harmonic_projection(var4(0) * var4(0) * var4(1) * var4(1) * var4(2) * var4(2), 6);
  EXPECT_EQ(sphere_integral_exact(h4 * h6).first, Rational(0));
}

TEST(SpherePoly, CanonicalForm) {
  PolyQ r2 = PolyQ::radius_power(4, 1);
  EXPECT_TRUE(r2.equal_on_sphere(PolyQ::constant(4, 1)));
  PolyQ p = var4(0) * var4(3) * var4(3);
  EXPECT_TRUE(p.equal_on_sphere(var4(0) - var4(0) * var4(0) * var4(0) - var4(0) * var4(1) * var4(1) -
                                var4(0) * var4(2) * var4(2)));
}

TEST(SpherePoly, SexticIcosahedralInvariance) {
  PolyNF Pt = harmonic_correction(invariant_sextic()).corrected;
  const NF h(rat(1, 2));
  const NF t = NF::tau();
  std::array<std::array<NF, 3>, 3> R;
  quaternion_rotation(h, h, h, h, R);
  EXPECT_EQ(rotate_exact(Pt, R), Pt);
  // 72° about the vertex (τ,1,0)
  quaternion_rotation(t * h, h, (t - NF(1)) * h, NF(0), R);
  EXPECT_EQ(rotate_exact(Pt, R), Pt);
}

TEST(SpherePoly, SeedLiesInFirstEigenspace) {
  PolyD F = hopf_seed_polynomial();
  auto A = coefficient_polynomials();
  std::vector<PolyD> span;
  for (int j = 0; j <= 12; ++j) {
    span.push_back(real_part(A[j]));
    span.push_back(imag_part(A[j]));
  }
  auto quad = make_s3_quadrature(24);
  const int m = static_cast<int>(quad.points.size());
  Eigen::MatrixXd B(m, span.size());
  Eigen::VectorXd f(m);
  for (int k = 0; k < m; ++k) {
    double w = std::sqrt(quad.weights[k]);
    f(k) = w * F.evaluate(quad.points[k]);
    for (std::size_t c = 0; c < span.size(); ++c) B(k, c) = w * span[c].evaluate(quad.points[k]);
  }
  Eigen::VectorXd coef = B.colPivHouseholderQr().solve(f);
  EXPECT_LT((B * coef - f).norm() / f.norm(), 1e-10);
  // and it is proportional to A₆ alone
  Eigen::VectorXd a6 = B.col(12);
  double c6 = a6.dot(f) / a6.squaredNorm();
  EXPECT_LT((f - c6 * a6).norm() / f.norm(), 1e-10);
}

TEST(SpherePoly, QuadratureSelfTest) {
  for (int D : {12, 24, 48}) {
    auto q = make_s3_quadrature(D);
    double total = 0;
    for (double w : q.weights) total += w;
    EXPECT_NEAR(total, 2 * M_PI * M_PI, 1e-10);
    EXPECT_LT(quadrature_self_test(q), 1e-12);
  }
}

TEST(SpherePoly, WirtingerNorms) {
  auto W = coefficient_polynomials_wirtinger();
  // ∫|A_j|² ∝ C(12, j): compare ratios exactly
  NF base = (W[0] * W[0].conj()).integral_over_pi2();
  for (int j = 1; j <= 12; ++j) {
    NF v = (W[j] * W[j].conj()).integral_over_pi2();
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), 12, j);
    EXPECT_EQ(v, base * NF(Rational(binom)));
  }
  EXPECT_TRUE((W[0] * W[1].conj()).integral_over_pi2().is_zero());
}

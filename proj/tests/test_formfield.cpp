#include <gtest/gtest.h>

#include <random>

#include "dodeca/formfield.hpp"

using namespace dodeca;

namespace {

Quatd random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n;
  return normalized(Quatd{n(rng), n(rng), n(rng), n(rng)});
}

double jet_distance(const Jet& x, const Jet& y) {
  double d = std::abs(x.value - y.value);
  for (int a = 0; a < 3; ++a) {
    d = std::max(d, std::abs(x.grad[a] - y.grad[a]));
    for (int b = 0; b < 3; ++b) d = std::max(d, std::abs(x.hess[a][b] - y.hess[a][b]));
  }
  return d;
}

}  // namespace

TEST(FormField, FrameDerivativesMatchFiniteDifferences) {
  std::mt19937 rng(31);
  FormFunction f = coefficient_function(3, cd(0.7, -0.2)) + coefficient_function(6) +
                   FormFunction(invariant_T20<cd>(), std::vector<cd>(21, cd(1e-4, 2e-4)));
  for (int k = 0; k < 5; ++k) {
    Quatd z = random_unit(rng);
    Jet exact = f.jet(z), fd = finite_difference_jet(f, z);
    EXPECT_LT(jet_distance(exact, fd), 1e-4 * (1 + std::abs(exact.value) + 100));
  }
}

TEST(FormField, PolynomialJetAgreesWithFormJet) {
  std::mt19937 rng(5);
  auto A = coefficient_polynomials();
  PolyFunction p(real_part(A[2]));
  FormFunction f = coefficient_function(2);
  for (int k = 0; k < 5; ++k) {
    Quatd z = random_unit(rng);
    EXPECT_LT(jet_distance(p.jet(z), f.jet(z)), 1e-9);
  }
}

TEST(FormField, FrameLaplacianIsEigenvalue) {
  std::mt19937 rng(6);
  FormFunction f = coefficient_function(4, cd(0.3, 1.1));
  for (int k = 0; k < 5; ++k) {
    Jet J = f.jet(random_unit(rng));
    EXPECT_NEAR(J.hess[0][0] + J.hess[1][1] + J.hess[2][2], -168 * J.value, 1e-9);
  }
}

TEST(FormField, CentralCoefficientIsReal) {
  std::mt19937 rng(7);
  for (int k = 0; k < 20; ++k) EXPECT_LT(std::abs(coefficient_A(6, random_unit(rng)).imag()), 1e-12);
}

TEST(FormField, EigenBasisOrthonormal) {
  const auto& E = eigen_basis();
  ASSERT_EQ(E.size(), 13u);
  auto q = make_s3_quadrature(24);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(13, 13);
  for (std::size_t p = 0; p < q.points.size(); ++p) {
    Eigen::VectorXd v = E.values(q.points[p]);
    G += q.weights[p] / kGroupOrder * v * v.transpose();
  }
  EXPECT_LT((G - Eigen::MatrixXd::Identity(13, 13)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FormField, HopfSeedIsFirstBasisFunction) {
  PolyD F = hopf_seed_polynomial();
  const auto& E = eigen_basis();
  std::mt19937 rng(8);
  Quatd z0 = random_unit(rng);
  double c = F.evaluate(z0) / E.phi[0].value(z0);
  for (int k = 0; k < 10; ++k) {
    Quatd z = random_unit(rng);
    EXPECT_NEAR(F.evaluate(z), c * E.phi[0].value(z), 1e-10);
  }
}

TEST(FormField, CharacterDimensionsMatchMolien) {
  // (1 + t³⁰)/((1 − t¹²)(1 − t²⁰))
  std::vector<int> molien(61, 0);
  for (int a = 0; 12 * a <= 60; ++a)
    for (int b = 0; 12 * a + 20 * b <= 60; ++b)
      for (int c = 0; c <= 1; ++c)
        if (12 * a + 20 * b + 30 * c <= 60) ++molien[12 * a + 20 * b + 30 * c];
  const auto& g = binary_icosahedral();
  for (int n = 0; n <= 60; ++n) {
    EXPECT_EQ(invariant_dimension(n, g), molien[n]) << n;
    EXPECT_EQ(static_cast<int>(invariant_forms(n).size()), molien[n]) << n;
  }
}

TEST(FormField, InvariantBasisBlocks) {
  auto B = build_invariant_basis(24);
  std::vector<std::pair<int, int>> got;
  for (const auto& b : B.blocks) got.push_back({b.degree, b.dimension()});
  std::vector<std::pair<int, int>> want{{0, 1}, {12, 13}, {20, 21}, {24, 25}};
  EXPECT_EQ(got, want);
  auto q = make_s3_quadrature(48);
  const int K = B.size();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd v(K);
  for (std::size_t p = 0; p < q.points.size(); ++p) {
    B.evaluate(q.points[p], v.data(), nullptr, nullptr, nullptr);
    G += q.weights[p] / kGroupOrder * v * v.transpose();
  }
  EXPECT_LT((G - Eigen::MatrixXd::Identity(K, K)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FormField, InvariantBasisRightInvariant) {
  auto B = build_invariant_basis(24);
  const auto& g = binary_icosahedral();
  std::mt19937 rng(9);
  Quatd z = random_unit(rng);
  const int K = B.size();
  Eigen::VectorXd v0(K), v1(K);
  B.evaluate(z, v0.data(), nullptr, nullptr, nullptr);
  for (std::size_t k = 0; k < g.size(); k += 11) {
    B.evaluate(z * g.elements[k], v1.data(), nullptr, nullptr, nullptr);
    EXPECT_LT((v1 - v0).cwiseAbs().maxCoeff(), 1e-9);
  }
}

#include <gtest/gtest.h>

#include <random>

#include "dodeca/quatgroup.hpp"

using namespace dodeca;

namespace {

Quatd random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n;
  return normalized(Quatd{n(rng), n(rng), n(rng), n(rng)});
}

}  // namespace

TEST(QuatGroup, KleinOrder) {
  const auto& g = binary_icosahedral();
  EXPECT_EQ(g.size(), 120u);
  for (const auto& q : g.exact) EXPECT_EQ(q.norm2(), ExactScalar(1));
}

TEST(QuatGroup, IcosianOrder) { EXPECT_EQ(generate_group(icosian_generators()).size(), 120u); }

TEST(QuatGroup, TrivialSubgroups) {
  ExactQuat minus_one{ExactScalar(-1), ExactScalar(0), ExactScalar(0), ExactScalar(0)};
  ExactQuat one{ExactScalar(1), ExactScalar(0), ExactScalar(0), ExactScalar(0)};
  EXPECT_EQ(generate_group({minus_one}).size(), 2u);
  EXPECT_EQ(generate_group({one}).size(), 1u);
}

TEST(QuatGroup, NonClosureSignalled) {
  // an element of infinite order: (3/5, 4/5, 0, 0)
  ExactQuat q{ExactScalar(NF(rat(3, 5))), ExactScalar(NF(rat(4, 5))), ExactScalar(0), ExactScalar(0)};
  EXPECT_THROW(generate_group({q}, 500), std::runtime_error);
}

TEST(QuatGroup, OrderHistogram) {
  auto h = binary_icosahedral().order_histogram();
  std::map<int, int> expected{{1, 1}, {2, 1}, {3, 20}, {4, 30}, {5, 24}, {6, 20}, {10, 24}};
  EXPECT_EQ(h, expected);
}

TEST(QuatGroup, InverseTable) {
  const auto& g = binary_icosahedral();
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g.product[k][g.inverse[k]], g.identity);
}

TEST(QuatGroup, HopfExamples) {
  auto p5 = hopf(z5());
  EXPECT_NEAR(dist3(p5, {0, 0, 1}), 0, 1e-15);
  auto p2 = hopf(z2_exact());
  EXPECT_EQ(p2[0], ExactScalar(0));
  EXPECT_EQ(p2[1], ExactScalar(1));
  EXPECT_EQ(p2[2], ExactScalar(0));
  double s = 1 / std::sqrt(3.0);
  EXPECT_NEAR(dist3(hopf(z3()), {s, s, s}), 0, 1e-14);
  auto p3 = hopf(z3_exact());
  Z3Scalar third = Z3Scalar(NF::basis(2, rat(1, 3)));
  for (int k = 0; k < 3; ++k) EXPECT_EQ(p3[k], third);
}

TEST(QuatGroup, HopfFiberInvariance) {
  std::mt19937 rng(3);
  for (int k = 0; k < 20; ++k) {
    Quatd z = random_unit(rng);
    for (double t : {0.3, 1.7, -2.2}) EXPECT_LT(dist3(hopf(exp_pure(t, 0, 0) * z), hopf(z)), 1e-14);
  }
}

TEST(QuatGroup, StabilizerOrders) {
  const auto& g = binary_icosahedral();
  EXPECT_EQ(fiber_stabilizer_order(z5(), g), 10);
  EXPECT_EQ(fiber_stabilizer_order(z2(), g), 4);
  EXPECT_EQ(fiber_stabilizer_order(z3_face_lift(g), g), 6);
  std::mt19937 rng(9);
  EXPECT_EQ(fiber_stabilizer_order(random_unit(rng), g), 2);
}

TEST(QuatGroup, OrbitSizes) {
  const auto& g = binary_icosahedral();
  EXPECT_EQ(hopf_orbit(z5(), g).size(), 12u);
  EXPECT_EQ(hopf_orbit(z3_face_lift(g), g).size(), 20u);
  EXPECT_EQ(hopf_orbit(z2(), g).size(), 30u);
}

TEST(QuatGroup, Cosets) {
  const auto& g = binary_icosahedral();
  std::mt19937 rng(4);
  Quatd z = random_unit(rng);
  EXPECT_TRUE(same_coset(z, z * g.elements[17], g));
  EXPECT_TRUE(same_coset(z, -z, g));
  EXPECT_FALSE(same_coset(z5(), z2(), g));
  EXPECT_GT(min_coset_separation(g), 10 * 1e-9);
}

#include <gtest/gtest.h>

#include <random>

#include "dodeca/critscan.hpp"

using namespace dodeca;

namespace {

MCensusOptions quick() {
  MCensusOptions o;
  o.starts = 4096;
  return o;
}

NF q(long a, long b) { return NF(rat(a, b)); }

}  // namespace

TEST(CritScan, SexticCensusOnSphere) {
  S2CensusOptions o;
  o.symmetry = &sextic_rotation_group();
  auto c = s2_critical_census(to_double_poly(invariant_sextic()), o);
  EXPECT_EQ(sextic_rotation_group().size(), 60u);
  EXPECT_EQ(c.total, 62);
  EXPECT_TRUE(c.complete);
  EXPECT_EQ(orbit_sizes(c), (std::vector<int>{12, 20, 30}));
  EXPECT_LT(c.max_gradient, 1e-10);
  EXPECT_EQ(c.counts_by_label[OrbitLabel::Vertex5], 12);
  EXPECT_EQ(c.counts_by_label[OrbitLabel::Face3], 20);
  EXPECT_EQ(c.counts_by_label[OrbitLabel::Edge2], 30);
}

TEST(CritScan, HeightFunctionOnSphere) {
  auto c = s2_critical_census(PolyD::variable(3, 2), {});
  ASSERT_EQ(c.total, 2);
  EXPECT_EQ(c.counts_by_index[0], 1);
  EXPECT_EQ(c.counts_by_index[2], 1);
}

TEST(CritScan, ReducedQuarticRoots) {
  for (const NF& c : case1_quartic_roots()) EXPECT_TRUE(case1_quartic(c).is_zero());
  // every census point with xyz ≠ 0 has z² among the roots
  S2CensusOptions o;
  auto census = s2_critical_census(to_double_poly(invariant_sextic()), o);
  int interior = 0;
  for (const auto& r : census.records) {
    const auto& x = r.location;
    if (std::abs(x[0] * x[1] * x[2]) < 1e-8) continue;
    ++interior;
    double best = 1;
    for (const NF& c : case1_quartic_roots()) best = std::min(best, std::abs(x[2] * x[2] - c.to_double()));
    EXPECT_LT(best, 1e-10);
  }
  EXPECT_EQ(interior, 8 + 24);
}

TEST(CritScan, ExactHessianVertex) {
  const NF t = NF::tau(), s5 = NF::sqrt5();
  auto H = exact_hessian_at(invariant_sextic(), {t, NF(1), NF(0)}, {NF(1), -t, NF(0)}, {NF(0), NF(0), NF(1)});
  EXPECT_EQ(H.matrix[0][0], NF(24) + q(56, 5) * s5);
  EXPECT_EQ(H.matrix[1][1], (NF(32) + NF(16) * s5) * q(1, 5));
  EXPECT_TRUE(H.matrix[0][1].is_zero());
  EXPECT_EQ(H.multiplier, -(NF(6) + NF(3) * s5) * q(1, 5));
  EXPECT_EQ(H.definiteness(), 1);
}

TEST(CritScan, ExactHessianFace) {
  const NF s5 = NF::sqrt5();
  auto H = exact_hessian_at(invariant_sextic(), {NF(1), NF(1), NF(1)}, {NF(1), NF(-1), NF(0)},
                            {NF(1), NF(1), NF(-2)});
  EXPECT_EQ(H.matrix[0][0], -(NF(64) + NF(32) * s5) * q(1, 9));
  EXPECT_EQ(H.matrix[1][1], -(NF(64) + NF(32) * s5) * q(1, 3));
  EXPECT_TRUE(H.matrix[0][1].is_zero());
  EXPECT_EQ(H.multiplier, (NF(2) + s5) * q(1, 9));
  EXPECT_EQ(H.definiteness(), -1);
}

TEST(CritScan, ExactHessianEdge) {
  const NF t = NF::tau(), s5 = NF::sqrt5(), it = t.inverse();
  auto H = exact_hessian_at(invariant_sextic(), {it * q(1, 2), q(1, 2), t * q(1, 2)}, {NF(1), -it, NF(0)},
                            {NF(1), NF(0), -it * it});
  EXPECT_EQ(H.matrix[0][0], -NF(3) * s5 - NF(5));
  EXPECT_EQ(H.matrix[0][1], NF(-2));
  EXPECT_EQ(H.matrix[1][1], NF(1) + s5);
  EXPECT_EQ(H.determinant(), NF(-24) - NF(8) * s5);
  EXPECT_TRUE(H.multiplier.is_zero());
  EXPECT_EQ(H.definiteness(), 0);
}

TEST(CritScan, ExactHessianRejectsNonCritical) {
  EXPECT_THROW(exact_hessian_at(invariant_sextic(), {NF(1), NF(0), NF(1)}, {NF(0), NF(1), NF(0)},
                                {NF(1), NF(0), NF(-1)}),
               std::invalid_argument);
}

TEST(CritScan, SeedHasThreeBottCircles) {
  auto c = m_critical_census(seed_function(), "seed", quick());
  EXPECT_EQ(c.total, 0);
  ASSERT_EQ(c.circles.size(), 3u);
  auto by = c.circles_by_label();
  EXPECT_EQ(by[OrbitLabel::Vertex5], 1);
  EXPECT_EQ(by[OrbitLabel::Face3], 1);
  EXPECT_EQ(by[OrbitLabel::Edge2], 1);
  for (const auto& r : c.circles) {
    EXPECT_GT(r.fiber_alignment, 1 - 1e-9);
    EXPECT_LT(r.gradient_norm, 1e-10);
  }
  EXPECT_EQ(c.euler_sum, 0);
}

TEST(CritScan, TwelvePointFunction) {
  auto s = sweep_census([](double e) { return fab_function(e, e); }, "fab", {1e-2, 3e-3, 1e-3}, quick());
  ASSERT_TRUE(s.stable);
  const auto& c = s.censuses.back();
  EXPECT_EQ(c.total, 12);
  EXPECT_EQ(c.counts_by_label.at(OrbitLabel::Vertex5), 2);
  EXPECT_EQ(c.counts_by_label.at(OrbitLabel::Face3), 4);
  EXPECT_EQ(c.counts_by_label.at(OrbitLabel::Edge2), 6);
  EXPECT_EQ(c.euler_sum, 0);
  EXPECT_EQ(c.s3_count, 12 * 120);
  EXPECT_LT(c.max_gradient, 1e-10);
}

TEST(CritScan, SixPointFunction) {
  auto c = m_critical_census(psi_function(1e-2, 1e-2, 1e-2), "psi", quick());
  EXPECT_EQ(c.total, 6);
  EXPECT_EQ(c.counts_by_label.at(OrbitLabel::Vertex5), 2);
  EXPECT_EQ(c.counts_by_label.at(OrbitLabel::Face3), 2);
  EXPECT_EQ(c.counts_by_label.at(OrbitLabel::Edge2), 2);
  EXPECT_EQ(c.euler_sum, 0);
  for (const auto& r : c.records)
    if (r.label == OrbitLabel::Edge2) EXPECT_TRUE(r.morse_index == 1 || r.morse_index == 2);
}

TEST(CritScan, RandomSmallParametersKeepCounts) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> mag(std::log(1e-3), std::log(1e-2));
  std::bernoulli_distribution sign;
  auto draw = [&] { return (sign(rng) ? 1 : -1) * std::exp(mag(rng)); };
  MCensusOptions o = quick();
  o.starts = 2048;
  for (int k = 0; k < 10; ++k) {
    double a = draw(), b = draw();
    EXPECT_EQ(m_critical_census(fab_function(a, b), "fab", o).total, 12) << a << " " << b;
    double e2 = draw(), e3 = draw(), e5 = draw();
    EXPECT_EQ(m_critical_census(psi_function(e2, e3, e5), "psi", o).total, 6) << e2 << " " << e3 << " " << e5;
  }
}

TEST(CritScan, RejectsNonInvariantFunction) {
  FormFunction f(invariant_I12<cd>(), std::vector<cd>(13, 0.0));
  BinaryForm<cd> x12(12);
  x12.coeffs[0] = 1;
  FormFunction bad(x12, std::vector<cd>(13, 1.0));
  EXPECT_THROW(m_critical_census(bad, "bad", quick()), std::invalid_argument);
}

TEST(CritScan, ThreadCountDoesNotChangeCensus) {
  MCensusOptions a = quick(), b = quick();
  a.threads = 1;
  b.threads = 3;
  auto ca = m_critical_census(psi_function(1e-2, -2e-2, 5e-3), "psi", a);
  auto cb = m_critical_census(psi_function(1e-2, -2e-2, 5e-3), "psi", b);
  ASSERT_EQ(ca.records.size(), cb.records.size());
  for (std::size_t k = 0; k < ca.records.size(); ++k) EXPECT_EQ(ca.records[k].location, cb.records[k].location);
}

TEST(CritScan, TubeReductionFrequencies) {
  const Quatd c2 = z2();
  auto T4 = tube_reduce(seed_function() + coefficient_function(4, 1e-3), c2, 2, 128);
  EXPECT_EQ(T4.circle_critical_points(), 2);
  auto T0 = tube_reduce(seed_function() + coefficient_function(0, 1e-3), c2, 2, 128);
  EXPECT_EQ(T0.circle_critical_points(), 6);
  for (double s : T0.critical_second) EXPECT_GT(std::abs(s), 1e-6);
}

TEST(CritScan, TubeReductionOfFiberInvariantFunction) {
  auto T = tube_reduce(seed_function(), z2(), 2, 32);
  EXPECT_TRUE(T.constant);
  for (std::size_t k = 0; k < T.g.size(); ++k) {
    EXPECT_NEAR(T.g[k], T.g[0], 1e-12);
    EXPECT_NEAR(T.schur_second[k], 0, 1e-6);
  }
}

TEST(CritScan, TubeScalingConsistency) {
  const auto& g = binary_icosahedral();
  struct Case {
    Quatd z;
    int m;
  };
  // a single Re A_j keeps the circle normally critical (ξ ≡ 0, g_ε exactly linear); mix several
  FormFunction h = coefficient_function(0) + coefficient_function(2, cd(0.3, 0.7)) +
                   coefficient_function(5, cd(0, 1)) + coefficient_function(3, 0.4) + coefficient_function(1, 0.2);
  for (Case c : {Case{z2(), 2}, Case{z3_face_lift(g), 3}, Case{z5(), 5}}) {
    double e1 = tube_scaling_error(seed_function(), h, 2e-3, c.z, c.m, 32);
    double e2 = tube_scaling_error(seed_function(), h, 1e-3, c.z, c.m, 32);
    EXPECT_GT(e1 / e2, 1.6) << c.m;
    EXPECT_LT(e1 / e2, 2.5) << c.m;
  }
}

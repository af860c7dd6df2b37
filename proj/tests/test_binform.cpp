#include <gtest/gtest.h>

#include <random>

#include "dodeca/binform.hpp"

using namespace dodeca;

namespace {

using cd = std::complex<double>;

Quatd random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n;
  return normalized(Quatd{n(rng), n(rng), n(rng), n(rng)});
}

NF q(long a, long b) { return NF(rat(a, b)); }

}  // namespace

TEST(BinForm, ExactCoefficientIdentities) {
  const NF i = NF::i();
  const NF s3 = NF::sqrt3();
  EXPECT_EQ(coefficient_A(0, z2_exact()), ExactScalar(-q(11, 64) - q(1, 32) * i));
  EXPECT_EQ(coefficient_A(4, z2_exact()), ExactScalar(-q(165, 64) - q(165, 32) * i));
  NF a3 = -q(55, 216) * s3 - q(55, 216) + (q(55, 216) * s3 - q(55, 216)) * i;
  EXPECT_EQ(coefficient_A(3, z3_exact()), Z3Scalar(a3));
  EXPECT_EQ(coefficient_A(0, z3_exact()), Z3Scalar(q(11, 216) * s3 - q(1, 27) * i));
}

TEST(BinForm, VertexValues) {
  auto a = all_coefficients_A(z5_exact());
  EXPECT_EQ(a[1], ExactScalar(1));
  EXPECT_EQ(a[6], ExactScalar(11));
  EXPECT_EQ(a[11], ExactScalar(-1));
  EXPECT_EQ(a[0], ExactScalar(0));
}

TEST(BinForm, IdentityAction) {
  auto f = invariant_I12<NF>();
  ExactQuat one{ExactScalar(1), ExactScalar(0), ExactScalar(0), ExactScalar(0)};
  auto g = act(one, f);
  for (int j = 0; j <= 12; ++j) EXPECT_EQ(g.coeffs[j], ExactScalar(f.coeffs[j]));
}

TEST(BinForm, GroupFixesI12Exactly) {
  const auto& g = binary_icosahedral();
  auto f = invariant_I12<NF>();
  for (const auto& h : g.exact) {
    auto fh = act(h, f);
    for (int j = 0; j <= 12; ++j) ASSERT_EQ(fh.coeffs[j], ExactScalar(f.coeffs[j]));
  }
}

TEST(BinForm, IcosiansDoNotFixI12) {
  auto g = generate_group(icosian_generators());
  auto f = invariant_I12<NF>();
  int fixing = 0;
  for (const auto& h : g.exact) {
    auto fh = act(h, f);
    bool same = true;
    for (int j = 0; j <= 12; ++j) same = same && fh.coeffs[j] == ExactScalar(f.coeffs[j]);
    fixing += same;
  }
  EXPECT_LT(fixing, 120);
}

TEST(BinForm, HigherInvariantsFixed) {
  const auto& g = binary_icosahedral();
  auto t20 = invariant_T20<cd>();
  auto t30 = invariant_T30<cd>();
  for (const auto& h : g.elements) {
    auto a = act(h, t20), b = act(h, t30);
    for (int j = 0; j <= 20; ++j) ASSERT_LT(std::abs(a.coeffs[j] - t20.coeffs[j]), 1e-6);
    for (int j = 0; j <= 30; ++j) ASSERT_LT(std::abs(b.coeffs[j] - t30.coeffs[j]), 1e-4);
  }
}

TEST(BinForm, Multiplicativity) {
  std::mt19937 rng(2);
  auto f = invariant_I12<cd>();
  for (int k = 0; k < 10; ++k) {
    Quatd z = random_unit(rng), w = random_unit(rng);
    auto lhs = act(z * w, f);
    auto rhs = act(z, act(w, f));
    for (int j = 0; j <= 12; ++j) EXPECT_LT(std::abs(lhs.coeffs[j] - rhs.coeffs[j]), 1e-10);
  }
}

TEST(BinForm, DiagonalWeights) {
  for (double t : {0.4, 2.1}) {
    Quatd a = exp_pure(t, 0, 0);
    for (int j = 0; j <= 12; ++j) {
      BinaryForm<cd> e(12);
      e.coeffs[j] = 1;
      auto g = act(a, e);
      cd expect = std::exp(cd(0, (12 - 2 * j) * t));
      for (int m = 0; m <= 12; ++m) EXPECT_LT(std::abs(g.coeffs[m] - (m == j ? expect : cd(0))), 1e-13);
    }
  }
}

TEST(BinForm, RightInvarianceExact) {
  const auto& g = binary_icosahedral();
  ExactQuat z{ExactScalar(NF(rat(1, 5))), ExactScalar(NF(rat(2, 5))), ExactScalar(NF(rat(2, 5))),
              ExactScalar(NF(rat(4, 5)))};
  auto base = all_coefficients_A(z);
  for (std::size_t k = 0; k < g.size(); k += 7) {
    auto v = all_coefficients_A(z * g.exact[k]);
    for (int j = 0; j <= 12; ++j) ASSERT_EQ(v[j], base[j]);
  }
}

TEST(BinForm, RightInvarianceFloat) {
  const auto& g = binary_icosahedral();
  std::mt19937 rng(8);
  for (int k = 0; k < 20; ++k) {
    Quatd z = random_unit(rng);
    auto base = all_coefficients_A(z);
    for (const auto& h : g.elements) {
      auto v = all_coefficients_A(z * h);
      for (int j = 0; j <= 12; ++j) ASSERT_LT(std::abs(v[j] - base[j]), 1e-10);
    }
  }
}

TEST(BinForm, LeftWeightLaw) {
  std::mt19937 rng(12);
  for (int k = 0; k < 10; ++k) {
    Quatd z = random_unit(rng);
    auto base = all_coefficients_A(z);
    for (double t : {M_PI / 7, 1.3}) {
      auto v = all_coefficients_A(exp_pure(t, 0, 0) * z);
      for (int j = 0; j <= 12; ++j)
        EXPECT_LT(std::abs(v[j] - std::exp(cd(0, (12 - 2 * j) * t)) * base[j]), 1e-10);
    }
  }
}

TEST(BinForm, A0IsRawInvariant) {
  std::vector<ExactQuat> pts{z5_exact(), z2_exact()};
  const auto& g = binary_icosahedral();
  for (int k = 0; k < 18; ++k) pts.push_back(g.exact[k * 6 + 1]);
  auto f = invariant_I12<ExactScalar>();
  for (const auto& z : pts) {
    ExactScalar al = alpha_of(z), be = beta_of(z);
    ExactScalar raw(0), ap(1);
    std::vector<ExactScalar> bp(13, ExactScalar(1));
    for (int k = 1; k <= 12; ++k) bp[k] = bp[k - 1] * be;
    for (int j = 12; j >= 0; --j) {
      raw += f.coeffs[j] * ap * bp[j];
      ap *= al;
    }
    ASSERT_EQ(coefficient_A(0, z), raw);
  }
}

TEST(BinForm, RestrictionFrequencies) {
  EXPECT_EQ(restriction_frequency(0, 2), 3);
  EXPECT_FALSE(restriction_frequency(0, 5).has_value());
  EXPECT_EQ(restriction_frequency(1, 5), 1);
  EXPECT_EQ(restriction_frequency(3, 3), 1);
  EXPECT_EQ(restriction_frequency(4, 2), 1);
}

TEST(BinForm, RestrictionSampling) {
  const auto& g = binary_icosahedral();
  std::vector<std::pair<int, Quatd>> circles{{5, z5()}, {3, z3_face_lift(g)}, {2, z2()}};
  for (auto [m, z] : circles) {
    for (int j = 0; j <= 12; ++j) {
      auto f = restriction_frequency(j, m);
      // the circle in M is θ ∈ [0, π/m); sample the restriction at 64 points
      std::vector<cd> vals;
      for (int s = 0; s < 64; ++s) vals.push_back(coefficient_A(j, exp_pure(M_PI / m * s / 64.0, 0, 0) * z));
      if (!f) {
        for (auto v : vals) EXPECT_LT(std::abs(v), 1e-10) << "j=" << j << " m=" << m;
      } else {
        cd a0 = vals[0];
        for (int s = 0; s < 64; ++s) {
          double th = M_PI / m * s / 64.0;
          EXPECT_LT(std::abs(vals[s] - a0 * std::exp(cd(0, *f * 2 * m * th))), 1e-9);
        }
      }
    }
  }
}

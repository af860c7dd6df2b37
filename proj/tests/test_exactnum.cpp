#include <gtest/gtest.h>

#include <random>

#include "dodeca/exactnum.hpp"

using namespace dodeca;

namespace {

NF random_element(std::mt19937& rng, int density = 16) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7), pick(0, 15);
  NF x;
  for (int k = 0; k < density; ++k) x += NF::basis(pick(rng), rat(num(rng), den(rng)));
  return x;
}

}  // namespace

TEST(ExactNum, GoldenRatioSquare) {
  NF t = NF::tau();
  EXPECT_EQ(t * t, t + NF(1));
}

TEST(ExactNum, DefiningRelations) {
  EXPECT_EQ(NF::i() * NF::i(), NF(-1));
  EXPECT_EQ(NF::sqrt2() * NF::sqrt2(), NF(2));
  EXPECT_EQ(NF::sqrt3() * NF::sqrt3(), NF(3));
  EXPECT_EQ(NF::sqrt5() * NF::sqrt5(), NF(5));
  EXPECT_EQ(NF::sqrt2() * NF::sqrt3(), NF::basis(3));
}

TEST(ExactNum, Inverses) {
  EXPECT_EQ(nf_inv(NF::tau()), NF::tau() - NF(1));
  EXPECT_EQ(nf_inv(NF(2)), NF(rat(1, 2)));
  NF one_plus_i = NF(1) + NF::i();
  EXPECT_EQ(nf_inv(one_plus_i), (NF(1) - NF::i()) * NF(rat(1, 2)));
  EXPECT_THROW(nf_inv(NF(0)), std::domain_error);
}

TEST(ExactNum, InverseRandom) {
  std::mt19937 rng(1);
  for (int k = 0; k < 30; ++k) {
    NF a = random_element(rng, 6);
    if (a.is_zero()) continue;
    EXPECT_EQ(a * a.inverse(), NF(1));
  }
}

TEST(ExactNum, FloatEmbedding) {
  auto t = nf_to_float(NF::tau());
  EXPECT_DOUBLE_EQ(t.real(), 1.6180339887498949);
  EXPECT_EQ(t.imag(), 0.0);
  auto v = nf_to_float(NF(rat(-11, 64)) - NF::i() * NF(rat(1, 32)));
  EXPECT_EQ(v.real(), -0.171875);
  EXPECT_EQ(v.imag(), -0.03125);
  auto z = nf_to_float(NF(0));
  EXPECT_EQ(z, std::complex<double>(0, 0));
}

TEST(ExactNum, RingAxiomsRandom) {
  std::mt19937 rng(7);
  for (int k = 0; k < 10000; ++k) {
    NF a = random_element(rng, 3), b = random_element(rng, 3), c = random_element(rng, 3);
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * b, b * a);
  }
}

TEST(ExactNum, EmbeddingIsHomomorphism) {
  std::mt19937 rng(11);
  for (int k = 0; k < 500; ++k) {
    NF a = random_element(rng, 8), b = random_element(rng, 8);
    auto fa = a.to_complex(), fb = b.to_complex(), fab = (a * b).to_complex();
    double scale = std::max(1.0, std::abs(fa) * std::abs(fb));
    EXPECT_LT(std::abs(fab - fa * fb), 1e-10 * scale);
  }
}

TEST(ExactNum, ConjugationIsAutomorphism) {
  std::mt19937 rng(5);
  for (int k = 0; k < 500; ++k) {
    NF a = random_element(rng, 5), b = random_element(rng, 5);
    EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
    EXPECT_EQ((a + b).conj(), a.conj() + b.conj());
    EXPECT_TRUE((a * a.conj()).is_real());
  }
}

TEST(ExactNum, QuadraticExtension) {
  using E = Ext<Sin36Tag>;
  E r = E::root();
  EXPECT_EQ(r * r, E(Sin36Tag::square()));
  EXPECT_NEAR(r.to_double(), std::sin(M_PI / 5), 1e-15);
  E x(NF::tau(), NF(3));
  EXPECT_EQ(x * x.inverse(), E(1));
  using Z = Ext<Z3Tag>;
  EXPECT_NEAR(Z::root().to_double(), std::sqrt((1 + 1 / std::sqrt(3.0)) / 2), 1e-15);
}

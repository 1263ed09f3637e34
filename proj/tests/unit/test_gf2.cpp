#include <gtest/gtest.h>

#include <random>

#include "conley/gf2.hpp"

using conley::gf2::BitMatrix;

namespace {

BitMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  BitMatrix m(r, c);
  std::bernoulli_distribution bit(0.5);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (bit(rng)) m.flip(i, j);
  return m;
}

}  // namespace

TEST(Gf2, IdentityHasFullRank) {
  for (std::size_t n : {1u, 5u, 64u, 130u}) {
    BitMatrix id = BitMatrix::identity(n);
    EXPECT_EQ(id.rank(), n);
    EXPECT_TRUE(id.is_invertible());
    EXPECT_EQ(id.inverse(), id);
  }
}

TEST(Gf2, ZeroMatrix) {
  BitMatrix z(3, 70);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.rank(), 0u);
  EXPECT_EQ(z.kernel_basis().cols(), 70u);
}

TEST(Gf2, RankOfKnownMatrix) {
  // Rows 1,1,0 / 0,1,1 / 1,0,1 sum to zero mod 2.
  BitMatrix m(3, 3);
  m.flip(0, 0); m.flip(0, 1);
  m.flip(1, 1); m.flip(1, 2);
  m.flip(2, 0); m.flip(2, 2);
  EXPECT_EQ(m.rank(), 2u);
  EXPECT_FALSE(m.is_invertible());
}

TEST(Gf2, InverseTimesMatrixIsIdentity) {
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 20) {
    BitMatrix m = random_matrix(40, 40, rng);
    if (!m.is_invertible()) continue;
    EXPECT_EQ(m * m.inverse(), BitMatrix::identity(40));
    EXPECT_EQ(m.inverse() * m, BitMatrix::identity(40));
    ++checked;
  }
}

TEST(Gf2, RankNullityAndKernel) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    BitMatrix m = random_matrix(17 + t, 90 - t, rng);
    BitMatrix k = m.kernel_basis();
    EXPECT_EQ(k.rows(), m.cols());
    EXPECT_EQ(m.rank() + k.cols(), m.cols());
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(k.rank(), k.cols());
  }
}

TEST(Gf2, TransposePreservesRank) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    BitMatrix m = random_matrix(30, 75, rng);
    EXPECT_EQ(m.rank(), m.transpose().rank());
    EXPECT_EQ(m.transpose().transpose(), m);
  }
}

TEST(Gf2, ProductAssociates) {
  std::mt19937_64 rng(5);
  BitMatrix a = random_matrix(10, 20, rng), b = random_matrix(20, 70, rng), c = random_matrix(70, 3, rng);
  EXPECT_EQ((a * b) * c, a * (b * c));
}

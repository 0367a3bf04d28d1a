#include <gtest/gtest.h>

#include <random>

#include "staba2/lattice.hpp"

using namespace staba2;

namespace {

// Reference 2x2 product by explicit index sums.
IntMatrix naive_product(const IntMatrix& x, const IntMatrix& y) {
  IntMatrix out{{0, 0, 0, 0}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::int64_t acc = 0;
      for (int k = 0; k < 2; ++k) acc += x(i, k) * y(k, j);
      out.a[2 * i + j] = acc;
    }
  return out;
}

IntMatrix random_sl2(std::mt19937_64& rng, int len) {
  const IntMatrix gens[] = {{{1, 1, 0, 1}}, {{1, 0, 1, 1}}, {{1, -1, 0, 1}}, {{1, 0, -1, 1}}};
  IntMatrix m;
  for (int k = 0; k < len; ++k) m = m * gens[rng() % 4];
  return m;
}

}  // namespace

TEST(Lattice, EulerPairingOnBasis) {
  EXPECT_EQ(euler_pairing(classes::S, classes::T), -1);
  EXPECT_EQ(euler_pairing(classes::T, classes::S), 1);
  EXPECT_EQ(euler_pairing(classes::S, classes::S), 0);
}

TEST(Lattice, EulerPairingIsAntisymmetric) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int k = 0; k < 500; ++k) {
    const KClass a{d(rng), d(rng)}, b{d(rng), d(rng)};
    EXPECT_EQ(euler_pairing(a, b), -euler_pairing(b, a));
    EXPECT_EQ(euler_pairing(a, a), 0);
  }
}

TEST(Lattice, TwistMatrices) {
  EXPECT_EQ(twist_matrix(classes::S).matrix(), (IntMatrix{{1, 1, 0, 1}}));
  EXPECT_EQ(twist_matrix(classes::T).matrix(), (IntMatrix{{1, 0, -1, 1}}));
}

TEST(Lattice, TwistFixesItsClassAndPreservesPairing) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int k = 0; k < 300; ++k) {
    const KClass x{d(rng), d(rng)}, a{d(rng), d(rng)}, b{d(rng), d(rng)};
    const auto tw = twist_matrix(x);
    EXPECT_EQ(tw * x, x);
    EXPECT_EQ(euler_pairing(tw * a, tw * b), euler_pairing(a, b));
    // y -> y - chi(x, y) x, checked directly.
    EXPECT_EQ(tw * a, a - x * euler_pairing(x, a));
  }
}

TEST(Lattice, BraidRelationAndCenter) {
  const auto s = twist_matrix(classes::S).matrix(), t = twist_matrix(classes::T).matrix();
  EXPECT_EQ(s * t * s, t * s * t);
  EXPECT_EQ((s * t).pow(3), -IntMatrix::identity());
  EXPECT_EQ((s * t).pow(6), IntMatrix::identity());
}

TEST(Lattice, ShiftActsBySign) {
  EXPECT_EQ(shift_matrix(1).matrix(), -IntMatrix::identity());
  EXPECT_EQ(shift_matrix(2).matrix(), IntMatrix::identity());
  EXPECT_EQ(shift_matrix(-3).matrix(), -IntMatrix::identity());
}

TEST(Lattice, ProductMatchesNaiveOracle) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int k = 0; k < 1000; ++k) {
    const IntMatrix x{{d(rng), d(rng), d(rng), d(rng)}}, y{{d(rng), d(rng), d(rng), d(rng)}};
    EXPECT_EQ(x * y, naive_product(x, y));
    EXPECT_EQ((x * y).det(), x.det() * y.det());
    EXPECT_EQ((x * y).transpose(), y.transpose() * x.transpose());
  }
}

TEST(Lattice, InverseAndPowers) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto m = random_sl2(rng, 12);
    EXPECT_EQ(m.det(), 1);
    EXPECT_EQ(m * m.inverse(), IntMatrix::identity());
    EXPECT_EQ(m.pow(3), m * m * m);
    EXPECT_EQ(m.pow(-2), (m * m).inverse());
    EXPECT_EQ(m.pow(0), IntMatrix::identity());
  }
  EXPECT_THROW((IntMatrix{{2, 0, 0, 1}}).inverse(), std::domain_error);
}

TEST(Lattice, LatticeAutRequiresDeterminantOne) {
  EXPECT_THROW(LatticeAut(IntMatrix{{0, 1, 1, 0}}), std::invalid_argument);
  EXPECT_NO_THROW(LatticeAut(IntMatrix{{2, 1, 1, 1}}));
}

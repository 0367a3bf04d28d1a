#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "staba2/exchange.hpp"

using namespace staba2;

namespace {

// Tilt words evaluated in Br3 through the faithful pair (standard SL2 image,
// exponent sum), with Sigma = s1 s2 and Delta = s2 s1 s2.
using Pair = std::pair<std::array<std::int64_t, 4>, std::int64_t>;

Pair letter(TiltLabel l) {
  const IntMatrix a{{1, 1, 0, 1}}, b{{1, 0, -1, 1}};
  switch (l) {
    case TiltLabel::Sigma: return {(a * b).a, 2};
    case TiltLabel::Delta: return {(b * a * b).a, 3};
    case TiltLabel::SigmaInv: return {(a * b).inverse().a, -2};
    case TiltLabel::DeltaInv: return {(b * a * b).inverse().a, -3};
  }
  return {};
}

Pair mul(const Pair& x, const Pair& y) {
  return {(IntMatrix{x.first} * IntMatrix{y.first}).a, x.second + y.second};
}

// Brute force: BFS distances of all elements reachable by words of length <= r.
std::map<Pair, int> brute_ball(int r) {
  std::map<Pair, int> dist{{{IntMatrix::identity().a, 0}, 0}};
  std::vector<Pair> frontier{{IntMatrix::identity().a, 0}};
  for (int d = 1; d <= r; ++d) {
    std::vector<Pair> next;
    for (const auto& p : frontier)
      for (auto l : kTiltLabels) {
        const auto q = mul(p, letter(l));
        if (dist.emplace(q, d).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return dist;
}

}  // namespace

TEST(Exchange, StandardHeartSimples) {
  const Heart a0 = standard_heart();
  EXPECT_EQ(a0.t_role().cls, classes::T);
  EXPECT_EQ(a0.s_role().cls, classes::S);
  EXPECT_EQ(a0.extension_class(), classes::E);
  EXPECT_EQ(a0.t_role().shift_tag, 0);
}

TEST(Exchange, TiltsNegateTheTiltedSimple) {
  const Heart a0 = standard_heart();
  const Heart rs = simple_tilt(a0, Role::S, Side::Right);
  EXPECT_EQ(rs.t_role().cls, -classes::S);
  EXPECT_EQ(rs.t_role().shift_tag, 1);
  EXPECT_EQ(rs.s_role().cls, classes::T);

  const Heart rt = simple_tilt(a0, Role::T, Side::Right);
  EXPECT_EQ(rt.t_role().cls, classes::E);
  EXPECT_EQ(rt.s_role().cls, -classes::T);

  const Heart lt = simple_tilt(a0, Role::T, Side::Left);
  EXPECT_EQ(lt.t_role().cls, classes::S);
  EXPECT_EQ(lt.s_role().cls, -classes::T);

  const Heart ls = simple_tilt(a0, Role::S, Side::Left);
  EXPECT_EQ(ls.t_role().cls, -classes::S);
  EXPECT_EQ(ls.s_role().cls, classes::E);
}

TEST(Exchange, LeftAndRightTiltsAreInverse) {
  std::mt19937_64 rng(9);
  const auto ball = generate_ball(3, Quotient::None);
  for (int k = 0; k < 50; ++k) {
    const Heart h(ball.representatives[rng() % ball.size()]);
    EXPECT_EQ(simple_tilt(simple_tilt(h, TiltLabel::Delta), TiltLabel::DeltaInv), h);
    EXPECT_EQ(simple_tilt(simple_tilt(h, TiltLabel::Sigma), TiltLabel::SigmaInv), h);
  }
}

TEST(Exchange, BallMatchesBruteForceEnumeration) {
  for (int r = 0; r <= 4; ++r) {
    const auto ball = generate_ball(r, Quotient::None);
    const auto brute = brute_ball(r);
    ASSERT_EQ(ball.size(), brute.size()) << "radius " << r;
    std::map<int, std::size_t> by_dist_ball, by_dist_brute;
    for (int d : ball.distance) ++by_dist_ball[d];
    for (const auto& [p, d] : brute) ++by_dist_brute[d];
    EXPECT_EQ(by_dist_ball, by_dist_brute) << "radius " << r;
  }
}

TEST(Exchange, SphereSizes) {
  // Cayley graph of <Sigma, Delta | Sigma^3 = Delta^2>: 1, 4, 10, 24, ...
  const auto ball = generate_ball(3, Quotient::None);
  std::map<int, std::size_t> shells;
  for (int d : ball.distance) ++shells[d];
  EXPECT_EQ(shells[0], 1u);
  EXPECT_EQ(shells[1], 4u);
  EXPECT_EQ(shells[2], brute_ball(2).size() - 5);
}

TEST(Exchange, InteriorVerticesAreFourRegular) {
  const auto ball = generate_ball(4, Quotient::None);
  for (std::size_t v = 0; v < ball.size(); ++v) {
    if (ball.distance[v] < ball.radius) {
      EXPECT_EQ(ball.neighbor_count(v), 4u);
      EXPECT_EQ(ball.out_degree(v), 4u);
    }
  }
}

TEST(Exchange, TorsorProperty) {
  const auto ball = generate_ball(4, Quotient::None);
  std::mt19937_64 rng(10);
  for (int k = 0; k < 100; ++k) {
    const auto& a = ball.representatives[rng() % ball.size()];
    const auto& b = ball.representatives[rng() % ball.size()];
    const AutElement g = b * a.inverse();
    EXPECT_EQ(apply(g, Heart(a)), Heart(b));
    // Left translation carries labelled edges to labelled edges.
    for (auto l : kTiltLabels)
      EXPECT_EQ(apply(g, simple_tilt(Heart(a), l)), simple_tilt(Heart(b), l));
  }
}

TEST(Exchange, SphQuotientIsFiveCycle) {
  const auto ball = generate_ball(3, Quotient::Sph);
  ASSERT_EQ(ball.size(), 5u);
  std::set<std::int64_t> residues;
  for (std::size_t v = 0; v < ball.size(); ++v) {
    EXPECT_EQ(ball.neighbor_count(v), 2u);
    residues.insert(ball.vertices[v].shift_res);
  }
  EXPECT_EQ(residues.size(), 5u);
}

TEST(Exchange, ShiftQuotientIsPsl2CayleyGraph) {
  const auto ball = generate_ball(4, Quotient::Shift);
  for (std::size_t v = 0; v < ball.size(); ++v)
    if (ball.distance[v] < ball.radius) EXPECT_EQ(ball.neighbor_count(v), 3u);
}

TEST(Exchange, RelationSigmaCubedDeltaSquared) {
  const auto rep = verify_relation_ball(generate_ball(3, Quotient::None), 8);
  EXPECT_TRUE(rep.sigma3_equals_delta2);
  EXPECT_TRUE(rep.sigma6_delta_minus4_closes);
  EXPECT_FALSE(rep.sigma_delta_closes);
  EXPECT_EQ(rep.mismatches, 0u);
  EXPECT_GT(rep.closed_walks, 0u);
}

TEST(Exchange, AmalgamWordProblem) {
  using L = TiltLabel;
  EXPECT_TRUE(amalgam_trivial({L::Sigma, L::Sigma, L::Sigma, L::DeltaInv, L::DeltaInv}));
  EXPECT_TRUE(amalgam_trivial({L::Delta, L::Sigma, L::SigmaInv, L::DeltaInv}));
  EXPECT_FALSE(amalgam_trivial({L::Sigma, L::Delta}));
  EXPECT_FALSE(amalgam_trivial({L::Sigma, L::Sigma, L::Sigma}));
  EXPECT_FALSE(amalgam_trivial({L::Delta, L::Delta, L::Delta, L::Delta}));
}

TEST(Exchange, BallRadiusIsBounded) {
  EXPECT_THROW(generate_ball(-1, Quotient::None), std::out_of_range);
  EXPECT_THROW(generate_ball(kMaxBallRadius + 1, Quotient::None), std::out_of_range);
}

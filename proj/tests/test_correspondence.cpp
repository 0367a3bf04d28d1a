#include <staba2/correspondence.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <optional>

using namespace staba2;

namespace {

const Calibration& cal() {
  static const Calibration c = calibrate();
  return c;
}

// Class delta and sign e with k = action of the e-th power of the twist along
// delta, found by brute force over a small box.
std::optional<std::pair<KClass, int>> twist_source(const IntMatrix& k) {
  for (std::int64_t s = -3; s <= 3; ++s)
    for (std::int64_t t = -3; t <= 3; ++t) {
      const KClass d{s, t};
      if (d == KClass{}) continue;
      const IntMatrix m = twist_matrix(d).matrix();
      if (k == m) return std::pair{d, 1};
      if (k == m.inverse()) return std::pair{d, -1};
    }
  return std::nullopt;
}

bool contains(const std::vector<TiltLabel>& v, TiltLabel t) {
  return std::find(v.begin(), v.end(), t) != v.end();
}

}  // namespace

TEST(Calibration, ConjugatesCrossingsOntoDeltaAndSigma) {
  const auto& c = cal();
  EXPECT_EQ(std::abs(c.basis.det()), 1);
  const IntMatrix kx = c.to_k(c.cross_h);
  const IntMatrix ks = c.to_k(c.star_h);
  EXPECT_EQ(kx, c.cross_inverted ? kDeltaMatrix.inverse() : kDeltaMatrix);
  EXPECT_EQ(ks, c.star_inverted ? kSigmaMatrix.inverse() : kSigmaMatrix);
  EXPECT_LT(c.max_residual, 1e-6);
}

TEST(Calibration, CrossingOrdersMatchBraidRelations) {
  // Delta has order 4 and Sigma order 6 in SL2, so their homology images do too.
  const auto& c = cal();
  EXPECT_EQ(c.cross_h.pow(4), IntMatrix::identity());
  EXPECT_EQ(c.cross_h.pow(2), IntMatrix::scalar(-1));
  EXPECT_EQ(c.star_h.pow(6), IntMatrix::identity());
  EXPECT_EQ(c.star_h.pow(3), IntMatrix::scalar(-1));
}

TEST(Calibration, OrientationFromBilinearRelation) {
  const PeriodState s = initial_state(kBasepoint);
  const double im = (std::conj(s.omega[0]) * s.omega[1]).imag();
  EXPECT_EQ(cal().orientation, im > 0 ? 1 : -1);
  EXPECT_EQ(cal().basis.det(), -cal().orientation);
}

TEST(Calibration, ConifoldLoopsAreSphericalTwists) {
  const auto& c = cal();
  const auto t0 = twist_source(c.to_k(c.loop0_h));
  const auto t1 = twist_source(c.to_k(c.loop1_h));
  ASSERT_TRUE(t0);
  ASSERT_TRUE(t1);
  EXPECT_EQ(t0->second, t1->second);
  // Vanishing classes at the two conifold points pair to one.
  EXPECT_EQ(std::abs(euler_pairing(t0->first, t1->first)), 1);
  EXPECT_EQ(c.to_k(c.loop0_h).trace(), 2);
  EXPECT_EQ(c.to_k(c.loop1_h).trace(), 2);
}

TEST(Correspondence, SquarePointIsOnTwoWalls) {
  const auto z = calibrated_charge(cal(), 0.5);
  const cplx q = z.ratio();
  EXPECT_NEAR(std::abs(q), 1.0, 1e-10);
  EXPECT_NEAR(q.real(), 0.0, 1e-10);
  EXPECT_NEAR(width(z, standard_heart()), 0.5, 1e-10);
  const auto st = stable_set(z, standard_heart());
  EXPECT_FALSE(st.ext);
  const auto d = fundamental_domain_test(z);
  EXPECT_EQ(d.position, DomainPosition::Wall);
  EXPECT_EQ(d.walls.size(), 2u);
  EXPECT_TRUE(contains(d.walls, TiltLabel::Delta));
  EXPECT_TRUE(contains(d.walls, TiltLabel::DeltaInv));
}

TEST(Correspondence, LargeUApproachesHexagonalPoint) {
  const auto z = calibrated_charge(cal(), cplx{0.5, 1e4});
  const auto& r = z.representative();
  // Third roots of unity up to a common rotation: the three stable charges
  // Z(T), Z(E), Z(S) are spread a third of a turn apart.
  const double e_t = relative_phase(r(classes::T), r(classes::E));
  const double s_t = relative_phase(r(classes::T), r(classes::S));
  EXPECT_NEAR(std::abs(s_t), 2.0 / 3.0, 5e-3);
  EXPECT_NEAR(std::abs(e_t), 1.0 / 3.0, 5e-3);
  const auto rep = chamber_descent(z);
  EXPECT_EQ(rep.stable.count(), 3u);
  EXPECT_NEAR(rep.width, 2.0 / 3.0, 5e-3);
}

TEST(Correspondence, HexagonalLimitTiesTwoNeighbours) {
  const ProjectiveCharge star(std::polar(1.0, 2.0 * std::numbers::pi / 3.0), 1.0);
  const auto d = fundamental_domain_test(star);
  EXPECT_EQ(d.position, DomainPosition::Wall);
  EXPECT_TRUE(contains(d.walls, TiltLabel::SigmaInv));
  EXPECT_TRUE(contains(d.walls, TiltLabel::Sigma));
}

TEST(Correspondence, TrackedSamplesTranslateByMonodromy) {
  const auto rep = verify_correspondence(regular_samples(12), cal());
  for (const auto& s : rep.samples)
    EXPECT_TRUE(s.excluded || s.ok()) << "u = " << s.u << " " << s.error;
  EXPECT_EQ(rep.failed, 0u);
  EXPECT_GE(rep.passed, 10u);
}

TEST(Correspondence, RegularSamplesAvoidConifolds) {
  for (cplx u : regular_samples(200)) {
    EXPECT_GT(std::abs(u), 0.15);
    EXPECT_GT(std::abs(u - 1.0), 0.15);
    EXPECT_GE(u.imag(), 0.1);
  }
}

TEST(Correspondence, ChargeIsContinuousAlongPaths) {
  // Property: small steps in u give small steps of the projective charge.
  const PeriodState s = initial_state(kBasepoint);
  PeriodState cur = s;
  cplx u = kBasepoint;
  for (int k = 1; k <= 200; ++k) {
    const cplx v = kBasepoint + cplx{0.0, 0.01 * k};
    const auto next = continue_periods(cur, {u, v});
    EXPECT_LT(cal().projective(cur.lambda).distance(cal().projective(next.lambda)), 0.05);
    cur = next;
    u = v;
  }
}

TEST(TriangleGeometry, AnglesAreZeroThirdHalf) {
  // The cusp sides meet tangentially at the boundary point, which in chord
  // directions shows up as opposite directions.
  const auto t = triangle_geometry(cal());
  EXPECT_NEAR(t.at_cusp.measured / std::numbers::pi, 1.0, 0.01);
  EXPECT_NEAR(t.at_hex.measured / std::numbers::pi, 1.0 / 3.0, 0.01);
  EXPECT_NEAR(t.at_square.measured / std::numbers::pi, 0.5, 0.01);
  EXPECT_FALSE(t.at_hex.flagged);
  EXPECT_FALSE(t.at_square.flagged);
}

TEST(Lift, LoopsActByExpectedScalars) {
  const auto rep = lift_check();
  ASSERT_EQ(rep.loops.size(), 5u);
  for (const auto& l : rep.loops) {
    EXPECT_TRUE(l.ok) << l.name << " scalar " << l.scalar << " residual " << l.residual;
    EXPECT_LT(l.residual, 1e-10) << l.name;
  }
}

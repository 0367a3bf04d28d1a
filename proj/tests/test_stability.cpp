#include <gtest/gtest.h>

#include <random>
#include <set>

#include "staba2/stability.hpp"

using namespace staba2;

namespace {

const double kPi = std::numbers::pi;

// Brute-force support of the lift (Z, h): list the stable objects of the
// stability condition with heart h (both simples, and the extension when the
// S-role phase exceeds the T-role phase) together with their shifts, sweep a
// window (t, t + 1] over a fine grid and keep the narrowest window.
struct OracleSupport {
  double width = 0.0;
  std::set<std::pair<std::int64_t, std::int64_t>> simples;
};

OracleSupport oracle_support(const ProjectiveCharge& z, const Heart& h) {
  const auto& r = z.representative();
  const cplx wt = r(h.t_role().cls), ws = r(h.s_role().cls);
  const double d = std::arg(ws / wt) / kPi;
  const double pt = 0.5 - d / 2, ps = 0.5 + d / 2;
  struct Obj {
    KClass c;
    double p;
  };
  std::vector<Obj> base{{h.t_role().cls, pt}, {h.s_role().cls, ps}};
  if (ps > pt) base.push_back({h.extension_class(), pt + std::arg(r(h.extension_class()) / wt) / kPi});
  std::vector<Obj> all;
  for (int n = -2; n <= 2; ++n)
    for (const auto& o : base) all.push_back({n % 2 == 0 ? o.c : -o.c, o.p + n});
  OracleSupport best{10.0, {}};
  for (int k = 0; k < 4000; ++k) {
    const double t = k / 4000.0 + 1e-7;
    const Obj* lo = nullptr;
    const Obj* hi = nullptr;
    for (const auto& o : all) {
      if (o.p <= t || o.p > t + 1) continue;
      if (!lo || o.p < lo->p) lo = &o;
      if (!hi || o.p > hi->p) hi = &o;
    }
    if (hi->p - lo->p < best.width - 1e-12)
      best = {hi->p - lo->p, {{lo->c.s, lo->c.t}, {hi->c.s, hi->c.t}}};
  }
  return best;
}

std::set<std::pair<std::int64_t, std::int64_t>> simple_set(const Heart& h) {
  return {{h.t_role().cls.s, h.t_role().cls.t}, {h.s_role().cls.s, h.s_role().cls.t}};
}

ProjectiveCharge random_charge(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return ProjectiveCharge({g(rng), g(rng)}, {g(rng), g(rng)});
}

bool has_flag(const ChamberReport& r, TiltLabel l) {
  return std::find(r.wall_flags.begin(), r.wall_flags.end(), l) != r.wall_flags.end();
}

}  // namespace

TEST(Stability, PhaseConvention) {
  const CentralCharge z{{0, 1}, {1, 0}};
  EXPECT_DOUBLE_EQ(phase(z, classes::S), 0.5);
  const CentralCharge z2{{0, 1}, std::polar(1.0, kPi / 4)};
  EXPECT_NEAR(phase(z2, classes::T), 0.25, 1e-15);
  const CentralCharge z3{{-1, 0}, {0, 1}};
  EXPECT_DOUBLE_EQ(phase(z3, classes::S), 1.0);
  EXPECT_THROW(phase(z, classes::T), StabilityError);  // Z(T) = 1 has no phase in (0, 1]
  EXPECT_THROW(phase(CentralCharge{{0, 0}, {1, 0}}, classes::S), StabilityError);
}

TEST(Stability, HeartPhasesExamples) {
  const Heart a0 = standard_heart();
  auto ph = heart_phases(ProjectiveCharge({0, 1}, 1.0), a0);
  ASSERT_TRUE(ph);
  EXPECT_NEAR(ph->s_role - ph->t_role, 0.5, 1e-15);
  ph = heart_phases(ProjectiveCharge(std::polar(1.0, 2 * kPi / 3), 1.0), a0);
  EXPECT_NEAR(ph->s_role - ph->t_role, 2.0 / 3, 1e-15);
  ph = heart_phases(ProjectiveCharge(1.0, 1.0), a0);
  EXPECT_DOUBLE_EQ(ph->s_role, ph->t_role);
  EXPECT_FALSE(heart_phases(ProjectiveCharge(-1.0, 1.0), a0));
  EXPECT_THROW(heart_phases(ProjectiveCharge(0.0, 1.0), a0), StabilityError);
}

TEST(Stability, StableSetTrichotomy) {
  const Heart a0 = standard_heart();
  EXPECT_EQ(stable_set(ProjectiveCharge({0, 1}, 1.0), a0).count(), 3u);
  EXPECT_EQ(stable_set(ProjectiveCharge({0, -1}, 1.0), a0).count(), 2u);
  const auto wall = stable_set(ProjectiveCharge(1.0, 1.0), a0);
  EXPECT_EQ(wall.count(), 2u);
  EXPECT_TRUE(wall.on_wall);
  // Near the anti-aligned configuration S and T are the only stable objects.
  EXPECT_EQ(stable_set(ProjectiveCharge({-1, -1e-3}, 1.0), a0).count(), 2u);
}

TEST(Stability, WidthExamples) {
  const Heart a0 = standard_heart();
  EXPECT_NEAR(width(ProjectiveCharge({0, 1}, 1.0), a0), 0.5, 1e-15);
  EXPECT_NEAR(width(ProjectiveCharge(std::polar(1.0, 2 * kPi / 3), 1.0), a0), 2.0 / 3, 1e-15);
  const ProjectiveCharge wall({-0.25, 1.0}, 0.5);
  EXPECT_NEAR(width(wall, a0), width(wall, simple_tilt(a0, Role::T, Side::Right)), 1e-9);
  EXPECT_TRUE(std::isinf(width(ProjectiveCharge(-1.0, 1.0), a0)));
}

TEST(Stability, DescentExamples) {
  auto rep = chamber_descent(ProjectiveCharge({0, 1}, 1.0));
  EXPECT_EQ(rep.heart, standard_heart());
  EXPECT_TRUE(rep.wall_flags.empty());

  rep = chamber_descent(ProjectiveCharge({-0.25, 1.0}, 0.5));
  EXPECT_EQ(rep.heart, standard_heart());
  EXPECT_TRUE(has_flag(rep, TiltLabel::Sigma));  // wall shared with R_T(A0)

  // Image of the Z/2 point: only S and T stable, on the first wall.
  rep = chamber_descent(ProjectiveCharge({0, -1}, 1.0));
  EXPECT_EQ(rep.heart, standard_heart());
  EXPECT_NEAR(rep.width, 0.5, 1e-15);
  EXPECT_EQ(rep.stable.count(), 2u);
  EXPECT_TRUE(has_flag(rep, TiltLabel::Delta));

  // Image of the Z/3 point: the two remaining walls meet.
  rep = chamber_descent(ProjectiveCharge(std::polar(1.0, 2 * kPi / 3), 1.0));
  EXPECT_EQ(rep.heart, standard_heart());
  EXPECT_TRUE(has_flag(rep, TiltLabel::Sigma));
  EXPECT_TRUE(has_flag(rep, TiltLabel::SigmaInv));
}

TEST(Stability, DescentAgreesWithRotationOracle) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 200; ++k) {
    const auto z = random_charge(rng);
    const auto rep = chamber_descent(z);
    EXPECT_LE(rep.steps, 64);
    const auto o = oracle_support(z, standard_heart());
    EXPECT_NEAR(rep.width, o.width, 1e-6);
    if (rep.wall_flags.empty()) EXPECT_EQ(simple_set(rep.heart), o.simples);
    EXPECT_NEAR(width(z, rep.heart), rep.width, 1e-12);
  }
}

TEST(Stability, WidthEquivariance) {
  std::mt19937_64 rng(13);
  const auto ball = generate_ball(3, Quotient::None);
  for (int k = 0; k < 300; ++k) {
    const auto z = random_charge(rng);
    const Heart h(ball.representatives[rng() % ball.size()]);
    for (auto l : kTiltLabels) {
      const auto& g = tilt_element(l);
      const double a = width(z, h), b = width(z.translated(g), apply(g, h));
      if (std::isinf(a)) EXPECT_TRUE(std::isinf(b));
      else EXPECT_NEAR(a, b, 1e-13);  // the translated pair is renormalized
    }
  }
}

TEST(Stability, TilingIsTranslationInvariant) {
  std::mt19937_64 rng(14);
  const auto ball = generate_ball(2, Quotient::None);
  for (int k = 0; k < 200; ++k) {
    const auto z = random_charge(rng);
    const auto rep = chamber_descent(z);
    if (!rep.wall_flags.empty()) continue;
    const auto& g = ball.representatives[rng() % ball.size()];
    const auto moved = chamber_descent(z.translated(g), {}, apply(g, standard_heart()));
    EXPECT_EQ(moved.heart, apply(g, rep.heart));
    EXPECT_NEAR(moved.width, rep.width, 1e-12);
  }
}

TEST(Stability, SigmaTranslateOfInteriorPoint) {
  const ProjectiveCharge z({-0.1, 1.2}, 1.0);
  const auto t = fundamental_domain_test(z);
  const auto o = oracle_support(z, standard_heart());
  EXPECT_EQ(t.position == DomainPosition::Exterior, simple_set(standard_heart()) != o.simples);
  ASSERT_EQ(t.position, DomainPosition::Interior);
  const auto moved = z.translated(gens::Sigma);
  EXPECT_EQ(fundamental_domain_test(moved).position, DomainPosition::Exterior);
  EXPECT_EQ(chamber_descent(moved).heart, Heart(gens::Sigma));
}

TEST(Stability, DomainTestWalls) {
  EXPECT_EQ(fundamental_domain_test(ProjectiveCharge({0, 1}, 1.0)).position, DomainPosition::Interior);
  EXPECT_EQ(fundamental_domain_test(ProjectiveCharge({-0.25, 1.0}, 0.5)).position, DomainPosition::Wall);
  EXPECT_EQ(fundamental_domain_test(ProjectiveCharge({0, -1}, 1.0)).position, DomainPosition::Wall);
  EXPECT_EQ(fundamental_domain_test(ProjectiveCharge({-1, -1e-3}, 1.0)).position, DomainPosition::Exterior);
}

TEST(Stability, WidthIsContinuous) {
  std::mt19937_64 rng(15);
  const Heart a0 = standard_heart();
  for (int k = 0; k < 200; ++k) {
    const auto z = random_charge(rng);
    const double w = width(z, a0);
    if (!std::isfinite(w) || w > 0.99) continue;
    const auto& r = z.representative();
    const ProjectiveCharge near(r.zS * std::polar(1.0, 1e-7), r.zT);
    EXPECT_NEAR(width(near, a0), w, 1e-6);
  }
}

TEST(Stability, ProjectiveChargeIsScaleInvariant) {
  const ProjectiveCharge a({1, 2}, {3, -1});
  const ProjectiveCharge b(cplx{1, 2} * cplx{0.3, -2}, cplx{3, -1} * cplx{0.3, -2});
  EXPECT_NEAR(a.distance(b), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a.ratio() - b.ratio()), 0.0, 1e-14);
  EXPECT_THROW(ProjectiveCharge(0.0, 0.0), StabilityError);
}

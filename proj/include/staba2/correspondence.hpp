#pragma once

// Cross-checks between the lattice/braid side and the period side: calibration
// of H1(E) against K(D) by monodromy, chamber translation along deck
// transformations, angles of the period-map triangle, and the C*-lift.
//
// Conventions. A transition matrix X acts on period vectors (P_alpha, P_beta);
// the induced action on homology coordinates is H = X^T. The calibration C
// sends homology coordinates to K-classes, so charges are z = C^-T P and a
// crossing with calibrated action K = C H C^-1 moves charges by z -> K^T z,
// which is the translate of z by the inverse autoequivalence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "periods.hpp"
#include "stability.hpp"

namespace staba2 {

inline const IntMatrix kDeltaMatrix{{0, -1, 1, 0}};
inline const IntMatrix kSigmaMatrix{{0, 1, -1, 1}};

/// Positive half of the C*-rotation (a, b) -> (e^{2i th} a, e^{3i th} b),
/// th in [0, pi]; carries the curve over u to the curve over 1 - u.
inline PeriodState half_twist(const PeriodState& s, double turns = 0.5,
                              const ContinuationOptions& opt = {}) {
  const Cubic c0 = s.curve;
  const double total = 2.0 * std::numbers::pi * turns;
  const double max_dt = 1.0 / std::max(16.0, 64.0 * std::abs(turns));
  return continue_along(
      s,
      [c0, total](double t) {
        const double th = total * t;
        return Cubic{c0.a * std::polar(1.0, 2.0 * th), c0.b * std::polar(1.0, 3.0 * th)};
      },
      [max_dt](double) { return max_dt; }, opt);
}

/// Path from the basepoint to 1 - basepoint crossing the vertical line
/// through u = 1/2 (the branch point of u -> j over j = 1).
inline std::vector<cplx> cross_path() { return {kBasepoint, 1.0 - kBasepoint}; }

/// Path from the basepoint to 1 - basepoint passing to the right of u = 1.
inline std::vector<cplx> star_path() {
  return {kBasepoint, cplx{0.5, 3.0}, cplx{3.5, 0.0}, cplx{0.5, -3.0}, 1.0 - kBasepoint};
}

/// Transition matrix of a u-path from the basepoint to 1 - basepoint closed
/// up by the positive half twist.
inline MonodromyResult crossing_monodromy(const std::vector<cplx>& path,
                                          const ContinuationOptions& opt = {}) {
  const PeriodState s0 = initial_state(kBasepoint, opt);
  const PeriodState e = half_twist(continue_periods(s0, path, opt), 0.5, opt);
  return transition_matrix(s0, e);
}

struct Calibration {
  IntMatrix basis{};      // homology coordinates -> K-classes
  int branch_shift = 0;   // number of odd shifts absorbed (0: none needed)
  bool cross_inverted = false;
  bool star_inverted = false;
  int orientation = 1;    // sign of Im(conj(omega_alpha) omega_beta) at the basepoint
  IntMatrix cross_h{};    // measured homology actions
  IntMatrix star_h{};
  IntMatrix loop0_h{};
  IntMatrix loop1_h{};
  double max_residual = 0.0;

  /// Charge vector (Z(S), Z(T)) from alpha/beta periods.
  CentralCharge charge(const std::array<cplx, 2>& p) const {
    const IntMatrix cit = basis.inverse().transpose();
    return {double(cit(0, 0)) * p[0] + double(cit(0, 1)) * p[1],
            double(cit(1, 0)) * p[0] + double(cit(1, 1)) * p[1]};
  }
  ProjectiveCharge projective(const std::array<cplx, 2>& p) const {
    return ProjectiveCharge(charge(p));
  }
  /// K(D)-action of a homology monodromy.
  IntMatrix to_k(const IntMatrix& h) const { return basis * h * basis.inverse(); }
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measures the two crossing monodromies and the loops around u = 0, 1 at the
/// basepoint, then searches unimodular matrices with entries in [-3, 3] for a
/// change of basis conjugating the crossings onto (Delta, Sigma) exactly.
/// Crossings may be taken in either direction; the orientation of the
/// identification is fixed by requiring the Euler form to agree with the
/// intersection form (det C = -orientation).
inline Calibration calibrate(const ContinuationOptions& opt = {}, double int_tol = kDefaultIntTol) {
  Calibration cal;
  const auto cross = crossing_monodromy(cross_path(), opt);
  const auto star = crossing_monodromy(star_path(), opt);
  const auto m0 = monodromy(circle_loop(0.0, kBasepoint), opt, int_tol);
  const auto m1 = monodromy(circle_loop(1.0, kBasepoint), opt, int_tol);
  cal.max_residual = std::max({cross.residual, star.residual, m0.residual, m1.residual});
  if (cal.max_residual > int_tol) throw CalibrationError("calibration failed: non-integral monodromy");
  cal.cross_h = cross.matrix.transpose();
  cal.star_h = star.matrix.transpose();
  cal.loop0_h = m0.matrix.transpose();
  cal.loop1_h = m1.matrix.transpose();
  const PeriodState base = initial_state(kBasepoint, opt);
  cal.orientation = (std::conj(base.omega[0]) * base.omega[1]).imag() > 0.0 ? 1 : -1;

  for (int inv_x = 0; inv_x < 2; ++inv_x) {
    for (int inv_s = 0; inv_s < 2; ++inv_s) {
      const IntMatrix hx = inv_x ? cal.cross_h.inverse() : cal.cross_h;
      const IntMatrix hs = inv_s ? cal.star_h.inverse() : cal.star_h;
      for (std::int64_t a = -3; a <= 3; ++a)
        for (std::int64_t b = -3; b <= 3; ++b)
          for (std::int64_t c = -3; c <= 3; ++c)
            for (std::int64_t d = -3; d <= 3; ++d) {
              const IntMatrix cm{{a, b, c, d}};
              if (cm.det() != -cal.orientation) continue;
              const IntMatrix ci = cm.inverse();
              if (cm * hx * ci == kDeltaMatrix && cm * hs * ci == kSigmaMatrix) {
                cal.basis = cm;
                cal.cross_inverted = inv_x;
                cal.star_inverted = inv_s;
                return cal;
              }
            }
    }
  }
  throw CalibrationError("calibration failed");
}

/// Calibrated projective charge at u on the principal branch.
inline ProjectiveCharge calibrated_charge(const Calibration& cal, cplx u,
                                          const ContinuationOptions& opt = {}) {
  return cal.projective(principal_state(u, opt).lambda);
}

// ---------------------------------------------------------------------------

struct SampleCheck {
  cplx u;
  IntMatrix heart_class{};  // PSL(2,Z) class of the supporting heart
  bool excluded = false;    // near a wall; not scored
  bool loop0_ok = false;
  bool loop1_ok = false;
  bool deck_ok = false;
  bool injective = false;
  std::string error;
  bool ok() const { return error.empty() && loop0_ok && loop1_ok && deck_ok && injective; }
};

struct CorrespondenceReport {
  std::vector<SampleCheck> samples;
  std::size_t passed = 0;
  std::size_t excluded = 0;
  std::size_t failed = 0;
  double pass_fraction() const {
    return samples.empty() ? 0.0 : double(passed) / double(samples.size());
  }
};

struct CorrespondenceOptions {
  double near_wall = 1e-3;     // width tie tolerance (half-turns) for excluding samples
  double injectivity_step = 1e-3;
  DescentOptions descent{};
};

inline std::vector<cplx> regular_samples(std::size_t n, std::uint64_t seed = 20261016) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-1.5, 2.5), im(0.1, 2.0);
  std::vector<cplx> out;
  while (out.size() < n) {
    const cplx u{re(rng), im(rng)};
    if (std::abs(u) < 0.15 || std::abs(u - 1.0) < 0.15) continue;
    out.push_back(u);
  }
  return out;
}

namespace detail {

inline bool near_wall(const ProjectiveCharge& z, const ChamberReport& rep, double tol) {
  return !lift_support(z, rep.heart, tol).wall_flags.empty();
}

}  // namespace detail

struct TrackedChamber {
  PeriodState state;
  Heart heart;
};

/// Follows the supporting heart along a u-path by continuity: the periods are
/// continued in short steps and the support is recomputed within the C-orbit
/// of the lift through the previous heart, so the chamber stays on the sheet
/// selected by the path.
inline TrackedChamber track_chamber(const PeriodState& start, const Heart& h0,
                                    const std::vector<cplx>& path, const Calibration& cal,
                                    const ContinuationOptions& opt = {},
                                    const DescentOptions& dopt = {}, double max_step = 0.02) {
  TrackedChamber cur{start, h0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const cplx a = path[i - 1], b = path[i];
    const double scale = max_step * std::max(1.0, std::min(std::abs(a), std::abs(b)));
    const int n = std::max(1, int(std::ceil(std::abs(b - a) / scale)));
    for (int k = 1; k <= n; ++k) {
      const cplx p = a + (b - a) * (double(k) / n);
      cur.state = continue_periods(cur.state, {cur.state.u(), p}, opt);
      cur.heart = chamber_descent(cal.projective(cur.state.lambda), dopt, cur.heart).heart;
    }
  }
  return cur;
}

/// For each u: the chamber reached by tracking along a loop (or to the deck
/// image 1 - u) must be the chamber reached along the principal path,
/// translated by the inverse of the calibrated group element; nearby samples
/// must have distinct charges.
inline CorrespondenceReport verify_correspondence(const std::vector<cplx>& samples,
                                                  const Calibration& cal,
                                                  const ContinuationOptions& opt = {},
                                                  const CorrespondenceOptions& copt = {}) {
  CorrespondenceReport rep;
  const PeriodState base = initial_state(kBasepoint, opt);
  const auto z_base = cal.projective(base.lambda);
  const Heart h_base = chamber_descent(z_base, copt.descent).heart;
  const auto after0 = track_chamber(base, h_base, circle_loop(0.0, kBasepoint), cal, opt, copt.descent);
  const auto after1 = track_chamber(base, h_base, circle_loop(1.0, kBasepoint), cal, opt, copt.descent);
  const auto at_deck = track_chamber(base, h_base, cross_path(), cal, opt, copt.descent);
  const IntMatrix k0 = cal.to_k(cal.loop0_h);
  const IntMatrix k1 = cal.to_k(cal.loop1_h);
  const IntMatrix kx = cal.to_k(cal.cross_h);

  auto cls = [](const Heart& h) { return psl2_normalize(h.element().k_matrix()); };
  auto expected = [](const IntMatrix& k, const Heart& h) {
    return psl2_normalize(k.inverse() * h.element().k_matrix());
  };

  for (cplx u : samples) {
    SampleCheck sc;
    sc.u = u;
    try {
      const auto here = track_chamber(base, h_base, {kBasepoint, u}, cal, opt, copt.descent);
      const auto z = cal.projective(here.state.lambda);
      const auto ch = chamber_descent(z, copt.descent, here.heart);
      sc.heart_class = cls(ch.heart);
      sc.excluded = detail::near_wall(z, ch, copt.near_wall);

      const std::vector<cplx> tail{kBasepoint, u};
      sc.loop0_ok = cls(track_chamber(after0.state, after0.heart, tail, cal, opt, copt.descent).heart) ==
                    expected(k0, ch.heart);
      sc.loop1_ok = cls(track_chamber(after1.state, after1.heart, tail, cal, opt, copt.descent).heart) ==
                    expected(k1, ch.heart);
      sc.deck_ok = cls(track_chamber(at_deck.state, at_deck.heart, {1.0 - kBasepoint, 1.0 - u}, cal, opt,
                                     copt.descent).heart) == expected(kx, ch.heart);

      const cplx du = copt.injectivity_step * std::polar(1.0, std::numbers::pi / 4.0);
      const auto zn = cal.projective(continue_periods(here.state, {u, u + du}, opt).lambda);
      sc.injective = z.distance(zn) > 1e-9;
    } catch (const std::exception& e) {
      sc.error = e.what();
    }
    if (sc.ok()) ++rep.passed;
    else if (sc.excluded && sc.error.empty()) ++rep.excluded;
    else ++rep.failed;
    rep.samples.push_back(sc);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Triangle geometry of the principal branch over {Re u < 1/2, Im u > 0},
// which maps onto the upper half j-plane.

struct VertexAngle {
  double measured = 0.0;
  double spread = 0.0;  // change between the two finest approach scales
  bool flagged = false;
};

struct TriangleAngles {
  VertexAngle at_cusp;     // image of j = 0
  VertexAngle at_hex;      // image of j = infinity
  VertexAngle at_square;   // image of j = 1
};

struct TriangleOptions {
  std::vector<double> cusp_scales{4e-4, 2e-4, 1e-4};
  std::vector<double> square_scales{4e-4, 2e-4, 1e-4};
  std::vector<double> hex_radii{1e5, 2e5, 4e5};
  double spread_flag = 0.02;
};

namespace detail {

inline double angle_between(cplx d1, cplx d2) { return std::abs(std::arg(d2 / d1)); }

}  // namespace detail

/// Interior angles of the image triangle, from chord directions of the two
/// boundary arcs at each vertex.
inline TriangleAngles triangle_geometry(const Calibration& cal, const TriangleOptions& topt = {},
                                        ContinuationOptions opt = {}) {
  opt.clearance = 1e-9;
  auto ratio = [&](cplx u) { return cal.projective(principal_state(u, opt).lambda).ratio(); };
  TriangleAngles out;

  // j = 1 at u = 1/2: sides u = 1/2 + i t and u = 1/2 - t; the vertex is regular.
  {
    const cplx sv = ratio(0.5);
    std::vector<double> a;
    for (double e : topt.square_scales) {
      a.push_back(detail::angle_between(ratio(cplx{0.5, e}) - sv, ratio(cplx{0.5 - e, 0.0}) - sv));
    }
    out.at_square = {a.back(), std::abs(a.back() - a[a.size() - 2]), false};
  }
  // j = 0 at u = 0: sides u = t and u = -t.
  {
    std::vector<double> a;
    for (std::size_t k = 0; k + 1 < topt.cusp_scales.size(); ++k) {
      const double e1 = topt.cusp_scales[k + 1], e2 = topt.cusp_scales[k];
      const cplx d1 = ratio(cplx{e2, 0.0}) - ratio(cplx{e1, 0.0});
      const cplx d2 = ratio(cplx{-e2, 0.0}) - ratio(cplx{-e1, 0.0});
      a.push_back(detail::angle_between(d1, d2));
    }
    out.at_cusp = {a.back(), a.size() > 1 ? std::abs(a.back() - a[a.size() - 2]) : 0.0, false};
  }
  // j = infinity: sides u = -R and u = 1/2 + i R.
  {
    std::vector<double> a;
    for (std::size_t k = 0; k + 1 < topt.hex_radii.size(); ++k) {
      const double r1 = topt.hex_radii[k + 1], r2 = topt.hex_radii[k];
      const cplx d1 = ratio(cplx{-r2, 0.0}) - ratio(cplx{-r1, 0.0});
      const cplx d2 = ratio(cplx{0.5, r2}) - ratio(cplx{0.5, r1});
      a.push_back(detail::angle_between(d1, d2));
    }
    out.at_hex = {a.back(), a.size() > 1 ? std::abs(a.back() - a[a.size() - 2]) : 0.0, false};
  }
  for (auto* v : {&out.at_cusp, &out.at_hex, &out.at_square}) v->flagged = v->spread > topt.spread_flag;
  return out;
}

// ---------------------------------------------------------------------------
// Non-projectivized lift.

struct LiftLoopResult {
  std::string name;
  double expected = 1.0;
  cplx scalar;
  double residual = 0.0;  // |end - scalar * start| / |start|
  bool ok = false;
};

struct LiftReport {
  std::vector<LiftLoopResult> loops;
  bool ok() const {
    return std::all_of(loops.begin(), loops.end(), [](const auto& l) { return l.ok; });
  }
};

inline LiftLoopResult measure_lift(std::string name, const PeriodState& start, const PeriodState& end,
                                   double expected, double tol) {
  LiftLoopResult r;
  r.name = std::move(name);
  r.expected = expected;
  const double n2 = std::norm(start.lambda[0]) + std::norm(start.lambda[1]);
  r.scalar = (end.lambda[0] * std::conj(start.lambda[0]) + end.lambda[1] * std::conj(start.lambda[1])) / n2;
  r.residual = std::sqrt((std::norm(end.lambda[0] - r.scalar * start.lambda[0]) +
                          std::norm(end.lambda[1] - r.scalar * start.lambda[1])) / n2);
  r.ok = r.residual < tol && std::abs(r.scalar - expected) < tol;
  return r;
}

/// Tracks lambda-periods (not projectivized) around loops in the space of
/// cubics z^3 + a z + b based at the basepoint curve.
inline LiftReport lift_check(const ContinuationOptions& opt = {}, double tol = kDefaultIntTol) {
  LiftReport rep;
  const PeriodState s0 = initial_state(kBasepoint, opt);
  rep.loops.push_back(measure_lift("trivial", s0, continue_periods(s0, {kBasepoint, kBasepoint}, opt), 1.0, tol));
  const PeriodState twisted = half_twist(s0, 1.0, opt);
  rep.loops.push_back(measure_lift("full C* twist", s0, twisted, -1.0, tol));
  rep.loops.push_back(measure_lift("twist then inverse", s0, half_twist(twisted, -1.0, opt), 1.0, tol));
  rep.loops.push_back(measure_lift("twist squared", s0, half_twist(twisted, 1.0, opt), 1.0, tol));
  auto crossing = [&](const PeriodState& s) {
    return half_twist(continue_periods(s, cross_path(), opt), 0.5, opt);
  };
  rep.loops.push_back(measure_lift("cross crossing squared", s0, crossing(crossing(s0)), -1.0, tol));
  return rep;
}

}  // namespace staba2

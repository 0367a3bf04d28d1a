#pragma once

// Central charges on K(D), phases, stable objects of A2-type hearts, the width
// function and the search for the heart minimizing it.
//
// Phases follow Z = r exp(i pi phi) with phi in (0, 1]. Widths are measured in
// half-turns.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exchange.hpp"

namespace staba2 {

using cplx = std::complex<double>;

class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CentralCharge {
  cplx zS{0.0, 1.0};
  cplx zT{1.0, 0.0};

  cplx operator()(KClass c) const {
    return static_cast<double>(c.s) * zS + static_cast<double>(c.t) * zT;
  }
};

/// Point [zS : zT] of P^1; equality is scale invariant.
class ProjectiveCharge {
 public:
  ProjectiveCharge(cplx zs, cplx zt) : z_{zs, zt} {
    if (zs == cplx{} && zt == cplx{}) throw StabilityError("ProjectiveCharge: zero vector");
    const double n = std::hypot(std::abs(zs), std::abs(zt));
    z_.zS /= n;
    z_.zT /= n;
  }
  explicit ProjectiveCharge(const CentralCharge& z) : ProjectiveCharge(z.zS, z.zT) {}

  /// Normalized representative with |zS|^2 + |zT|^2 = 1.
  const CentralCharge& representative() const { return z_; }

  /// zS / zT, infinite when zT = 0.
  cplx ratio() const {
    if (z_.zT == cplx{}) return {std::numeric_limits<double>::infinity(), 0.0};
    return z_.zS / z_.zT;
  }

  /// Chordal distance on P^1.
  double distance(const ProjectiveCharge& o) const {
    const cplx cross = z_.zS * o.z_.zT - z_.zT * o.z_.zS;
    return std::abs(cross);
  }

  /// The charge Z o g^-1, i.e. the image of this point under g.
  ProjectiveCharge translated(const AutElement& g) const {
    const IntMatrix inv = g.k_matrix().inverse();
    return ProjectiveCharge(z_(inv * classes::S), z_(inv * classes::T));
  }

 private:
  CentralCharge z_;
};

/// Phase in (0, 1] of a nonzero complex number in the upper half plane or on
/// the negative real axis.
inline double phase_of(cplx w) {
  if (w == cplx{}) throw StabilityError("massless class");
  double a = std::arg(w);  // (-pi, pi]
  if (w.imag() == 0.0 && w.real() < 0.0) a = std::numbers::pi;
  if (a <= 0.0) throw StabilityError("charge outside the semi-closed upper half plane");
  return a / std::numbers::pi;
}

inline double phase(const CentralCharge& z, KClass c) { return phase_of(z(c)); }

/// Signed angle from w1 to w2 in half-turns, in (-1, 1].
inline double relative_phase(cplx w1, cplx w2) { return std::arg(w2 / w1) / std::numbers::pi; }

struct HeartPhases {
  double t_role = 0.0;
  double s_role = 0.0;
};

inline constexpr double kDefaultTieTol = 1e-9;

/// Phases of the two simples of h under a rotation of Zbar placing both
/// simple charges in the semi-closed upper half plane, centered on phase 1/2.
/// Empty when no rotation does (simple charges anti-parallel).
inline std::optional<HeartPhases> heart_phases(const ProjectiveCharge& zbar, const Heart& h) {
  const auto& z = zbar.representative();
  const cplx wt = z(h.t_role().cls);
  const cplx ws = z(h.s_role().cls);
  if (wt == cplx{} || ws == cplx{}) throw StabilityError("wall of vanishing mass");
  const cplx q = ws / wt;
  if (q.imag() == 0.0 && q.real() < 0.0) return std::nullopt;
  const double d = relative_phase(wt, ws);
  if (std::abs(d) >= 1.0) return std::nullopt;
  return HeartPhases{0.5 - d / 2.0, 0.5 + d / 2.0};
}

enum class StableObject { S1, S2, Ext };  // T-role simple, S-role simple, extension

struct StableSet {
  bool s1 = true;
  bool s2 = true;
  bool ext = false;
  bool on_wall = false;  // phases of the simples coincide
  std::size_t count() const { return 2 + (ext ? 1 : 0); }
};

inline StableSet stable_set(const ProjectiveCharge& zbar, const Heart& h,
                            double tie_tol = kDefaultTieTol) {
  const auto ph = heart_phases(zbar, h);
  if (!ph) throw StabilityError("inadmissible charge for heart");
  StableSet out;
  const double diff = ph->s_role - ph->t_role;
  if (std::abs(diff) <= tie_tol) {
    out.on_wall = true;
  } else {
    out.ext = diff > 0.0;
  }
  return out;
}

/// Width of h under Zbar in half-turns; +infinity when inadmissible.
inline double width(const ProjectiveCharge& zbar, const Heart& h) {
  const auto ph = heart_phases(zbar, h);
  if (!ph) return std::numeric_limits<double>::infinity();
  return std::abs(ph->s_role - ph->t_role);
}

struct ChamberReport {
  Heart heart;
  double width = 0.0;
  StableSet stable;
  std::vector<TiltLabel> wall_flags;  // neighbors tying with the minimizer
  int steps = 0;
};

struct DescentOptions {
  double tie_tol = kDefaultTieTol;
  int max_steps = 64;
};

/// Support of the lift (Z, h) of Zbar: rotating Z runs through the hearts
/// P(t, t + 1], one for each phase window of the stable objects of (Z, h). The
/// support is the window heart of least width. The search never leaves the
/// C-orbit of the lift, so it can follow a continuous path of stability
/// conditions.
inline ChamberReport lift_support(const ProjectiveCharge& zbar, const Heart& h,
                                  double tie_tol = kDefaultTieTol) {
  const auto ph = heart_phases(zbar, h);
  if (!ph) throw StabilityError("inadmissible charge for heart");
  struct Obj {
    KClass cls;
    double phase;
  };
  std::vector<Obj> objs{{h.t_role().cls, ph->t_role}, {h.s_role().cls, ph->s_role}};
  const StableSet st = stable_set(zbar, h, tie_tol);
  if (st.ext) {
    const KClass e = h.extension_class();
    const cplx zt = zbar.representative()(h.t_role().cls);
    objs.push_back({e, ph->t_role + relative_phase(zt, zbar.representative()(e))});
  }

  std::vector<Heart> nearby{h};
  for (auto l1 : kTiltLabels) {
    const Heart n1 = simple_tilt(h, l1);
    nearby.push_back(n1);
    for (auto l2 : kTiltLabels) nearby.push_back(simple_tilt(n1, l2));
  }
  auto identify = [&](KClass a, KClass b) -> const Heart* {
    for (const auto& c : nearby) {
      const KClass t = c.t_role().cls, s = c.s_role().cls;
      if ((t == a && s == b) || (t == b && s == a)) return &c;
    }
    return nullptr;
  };

  struct Window {
    const Heart* heart;
    double width;
  };
  std::vector<Window> windows;
  for (const auto& lo : objs) {
    Obj hi = lo;
    for (const auto& o : objs) {
      const Obj m = o.phase >= lo.phase ? o : Obj{-o.cls, o.phase + 1.0};
      if (m.phase > hi.phase) hi = m;
    }
    const Heart* w = identify(lo.cls, hi.cls);
    if (!w) throw StabilityError("window heart not found near lift");
    windows.push_back({w, hi.phase - lo.phase});
  }
  auto best = std::min_element(windows.begin(), windows.end(),
                               [](const Window& a, const Window& b) { return a.width < b.width; });
  // On a tie keep h itself, so repeated calls come to rest.
  for (auto it = windows.begin(); it != windows.end(); ++it)
    if (*it->heart == h && it->width <= best->width + tie_tol) best = it;
  const Heart support = *best->heart;
  ChamberReport rep{support, best->width, stable_set(zbar, support, tie_tol), {}, 0};
  for (const auto& w : windows) {
    if (w.heart == best->heart || std::abs(w.width - best->width) > tie_tol) continue;
    // Window hearts are compared as vertices of the exchange graph modulo [1].
    for (auto l : kTiltLabels) {
      if (psl2_image(simple_tilt(support, l).element()) == psl2_image(w.heart->element()))
        rep.wall_flags.push_back(l);
    }
  }
  return rep;
}

/// Greedy width descent over the exchange graph starting from `start`. A move
/// is only made to a neighbor lying in the C-orbit of the current lift, so the
/// descent stays on one point of Stab/C and ends at its support.
inline ChamberReport chamber_descent(const ProjectiveCharge& zbar, const DescentOptions& opt = {},
                                     const Heart& start = standard_heart()) {
  Heart cur = start;
  if (!std::isfinite(width(zbar, cur))) {
    double best = std::numeric_limits<double>::infinity();
    for (auto l : kTiltLabels) {
      const Heart n = simple_tilt(start, l);
      const double wn = width(zbar, n);
      if (wn < best) { best = wn; cur = n; }
    }
    if (!std::isfinite(best)) throw StabilityError("inadmissible start: no admissible neighbor");
  }
  for (int steps = 0;; ++steps) {
    auto rep = lift_support(zbar, cur, opt.tie_tol);
    if (rep.heart == cur) {
      rep.steps = steps;
      return rep;
    }
    if (steps == opt.max_steps) throw StabilityError("descent did not converge");
    cur = rep.heart;
  }
}

enum class DomainPosition { Interior, Wall, Exterior };

struct DomainTest {
  DomainPosition position = DomainPosition::Interior;
  std::vector<TiltLabel> walls;
};

/// Position of the lift of Zbar through the standard heart relative to the
/// fundamental domain V(A0): interior when A0 is the unique support, on a wall
/// when it ties with the listed tilts, exterior otherwise.
inline DomainTest fundamental_domain_test(const ProjectiveCharge& zbar,
                                          double tie_tol = kDefaultTieTol) {
  DomainTest out;
  const Heart a0 = standard_heart();
  if (!std::isfinite(width(zbar, a0))) {
    out.position = DomainPosition::Exterior;
    return out;
  }
  const auto rep = lift_support(zbar, a0, tie_tol);
  if (!(rep.heart == a0)) {
    out.position = DomainPosition::Exterior;
  } else if (!rep.wall_flags.empty()) {
    out.position = DomainPosition::Wall;
    out.walls = rep.wall_flags;
  }
  return out;
}

inline const char* position_name(DomainPosition p) {
  switch (p) {
    case DomainPosition::Interior: return "interior";
    case DomainPosition::Wall: return "wall";
    case DomainPosition::Exterior: return "exterior";
  }
  return "?";
}

}  // namespace staba2

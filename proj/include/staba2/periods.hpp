#pragma once

// Periods of lambda = y dz and omega = dz / y on y^2 = z^3 + a z + b, with the
// family of interest a = -3, b = 4u - 2 (so j = 4u(1-u), J = 1728 / j).
//
// A period over the cycle around the branch points (p, q) is twice the
// integral along the segment [p, q]. With z = m + h sin(theta), m = (p+q)/2,
// h = (q-p)/2, the endpoint singularities cancel:
//   y      = i h cos(theta) sqrt(z - r)
//   omega  = -i dtheta / sqrt(z - r)
//   lambda =  i h^2 cos^2(theta) sqrt(z - r) dtheta
// where r is the third root. Both forms share the same branch of y, so a
// segment defines one homology class for both.
//
// Analytic continuation tracks roots by nearest matching and re-expresses the
// tracked cycles in the local segment basis at every step by rounding the
// omega-periods to the (nondegenerate) omega lattice.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "quadrature.hpp"
#include "stability.hpp"

namespace staba2 {

class PeriodError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Form { Lambda, Omega };
enum class Cycle { Alpha, Beta };

inline const cplx kBasepoint{0.5, 0.5};

/// Point of the u-plane with its j and J coordinates.
struct EllipticPoint {
  cplx u;
  explicit EllipticPoint(cplx u_) : u(u_) {
    if (u == cplx{0.0, 0.0} || u == cplx{1.0, 0.0})
      throw PeriodError("EllipticPoint: u must avoid 0 and 1");
  }
  cplx j() const { return 4.0 * u * (1.0 - u); }
  cplx J() const { return 1728.0 / j(); }
};

/// The curve y^2 = z^3 + a z + b.
struct Cubic {
  cplx a{-3.0, 0.0};
  cplx b{0.0, 0.0};

  static Cubic from_u(cplx u) { return {cplx{-3.0, 0.0}, 4.0 * u - 2.0}; }
  cplx operator()(cplx z) const { return (z * z + a) * z + b; }
  cplx discriminant() const { return -4.0 * a * a * a - 27.0 * b * b; }
};

using Roots = std::array<cplx, 3>;

inline bool lex_less(cplx x, cplx y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

/// Roots of z^3 + a z + b by Cardano's formula, polished by Newton steps and
/// sorted lexicographically by (real, imaginary).
inline Roots cubic_roots(const Cubic& c) {
  const cplx d0 = -3.0 * c.a;
  const cplx d1 = 27.0 * c.b;
  const cplx disc = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
  cplx w = (std::abs(d1 + disc) >= std::abs(d1 - disc)) ? (d1 + disc) / 2.0 : (d1 - disc) / 2.0;
  Roots r{};
  if (std::abs(w) == 0.0) {
    r.fill(cplx{});
  } else {
    const cplx cbrt_w = std::pow(w, 1.0 / 3.0);
    const cplx xi{-0.5, std::sqrt(3.0) / 2.0};
    cplx xk{1.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      const cplx ck = xk * cbrt_w;
      r[k] = -(ck + d0 / ck) / 3.0;
      xk *= xi;
    }
  }
  for (auto& z : r) {
    for (int it = 0; it < 3; ++it) {
      const cplx f = c(z);
      const cplx df = 3.0 * z * z + c.a;
      if (df == cplx{}) break;
      const cplx dz = f / df;
      z -= dz;
      if (std::abs(dz) <= 1e-17 * (1.0 + std::abs(z))) break;
    }
  }
  std::sort(r.begin(), r.end(), lex_less);
  return r;
}

inline Roots cubic_roots(cplx u) { return cubic_roots(Cubic::from_u(u)); }

inline double min_separation(const Roots& r) {
  return std::min({std::abs(r[0] - r[1]), std::abs(r[1] - r[2]), std::abs(r[0] - r[2])});
}

inline double root_scale(const Roots& r) {
  return std::max({1.0, std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

struct PeriodOptions {
  int nodes = 256;
  double singular_tol = 1e-9;  // relative root separation refused as singular
};

struct SegmentPeriods {
  cplx omega;
  cplx lambda;
};

/// 2 * integral over the segment [p, q]; r is the remaining root.
inline SegmentPeriods segment_periods(cplx p, cplx q, cplx r, int nodes) {
  const auto& rule = gauss_legendre(nodes);
  const cplx m = 0.5 * (p + q);
  const cplx h = 0.5 * (q - p);
  const cplx mr = m - r;
  const cplx sq_m = std::sqrt(mr);
  const cplx ratio = h / mr;
  const double half_pi = std::numbers::pi / 2.0;
  cplx so{}, sl{};
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double th = half_pi * rule.nodes[k];
    const double s = std::sin(th);
    const double c = std::cos(th);
    const cplx sq = sq_m * std::sqrt(1.0 + ratio * s);
    so += rule.weights[k] / sq;
    sl += rule.weights[k] * (c * c) * sq;
  }
  const cplx i{0.0, 1.0};
  return {2.0 * half_pi * (-i) * so, 2.0 * half_pi * i * h * h * sl};
}

/// Local basis: segments (r[o0], r[o1]) and (r[o1], r[o2]).
struct CycleBasis {
  Roots roots{};
  std::array<int, 3> order{0, 1, 2};
  cplx root(int k) const { return roots[order[k]]; }
};

/// Basis from lexicographically sorted roots: alpha around (r1, r2), beta around (r2, r3).
inline CycleBasis lex_basis(const Roots& sorted) { return {sorted, {0, 1, 2}}; }

/// Basis whose middle vertex carries the largest triangle angle, so the two
/// segments are the shorter sides and keep away from the third root.
inline CycleBasis triangle_basis(const Roots& r) {
  const double d01 = std::abs(r[0] - r[1]);
  const double d12 = std::abs(r[1] - r[2]);
  const double d02 = std::abs(r[0] - r[2]);
  if (d02 >= d01 && d02 >= d12) return {r, {0, 1, 2}};
  if (d01 >= d12) return {r, {0, 2, 1}};
  return {r, {1, 0, 2}};
}

struct BasisPeriods {
  std::array<cplx, 2> omega;
  std::array<cplx, 2> lambda;
};

inline BasisPeriods basis_periods(const CycleBasis& b, int nodes) {
  const auto sa = segment_periods(b.root(0), b.root(1), b.root(2), nodes);
  const auto sb = segment_periods(b.root(1), b.root(2), b.root(0), nodes);
  return {{sa.omega, sb.omega}, {sa.lambda, sb.lambda}};
}

inline void check_regular(const Roots& r, const PeriodOptions& opt) {
  if (min_separation(r) < opt.singular_tol * root_scale(r))
    throw PeriodError("near-singular, refusing");
}

/// Period over alpha (around r1, r2) or beta (around r2, r3), roots sorted
/// lexicographically at u.
inline cplx period(cplx u, Cycle cycle, Form form, const PeriodOptions& opt = {}) {
  const Roots r = cubic_roots(u);
  if (min_separation(r) < opt.singular_tol * root_scale(r)) throw PeriodError("singular fiber");
  const auto bp = basis_periods(lex_basis(r), opt.nodes);
  const int k = cycle == Cycle::Alpha ? 0 : 1;
  return form == Form::Omega ? bp.omega[k] : bp.lambda[k];
}

/// Real (x, y) with target ~ x e0 + y e1, where e0, e1 are R-independent.
inline std::pair<double, double> real_coordinates(cplx target, cplx e0, cplx e1) {
  const double det = e0.real() * e1.imag() - e1.real() * e0.imag();
  if (det == 0.0) throw PeriodError("degenerate period lattice");
  const double x = (target.real() * e1.imag() - e1.real() * target.imag()) / det;
  const double y = (e0.real() * target.imag() - target.real() * e0.imag()) / det;
  return {x, y};
}

// ---------------------------------------------------------------------------
// Continuation.

struct BranchEvent {
  cplx a;
  cplx b;
  IntMatrix coefficients;  // tracked cycles in terms of the new local basis
};

struct BranchLog {
  std::vector<BranchEvent> events;
  std::size_t steps = 0;
  std::size_t refinements = 0;
  void append(const BranchLog& o) {
    events.insert(events.end(), o.events.begin(), o.events.end());
    steps += o.steps;
    refinements += o.refinements;
  }
};

/// Tracked periods of two cycles over a point of the family.
struct PeriodState {
  Cubic curve;
  Roots roots{};  // labels tracked by continuity
  std::array<cplx, 2> omega{};
  std::array<cplx, 2> lambda{};
  IntMatrix coefficients{};  // tracked = coefficients * local triangle basis
  BranchLog log;

  const std::array<cplx, 2>& periods(Form f) const { return f == Form::Omega ? omega : lambda; }
  /// u-coordinate of the family a = -3, b = 4u - 2.
  cplx u() const { return (curve.b + 2.0) / 4.0; }
};

/// Period vector over u, as returned to callers.
struct PeriodVector {
  cplx p_alpha;
  cplx p_beta;
  Form form = Form::Lambda;
  cplx u;
  BranchLog branch_log;
};

inline PeriodVector as_vector(const PeriodState& s, Form f) {
  const auto& p = s.periods(f);
  return {p[0], p[1], f, s.u(), s.log};
}

struct ContinuationOptions {
  int nodes = 256;
  double step = 0.05;       // max |du| per step, scaled by max(1, |u|)
  double clearance = 0.02;  // min distance of u-paths from {0, 1}
  int max_refinements = 20;
  double round_tol = 0.1;      // max distance of lattice coordinates from integers
  double root_motion = 0.25;   // max root displacement relative to min separation
};

/// State at a point with the lexicographic alpha/beta basis.
inline PeriodState initial_state(const Cubic& c, const ContinuationOptions& opt = {}) {
  PeriodState s;
  s.curve = c;
  s.roots = cubic_roots(c);
  check_regular(s.roots, {opt.nodes});
  const auto bp = basis_periods(lex_basis(s.roots), opt.nodes);
  s.omega = bp.omega;
  s.lambda = bp.lambda;
  // Express in the triangle basis to seed the coefficient bookkeeping.
  const auto tb = basis_periods(triangle_basis(s.roots), opt.nodes);
  IntMatrix coef;
  for (int i = 0; i < 2; ++i) {
    const auto [x, y] = real_coordinates(s.omega[i], tb.omega[0], tb.omega[1]);
    coef.a[2 * i] = std::llround(x);
    coef.a[2 * i + 1] = std::llround(y);
  }
  s.coefficients = coef;
  return s;
}

inline PeriodState initial_state(cplx u, const ContinuationOptions& opt = {}) {
  return initial_state(Cubic::from_u(u), opt);
}

namespace detail {

inline std::optional<Roots> match_roots(const Roots& prev, Roots next, double max_move) {
  std::array<int, 3> perm{0, 1, 2};
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  Roots out{};
  do {
    double cost = 0.0;
    for (int k = 0; k < 3; ++k) cost = std::max(cost, std::abs(next[perm[k]] - prev[k]));
    if (cost < best) {
      second = best;
      best = cost;
      for (int k = 0; k < 3; ++k) out[k] = next[perm[k]];
    } else if (cost < second) {
      second = cost;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best > max_move || second <= 2.0 * best) return std::nullopt;
  return out;
}

/// Attempts a single continuation step to `target`; empty when rejected.
inline std::optional<PeriodState> try_step(const PeriodState& s, const Cubic& target,
                                           const std::array<cplx, 2>& predicted,
                                           const ContinuationOptions& opt) {
  const Roots raw = cubic_roots(target);
  if (min_separation(raw) < 1e-12 * root_scale(raw)) return std::nullopt;
  const auto roots = match_roots(s.roots, raw, opt.root_motion * min_separation(s.roots));
  if (!roots) return std::nullopt;
  const auto bp = basis_periods(triangle_basis(*roots), opt.nodes);
  PeriodState n;
  n.curve = target;
  n.roots = *roots;
  n.log = s.log;
  for (int i = 0; i < 2; ++i) {
    const auto [x, y] = real_coordinates(predicted[i], bp.omega[0], bp.omega[1]);
    const auto xi = std::llround(x), yi = std::llround(y);
    if (std::abs(x - xi) > opt.round_tol || std::abs(y - yi) > opt.round_tol) return std::nullopt;
    n.coefficients.a[2 * i] = xi;
    n.coefficients.a[2 * i + 1] = yi;
    n.omega[i] = double(xi) * bp.omega[0] + double(yi) * bp.omega[1];
    n.lambda[i] = double(xi) * bp.lambda[0] + double(yi) * bp.lambda[1];
  }
  if (std::abs(n.coefficients.det()) != 1) return std::nullopt;
  return n;
}

}  // namespace detail

/// Continues along the path t -> curve(t), t in [0, 1], starting from `start`
/// (which must sit over curve(0)). `max_dt(t)` bounds the parameter step at t.
inline PeriodState continue_along(const PeriodState& start, const std::function<Cubic(double)>& curve,
                                  const std::function<double(double)>& max_dt,
                                  const ContinuationOptions& opt = {}) {
  PeriodState s = start;
  std::array<cplx, 2> prev_omega = s.omega;
  double prev_dt = 0.0;
  double t = 0.0;
  double dt = max_dt(0.0);
  BranchLog local;
  while (t < 1.0) {
    dt = std::min({dt, max_dt(t), 1.0 - t});
    int refinements = 0;
    for (;;) {
      std::array<cplx, 2> pred = s.omega;
      if (prev_dt > 0.0) {
        for (int i = 0; i < 2; ++i) pred[i] += (s.omega[i] - prev_omega[i]) * (dt / prev_dt);
      }
      const double t_next = (1.0 - t - dt < 1e-14) ? 1.0 : t + dt;
      auto next = detail::try_step(s, curve(t_next), pred, opt);
      if (next) {
        if (next->coefficients != s.coefficients)
          local.events.push_back({next->curve.a, next->curve.b, next->coefficients});
        prev_omega = s.omega;
        prev_dt = t_next - t;
        t = t_next;
        s = std::move(*next);
        ++local.steps;
        break;
      }
      if (++refinements > opt.max_refinements)
        throw PeriodError("continuation failed: step refinement limit reached");
      ++local.refinements;
      dt *= 0.5;
    }
    if (refinements == 0) dt *= 1.5;
  }
  s.log = start.log;
  s.log.append(local);
  return s;
}

inline double distance_to_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

/// Continuation along a polyline in the u-plane.
inline PeriodState continue_periods(const PeriodState& start, const std::vector<cplx>& path,
                                    const ContinuationOptions& opt = {}) {
  if (path.empty()) return start;
  if (std::abs(start.u() - path.front()) > 1e-12 * std::max(1.0, std::abs(path.front())))
    throw PeriodError("continue_periods: path does not start at the state's point");
  PeriodState s = start;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const cplx a = path[k], b = path[k + 1];
    for (cplx sing : {cplx{0.0, 0.0}, cplx{1.0, 0.0}}) {
      if (distance_to_segment(sing, a, b) < opt.clearance)
        throw PeriodError("continue_periods: path passes within clearance of a singular fiber");
    }
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    auto max_dt = [&](double t) {
      return std::min(1.0, opt.step * std::max(1.0, std::abs(a + t * (b - a))) / len);
    };
    s = continue_along(s, [a, b](double t) { return Cubic::from_u(a + t * (b - a)); }, max_dt, opt);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Monodromy.

struct MonodromyResult {
  IntMatrix matrix;        // continued periods = matrix * start periods
  double residual = 0.0;   // max distance of measured entries from integers
  double lambda_residual = 0.0;  // relative mismatch when applied to lambda-periods
  PeriodState end;
};

/// Integer matrix M with end = M * start (omega-periods), plus consistency on lambda.
inline MonodromyResult transition_matrix(const PeriodState& start, const PeriodState& end) {
  MonodromyResult r;
  r.end = end;
  for (int i = 0; i < 2; ++i) {
    const auto [x, y] = real_coordinates(end.omega[i], start.omega[0], start.omega[1]);
    const auto xi = std::llround(x), yi = std::llround(y);
    r.residual = std::max({r.residual, std::abs(x - xi), std::abs(y - yi)});
    r.matrix.a[2 * i] = xi;
    r.matrix.a[2 * i + 1] = yi;
  }
  const double scale = std::max(std::abs(start.lambda[0]), std::abs(start.lambda[1]));
  for (int i = 0; i < 2; ++i) {
    const cplx pred = double(r.matrix(i, 0)) * start.lambda[0] + double(r.matrix(i, 1)) * start.lambda[1];
    r.lambda_residual = std::max(r.lambda_residual, std::abs(pred - end.lambda[i]) / scale);
  }
  return r;
}

inline constexpr double kDefaultIntTol = 1e-6;

/// Monodromy of a closed u-polyline, based at its first point.
inline MonodromyResult monodromy(const std::vector<cplx>& loop, const ContinuationOptions& opt = {},
                                 double int_tol = kDefaultIntTol) {
  if (loop.size() < 2 || std::abs(loop.front() - loop.back()) > 1e-12)
    throw PeriodError("monodromy: loop must be closed");
  const PeriodState start = initial_state(loop.front(), opt);
  const PeriodState end = continue_periods(start, loop, opt);
  auto r = transition_matrix(start, end);
  if (r.residual > int_tol) throw PeriodError("continuation accuracy insufficient");
  if (r.matrix.det() != 1) throw PeriodError("monodromy: transition matrix not unimodular");
  return r;
}

/// Closed polygon approximating a circle through `base` around `center`,
/// counterclockwise.
inline std::vector<cplx> circle_loop(cplx center, cplx base, int segments = 64) {
  std::vector<cplx> out;
  const cplx v = base - center;
  for (int k = 0; k <= segments; ++k) {
    const double th = 2.0 * std::numbers::pi * k / segments;
    out.push_back(k == segments ? base : center + v * std::polar(1.0, th));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hypergeometric checks.

struct HypergeometricSpec {
  double lambda_e;  // exponent difference at 0
  double mu_e;      // at infinity
  double nu_e;      // at 1

  /// Gauss parameters: gamma = 1 - lambda_e, alpha,beta = (gamma - nu_e +- mu_e) / 2.
  double gamma() const { return 1.0 - lambda_e; }
  double alpha() const { return (gamma() - nu_e + mu_e) / 2.0; }
  double beta() const { return (gamma() - nu_e - mu_e) / 2.0; }

  static HypergeometricSpec for_form(Form f) {
    return f == Form::Omega ? HypergeometricSpec{0.0, 1.0 / 3.0, 0.5}
                            : HypergeometricSpec{1.0, 1.0 / 3.0, 0.5};
  }
};

/// Relative residual of w(1-w)f'' + (gamma - (alpha+beta+1)w)f' - alpha beta f
/// at w from five samples f(w + k h), k = -2..2.
inline double hypergeometric_residual(const HypergeometricSpec& spec, cplx w, cplx h,
                                      const std::array<cplx, 5>& f) {
  const cplx d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
  const cplx d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
  const double a = spec.alpha(), b = spec.beta(), g = spec.gamma();
  const cplx t2 = w * (1.0 - w) * d2;
  const cplx t1 = (g - (a + b + 1.0) * w) * d1;
  const cplx t0 = -a * b * f[2];
  const double scale = std::abs(t2) + std::abs(t1) + std::abs(t0);
  if (scale == 0.0) return 0.0;
  return std::abs(t2 + t1 + t0) / scale;
}

inline double hypergeometric_residual(const HypergeometricSpec& spec, cplx w, cplx h,
                                      const std::function<cplx(cplx)>& f) {
  std::array<cplx, 5> v{};
  for (int k = -2; k <= 2; ++k) v[k + 2] = f(w + double(k) * h);
  return hypergeometric_residual(spec, w, h, v);
}

/// Max relative hypergeometric residual in j of both basis periods of `form`
/// around the state's point.
inline double pf_residual(const PeriodState& at, Form form, const ContinuationOptions& opt = {}) {
  const cplx u0 = at.u();
  const cplx j0 = 4.0 * u0 * (1.0 - u0);
  const double d = std::min(std::abs(j0), std::abs(j0 - 1.0));
  if (d <= 0.05) throw PeriodError("pf_residual: |j| and |j-1| must exceed 0.05");
  const cplx h = 0.02 * d;
  const cplx s0 = 1.0 - 2.0 * u0;
  const auto spec = HypergeometricSpec::for_form(form);
  std::array<std::array<cplx, 5>, 2> f{};
  for (int k = -2; k <= 2; ++k) {
    const cplx jk = j0 + double(k) * h;
    cplx sk = std::sqrt(1.0 - jk);
    if (std::abs(sk - s0) > std::abs(sk + s0)) sk = -sk;
    const cplx uk = (1.0 - sk) / 2.0;
    const PeriodState st = k == 0 ? at : continue_periods(at, {u0, uk}, opt);
    for (int i = 0; i < 2; ++i) f[i][k + 2] = st.periods(form)[i];
  }
  return std::max(hypergeometric_residual(spec, j0, h, f[0]),
                  hypergeometric_residual(spec, j0, h, f[1]));
}

inline double pf_residual(cplx u, Form form, const ContinuationOptions& opt = {}) {
  return pf_residual(initial_state(u, opt), form, opt);
}

// ---------------------------------------------------------------------------
// Period map.

/// Lambda-periods on the principal branch: straight continuation from the
/// basepoint 1/2 + i/2 for Im u >= 0, reflection for Im u < 0.
inline PeriodState principal_state(cplx u, const ContinuationOptions& opt = {}) {
  if (u.imag() < 0.0) {
    PeriodState s = principal_state(std::conj(u), opt);
    s.curve = {std::conj(s.curve.a), std::conj(s.curve.b)};
    for (auto& r : s.roots) r = std::conj(r);
    for (auto& p : s.omega) p = std::conj(p);
    for (auto& p : s.lambda) p = std::conj(p);
    return s;
  }
  const PeriodState base = initial_state(kBasepoint, opt);
  if (u == kBasepoint) return base;
  return continue_periods(base, {kBasepoint, u}, opt);
}

/// [integral_alpha lambda : integral_beta lambda] on the principal branch.
inline ProjectiveCharge period_map(cplx u, const ContinuationOptions& opt = {}) {
  const auto s = principal_state(u, opt);
  return ProjectiveCharge(s.lambda[0], s.lambda[1]);
}

}  // namespace staba2

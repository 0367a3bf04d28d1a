#pragma once

// Self-checks run by `staba2 verify all`. Each check returns a verdict and a
// JSON record of the measured quantities.

#include <functional>
#include <random>

#include "cli_support.hpp"

namespace staba2::cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  json details = json::object();
};

inline CheckResult check_algebra() {
  CheckResult r{"braid algebra"};
  const auto ms = twist_matrix(classes::S).matrix(), mt = twist_matrix(classes::T).matrix();
  const bool braid = ms * mt * ms == mt * ms * mt;
  const bool center = (ms * mt).pow(3) == -IntMatrix::identity();
  const auto sh = reduce(GenLetter{Gen::Shift, 1});
  const bool tilts = power(gens::Sigma, 3) == power(gens::Delta, 2) && power(gens::Delta, 2) == sh;
  const bool lengths = ell_mod5(gens::PhiS) == 0 && ell_mod5(sh) == 1 && ell_mod5(gens::Sigma) == 2 &&
                       ell_mod5(gens::Delta) == 3;
  const bool sph = is_sph(power(sh, 5)) && !is_sph(sh);
  r.details = {{"braid_relation", braid}, {"center_is_minus_identity", center}, {"sigma3_delta2_shift", tilts},
               {"word_lengths_mod5", lengths}, {"shift5_spherical", sph}};
  r.pass = braid && center && tilts && lengths && sph;
  return r;
}

inline CheckResult check_exchange_graph(std::uint64_t seed = 7) {
  CheckResult r{"exchange graph"};
  const auto ball = generate_ball(4, Quotient::None);
  bool regular = true;
  for (std::size_t v = 0; v < ball.size(); ++v)
    if (ball.distance[v] < ball.radius && ball.neighbor_count(v) != 4) regular = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  bool torsor = true;
  for (int k = 0; k < 100; ++k) {
    const auto a = ball.representatives[pick(rng)], b = ball.representatives[pick(rng)];
    const auto g = b * a.inverse();
    if (!(g * a == b) || !(Heart(g * a) == Heart(b))) torsor = false;
  }
  const auto sph = generate_ball(3, Quotient::Sph);
  bool cycle = sph.size() == 5;
  for (std::size_t v = 0; v < sph.size(); ++v) cycle = cycle && sph.neighbor_count(v) == 2;
  const auto rel = verify_relation_ball(generate_ball(3, Quotient::None), 8);
  r.details = {{"ball4_vertices", ball.size()}, {"interior_4_regular", regular}, {"torsor_pairs", torsor},
               {"sph_quotient_5_cycle", cycle}, {"relation_walks", rel.walks_checked}, {"relation_mismatches", rel.mismatches}};
  r.pass = regular && torsor && cycle && rel.ok();
  return r;
}

inline CheckResult check_tilt_matrices() {
  CheckResult r{"tilt matrices"};
  r.details = {{"delta", to_json(gens::Delta.k_matrix())}, {"sigma", to_json(gens::Sigma.k_matrix())}};
  r.pass = gens::Delta.k_matrix() == kDeltaMatrix && gens::Sigma.k_matrix() == kSigmaMatrix;
  return r;
}

inline CheckResult check_periods(const Config& cfg) {
  CheckResult r{"periods"};
  PeriodOptions po{cfg.quadrature_nodes};
  const cplx rl = period(0.5, Cycle::Alpha, Form::Lambda, po) / period(0.5, Cycle::Beta, Form::Lambda, po);
  const cplx ro = period(0.5, Cycle::Alpha, Form::Omega, po) / period(0.5, Cycle::Beta, Form::Omega, po);
  const double ratio_err = std::min(std::abs(std::abs(rl) - 1.0) + std::abs(rl.real()),
                                    std::abs(std::abs(ro) - 1.0) + std::abs(ro.real()));
  double conv = 0.0;
  for (cplx u : {cplx{0.3, 0.4}, cplx{-1.0, 2.0}}) {
    const cplx a = period(u, Cycle::Alpha, Form::Lambda, {cfg.quadrature_nodes});
    const cplx b = period(u, Cycle::Alpha, Form::Lambda, {2 * cfg.quadrature_nodes});
    conv = std::max(conv, std::abs(a - b) / std::abs(b));
  }
  // d(lambda-period)/du over omega-period, by central differences.
  std::vector<double> quotients;
  for (int k = 0; k < 10; ++k) {
    const cplx u = cplx{0.2, 0.3} + cplx{0.15 * k, 0.05 * k};
    for (Cycle c : {Cycle::Alpha, Cycle::Beta}) {
      const double h = 1e-4;
      const cplx d = (period(u + h, c, Form::Lambda, po) - period(u - h, c, Form::Lambda, po)) / (2 * h);
      quotients.push_back(std::abs(d / period(u, c, Form::Omega, po)));
    }
  }
  const auto [mn, mx] = std::minmax_element(quotients.begin(), quotients.end());
  const double spread = (*mx - *mn) / *mx;
  r.details = {{"lambda_ratio_at_half", to_json(rl)}, {"omega_ratio_at_half", to_json(ro)},
               {"self_convergence", conv}, {"derivative_constant", *mx}, {"derivative_spread", spread}};
  r.pass = ratio_err < 1e-8 && conv < 1e-10 && spread < 1e-5;
  return r;
}

inline CheckResult check_picard_fuchs(const Config& cfg) {
  CheckResult r{"picard-fuchs"};
  const auto opt = cfg.continuation();
  double worst = 0.0;
  int used = 0;
  for (int k = 0; k < 20; ++k) {
    const cplx u = 0.5 + 0.45 * std::polar(1.0, std::numbers::pi * (0.05 + 0.9 * k / 19.0));
    const cplx j = 4.0 * u * (1.0 - u);
    if (std::abs(j) <= 0.05 || std::abs(j - 1.0) <= 0.05) continue;
    ++used;
    worst = std::max({worst, pf_residual(u, Form::Omega, opt), pf_residual(u, Form::Lambda, opt)});
  }
  r.details = {{"points", used}, {"max_residual", worst}};
  r.pass = used >= 10 && worst < 1e-5;
  return r;
}

inline CheckResult check_monodromy(const Config& cfg, std::optional<Calibration>& cal) {
  CheckResult r{"monodromy"};
  const auto opt = cfg.continuation();
  const auto m0 = monodromy(circle_loop(0.0, kBasepoint), opt, cfg.int_tol);
  const auto m1 = monodromy(circle_loop(1.0, kBasepoint), opt, cfg.int_tol);
  const std::vector<cplx> big{kBasepoint, cplx{0.5, 3.0}, cplx{-2.5, 3.0}, cplx{-2.5, -3.0},
                              cplx{3.5, -3.0}, cplx{3.5, 3.0}, cplx{0.5, 3.0}, kBasepoint};
  const auto minf = monodromy(big, opt, cfg.int_tol);
  auto transvection = [](const IntMatrix& m) { return m.det() == 1 && m.trace() == 2 && m != IntMatrix::identity(); };
  int order = 0;
  for (int n = 1; n <= 12 && !order; ++n)
    if (minf.matrix.pow(n) == IntMatrix::identity()) order = n;
  r.details = {{"loop0", to_json(m0.matrix)}, {"loop1", to_json(m1.matrix)}, {"loop_inf", to_json(minf.matrix)},
               {"order_inf", order},
               {"max_residual", std::max({m0.residual, m1.residual, minf.residual})}};
  bool ok = transvection(m0.matrix) && transvection(m1.matrix) && order == 6 &&
            std::max({m0.residual, m1.residual, minf.residual}) < cfg.int_tol;
  try {
    cal = calibrate(opt, cfg.int_tol);
    r.details["calibration"] = {{"basis", to_json(cal->basis)}, {"cross_inverted", cal->cross_inverted},
                                {"star_inverted", cal->star_inverted}};
  } catch (const CalibrationError& e) {
    r.details["calibration"] = e.what();
    ok = false;
  }
  r.pass = ok;
  return r;
}

inline CheckResult check_chambers(const Config& cfg, const Calibration& cal) {
  CheckResult r{"chamber structure"};
  const auto zx = calibrated_charge(cal, 0.5, cfg.continuation());
  const double wx = width(zx, standard_heart());
  const ProjectiveCharge wall(cplx{-0.25, 1.0}, cplx{0.5, 0.0});
  const double wd = std::abs(width(wall, standard_heart()) - width(wall, simple_tilt(standard_heart(), TiltLabel::Sigma)));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  int max_steps = 0, failures = 0;
  for (int k = 0; k < 200; ++k) {
    try {
      max_steps = std::max(max_steps, chamber_descent(ProjectiveCharge({g(rng), g(rng)}, {g(rng), g(rng)}), cfg.descent()).steps);
    } catch (const StabilityError&) {
      ++failures;
    }
  }
  r.details = {{"width_at_cross_image", wx}, {"wall_width_difference", wd}, {"descent_max_steps", max_steps},
               {"descent_failures", failures}};
  r.pass = std::abs(wx - 0.5) < 1e-6 && wd < 1e-9 && failures == 0 && max_steps <= 64;
  return r;
}

inline CheckResult check_correspondence(const Config& cfg, const Calibration& cal) {
  CheckResult r{"correspondence"};
  CorrespondenceOptions copt;
  copt.descent = cfg.descent();
  const auto rep = verify_correspondence(regular_samples(100), cal, cfg.continuation(), copt);
  const auto tri = triangle_geometry(cal, {}, cfg.continuation());
  json failed = json::array();
  for (const auto& s : rep.samples)
    if (!s.ok()) failed.push_back({{"u", to_json(s.u)}, {"excluded", s.excluded}, {"error", s.error}});
  r.details = {{"passed", rep.passed}, {"excluded", rep.excluded}, {"failed", rep.failed}, {"not_passing", failed},
               {"angle_cusp", tri.at_cusp.measured}, {"angle_hex", tri.at_hex.measured},
               {"angle_square", tri.at_square.measured}};
  const double pi = std::numbers::pi;
  r.pass = rep.pass_fraction() >= 0.95 && std::abs(tri.at_cusp.measured - pi) < 0.1 &&
           std::abs(tri.at_hex.measured - pi / 3) < 0.05 && std::abs(tri.at_square.measured - pi / 2) < 0.05;
  return r;
}

inline CheckResult check_lift(const Config& cfg) {
  CheckResult r{"lift"};
  const auto rep = lift_check(cfg.continuation(), cfg.int_tol);
  json loops = json::array();
  for (const auto& l : rep.loops)
    loops.push_back({{"loop", l.name}, {"scalar", to_json(l.scalar)}, {"expected", l.expected}, {"ok", l.ok}});
  r.details = {{"loops", loops}};
  r.pass = rep.ok();
  return r;
}

inline std::vector<CheckResult> verify_all(const Config& cfg) {
  std::vector<CheckResult> out{check_algebra(), check_exchange_graph(), check_tilt_matrices(),
                               check_periods(cfg), check_picard_fuchs(cfg)};
  std::optional<Calibration> cal;
  out.push_back(check_monodromy(cfg, cal));
  if (cal) {
    out.push_back(check_chambers(cfg, *cal));
    out.push_back(check_correspondence(cfg, *cal));
  } else {
    out.push_back({"chamber structure", false, {{"error", "no calibration"}}});
    out.push_back({"correspondence", false, {{"error", "no calibration"}}});
  }
  out.push_back(check_lift(cfg));
  return out;
}

}  // namespace staba2::cli

// staba2: command-line front end.
//
//   staba2 braid reduce "S T S"
//   staba2 graph ball --radius 3 --quotient sph
//   staba2 stab chamber --zs -0.25+1i --zt 0.5
//   staba2 periods eval --u 0.5 --form lambda
//   staba2 verify all --report report.json
//
// Exit status: 0 success, 1 a check failed, 2 usage error.

#include <iostream>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "verify.hpp"

using namespace staba2;
using namespace staba2::cli;

namespace {

struct Globals {
  std::string config_path;
  std::string out_dir;
  bool json_output = false;
  Config cfg;
};

struct Range {
  double lo = 0, hi = 1;
  int n = 11;
  double at(int k) const { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); }
};

Range parse_range(const std::string& s) {
  Range r;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> r.lo >> c1 >> r.hi >> c2 >> r.n) || c1 != ':' || c2 != ':' || r.n < 1)
    throw UsageError("range must look like lo:hi:count, got '" + s + "'");
  return r;
}

Quotient parse_quotient(const std::string& s) {
  if (s == "none") return Quotient::None;
  if (s == "shift") return Quotient::Shift;
  if (s == "sph") return Quotient::Sph;
  throw UsageError("quotient must be none, shift or sph");
}

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// Writes `content` to <out>/<name> when --out is given, else to stdout.
void emit(const Globals& g, const std::string& name, const std::string& content) {
  if (g.out_dir.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    write_atomic(std::filesystem::path(g.out_dir) / name, content);
  }
}

std::vector<cplx> parse_polyline(const std::string& text) {
  std::string src = text;
  if (std::filesystem::exists(text)) {
    std::ifstream in(text);
    src.assign(std::istreambuf_iterator<char>(in), {});
  }
  std::vector<cplx> out;
  try {
    for (const auto& p : json::parse(src)) out.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  } catch (const json::exception& e) {
    throw UsageError(std::string("loop must be a JSON array of [re, im] pairs: ") + e.what());
  }
  if (out.size() < 2) throw UsageError("loop needs at least two points");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_braid_reduce(const Globals& g, const std::string& word) {
  Word w;
  try {
    w = parse_word(word);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto e = reduce(w);
  if (g.json_output) {
    json j = to_json(e);
    j["word"] = format_word(w);
    j["psl2"] = to_json(psl2_image(e));
    j["ell_mod5"] = ell_mod5(e);
    j["spherical"] = is_sph(e);
    emit(g, "braid.json", j.dump(2));
  } else {
    std::ostringstream os;
    os << e << "\n";
    emit(g, "braid.txt", os.str());
  }
  return 0;
}

int cmd_graph_ball(const Globals& g, int radius, const std::string& quotient, const std::string& format) {
  if (radius < 0 || radius > kMaxBallRadius) throw UsageError("radius out of range");
  const auto ball = generate_ball(radius, parse_quotient(quotient));
  if (g.json_output || format == "json") emit(g, "ball.json", to_json(ball).dump(2));
  else if (format == "dot") emit(g, "ball.dot", to_dot(ball));
  else throw UsageError("format must be dot or json");
  return 0;
}

int cmd_stab_chamber(const Globals& g, const std::string& zs, const std::string& zt) {
  const ProjectiveCharge z(parse_complex(zs), parse_complex(zt));
  const auto rep = chamber_descent(z, g.cfg.descent());
  if (g.json_output) {
    emit(g, "chamber.json", to_json(rep).dump(2));
  } else {
    std::ostringstream os;
    os << "heart  " << rep.heart.element() << "\nwidth  " << rep.width << "\nstable " << stable_names(rep.stable)
       << (rep.stable.on_wall ? " (semistable wall)" : "") << "\nwalls ";
    for (auto l : rep.wall_flags) os << " " << tilt_name(l);
    os << "\n";
    emit(g, "chamber.txt", os.str());
  }
  return 0;
}

int cmd_stab_sweep(const Globals& g, const std::string& re, const std::string& im) {
  const Range rr = parse_range(re), ri = parse_range(im);
  std::ostringstream os;
  os << "zs_re,zs_im,zt_re,zt_im,heart_k,twist_sum,shift_res,width,stable_count,wall_flags\n";
  for (int a = 0; a < rr.n; ++a) {
    for (int b = 0; b < ri.n; ++b) {
      const cplx zs{rr.at(a), ri.at(b)};
      os << zs.real() << "," << zs.imag() << ",1,0,";
      try {
        const auto rep = chamber_descent(ProjectiveCharge(zs, 1.0), g.cfg.descent());
        const auto k = rep.heart.element().k_matrix();
        std::string walls;
        for (auto l : rep.wall_flags) walls += (walls.empty() ? "" : " ") + std::string(tilt_name(l));
        os << k(0, 0) << " " << k(0, 1) << " " << k(1, 0) << " " << k(1, 1) << "," << rep.heart.element().twist_sum()
           << "," << rep.heart.element().shift_res() << "," << rep.width << "," << rep.stable.count() << "," << walls;
      } catch (const StabilityError& e) {
        os << ",,,,," << e.what();
      }
      os << "\n";
    }
  }
  emit(g, "stab_sweep.csv", os.str());
  return 0;
}

int cmd_periods_eval(const Globals& g, const std::string& us, const std::string& form) {
  if (form != "lambda" && form != "omega") throw UsageError("form must be lambda or omega");
  const cplx u = parse_complex(us);
  const Form f = form == "lambda" ? Form::Lambda : Form::Omega;
  const auto st = principal_state(u, g.cfg.continuation());
  const auto p = st.periods(f);
  json j = {{"u", to_json(u)}, {"j", to_json(4.0 * u * (1.0 - u))}, {"form", form},
            {"p_alpha", to_json(p[0])}, {"p_beta", to_json(p[1])}, {"ratio", to_json(p[0] / p[1])}};
  if (g.json_output) {
    emit(g, "periods.json", j.dump(2));
  } else {
    emit(g, "periods.txt", "p_alpha " + fmt(p[0]) + "\np_beta  " + fmt(p[1]) + "\nratio   " + fmt(p[0] / p[1]) + "\n");
  }
  return 0;
}

int cmd_periods_sweep(const Globals& g, const std::string& re, const std::string& im) {
  const Range rr = parse_range(re), ri = parse_range(im);
  std::ostringstream os;
  os.precision(12);
  os << "u_re,u_im,j_re,j_im,p_alpha_re,p_alpha_im,p_beta_re,p_beta_im,ratio_re,ratio_im\n";
  for (int a = 0; a < rr.n; ++a) {
    for (int b = 0; b < ri.n; ++b) {
      const cplx u{rr.at(a), ri.at(b)}, j = 4.0 * u * (1.0 - u);
      os << u.real() << "," << u.imag() << "," << j.real() << "," << j.imag();
      try {
        const auto p = principal_state(u, g.cfg.continuation()).lambda;
        const cplx r = p[0] / p[1];
        os << "," << p[0].real() << "," << p[0].imag() << "," << p[1].real() << "," << p[1].imag() << "," << r.real()
           << "," << r.imag();
      } catch (const PeriodError&) {
        os << ",,,,,,";
      }
      os << "\n";
    }
  }
  emit(g, "periods_sweep.csv", os.str());
  return 0;
}

int cmd_periods_monodromy(const Globals& g, const std::string& loop) {
  const auto res = monodromy(parse_polyline(loop), g.cfg.continuation(), g.cfg.int_tol);
  json j = {{"matrix", to_json(res.matrix)}, {"residual", res.residual}, {"lambda_residual", res.lambda_residual},
            {"trace", res.matrix.trace()}, {"det", res.matrix.det()}};
  if (g.json_output) {
    emit(g, "monodromy.json", j.dump(2));
  } else {
    std::ostringstream os;
    os << res.matrix << "\nresidual " << res.residual << "\n";
    emit(g, "monodromy.txt", os.str());
  }
  return res.residual < g.cfg.int_tol ? 0 : 1;
}

int cmd_periods_pf(const Globals& g, const std::string& arc) {
  cplx center{0.5, 0.0};
  double radius = 0.45;
  int n = 20;
  {
    std::istringstream is(arc);
    std::string c, r, k;
    if (!std::getline(is, c, ',') || !std::getline(is, r, ',') || !std::getline(is, k))
      throw UsageError("arc must look like center,radius,count");
    center = parse_complex(c);
    radius = std::stod(r);
    n = std::stoi(k);
    if (n < 1 || radius <= 0) throw UsageError("arc needs a positive radius and count");
  }
  json pts = json::array();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = std::numbers::pi * (0.05 + 0.9 * (n == 1 ? 0.5 : double(k) / (n - 1)));
    const cplx u = center + radius * std::polar(1.0, th);
    const double ro = pf_residual(u, Form::Omega, g.cfg.continuation());
    const double rl = pf_residual(u, Form::Lambda, g.cfg.continuation());
    worst = std::max({worst, ro, rl});
    pts.push_back({{"u", to_json(u)}, {"omega", ro}, {"lambda", rl}});
  }
  json j = {{"points", pts}, {"max_residual", worst}, {"pass", worst < 1e-5}};
  if (g.json_output) emit(g, "pf_check.json", j.dump(2));
  else emit(g, "pf_check.txt", "max residual " + std::to_string(worst) + (worst < 1e-5 ? "  PASS\n" : "  FAIL\n"));
  return worst < 1e-5 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Figures

/// Fundamental domain: grid points of both discs classified by the
/// fundamental-domain test, with the walls drawn as red dots.
std::string figure_domain(const Config& cfg) {
  SvgCanvas svg(-1.1, 3.3, -1.1, 1.1, 800);
  std::vector<cplx> circle;
  for (int k = 0; k <= 128; ++k) circle.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 128));
  std::vector<cplx> circle2 = circle;
  for (auto& c : circle2) c += 2.2;
  svg.polyline(circle, "black");
  svg.polyline(circle2, "black");
  const int n = 90;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const cplx d{-1.0 + 2.0 * (a + 0.5) / n, -1.0 + 2.0 * (b + 0.5) / n};
      if (std::abs(d) >= 1.0) continue;
      for (int half = 0; half < 2; ++half) {
        // Invert the disc coordinate: upper half plane on the left, lower on the right.
        const cplx w = half == 0 ? cplx{0, 1} * (1.0 + d) / (1.0 - d) : cplx{0, -1} * (1.0 + d) / (1.0 - d);
        const auto t = fundamental_domain_test(ProjectiveCharge(w, 1.0), 2e-2);
        const cplx at = d + (half == 0 ? 0.0 : 2.2);
        if (t.position == DomainPosition::Interior) svg.dot(at, "#88aadd", 2.0);
        else if (t.position == DomainPosition::Wall) svg.dot(at, "#cc2222", 2.0);
      }
    }
  }
  svg.text({-0.1, 1.02}, "Im Z > 0");
  svg.text({2.1, 1.02}, "Im Z < 0");
  (void)cfg;
  return svg.str();
}

/// Image of a u-grid over the upper half plane under the calibrated period map.
std::string figure_image(const Config& cfg, const Calibration& cal) {
  SvgCanvas svg(-1.1, 1.1, -1.1, 1.1, 600);
  std::vector<cplx> circle;
  for (int k = 0; k <= 128; ++k) circle.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 128));
  svg.polyline(circle, "black");
  auto image = [&](cplx u) {
    try {
      return disc_coordinate(calibrated_charge(cal, u, cfg.continuation()));
    } catch (const std::exception&) {
      return cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
    }
  };
  for (double x = -2.0; x <= 3.0 + 1e-9; x += 0.25) {
    std::vector<cplx> line;
    for (double y = 0.05; y <= 4.0; y += 0.05) line.push_back(image({x, y}));
    svg.polyline(line, "#3366aa", 0.7);
  }
  for (double y = 0.25; y <= 4.0 + 1e-9; y += 0.25) {
    std::vector<cplx> line;
    for (double x = -2.0; x <= 3.0; x += 0.05) line.push_back(image({x, y}));
    svg.polyline(line, "#aa6633", 0.7);
  }
  svg.dot(image(0.5), "red", 4.0);
  svg.text(image(0.5), "x");
  svg.dot(image({0.5, 1e4}), "red", 4.0);
  svg.text(image({0.5, 1e4}), "*");
  return svg.str();
}

int cmd_plot(const Globals& g, const std::string& which) {
  if (which == "domain") {
    emit(g, "domain.svg", figure_domain(g.cfg));
  } else if (which == "image") {
    emit(g, "image.svg", figure_image(g.cfg, calibrate(g.cfg.continuation(), g.cfg.int_tol)));
  } else {
    throw UsageError("plot target must be domain or image");
  }
  return 0;
}

int cmd_verify(const Globals& g, const std::string& what, const std::string& report) {
  if (what != "all") throw UsageError("verify target must be all");
  const auto results = verify_all(g.cfg);
  bool ok = true;
  json j = json::array();
  for (const auto& r : results) {
    ok = ok && r.pass;
    j.push_back({{"check", r.name}, {"pass", r.pass}, {"details", r.details}});
  }
  const json doc = {{"pass", ok}, {"checks", j}};
  if (!report.empty()) write_atomic(report, doc.dump(2));
  if (!g.out_dir.empty()) {
    write_atomic(std::filesystem::path(g.out_dir) / "domain.svg", figure_domain(g.cfg));
    write_atomic(std::filesystem::path(g.out_dir) / "image.svg",
                 figure_image(g.cfg, calibrate(g.cfg.continuation(), g.cfg.int_tol)));
  }
  if (g.json_output) {
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& r : results) std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"staba2: stability conditions of the A2 CY3 category and the elliptic period map"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file");
  app.add_option("--out", g.out_dir, "write outputs to this directory instead of stdout");
  app.add_flag("--json", g.json_output, "JSON output");

  std::function<int()> action;

  auto* braid = app.add_subcommand("braid", "braid group words")->require_subcommand(1);
  std::string word;
  auto* reduce_cmd = braid->add_subcommand("reduce", "canonical form of a word");
  reduce_cmd->add_option("word", word, "word such as \"S T S^-1 [2]\"")->required();
  reduce_cmd->callback([&] { action = [&] { return cmd_braid_reduce(g, word); }; });

  auto* graph = app.add_subcommand("graph", "exchange graph")->require_subcommand(1);
  int radius = 2;
  std::string quotient = "none", format = "dot";
  auto* ball = graph->add_subcommand("ball", "ball around the standard heart");
  ball->add_option("--radius", radius)->required();
  ball->add_option("--quotient", quotient, "none, shift or sph");
  ball->add_option("--format", format, "dot or json");
  ball->callback([&] { action = [&] { return cmd_graph_ball(g, radius, quotient, format); }; });

  auto* stab = app.add_subcommand("stab", "central charges and chambers")->require_subcommand(1);
  std::string zs, zt, re_range = "-1:1:21", im_range = "0.05:2:21";
  auto* chamber = stab->add_subcommand("chamber", "supporting heart of [zs : zt]");
  chamber->add_option("--zs", zs)->required();
  chamber->add_option("--zt", zt)->required();
  chamber->callback([&] { action = [&] { return cmd_stab_chamber(g, zs, zt); }; });
  auto* sweep = stab->add_subcommand("sweep", "chamber descent over a grid of [zs : 1]");
  sweep->add_option("--re", re_range, "lo:hi:count");
  sweep->add_option("--im", im_range, "lo:hi:count");
  sweep->callback([&] { action = [&] { return cmd_stab_sweep(g, re_range, im_range); }; });

  auto* periods = app.add_subcommand("periods", "periods of the elliptic family")->require_subcommand(1);
  std::string u = "0.5+0.5i", form = "lambda", loop, arc = "0.5,0.45,20";
  auto* eval = periods->add_subcommand("eval", "periods on the principal branch");
  eval->add_option("--u", u)->required();
  eval->add_option("--form", form, "lambda or omega");
  eval->callback([&] { action = [&] { return cmd_periods_eval(g, u, form); }; });
  auto* mono = periods->add_subcommand("monodromy", "monodromy of a closed u-polyline");
  mono->add_option("--loop", loop, "JSON array of [re, im] points, or a file containing one")->required();
  mono->callback([&] { action = [&] { return cmd_periods_monodromy(g, loop); }; });
  auto* pf = periods->add_subcommand("pf-check", "hypergeometric residuals along an arc");
  pf->add_option("--arc", arc, "center,radius,count");
  pf->callback([&] { action = [&] { return cmd_periods_pf(g, arc); }; });
  auto* psweep = periods->add_subcommand("sweep", "lambda-periods over a u-grid");
  psweep->add_option("--re", re_range, "lo:hi:count");
  psweep->add_option("--im", im_range, "lo:hi:count");
  psweep->callback([&] { action = [&] { return cmd_periods_sweep(g, re_range, im_range); }; });

  auto* verify = app.add_subcommand("verify", "run the consistency checks");
  std::string target, report;
  verify->add_option("target", target, "all")->required();
  verify->add_option("--report", report, "JSON report path");
  verify->callback([&] { action = [&] { return cmd_verify(g, target, report); }; });

  auto* plot = app.add_subcommand("plot", "SVG figures");
  std::string figure;
  plot->add_option("figure", figure, "domain or image")->required();
  plot->callback([&] { action = [&] { return cmd_plot(g, figure); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (!g.config_path.empty()) load_config_file(g.cfg, g.config_path);
    apply_environment(g.cfg);
    g.cfg.validate();
    if (g.out_dir.empty() && g.cfg.output_dir != ".") g.out_dir = g.cfg.output_dir.string();
    return action ? action() : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

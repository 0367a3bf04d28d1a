#pragma once

// Plumbing for the staba2 command-line tool: configuration, parsing of complex
// literals, atomic file output and serializers.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "staba2/correspondence.hpp"

namespace staba2::cli {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  int quadrature_nodes = 256;
  double cont_step = 0.05;
  double clearance = 0.02;
  double tie_tol = 1e-9;
  double int_tol = 1e-6;
  std::filesystem::path output_dir = ".";

  ContinuationOptions continuation() const {
    ContinuationOptions o;
    o.nodes = quadrature_nodes;
    o.step = cont_step;
    o.clearance = clearance;
    return o;
  }
  DescentOptions descent() const {
    DescentOptions d;
    d.tie_tol = tie_tol;
    return d;
  }

  void set(const std::string& key, const std::string& value) {
    try {
      if (key == "quadrature_nodes") quadrature_nodes = std::stoi(value);
      else if (key == "cont_step") cont_step = std::stod(value);
      else if (key == "clearance") clearance = std::stod(value);
      else if (key == "tie_tol") tie_tol = std::stod(value);
      else if (key == "int_tol") int_tol = std::stod(value);
      else if (key == "output_dir") output_dir = value;
      else throw UsageError("unknown config key '" + key + "'");
    } catch (const std::logic_error&) {
      throw UsageError("bad value for config key '" + key + "': " + value);
    }
  }

  void validate() const {
    if (quadrature_nodes < 16) throw UsageError("quadrature_nodes must be at least 16");
    if (!(cont_step > 0 && clearance > 0 && tie_tol > 0 && int_tol > 0))
      throw UsageError("tolerances must be positive");
  }
};

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Reads `key = value` lines; `#` starts a comment, `[section]` headers and
/// quotes around values are tolerated.
inline void load_config_file(Config& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    cfg.set(trim(line.substr(0, eq)), value);
  }
}

/// STABA2_QUADRATURE_NODES etc. override file settings.
inline void apply_environment(Config& cfg) {
  for (const char* key : {"quadrature_nodes", "cont_step", "clearance", "tie_tol", "int_tol", "output_dir"}) {
    std::string env = "STABA2_";
    for (const char* p = key; *p; ++p) env += char(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* v = std::getenv(env.c_str())) cfg.set(key, v);
  }
}

/// Accepts "a+bi", "a-bi", "bi", "a", "i", "-i".
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != part.size() || part.empty()) throw UsageError("cannot parse complex number '" + text + "'");
    return v;
  };
  if (s.empty()) throw UsageError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {number(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : s.substr(0, split);
  const std::string im = split == std::string::npos ? s : s.substr(split);
  const double iv = im.empty() || im == "+" ? 1.0 : im == "-" ? -1.0 : number(im);
  return {re.empty() ? 0.0 : number(re), iv};
}

/// Writes through a temporary file in the same directory and renames it.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// JSON encodings

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const IntMatrix& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

inline json to_json(const AutElement& g) {
  return {{"k", to_json(g.k_matrix())}, {"twist_sum", g.twist_sum()}, {"shift_res", g.shift_res()}};
}

inline json to_json(const VertexKey& v) {
  return {{"k", to_json(v.k)}, {"twist_sum", v.twist_sum}, {"shift_res", v.shift_res}};
}

inline std::string format_triple(const VertexKey& v) {
  std::ostringstream os;
  os << v.k << " " << v.twist_sum << " " << v.shift_res;
  return os.str();
}

inline std::string stable_names(const StableSet& s) {
  std::string out = "s1 s2";
  if (s.ext) out += " ext";
  return out;
}

inline json to_json(const ChamberReport& r) {
  json walls = json::array();
  for (auto l : r.wall_flags) walls.push_back(tilt_name(l));
  json stable = json::array({"s1", "s2"});
  if (r.stable.ext) stable.push_back("ext");
  return {{"heart", to_json(r.heart.element())}, {"width", r.width}, {"stable", stable},
          {"semistable_wall", r.stable.on_wall}, {"wall_flags", walls}, {"steps", r.steps}};
}

inline json to_json(const ExchangeGraphBall& b) {
  json vs = json::array(), es = json::array();
  for (std::size_t i = 0; i < b.size(); ++i)
    vs.push_back({{"id", i}, {"distance", b.distance[i]}, {"key", to_json(b.vertices[i])}});
  for (const auto& e : b.edges) es.push_back({{"from", e.from}, {"to", e.to}, {"label", tilt_name(e.label)}});
  return {{"radius", b.radius}, {"vertices", vs}, {"edges", es}};
}

/// One undirected DOT edge per unordered pair; parallel tilts are merged into
/// one label.
inline std::string to_dot(const ExchangeGraphBall& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::string> pairs;
  for (const auto& e : b.edges) {
    if (e.from == e.to) continue;
    const auto key = std::minmax(e.from, e.to);
    auto& label = pairs[{key.first, key.second}];
    const std::string name = tilt_name(e.label);
    if (label.find(name) == std::string::npos) label += (label.empty() ? "" : ",") + name;
  }
  std::ostringstream os;
  os << "graph exchange {\n";
  for (std::size_t i = 0; i < b.size(); ++i)
    os << "  v" << i << " [label=\"" << format_triple(b.vertices[i]) << "\"];\n";
  for (const auto& [k, label] : pairs) os << "  v" << k.first << " -- v" << k.second << " [label=\"" << label << "\"];\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG figures

class SvgCanvas {
 public:
  SvgCanvas(double xmin, double xmax, double ymin, double ymax, int px = 600)
      : x0_(xmin), x1_(xmax), y0_(ymin), y1_(ymax), w_(px), h_(int(px * (ymax - ymin) / (xmax - xmin))) {}

  void polyline(const std::vector<cplx>& pts, const std::string& color, double width = 1.0) {
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\" points=\"";
    for (cplx p : pts) {
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) continue;
      body_ << sx(p.real()) << "," << sy(p.imag()) << " ";
    }
    body_ << "\"/>\n";
  }
  void dot(cplx p, const std::string& color, double r = 3.0) {
    body_ << "<circle cx=\"" << sx(p.real()) << "\" cy=\"" << sy(p.imag()) << "\" r=\"" << r
          << "\" fill=\"" << color << "\"/>\n";
  }
  void text(cplx p, const std::string& s) {
    body_ << "<text x=\"" << sx(p.real()) + 4 << "\" y=\"" << sy(p.imag()) - 4
          << "\" font-size=\"12\" font-family=\"sans-serif\">" << s << "</text>\n";
  }
  std::string str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  double sx(double x) const { return (x - x0_) / (x1_ - x0_) * w_; }
  double sy(double y) const { return (y1_ - y) / (y1_ - y0_) * h_; }
  double x0_, x1_, y0_, y1_;
  int w_, h_;
  std::ostringstream body_;
};

/// Maps a point of P^1 = [zS : zT] to the disc picture: the ratio w = zS/zT is
/// sent to (w - i)/(w + i), so the upper half plane fills the unit disc and
/// the real line is the boundary circle.
inline cplx disc_coordinate(const ProjectiveCharge& z) {
  const auto& r = z.representative();
  const cplx num = r.zS - cplx{0, 1} * r.zT, den = r.zS + cplx{0, 1} * r.zT;
  if (std::abs(den) < 1e-12) return {std::numeric_limits<double>::infinity(), 0.0};
  return num / den;
}

}  // namespace staba2::cli

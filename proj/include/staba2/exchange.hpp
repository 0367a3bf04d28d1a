#pragma once

// Hearts of EG0(D) as an Aut0(D)-torsor: the heart g.A0 is stored as g. Simple
// tilts of A0 are the autoequivalences
//   R_S = Delta, R_T = Sigma, L_T = Delta^-1, L_S = Sigma^-1
// and tilts at other hearts are transported: R_{g.s}(g.A0) = g.R_s(A0).

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "braid.hpp"

namespace staba2 {

enum class Role { S, T };
enum class Side { Left, Right };
enum class Quotient { None, Shift, Sph };

/// Edge labels, in the order used for neighbor enumeration.
enum class TiltLabel { Delta, Sigma, DeltaInv, SigmaInv };

inline constexpr std::array<TiltLabel, 4> kTiltLabels{TiltLabel::Delta, TiltLabel::Sigma,
                                                       TiltLabel::DeltaInv, TiltLabel::SigmaInv};

inline const AutElement& tilt_element(TiltLabel l) {
  static const AutElement delta_inv = gens::Delta.inverse();
  static const AutElement sigma_inv = gens::Sigma.inverse();
  switch (l) {
    case TiltLabel::Delta: return gens::Delta;
    case TiltLabel::Sigma: return gens::Sigma;
    case TiltLabel::DeltaInv: return delta_inv;
    case TiltLabel::SigmaInv: return sigma_inv;
  }
  throw std::logic_error("tilt_element");
}

inline const char* label_name(TiltLabel l) {
  switch (l) {
    case TiltLabel::Delta: return "Delta";
    case TiltLabel::Sigma: return "Sigma";
    case TiltLabel::DeltaInv: return "Delta^-1";
    case TiltLabel::SigmaInv: return "Sigma^-1";
  }
  return "?";
}

/// Which simple tilt a label realizes at the standard heart.
inline const char* tilt_name(TiltLabel l) {
  switch (l) {
    case TiltLabel::Delta: return "R_S";
    case TiltLabel::Sigma: return "R_T";
    case TiltLabel::DeltaInv: return "L_T";
    case TiltLabel::SigmaInv: return "L_S";
  }
  return "?";
}

inline TiltLabel tilt_label(Role role, Side side) {
  if (side == Side::Right) return role == Role::S ? TiltLabel::Delta : TiltLabel::Sigma;
  return role == Role::T ? TiltLabel::DeltaInv : TiltLabel::SigmaInv;
}

/// A simple object of a heart, recorded by its K-class and the parity of the
/// shift separating it from the half-plane {t > 0} u {t = 0, s > 0}.
struct SimpleObject {
  KClass cls;
  int shift_tag = 0;
  friend bool operator==(const SimpleObject&, const SimpleObject&) = default;
};

inline int shift_parity_tag(KClass c) { return (c.t > 0 || (c.t == 0 && c.s > 0)) ? 0 : 1; }

class Heart {
 public:
  Heart() : Heart(AutElement::identity()) {}
  explicit Heart(AutElement g) : g_(std::move(g)) {
    const auto& k = g_.k_matrix();
    const KClass t = k * classes::T;
    const KClass s = k * classes::S;
    t_role_ = {t, shift_parity_tag(t)};
    s_role_ = {s, shift_parity_tag(s)};
  }

  const AutElement& element() const { return g_; }
  const SimpleObject& t_role() const { return t_role_; }
  const SimpleObject& s_role() const { return s_role_; }
  const SimpleObject& simple(Role r) const { return r == Role::S ? s_role_ : t_role_; }
  /// Class of the nontrivial extension of the S-role simple by the T-role simple.
  KClass extension_class() const { return t_role_.cls + s_role_.cls; }

  friend bool operator==(const Heart& a, const Heart& b) { return a.g_ == b.g_; }

 private:
  AutElement g_;
  SimpleObject t_role_;
  SimpleObject s_role_;
};

inline Heart standard_heart() { return Heart{}; }

inline Heart apply(const AutElement& g, const Heart& h) { return Heart(g * h.element()); }

inline Heart simple_tilt(const Heart& h, TiltLabel l) {
  return Heart(h.element() * tilt_element(l));
}

inline Heart simple_tilt(const Heart& h, Role role, Side side) {
  return simple_tilt(h, tilt_label(role, side));
}

// ---------------------------------------------------------------------------
// Balls in the exchange graph and its quotients.

/// Canonical triple of a vertex, projected according to the quotient:
/// none keeps (K, twist sum, shift residue); shift keeps the PSL(2,Z) class;
/// sph keeps the residue mod 5.
struct VertexKey {
  IntMatrix k{};
  std::int64_t twist_sum = 0;
  std::int64_t shift_res = 0;
  friend bool operator==(const VertexKey&, const VertexKey&) = default;
  friend auto operator<=>(const VertexKey&, const VertexKey&) = default;
};

inline VertexKey project(const AutElement& g, Quotient q) {
  switch (q) {
    case Quotient::None: return {g.k_matrix(), g.twist_sum(), g.shift_res()};
    case Quotient::Shift: return {psl2_image(g), 0, 0};
    case Quotient::Sph: return {IntMatrix::identity(), 0, ell_mod5(g)};
  }
  throw std::logic_error("project");
}

struct BallEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  TiltLabel label = TiltLabel::Delta;
};

struct ExchangeGraphBall {
  int radius = 0;
  Quotient quotient = Quotient::None;
  std::vector<VertexKey> vertices;         // BFS order; vertex 0 is the standard heart
  std::vector<AutElement> representatives;  // a group element reaching each vertex
  std::vector<int> distance;
  std::vector<BallEdge> edges;
  std::map<VertexKey, std::size_t> index;

  std::size_t size() const { return vertices.size(); }

  std::optional<std::size_t> find(const AutElement& g) const {
    auto it = index.find(project(g, quotient));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  /// Number of distinct neighbors of v (self-loops excluded).
  std::size_t neighbor_count(std::size_t v) const {
    std::vector<std::size_t> seen;
    for (const auto& e : edges) {
      if (e.from != v || e.to == v) continue;
      if (std::find(seen.begin(), seen.end(), e.to) == seen.end()) seen.push_back(e.to);
    }
    return seen.size();
  }

  std::size_t out_degree(std::size_t v) const {
    std::size_t n = 0;
    for (const auto& e : edges) n += (e.from == v);
    return n;
  }
};

inline constexpr int kMaxBallRadius = 12;

inline ExchangeGraphBall generate_ball(int radius, Quotient quotient) {
  if (radius < 0 || radius > kMaxBallRadius)
    throw std::out_of_range("generate_ball: radius must lie in [0, " +
                            std::to_string(kMaxBallRadius) + "]");
  ExchangeGraphBall ball;
  ball.radius = radius;
  ball.quotient = quotient;
  auto add = [&](const AutElement& g, int d) {
    const auto key = project(g, quotient);
    auto [it, inserted] = ball.index.emplace(key, ball.vertices.size());
    if (inserted) {
      ball.vertices.push_back(key);
      ball.representatives.push_back(g);
      ball.distance.push_back(d);
    }
    return std::pair{it->second, inserted};
  };
  std::deque<std::size_t> queue{add(AutElement::identity(), 0).first};
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    if (ball.distance[v] == radius) continue;
    for (auto l : kTiltLabels) {
      const auto [w, inserted] = add(ball.representatives[v] * tilt_element(l), ball.distance[v] + 1);
      if (inserted) queue.push_back(w);
    }
  }
  // Edges between any two ball vertices, including those on the boundary.
  for (std::size_t v = 0; v < ball.size(); ++v) {
    for (auto l : kTiltLabels) {
      if (auto w = ball.find(ball.representatives[v] * tilt_element(l))) {
        ball.edges.push_back({v, *w, l});
      }
    }
  }
  return ball;
}

// ---------------------------------------------------------------------------
// Word problem in <Sigma, Delta | Sigma^3 = Delta^2> via the amalgam
// structure: the quotient by the central element Sigma^3 is Z/3 * Z/2, and
// the abelianization (Sigma -> 2, Delta -> 3) detects the central part.
// Independent of the matrix representation.

class AmalgamWord {
 public:
  void push(TiltLabel l) {
    const bool is_sigma = (l == TiltLabel::Sigma || l == TiltLabel::SigmaInv);
    const int sign = (l == TiltLabel::Sigma || l == TiltLabel::Delta) ? 1 : -1;
    abel_ += sign * (is_sigma ? 2 : 3);
    const int order = is_sigma ? 3 : 2;
    int e = ((sign % order) + order) % order;
    if (!stack_.empty() && stack_.back().first == is_sigma) {
      e = (stack_.back().second + e) % order;
      stack_.pop_back();
    }
    if (e != 0) stack_.emplace_back(is_sigma, e);
  }
  bool trivial() const { return stack_.empty() && abel_ == 0; }

 private:
  std::vector<std::pair<bool, int>> stack_;
  std::int64_t abel_ = 0;
};

inline bool amalgam_trivial(const std::vector<TiltLabel>& word) {
  AmalgamWord w;
  for (auto l : word) w.push(l);
  return w.trivial();
}

struct RelationReport {
  bool sigma3_equals_delta2 = false;
  bool sigma6_delta_minus4_closes = false;
  bool sigma_delta_closes = false;
  std::size_t walks_checked = 0;
  std::size_t closed_walks = 0;
  std::size_t mismatches = 0;  // closed in the ball but not a relator consequence, or vice versa
  bool ok() const {
    return sigma3_equals_delta2 && sigma6_delta_minus4_closes && !sigma_delta_closes &&
           mismatches == 0;
  }
};

/// Checks the relation Sigma^3 = Delta^2 on a ball generated with Quotient::None:
/// every walk of length <= max_len staying in the ball closes iff it is trivial
/// in the amalgamated presentation.
inline RelationReport verify_relation_ball(const ExchangeGraphBall& ball, int max_len = 10) {
  if (ball.quotient != Quotient::None)
    throw std::invalid_argument("verify_relation_ball: requires an unquotiented ball");
  RelationReport rep;
  auto word_element = [](const std::vector<TiltLabel>& w) {
    AutElement g;
    for (auto l : w) g = g * tilt_element(l);
    return g;
  };
  using L = TiltLabel;
  rep.sigma3_equals_delta2 = word_element({L::Sigma, L::Sigma, L::Sigma}) ==
                             word_element({L::Delta, L::Delta});
  std::vector<L> w6;
  for (int i = 0; i < 6; ++i) w6.push_back(L::Sigma);
  for (int i = 0; i < 4; ++i) w6.push_back(L::DeltaInv);
  rep.sigma6_delta_minus4_closes = word_element(w6) == AutElement::identity();
  rep.sigma_delta_closes = word_element({L::Sigma, L::Delta}) == AutElement::identity();

  // Adjacency by label for fast walking.
  std::vector<std::array<std::ptrdiff_t, 4>> adj(ball.size());
  for (auto& a : adj) a.fill(-1);
  for (const auto& e : ball.edges) adj[e.from][static_cast<int>(e.label)] = static_cast<std::ptrdiff_t>(e.to);

  struct Frame {
    std::size_t vertex;
    AmalgamWord word;
    int depth;
  };
  std::vector<Frame> stack{{0, AmalgamWord{}, 0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.depth > 0) {
      ++rep.walks_checked;
      const bool closed = (f.vertex == 0);
      rep.closed_walks += closed;
      if (closed != f.word.trivial()) ++rep.mismatches;
    }
    if (f.depth == max_len) continue;
    for (auto l : kTiltLabels) {
      const auto to = adj[f.vertex][static_cast<int>(l)];
      if (to < 0) continue;
      Frame next{static_cast<std::size_t>(to), f.word, f.depth + 1};
      next.word.push(l);
      stack.push_back(std::move(next));
    }
  }
  return rep;
}

}  // namespace staba2

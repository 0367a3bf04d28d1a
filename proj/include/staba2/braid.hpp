#pragma once

// Exact word problem for Aut0(D) = <Phi_S, Phi_T, [1]>, isomorphic to Br3 via
// (sigma1, sigma2) -> (Phi_S[1], Phi_T[1]).
//
// Canonical form: an element w(Phi_S, Phi_T)[n] is recorded as
//   (action on K(D), exponent sum of the twist letters, n mod 5)
// after trading [5] for (Phi_S Phi_T)^-3. The pair (SL2 image, exponent sum)
// is faithful on Br3 because the kernel of Br3 -> SL(2,Z) is generated by
// (sigma1 sigma2)^6, whose exponent sum is 12.

#include <cctype>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lattice.hpp"

namespace staba2 {

enum class Gen { PhiS, PhiT, Shift };

struct GenLetter {
  Gen symbol = Gen::PhiS;
  std::int64_t exponent = 1;

  GenLetter() = default;
  GenLetter(Gen g, std::int64_t e) : symbol(g), exponent(e) {
    if (e == 0) throw std::invalid_argument("GenLetter: exponent must be nonzero");
  }
  friend bool operator==(const GenLetter&, const GenLetter&) = default;
};

using Word = std::vector<GenLetter>;

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - b * floor_div(a, b); }

class AutElement {
 public:
  AutElement() = default;

  /// Canonicalizes w[n] given the twist part's SL2 image and exponent sum.
  static AutElement from_parts(const IntMatrix& twist_image, std::int64_t twist_sum,
                               std::int64_t total_shift) {
    const std::int64_t res = floor_mod(total_shift, 5);
    const std::int64_t k = floor_div(total_shift, 5);
    AutElement out;
    out.k_ = twist_image * shift_matrix(total_shift).matrix();
    out.twist_sum_ = twist_sum - 6 * k;
    out.shift_res_ = res;
    return out;
  }

  static AutElement identity() { return {}; }

  const IntMatrix& k_matrix() const { return k_; }
  std::int64_t twist_sum() const { return twist_sum_; }
  std::int64_t shift_res() const { return shift_res_; }

  LatticeAut k_action() const { return LatticeAut(k_); }

  AutElement inverse() const {
    // (w[r])^-1 = w^-1 [-r]; w^-1 has SL2 image (K (-1)^r)^-1.
    const IntMatrix twist = k_ * shift_matrix(shift_res_).matrix();
    return from_parts(twist.inverse(), -twist_sum_, -shift_res_);
  }

  friend bool operator==(const AutElement&, const AutElement&) = default;
  friend auto operator<=>(const AutElement&, const AutElement&) = default;

  friend std::ostream& operator<<(std::ostream& os, const AutElement& g) {
    return os << '(' << g.k_ << ", " << g.twist_sum_ << ", " << g.shift_res_ << ')';
  }

 private:
  IntMatrix k_{};
  std::int64_t twist_sum_ = 0;
  std::int64_t shift_res_ = 0;
};

inline AutElement compose(const AutElement& a, const AutElement& b) {
  // Shifts are central, so a*b = (w_a w_b)[r_a + r_b].
  const IntMatrix ta = a.k_matrix() * shift_matrix(a.shift_res()).matrix();
  const IntMatrix tb = b.k_matrix() * shift_matrix(b.shift_res()).matrix();
  return AutElement::from_parts(ta * tb, a.twist_sum() + b.twist_sum(),
                                a.shift_res() + b.shift_res());
}

inline AutElement operator*(const AutElement& a, const AutElement& b) { return compose(a, b); }

inline AutElement power(const AutElement& g, std::int64_t n) {
  AutElement base = n < 0 ? g.inverse() : g;
  AutElement out;
  for (auto k = n < 0 ? -n : n; k > 0; k >>= 1) {
    if (k & 1) out = out * base;
    base = base * base;
  }
  return out;
}

inline AutElement reduce(const Word& word) {
  static const IntMatrix ms = twist_matrix(classes::S).matrix();
  static const IntMatrix mt = twist_matrix(classes::T).matrix();
  IntMatrix twist = IntMatrix::identity();
  std::int64_t sum = 0;
  std::int64_t shift = 0;
  for (const auto& l : word) {
    switch (l.symbol) {
      case Gen::PhiS: twist = twist * ms.pow(l.exponent); sum += l.exponent; break;
      case Gen::PhiT: twist = twist * mt.pow(l.exponent); sum += l.exponent; break;
      case Gen::Shift: shift += l.exponent; break;
    }
  }
  return AutElement::from_parts(twist, sum, shift);
}

inline AutElement reduce(const GenLetter& l) { return reduce(Word{l}); }

/// Image in PSL(2,Z): the K-matrix with sign normalized so that its first
/// nonzero entry is positive.
inline IntMatrix psl2_normalize(const IntMatrix& m) {
  for (auto v : m.a) {
    if (v != 0) return v > 0 ? m : -m;
  }
  return m;
}

inline IntMatrix psl2_image(const AutElement& g) { return psl2_normalize(g.k_matrix()); }

/// Modulo-5 word length in the generators Phi_S[1], Phi_T[1].
inline std::int64_t ell_mod5(const AutElement& g) { return g.shift_res(); }

inline bool is_sph(const AutElement& g) { return ell_mod5(g) == 0; }

namespace gens {
inline const AutElement PhiS = reduce(GenLetter{Gen::PhiS, 1});
inline const AutElement PhiT = reduce(GenLetter{Gen::PhiT, 1});
inline const AutElement Shift = reduce(GenLetter{Gen::Shift, 1});
/// Sigma = (Phi_S Phi_T)[2]; right tilt at the T-role simple.
inline const AutElement Sigma = reduce(Word{{Gen::PhiS, 1}, {Gen::PhiT, 1}, {Gen::Shift, 2}});
/// Delta = (Phi_T Phi_S Phi_T)[3]; right tilt at the S-role simple.
inline const AutElement Delta =
    reduce(Word{{Gen::PhiT, 1}, {Gen::PhiS, 1}, {Gen::PhiT, 1}, {Gen::Shift, 3}});
}  // namespace gens

// ---------------------------------------------------------------------------
// Text syntax: tokens `S`, `T`, `[n]`, `Sigma`, `Delta`, each with optional
// `^k`, separated by whitespace. `Sigma`/`Delta` expand to their definitions.

inline Word parse_word(std::string_view text) {
  Word out;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("parse_word: " + why + " at offset " + std::to_string(i));
  };
  auto read_int = [&]() -> std::int64_t {
    std::size_t j = i;
    if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
    const std::size_t digits = j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == digits) fail("expected integer");
    const auto v = std::stoll(std::string(text.substr(i, j - i)));
    i = j;
    return v;
  };
  auto append = [&](Word w, std::int64_t k) {
    if (k == 0) return;
    if (k < 0) {
      Word inv;
      for (auto it = w.rbegin(); it != w.rend(); ++it) inv.emplace_back(it->symbol, -it->exponent);
      w = std::move(inv);
      k = -k;
    }
    for (std::int64_t r = 0; r < k; ++r) out.insert(out.end(), w.begin(), w.end());
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') { ++i; continue; }
    Word base;
    if (text.substr(i, 5) == "Sigma") {
      base = {{Gen::PhiS, 1}, {Gen::PhiT, 1}, {Gen::Shift, 2}};
      i += 5;
    } else if (text.substr(i, 5) == "Delta") {
      base = {{Gen::PhiT, 1}, {Gen::PhiS, 1}, {Gen::PhiT, 1}, {Gen::Shift, 3}};
      i += 5;
    } else if (c == 'S' || c == 'T') {
      base = {{c == 'S' ? Gen::PhiS : Gen::PhiT, 1}};
      ++i;
    } else if (c == '[') {
      ++i;
      const auto n = read_int();
      if (i >= text.size() || text[i] != ']') fail("expected ']'");
      ++i;
      if (n == 0) base = {};
      else base = {{Gen::Shift, n}};
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
    std::int64_t k = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      k = read_int();
    }
    append(std::move(base), k);
  }
  return out;
}

inline std::string format_word(const Word& w) {
  std::ostringstream os;
  bool first = true;
  for (const auto& l : w) {
    if (!first) os << ' ';
    first = false;
    if (l.symbol == Gen::Shift) {
      os << '[' << l.exponent << ']';
    } else {
      os << (l.symbol == Gen::PhiS ? 'S' : 'T');
      if (l.exponent != 1) os << '^' << l.exponent;
    }
  }
  return os.str();
}

}  // namespace staba2

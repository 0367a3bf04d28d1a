#pragma once

// Rank-2 lattice K(D) = Z[S] + Z[T] of the A2 CY3 category, its Euler form and
// the integer matrices of spherical twists and shifts.

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace staba2 {

/// A class in K(D), written in the basis {[S], [T]}.
struct KClass {
  std::int64_t s = 0;
  std::int64_t t = 0;

  friend constexpr bool operator==(KClass, KClass) = default;
  friend constexpr auto operator<=>(KClass, KClass) = default;

  constexpr KClass operator+(KClass o) const { return {s + o.s, t + o.t}; }
  constexpr KClass operator-(KClass o) const { return {s - o.s, t - o.t}; }
  constexpr KClass operator-() const { return {-s, -t}; }
  constexpr KClass operator*(std::int64_t k) const { return {k * s, k * t}; }

  friend std::ostream& operator<<(std::ostream& os, KClass c) {
    return os << '(' << c.s << ',' << c.t << ')';
  }
};

namespace classes {
inline constexpr KClass S{1, 0};
inline constexpr KClass T{0, 1};
inline constexpr KClass E{1, 1};   // extension 0 -> T -> E -> S -> 0
inline constexpr KClass X{-1, 1};  // extension of T by S[1]
}  // namespace classes

/// 2x2 integer matrix acting on column vectors (s, t).
struct IntMatrix {
  std::array<std::int64_t, 4> a{1, 0, 0, 1};  // row-major: a00 a01 a10 a11

  constexpr std::int64_t operator()(int r, int c) const { return a[2 * r + c]; }
  constexpr std::int64_t det() const { return a[0] * a[3] - a[1] * a[2]; }
  constexpr std::int64_t trace() const { return a[0] + a[3]; }

  static constexpr IntMatrix identity() { return {}; }
  static constexpr IntMatrix scalar(std::int64_t k) { return {{k, 0, 0, k}}; }

  constexpr IntMatrix operator*(const IntMatrix& o) const {
    return {{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
             a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]}};
  }
  constexpr KClass operator*(KClass c) const {
    return {a[0] * c.s + a[1] * c.t, a[2] * c.s + a[3] * c.t};
  }
  constexpr IntMatrix operator-() const { return {{-a[0], -a[1], -a[2], -a[3]}}; }
  constexpr IntMatrix transpose() const { return {{a[0], a[2], a[1], a[3]}}; }

  /// Inverse of a unimodular matrix (det = +-1).
  constexpr IntMatrix inverse() const {
    const auto d = det();
    if (d != 1 && d != -1) throw std::domain_error("IntMatrix::inverse: not unimodular");
    return {{d * a[3], -d * a[1], -d * a[2], d * a[0]}};
  }

  constexpr IntMatrix pow(std::int64_t n) const {
    IntMatrix base = n < 0 ? inverse() : *this;
    IntMatrix out = identity();
    for (auto k = n < 0 ? -n : n; k > 0; k >>= 1) {
      if (k & 1) out = out * base;
      base = base * base;
    }
    return out;
  }

  friend constexpr bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend constexpr auto operator<=>(const IntMatrix&, const IntMatrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    return os << "[[" << m.a[0] << ',' << m.a[1] << "],[" << m.a[2] << ',' << m.a[3] << "]]";
  }
};

/// Determinant-one automorphism of K(D).
class LatticeAut {
 public:
  constexpr LatticeAut() = default;
  constexpr explicit LatticeAut(const IntMatrix& m) : m_(m) {
    if (m.det() != 1) throw std::invalid_argument("LatticeAut: determinant must be 1");
  }

  constexpr const IntMatrix& matrix() const { return m_; }
  constexpr LatticeAut operator*(const LatticeAut& o) const { return LatticeAut(m_ * o.m_); }
  constexpr KClass operator*(KClass c) const { return m_ * c; }
  constexpr LatticeAut inverse() const { return LatticeAut(m_.inverse()); }

  friend constexpr bool operator==(const LatticeAut&, const LatticeAut&) = default;
  friend std::ostream& operator<<(std::ostream& os, const LatticeAut& m) { return os << m.m_; }

 private:
  IntMatrix m_{};
};

/// Euler form chi(a, b); antisymmetric with chi([S],[T]) = -1.
constexpr std::int64_t euler_pairing(KClass a, KClass b) { return a.t * b.s - a.s * b.t; }

/// Action of the spherical twist Phi_x on K(D): y -> y - chi(x, y) x.
constexpr LatticeAut twist_matrix(KClass x) {
  const KClass c0 = classes::S - x * euler_pairing(x, classes::S);
  const KClass c1 = classes::T - x * euler_pairing(x, classes::T);
  return LatticeAut(IntMatrix{{c0.s, c1.s, c0.t, c1.t}});
}

/// Shift [n] acts on K(D) as (-1)^n.
constexpr LatticeAut shift_matrix(std::int64_t n) {
  return LatticeAut(IntMatrix::scalar((n % 2 == 0) ? 1 : -1));
}

}  // namespace staba2

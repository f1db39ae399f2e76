#pragma once

// Arithmetic in a real quadratic field Q(sqrt d), d = 2, 3 mod 4 squarefree,
// whose ring of integers Z[sqrt d] has class number one.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hasse/arith.hpp"

namespace hasse {

/// u + v*sqrt(d).
struct QuadElem {
  Rat u{0};
  Rat v{0};
  Int d{2};

  QuadElem() = default;
  QuadElem(Rat u_, Rat v_, Int d_) : u(std::move(u_)), v(std::move(v_)), d(std::move(d_)) {}
  static QuadElem one(const Int& d) { return QuadElem(Rat(1), Rat(0), d); }

  bool is_zero() const { return u == 0 && v == 0; }
  bool is_integral() const { return u.get_den() == 1 && v.get_den() == 1; }
  friend bool operator==(const QuadElem&, const QuadElem&) = default;
};

QuadElem operator+(const QuadElem& a, const QuadElem& b);
QuadElem operator-(const QuadElem& a, const QuadElem& b);
QuadElem operator*(const QuadElem& a, const QuadElem& b);
QuadElem operator*(const Rat& c, const QuadElem& a);
QuadElem operator/(const QuadElem& a, const QuadElem& b);
QuadElem pow(const QuadElem& a, long e);
QuadElem conj(const QuadElem& a);
Rat norm(const QuadElem& a);
Rat trace(const QuadElem& a);
std::string to_string(const QuadElem& a);

enum class SplitKind { split, inert, ramified };
std::string to_string(SplitKind k);

struct PrimeSplitting {
  Int p;
  SplitKind kind = SplitKind::inert;
  std::optional<QuadElem> generator;
  std::optional<QuadElem> conjugate_generator;
};

/// Known class-number-one fields in the supported range (d < 100).
bool has_class_number_one(const Int& d);

/// Throws ArithmeticError for d not squarefree, d <= 1, or d = 1 mod 4.
void require_supported_field(const Int& d);

PrimeSplitting split_type(const Int& p, const Int& d);

/// (k, l) with k^2 - d l^2 = +-p; smallest l >= 1 first, then smallest k >= 0.
/// Throws ArithmeticError when p is inert.
std::pair<Int, Int> split_prime(const Int& p, const Int& d);

/// Fundamental unit of Z[sqrt d] from the continued fraction of sqrt d.
QuadElem fundamental_unit(const Int& d);

/// b with b^3 = a, if any.
std::optional<QuadElem> cube_root(const QuadElem& a);
bool is_cube(const QuadElem& a);
bool same_cube_class(const QuadElem& a, const QuadElem& b);

/// Integral and divisible by no cube of a prime ideal.
bool is_cubefree(const QuadElem& a, std::span<const Int> hints = {});

/// Canonical integral cubefree representative of the class of a modulo
/// cubes: prime cubes are stripped, then the unit part is balanced against
/// the cube of the fundamental unit and the sign fixed (-1 is a cube).
QuadElem cubefree_reduce(const QuadElem& a, std::span<const Int> hints = {});

/// Classes of L^x/(L^x)^3 supported on S with norm a cube in Q.
struct CubeClassGroup {
  Int d;
  std::vector<QuadElem> generators;
  Int order{1};

  /// Every element prod g_i^{e_i}, e_i in {0,1,2}, reduced; index 0 is 1.
  /// Exponent vectors are enumerated with the first generator varying fastest.
  std::vector<QuadElem> elements(std::span<const Int> hints = {}) const;
};

class UnsupportedConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UnsupportedConfiguration when the class number is not one.
CubeClassGroup s_units_mod_cubes(std::span<const Int> S, const Int& d);

}  // namespace hasse

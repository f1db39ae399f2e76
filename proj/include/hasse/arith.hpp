#pragma once

// Exact integer and rational kernel: primality, residues, valuations and
// square/cube class bookkeeping over Q and Q_p.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hasse {

using Int = mpz_class;
using Rat = mpq_class;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an input cannot be factored by trial division + rho within
/// the configured effort. Only structured inputs are expected here.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded search ran out of budget before deciding. `stage` names the
/// computation that gave up.
class Inconclusive : public std::runtime_error {
 public:
  Inconclusive(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

bool is_prime_u64(std::uint64_t n);

/// True iff |n| is prime. Deterministic below 2^64.
bool is_prime(const Int& n);

/// Legendre symbol (a|p). Throws ArithmeticError unless p is an odd prime.
int legendre(const Int& a, const Int& p);

/// Square root modulo an odd prime, in [0, p). Empty when a is a non-residue.
std::optional<Int> sqrt_mod(const Int& a, const Int& p);
std::optional<std::uint64_t> sqrt_mod_u64(std::uint64_t a, std::uint64_t p);

/// Exact p-adic valuation; throws ArithmeticError on zero.
int valuation(const Int& x, const Int& p);
int valuation(const Rat& x, const Int& p);

/// Smallest quadratic non-residue modulo an odd prime.
Int least_nonresidue(const Int& p);

using Factorization = std::vector<std::pair<Int, int>>;

/// Factorization of |n| into ascending primes. `hints` are candidate prime
/// divisors tried first. Throws FactorizationError if a cofactor resists.
Factorization factor(const Int& n, std::span<const Int> hints = {});

std::vector<Int> prime_divisors(const Int& n, std::span<const Int> hints = {});

/// Element of Q^x / (Q^x)^2, stored as its signed squarefree representative.
struct SquareClass {
  Int rep{1};

  friend bool operator==(const SquareClass& a, const SquareClass& b) { return a.rep == b.rep; }
  friend std::strong_ordering operator<=>(const SquareClass& a, const SquareClass& b) {
    int c = cmp(a.rep, b.rep);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend SquareClass operator*(const SquareClass& a, const SquareClass& b);
};

/// n = s * m^2 with s squarefree carrying the sign of n. Throws on n = 0.
SquareClass squarefree_part(const Int& n, std::span<const Int> hints = {});
SquareClass square_class(const Rat& x, std::span<const Int> hints = {});

/// n = c * m^3 with c cubefree (sign of n). Throws on n = 0.
Int cubefree_part(const Int& n, std::span<const Int> hints = {});

/// Class in Q_p^x/(Q_p^x)^2 (p = 0 denotes the real place). Representatives:
/// odd p -> {1, u, p, up} with u the least non-residue; p = 2 -> {±1, ±2,
/// ±5, ±10}; real -> {1, -1}.
struct LocalSquareClass {
  Int place;
  Int rep;
  friend bool operator==(const LocalSquareClass&, const LocalSquareClass&) = default;
};

LocalSquareClass local_square_class(const Rat& x, const Int& p);

/// x is a nonzero square in Q_p (p = 0: in R).
bool is_local_square(const Rat& x, const Int& p);

std::optional<Int> exact_sqrt(const Int& n);
std::optional<Int> exact_cbrt(const Int& n);
std::optional<Rat> exact_sqrt(const Rat& x);
std::optional<Rat> exact_cbrt(const Rat& x);

Int floor_div(const Int& a, const Int& b);
/// Residue in [0, m).
Int mod(const Int& a, const Int& m);
/// a^{-1} mod m; throws when not invertible.
Int inv_mod(const Int& a, const Int& m);
Int pow(const Int& base, unsigned long e);
Rat pow(const Rat& base, long e);

std::string to_string(const Int& x);
std::string to_string(const Rat& x);
Rat parse_rational(const std::string& s);

}  // namespace hasse

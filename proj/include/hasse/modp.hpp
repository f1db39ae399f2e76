#pragma once

// Prime-field scalar carrying its modulus. Lets the group law in curves.hpp
// run unchanged over F_p and over Q.

#include <cstdint>
#include <stdexcept>

#include "hasse/arith.hpp"

namespace hasse {

class ModP {
 public:
  using u64 = std::uint64_t;

  ModP() = default;
  ModP(u64 value, u64 p) : v_(value % p), p_(p) {}
  ModP(const Int& value, u64 p) : v_(mod(value, Int(static_cast<unsigned long>(p))).get_ui()), p_(p) {}
  /// Reduction of a rational with denominator prime to p.
  ModP(const Rat& value, u64 p) : ModP(Int(value.get_num()), p) {
    ModP d(Int(value.get_den()), p);
    *this = *this / d;
  }

  u64 value() const { return v_; }
  u64 modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  /// Same-field constant.
  ModP lift(long c) const {
    long long r = c % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    return ModP(static_cast<u64>(r), p_);
  }

  friend ModP operator+(ModP a, ModP b) { return ModP((a.v_ + b.v_) % a.p_, a.p_, Raw{}); }
  friend ModP operator-(ModP a, ModP b) { return ModP((a.v_ + a.p_ - b.v_) % a.p_, a.p_, Raw{}); }
  friend ModP operator-(ModP a) { return ModP((a.p_ - a.v_) % a.p_, a.p_, Raw{}); }
  friend ModP operator*(ModP a, ModP b) {
    return ModP(static_cast<u64>(static_cast<unsigned __int128>(a.v_) * b.v_ % a.p_), a.p_, Raw{});
  }
  friend ModP operator/(ModP a, ModP b) { return a * b.inverse(); }
  ModP& operator+=(ModP b) { return *this = *this + b; }
  ModP& operator-=(ModP b) { return *this = *this - b; }
  ModP& operator*=(ModP b) { return *this = *this * b; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }

  ModP pow(u64 e) const {
    ModP r(1, p_), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  ModP inverse() const {
    if (v_ == 0) throw ArithmeticError("ModP: division by zero");
    return pow(p_ - 2);
  }

 private:
  struct Raw {};
  ModP(u64 v, u64 p, Raw) : v_(v), p_(p) {}
  u64 v_ = 0;
  u64 p_ = 2;
};

}  // namespace hasse

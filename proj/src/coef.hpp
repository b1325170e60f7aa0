#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "errors.hpp"

namespace qconic {

// Element of the prime base: F_p for an odd prime p, or Q when p == 0.
class Coef {
public:
  Coef() = default;
  Coef(unsigned long p, long v) : p_(p) {
    if (p_) {
      long long m = v % (long long)p_;
      r_ = m < 0 ? m + p_ : m;
    } else {
      q_ = v;
    }
  }
  Coef(unsigned long p, mpq_class v) : p_(p) {
    if (p_) {
      v.canonicalize();
      mpz_class den = v.get_den(), num = v.get_num();
      mpz_class pm = (unsigned long)p_;
      mpz_class dm = den % pm;
      if (dm == 0) fail(errc::division_by_zero, "denominator divisible by p");
      mpz_class nm = num % pm;
      if (nm < 0) nm += pm;
      mpz_class dmn = dm % pm;
      if (dmn < 0) dmn += pm;
      r_ = mulmod(nm.get_ui(), invmod(dmn.get_ui()));
    } else {
      q_ = std::move(v);
      q_.canonicalize();
    }
  }

  unsigned long prime() const { return p_; }
  bool is_zero() const { return p_ ? r_ == 0 : q_ == 0; }
  bool is_one() const { return p_ ? r_ == 1 : q_ == 1; }

  Coef operator-() const {
    Coef c(*this);
    if (p_)
      c.r_ = r_ ? p_ - r_ : 0;
    else
      c.q_ = -q_;
    return c;
  }
  Coef operator+(const Coef& o) const {
    check(o);
    Coef c(*this);
    if (p_) {
      c.r_ = r_ + o.r_;
      if (c.r_ >= p_) c.r_ -= p_;
    } else
      c.q_ = q_ + o.q_;
    return c;
  }
  Coef operator-(const Coef& o) const { return *this + (-o); }
  Coef operator*(const Coef& o) const {
    check(o);
    Coef c(*this);
    if (p_)
      c.r_ = mulmod(r_, o.r_);
    else
      c.q_ = q_ * o.q_;
    return c;
  }
  Coef inv() const {
    if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
    Coef c(*this);
    if (p_)
      c.r_ = invmod(r_);
    else
      c.q_ = 1 / q_;
    return c;
  }
  Coef operator/(const Coef& o) const { return *this * o.inv(); }
  bool operator==(const Coef& o) const {
    return p_ == o.p_ && (p_ ? r_ == o.r_ : q_ == o.q_);
  }
  bool operator!=(const Coef& o) const { return !(*this == o); }
  // total order (for canonical term sorting only)
  int cmp(const Coef& o) const {
    if (p_) return r_ < o.r_ ? -1 : r_ > o.r_ ? 1 : 0;
    return ::cmp(q_, o.q_);
  }

  bool is_square() const;
  std::optional<Coef> sqrt() const;
  // canonical square-class representative: 1 / nonresidue over F_p,
  // signed squarefree integer-over-integer over Q
  Coef square_class() const;

  const mpq_class& rat() const { return q_; }
  uint64_t residue() const { return r_; }
  std::string str() const;

private:
  void check(const Coef& o) const {
    if (p_ != o.p_) fail(errc::place_mismatch, "mixed prime bases");
  }
  uint64_t mulmod(uint64_t a, uint64_t b) const {
    return (uint64_t)((unsigned __int128)a * b % p_);
  }
  uint64_t invmod(uint64_t a) const;

  unsigned long p_ = 0;
  uint64_t r_ = 0;
  mpq_class q_;
};

}  // namespace qconic

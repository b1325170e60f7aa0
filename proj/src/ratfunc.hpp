#pragma once
#include "poly.hpp"

namespace qconic {

// Reduced fraction of multivariate polynomials; denominator is monic w.r.t.
// the lex leading coefficient, so the representation is canonical and
// equality is structural.
class RatFunc {
public:
  RatFunc() = default;
  RatFunc(Poly n, Poly d);
  explicit RatFunc(Poly n) : num_(std::move(n)), den_(Poly::constant(num_.prime(), num_.nvars(), 1)) {}
  static RatFunc constant(unsigned long p, int nv, Coef c) {
    return RatFunc(Poly::constant(p, nv, std::move(c)));
  }
  static RatFunc variable(unsigned long p, int nv, int v) {
    return RatFunc(Poly::variable(p, nv, v));
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  unsigned long prime() const { return num_.prime(); }
  int nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Coef constant_value() const { return num_.constant_value() / den_.constant_value(); }

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc inv() const;
  RatFunc pow(long e) const;
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  // order of vanishing in variable v (negative for poles)
  long valuation(int v) const;
  RatFunc subst(int v, const RatFunc& value) const;
  RatFunc eval0(int v) const;
  RatFunc remap(const std::vector<int>& map, int new_nv) const;

  std::string str(const std::vector<std::string>& names) const;

private:
  Poly num_, den_;
};

}  // namespace qconic

#include "ratfunc.hpp"

namespace qconic {

RatFunc::RatFunc(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) fail(errc::division_by_zero, "zero denominator");
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.prime(), num_.nvars(), 1);
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = *num_.divexact(g);
    den_ = *den_.divexact(g);
  }
  Coef lc = den_.lead_coef();
  if (!lc.is_one()) {
    Coef li = lc.inv();
    num_ = num_ * li;
    den_ = den_ * li;
  }
}

RatFunc RatFunc::operator-() const {
  RatFunc r(*this);
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inv(); }

RatFunc RatFunc::inv() const {
  if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(long e) const {
  RatFunc r = RatFunc(Poly::constant(prime(), nvars(), 1));
  RatFunc b = e < 0 ? inv() : *this;
  long n = e < 0 ? -e : e;
  for (long i = 0; i < n; i++) r = r * b;
  return r;
}

long RatFunc::valuation(int v) const {
  if (is_zero()) fail(errc::zero_element, "valuation of zero");
  auto minexp = [v](const Poly& f) {
    long m = -1;
    for (const auto& t : f.terms())
      if (m < 0 || t.e[v] < m) m = t.e[v];
    return m;
  };
  return minexp(num_) - minexp(den_);
}

RatFunc RatFunc::subst(int v, const RatFunc& value) const {
  // clear value's denominator first: f(v) = sum c_d v^d => substitute with
  // common powers of value.den
  long dn = num_.degree(v), dd = den_.degree(v);
  long d = std::max(dn, dd);
  auto lift = [&](const Poly& f) {
    auto cs = f.coeffs_in(v);
    Poly acc(f.prime(), f.nvars());
    for (const auto& [k, c] : cs) {
      Poly term = c;
      for (long i = 0; i < k; i++) term = term * value.num();
      for (long i = k; i < d; i++) term = term * value.den();
      acc = acc + term;
    }
    return acc;  // equals f(value) * value.den^d
  };
  return RatFunc(lift(num_), lift(den_));
}

RatFunc RatFunc::eval0(int v) const {
  Poly n0 = num_.eval0(v), d0 = den_.eval0(v);
  if (d0.is_zero()) fail(errc::place_mismatch, "pole at the place");
  return RatFunc(n0, d0);
}

RatFunc RatFunc::remap(const std::vector<int>& map, int new_nv) const {
  return RatFunc(num_.remap(map, new_nv), den_.remap(map, new_nv));
}

std::string RatFunc::str(const std::vector<std::string>& names) const {
  if (den_.is_constant() && den_.constant_value().is_one()) return num_.str(names);
  std::string n = num_.str(names), d = den_.str(names);
  bool n_simple = num_.terms().size() <= 1;
  bool d_simple = den_.terms().size() <= 1;
  std::string r = n_simple ? n : "(" + n + ")";
  r += " / ";
  r += d_simple ? d : "(" + d + ")";
  return r;
}

}  // namespace qconic

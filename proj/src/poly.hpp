#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coef.hpp"

namespace qconic {

// Sparse multivariate polynomial over the prime base. Variables are column
// indices; the field tower layer maps names to columns. Terms are kept sorted
// in descending lex order (column 0 most significant), which makes the
// representation canonical.
class Poly {
public:
  struct Term {
    std::vector<int> e;
    Coef c;
  };

  Poly() = default;
  Poly(unsigned long p, int nvars) : p_(p), nv_(nvars) {}
  static Poly constant(unsigned long p, int nvars, Coef c);
  static Poly constant(unsigned long p, int nvars, long c) {
    return constant(p, nvars, Coef(p, c));
  }
  static Poly variable(unsigned long p, int nvars, int v, int exp = 1);

  unsigned long prime() const { return p_; }
  int nvars() const { return nv_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Coef constant_value() const;  // requires is_constant
  const std::vector<Term>& terms() const { return terms_; }

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Coef& c) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  long degree(int v) const;
  long total_degree() const;
  bool uses_var(int v) const { return degree(v) > 0; }
  const Coef& lead_coef() const;  // scalar coefficient of the lex-leading term
  Poly monic() const;             // divide by lead_coef

  Poly derivative(int v) const;
  // coefficients as polynomials in var v: index d -> coefficient of v^d
  std::map<long, Poly> coeffs_in(int v) const;
  static Poly assemble(unsigned long p, int nv, int v, const std::map<long, Poly>& cs);

  std::optional<Poly> divexact(const Poly& d) const;
  static Poly prem(const Poly& f, const Poly& g, int v);  // pseudo-remainder
  static Poly gcd(const Poly& a, const Poly& b);
  Poly content_in(int v) const;

  // f = c * s * r^2 with s squarefree, c a scalar; returns (s, r, c)
  struct SquareFree;
  SquareFree squarefree() const;

  // substitute column v := value (a polynomial over the same columns, v-free)
  Poly subst(int v, const Poly& value) const;
  Poly eval0(int v) const { return subst(v, Poly(p_, nv_)); }  // v := 0
  // remap columns: new exponent vector e'[map[i]] = e[i]; map[i] = -1 demands
  // the variable is absent
  Poly remap(const std::vector<int>& map, int new_nv) const;

  std::string str(const std::vector<std::string>& names) const;

private:
  void push(std::vector<int> e, Coef c);
  void sort_terms();

  unsigned long p_ = 0;
  int nv_ = 0;
  std::vector<Term> terms_;
};

struct Poly::SquareFree {
  Poly s, r;
  Coef c;
};

}  // namespace qconic

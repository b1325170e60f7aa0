#pragma once
#include "tower.hpp"

namespace qconic {

// Exact element of a field tower: c0 + c1*sqrt(w) where w is the radicand of
// the outermost quadratic extension (c1 = 0 elsewhere). Both coordinates are
// multivariate rational functions over the prime base.
class FieldElement {
public:
  FieldElement() = default;
  FieldElement(TowerPtr t, RatFunc c0);
  FieldElement(TowerPtr t, RatFunc c0, RatFunc c1);
  static FieldElement zero(const TowerPtr& t);
  static FieldElement one(const TowerPtr& t);
  static FieldElement integer(const TowerPtr& t, long n);
  static FieldElement var(const TowerPtr& t, const std::string& name);
  static FieldElement radical(const TowerPtr& t);  // sqrt(w) of the outer quadext

  const TowerPtr& tower() const { return tower_; }
  const RatFunc& c0() const { return c0_; }
  const RatFunc& c1() const { return c1_; }
  bool is_zero() const { return c0_.is_zero() && c1_.is_zero(); }
  bool is_one() const { return c0_.is_one() && c1_.is_zero(); }
  bool has_radical() const { return !c1_.is_zero(); }

  FieldElement operator-() const;
  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement inv() const;
  FieldElement pow(long e) const;
  FieldElement norm() const;  // c0^2 - w c1^2 (identity when no radical)
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  bool is_square() const;
  // exact square root within the tower's rational representation, when one
  // exists (over Laurent nodes a square may have no such root)
  std::optional<FieldElement> sqrt() const;

  // move into an extension tower matching variables by name
  FieldElement coerce(const TowerPtr& to) const;

  std::string str() const;

private:
  TowerPtr tower_;
  RatFunc c0_, c1_;
};

// Square class with canonical representative. Over Laurent nodes the square
// witness may involve a unit with residue 1 whose root is not a rational
// function; the flag records that the witness is exact only up to such a
// Hensel unit (original / (canonical * witness^2) is a unit with residue 1).
struct SquareClass {
  FieldElement canonical;
  FieldElement witness;
  bool hensel_unit = false;

  bool operator==(const SquareClass& o) const { return canonical == o.canonical; }
  bool operator!=(const SquareClass& o) const { return !(*this == o); }
};

SquareClass normalize_square_class(const FieldElement& e);
// canonical representative only (no witness); tolerant of stacked quadratic
// extensions
FieldElement canonical_square_class_rep(const FieldElement& e);

// checked quadratic extension: radicand must be a nonzero non-square of base
TowerPtr make_quadext(const TowerPtr& base, const FieldElement& radicand);

// grammar: Fp(5) | QQ | ratfun(<base>; v, ...) | laurent(<base>; v) |
//          quadext(<base>; <element expr>)
TowerPtr parse_field(const std::string& text);
// integer-coefficient rational expressions in the tower's variables; `rad`
// denotes sqrt of the outer quadext radicand
FieldElement parse_element(const TowerPtr& t, const std::string& text);

}  // namespace qconic

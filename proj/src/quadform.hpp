#pragma once
#include <span>

#include "place.hpp"

namespace qconic {

// Diagonal quadratic form over a tower node.
class QuadForm {
public:
  QuadForm() = default;
  QuadForm(TowerPtr t, std::vector<FieldElement> entries);
  static QuadForm diagonal(const TowerPtr& t, std::vector<FieldElement> entries) {
    return QuadForm(t, std::move(entries));
  }
  // n-fold Pfister form <<a1,...,an>> = tensor of <1,-ai>
  static QuadForm pfister(const TowerPtr& t, const std::vector<FieldElement>& slots);
  static QuadForm hyperbolic_plane(const TowerPtr& t);

  const TowerPtr& tower() const { return tower_; }
  int dim() const { return (int)entries_.size(); }
  const FieldElement& entry(int i) const { return entries_[i]; }
  const std::vector<FieldElement>& entries() const { return entries_; }

  QuadForm orth(const QuadForm& o) const;
  QuadForm scaled(const FieldElement& c) const;
  QuadForm tensor(const QuadForm& o) const;
  QuadForm negated() const;
  QuadForm subform(const std::vector<int>& idx) const;
  QuadForm coerce(const TowerPtr& to) const;
  // entries replaced by canonical square-class representatives
  QuadForm normalized() const;

  FieldElement evaluate(std::span<const FieldElement> x) const;
  FieldElement bilinear(std::span<const FieldElement> x, std::span<const FieldElement> y) const;

  SquareClass discriminant() const;  // signed: (-1)^(n(n-1)/2) * prod
  FieldElement disc_unsigned() const;

  bool operator==(const QuadForm& o) const;
  std::string str() const;

  // grammar: <e1,e2,...> diagonal, + orthogonal sum, (e)*F scalar multiple,
  // pf<<a,b,...>> Pfister, F x G tensor
  static QuadForm parse(const TowerPtr& t, const std::string& text);

private:
  TowerPtr tower_;
  std::vector<FieldElement> entries_;
};

// residue forms (unit part, uniformizer part) at the place, entries
// square-class normalized first; dimensions add up to dim q
std::pair<QuadForm, QuadForm> springer_split(const QuadForm& q, const PlaceSpec& v);

}  // namespace qconic

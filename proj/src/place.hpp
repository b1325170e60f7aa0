#pragma once
#include "element.hpp"

namespace qconic {

// Discrete place of a tower: a Laurent/rational-function variable, a monic
// irreducible polynomial of a one-variable function field, the degree place,
// or an affine change of variables followed by a variable place (the
// completion at t+u is Substitution(u -> s - t) then the s-adic place).
struct PlaceSpec {
  enum class Kind { TowerVariable, IrreduciblePoly, DegreePlace, Substitution };
  Kind kind = Kind::TowerVariable;
  std::string var;         // the variable carrying the valuation
  std::string fresh;       // Substitution: new variable name
  std::string subst_expr;  // Substitution: var := expr(fresh, other vars)
  Poly irred;              // IrreduciblePoly: monic, univariate in var

  static PlaceSpec tower_variable(std::string v);
  static PlaceSpec degree_place(std::string v);
  static PlaceSpec substitution(std::string replaced, std::string fresh, std::string expr);
  static PlaceSpec irreducible(std::string v, Poly pi);

  std::string str() const;
  static PlaceSpec parse(const std::string& text, const TowerPtr& t);
};

// field after taking the residue at the place
TowerPtr residue_tower(const TowerPtr& t, const PlaceSpec& v);

// (v(e), residue of e * pi^-v(e)); e nonzero and radical-free
std::pair<long, FieldElement> valuation_and_residue(const FieldElement& e, const PlaceSpec& v);

// the completion as a Laurent tower (TowerVariable and Substitution places)
TowerPtr completion_tower(const TowerPtr& t, const PlaceSpec& v);
FieldElement into_completion(const FieldElement& e, const PlaceSpec& v, const TowerPtr& target);

}  // namespace qconic

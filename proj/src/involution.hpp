#pragma once
#include "symbol.hpp"

namespace qconic {

// Formal tensor factor of an algebra with involution.
struct InvolutionFactor {
  enum class Kind { QuatCanonical, QuatOrthogonal, AdjointForm };
  Kind kind = Kind::QuatCanonical;
  QuatSymbol symbol;  // quaternion kinds
  FieldElement disc;  // QuatOrthogonal: canonical square class
  QuadForm form;      // AdjointForm

  int degree() const { return kind == Kind::AdjointForm ? form.dim() : 2; }
  std::string str() const;
};

// Formal tensor product of involution factors; no matrix realizations.
class InvolutionAlgebra {
public:
  InvolutionAlgebra() = default;
  InvolutionAlgebra(TowerPtr t, std::vector<InvolutionFactor> fs)
      : tower_(std::move(t)), factors_(std::move(fs)) {}
  static InvolutionAlgebra cplus(const QuadForm& phi);  // C+(phi), dim 8, disc 1

  const TowerPtr& tower() const { return tower_; }
  const std::vector<InvolutionFactor>& factors() const { return factors_; }
  bool is_cplus() const { return cplus_phi_.has_value(); }
  const QuadForm& cplus_phi() const { return *cplus_phi_; }

  long degree() const;
  bool symplectic() const;  // parity of canonical factors
  SymbolSum brauer_class() const;
  // discriminant of the orthogonal involution; nullopt for symplectic type
  std::optional<FieldElement> disc() const;

  InvolutionAlgebra tensor(const InvolutionFactor& f) const;
  std::string str() const;

  // grammar: quat_bar(a,b) | quat_orth(a,b; disc=c) | adj(<form>) |
  //          cplus(<form>), joined with x
  static InvolutionAlgebra parse(const TowerPtr& t, const std::string& text);

private:
  TowerPtr tower_;
  std::vector<InvolutionFactor> factors_;
  std::optional<QuadForm> cplus_phi_;
};

struct BasicInvariants {
  long degree = 0;
  bool symplectic = false;
  SymbolSum brauer;
  std::optional<FieldElement> disc;
};
BasicInvariants basic_invariants(const InvolutionAlgebra& A);

struct ClassificationResult {
  Verdict hyperbolic_over_conic;
  Verdict contains_q_bar;
  Verdict hyperbolic;    // over the base field when determined
  Verdict anisotropic;   // anisotropy tag when determined
  std::string case_tag;  // case1 | case2 | both | deg4symp-a | deg4symp-b | ...
  std::vector<std::pair<std::string, std::string>> supporting;
};

// the two Clifford components of a degree-4 orthogonal algebra with trivial
// discriminant, as Brauer classes
std::pair<SymbolSum, SymbolSum> clifford_components_deg4(const InvolutionAlgebra& A, Budget& b);

ClassificationResult decide_deg4_orthogonal(const InvolutionAlgebra& A, const FieldElement& a,
                                            const FieldElement& b, Budget& budget);

CohClass3 delta_invariant_deg4_symplectic(const InvolutionAlgebra& A);
ClassificationResult decide_deg4_symplectic(const InvolutionAlgebra& A, const FieldElement& a,
                                            const FieldElement& b, Budget& budget);

// degree-8 phi correspondence (totally decomposable orthogonal algebras)
QuadForm totdec_phi_forward(const InvolutionAlgebra& A, Budget& budget);
InvolutionAlgebra totdec_phi_backward(const QuadForm& phi);

ClassificationResult decide_deg8(const InvolutionAlgebra& A, const FieldElement& a,
                                 const FieldElement& b, Budget& budget);

ClassificationResult decide_deg_2mod4(const InvolutionAlgebra& A, const FieldElement& a,
                                      const FieldElement& b, Budget& budget);

// dispatch on the degree
ClassificationResult classify(const InvolutionAlgebra& A, const FieldElement& a,
                              const FieldElement& b, Budget& budget);

enum class LiftMode { AdjointPfisterX, QuaternionXY };
struct LiftResult {
  InvolutionAlgebra lifted;
  ClassificationResult base_result;
  ClassificationResult lift_result;  // transferred per the Laurent gauge theorem
  std::string consistency;           // recomputed invariants of the lift
};
LiftResult lift_laurent(const InvolutionAlgebra& A, LiftMode mode, const std::string& rho,
                        const FieldElement& a, const FieldElement& b, Budget& budget,
                        const std::string& xvar = "x", const std::string& yvar = "y");

// F_Q-minimality of 5-dimensional forms
Verdict fq_minimal_5dim(const QuadForm& phi, const FieldElement& a, const FieldElement& b,
                        Budget& budget);

}  // namespace qconic

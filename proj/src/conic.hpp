#pragma once
#include "witt.hpp"

namespace qconic {

// F_Q = F(s)(sqrt(a s^2 + b)), the function field of the conic of (a,b)_F
TowerPtr conic_tower(const TowerPtr& f, const FieldElement& a, const FieldElement& b,
                     const std::string& param = "s_");

// q hyperbolic over F_Q: witt kernel empty or a multiple of <<a,b>>
struct ConicHyperbolic {
  Verdict verdict;
  QuadForm q0;  // kernel = <<a,b>> tensor q0 when Proved with kernel
  WittDecomposition wd;
};
ConicHyperbolic hyperbolic_over_conic(const QuadForm& q, const FieldElement& a,
                                      const FieldElement& b, Budget& budget);

// q isotropic over F_Q; Proved by an exact witness with coordinates in F_Q
// (supplied or derived), Refuted by a completion argument over F_Q
Verdict isotropic_over_conic(const QuadForm& q, const FieldElement& a, const FieldElement& b,
                             Budget& budget, const Certificate* witness = nullptr);

// hyperbolic splitting of an isotropic Pfister multiple over the conic field:
// returns hyperbolic pairs (used to derive committed witnesses)
std::optional<std::vector<std::array<std::vector<FieldElement>, 2>>> split_over_conic(
    const QuadForm& q_over_fq, Budget& budget);

// common represented value of two forms over a completion target
struct CommonValue {
  Verdict verdict;
  FieldElement value;                  // when Proved
  std::vector<FieldElement> wit1, wit2;  // representations in q1, q2
};
CommonValue common_value_pair(const QuadForm& q1, const QuadForm& q2, const TowerPtr& target,
                              Budget& budget);

// represented square classes of a form of dimension <= 2 over an iterated
// Laurent tower; nullopt = universal or undecided
std::optional<std::vector<FieldElement>> represented_classes(const QuadForm& q);

// the (decqf)-shaped subform criterion: phi = alpha ⊥ -a beta ⊥ -b gamma ⊥ ab delta
struct TripleExclusion {
  std::array<int, 3> triple;  // indices into {alpha, beta, gamma, delta}
  std::string kind;           // pair-refuted | parity-obstruction
  int pi = 0, pj = 0;         // the pair used
  std::string completion1;    // where the pair analysis ran
  CertPtr pair_cert;          // aniso certificate (pair-refuted)
  std::string completion2;    // parity: where the third form was analyzed
  std::string shared_var;     // parity: common underlying valuation
  std::vector<std::string> common_classes;  // parity: all of odd valuation
  std::vector<std::string> third_classes;   // parity: all of even valuation
  int third = 0;
};

struct TernaryContainment {
  Verdict verdict;
  FieldElement lambda;  // common value when Proved
  std::array<QuadForm, 4> parts;
  std::vector<TripleExclusion> exclusions;
};
TernaryContainment contains_similar_ternary(const QuadForm& phi, const FieldElement& a,
                                            const FieldElement& b, Budget& budget);

}  // namespace qconic

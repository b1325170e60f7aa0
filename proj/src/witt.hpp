#pragma once
#include "isotropy.hpp"

namespace qconic {

// Constructive Witt decomposition: hyperbolic pairs are split off with exact
// congruences as long as isotropy witnesses are found; the remainder is the
// kernel, certified anisotropic when its isotropy verdict is Refuted. Over
// Laurent towers a form can be isotropic with no rational witness; the
// decomposition then stops early and the kernel is flagged (kernel_verdict
// Unknown with a note).
struct WittDecomposition {
  int index = 0;
  QuadForm kernel;
  // vectors in the coordinates of the original form
  std::vector<std::array<std::vector<FieldElement>, 2>> pairs;
  std::vector<std::vector<FieldElement>> kernel_basis;
  Verdict kernel_verdict;
  uint64_t budget_spent = 0;

  CertPtr trace(const QuadForm& original) const;  // WittSplitTrace
};

// stop_at_index >= 0 halts the split loop once that many planes are found
// (kernel then carries the unprocessed remainder, verdict Unknown)
WittDecomposition witt_decompose(const QuadForm& q, Budget& b, int stop_at_index = -1);
bool replay_witt_trace(const QuadForm& q, const Certificate& cert);

// isometry of diagonal forms: Proved through full Witt index of q1 ⊥ -q2,
// Refuted through certified invariants/completions, else Unknown
Verdict isometric(const QuadForm& q1, const QuadForm& q2, Budget& b);
// replay a supplied elementary-congruence chain
Verdict isometric_via_chain(const QuadForm& q1, const QuadForm& q2, const Certificate& chain);
// exact verification of one chain (returns transformed entry list)
bool apply_isometry_chain(const QuadForm& q1, const Certificate& chain, QuadForm& out);

// q contains phi up to isometry: witt index of q ⊥ -phi reaches dim phi
Verdict contains_subform(const QuadForm& q, const QuadForm& phi, Budget& b);

struct PfisterMultiple {
  Verdict verdict;
  QuadForm q0;  // q ~ <<a,b>> tensor q0 when Proved
};
PfisterMultiple multiple_of_pfister(const QuadForm& q, const FieldElement& a,
                                    const FieldElement& b, Budget& budget);

}  // namespace qconic

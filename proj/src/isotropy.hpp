#pragma once
#include "hilbert.hpp"
#include "quadform.hpp"
#include "verdict.hpp"

namespace qconic {

// Three-valued isotropy decision. Proved comes with an exact witness when one
// exists in the rational representation, otherwise with a completion-chain
// certificate; Refuted always carries a completion chain ending in complete
// base deciders. Unknown when the tower has no complete decider and the
// bounded witness search is exhausted.
Verdict isotropy(const QuadForm& q, Budget& b);

// verdict on isotropy(q ⊥ <-d>) refined with a representation vector
struct Representation {
  Verdict verdict;
  std::vector<FieldElement> vector;  // q(vector) = d when Proved
};
Representation represents(const QuadForm& q, const FieldElement& d, Budget& b);

// exhaustive-ish deterministic witness search (shared by deciders); returns
// a nonzero vector with q(v) = 0 or nullopt on budget exhaustion
std::optional<std::vector<FieldElement>> search_witness(const QuadForm& q, Budget& b,
                                                        int max_support = 3, long max_degree = 1);

// certificate replay, independent of the search that found it
bool replay_chain(const QuadForm& q, const ChainNode& node, Status want);
bool replay_isotropy(const QuadForm& q, const Certificate& cert, Status want);

ChainPtr chain_of(const Verdict& v);

}  // namespace qconic

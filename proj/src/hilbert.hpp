#pragma once
#include <optional>

#include "quadform.hpp"
#include "verdict.hpp"

namespace qconic {

// Complete isotropy deciders for the two global base fields. The status is
// always Proved or Refuted; the transcript records the local data so the
// decision replays by recomputation. A witness is attached when the
// constructive search succeeds.
struct BaseDecision {
  Status status = Status::Unknown;
  std::string transcript;
  std::optional<std::vector<FieldElement>> witness;
};

// tower = Rationals; Hasse-Minkowski via Hilbert symbols at 2, the real
// place, and the odd primes of the entries
BaseDecision decide_qq_isotropy(const QuadForm& q);

// tower = ratfun(Fp; x): Hasse-Minkowski for the global function field via
// tame symbols at the monic irreducible places of the entries and the degree
// place
BaseDecision decide_gff_isotropy(const QuadForm& q);

// monic irreducible factors of a univariate squarefree polynomial over F_p
std::vector<Poly> factor_univariate(const Poly& f, int var);

// tame Hilbert symbol (f,g) at the place pi (monic irreducible in x) of
// F_p(x); +1 split, -1 not
int hilbert_gff(const RatFunc& f, const RatFunc& g, const Poly& pi, int var);
// at the degree place
int hilbert_gff_inf(const RatFunc& f, const RatFunc& g, int var);

}  // namespace qconic

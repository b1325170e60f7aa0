#pragma once
#include "conic.hpp"

namespace qconic {

// Quaternion symbol (a,b) with square-class-canonical, sorted slots.
struct QuatSymbol {
  FieldElement left, right;  // canonical representatives, left <= right as strings
  TowerPtr tower;

  static QuatSymbol make(const FieldElement& a, const FieldElement& b);
  bool split_syntactic() const { return left.is_one() || right.is_one(); }
  QuadForm norm_form() const;  // <<a,b>> = <1,-a,-b,ab>
  QuadForm pure_form() const;  // <a,b,-ab> (represents c iff c is a pure square)
  bool operator==(const QuatSymbol& o) const { return left == o.left && right == o.right; }
  bool operator<(const QuatSymbol& o) const;
  std::string str() const;
};

// Formal sum of symbols = 2-torsion Brauer class representative. Kept
// normalized: canonical slots, sorted, duplicate pairs cancelled, symbols
// with a slot 1 dropped.
class SymbolSum {
public:
  SymbolSum() = default;
  explicit SymbolSum(TowerPtr t) : tower_(std::move(t)) {}
  static SymbolSum of(TowerPtr t, std::vector<QuatSymbol> syms);
  static SymbolSum single(const QuatSymbol& s);

  const std::vector<QuatSymbol>& symbols() const { return syms_; }
  const TowerPtr& tower() const { return tower_; }
  bool trivial_syntactic() const { return syms_.empty(); }
  SymbolSum operator+(const SymbolSum& o) const;
  SymbolSum coerce(const TowerPtr& to) const;
  bool operator==(const SymbolSum& o) const;
  std::string str() const;

  // grammar: (e1, e2) + (e3, e4) + ...
  static SymbolSum parse(const TowerPtr& t, const std::string& text);

private:
  TowerPtr tower_;
  std::vector<QuatSymbol> syms_;
};

Verdict symbol_is_split(const QuatSymbol& s, Budget& b);

// index of Q1 ⊗ Q2 from the witt index of the Albert form; 0 when unknown
struct AlbertIndex {
  int index = 0;  // 1, 2, 4, or 0 = Unknown
  Verdict verdict;
  QuadForm albert;
};
AlbertIndex albert_index(const QuatSymbol& s1, const QuatSymbol& s2, Budget& b);

// Hasse sum and Witt/Clifford invariant ------------------------------------
SymbolSum hasse_symbol_sum(const QuadForm& q);
// c(q): hasse sum plus the (-1, ±1/±d) correction by dim mod 8
SymbolSum witt_invariant(const QuadForm& q);
// Brauer class of C0(q) for odd-dimensional q
SymbolSum even_clifford_class(const QuadForm& q);

// rewrite chains -------------------------------------------------------------
struct RewriteStep {
  enum class Kind { Bilinear, Symmetry, SquareDrop, Chain, SplitDrop, SymbolSwapEq };
  Kind kind = Kind::Bilinear;
  std::vector<QuatSymbol> before, after;
  CertPtr evidence;  // SplitDrop / SymbolSwapEq
  std::string note;
};

struct RewriteChain {
  std::vector<RewriteStep> steps;
};

// Proved iff every step verifies and the chain maps start to end as
// multisets modulo cancellation; StepFailure names the first bad step
Verdict verify_rewrite_chain(const SymbolSum& start, const SymbolSum& end,
                             const RewriteChain& chain, Budget& b);

// atomized equality prover ----------------------------------------------------
// Atoms: multiplicatively independent square classes (variables, declared
// irreducibles, the constant non-residue / rational primes). A successful
// proof yields a replayable chain built from the spec step kinds.
struct AtomBasis {
  TowerPtr tower;
  std::vector<FieldElement> atoms;  // canonical class representatives
  static AtomBasis standard(const TowerPtr& t, const std::vector<std::string>& extra_exprs = {});
};

struct EqualityProof {
  Verdict verdict;
  RewriteChain chain;  // valid when Proved
};
EqualityProof prove_brauer_equal(const SymbolSum& s1, const SymbolSum& s2, const AtomBasis& atoms,
                                 Budget& b);

// degree-3 cohomology classes sum (lambda_i) ∪ [Q_i] ---------------------------
struct CohClass3 {
  std::vector<std::pair<FieldElement, QuatSymbol>> pairs;
};
Verdict coh3_trivial(const CohClass3& c, Budget& b);

// common slot ------------------------------------------------------------------
struct CommonSlot {
  Verdict verdict;
  FieldElement c, d, dprime;  // s1 ~ (c,d), s2 ~ (c,d')
  CertPtr eq1, eq2;           // SymbolSwapEq evidence for both presentations
};
CommonSlot common_slot(const QuatSymbol& s1, const QuatSymbol& s2, Budget& b);
// presentation of s with prescribed first slot c (c represented by the pure
// part form); verdict-backed
CommonSlot present_with_slot(const QuatSymbol& s, const FieldElement& c, Budget& b);

// iterated Laurent reduction for division ---------------------------------------
// Proved = the class of `sum` is a division algebra of degree 2^k; the
// transcript records each stripped symbol, the parity check, the residue
// radicand, and the terminal embedding + anisotropy certificate.
struct DivisionProof {
  Verdict verdict;
  std::string transcript;
  std::vector<CertPtr> terminal;  // anisotropy certificates
};
DivisionProof division_via_laurent(const SymbolSum& sum, Budget& b);

}  // namespace qconic

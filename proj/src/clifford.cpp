#include "symbol.hpp"

namespace qconic {

SymbolSum hasse_symbol_sum(const QuadForm& q) {
  std::vector<QuatSymbol> syms;
  for (int i = 0; i < q.dim(); i++)
    for (int j = i + 1; j < q.dim(); j++) syms.push_back(QuatSymbol::make(q.entry(i), q.entry(j)));
  return SymbolSum::of(q.tower(), std::move(syms));
}

SymbolSum witt_invariant(const QuadForm& q) {
  SymbolSum s = hasse_symbol_sum(q);
  if (q.dim() == 0) return s;
  const TowerPtr& t = q.tower();
  FieldElement m1 = -FieldElement::one(t);
  FieldElement d = q.disc_unsigned();
  // c(q) = s(q) + correction by dim mod 8 (d the unsigned determinant);
  // the table is locked by the generator-built Clifford oracle in the tests
  switch (q.dim() % 8) {
    case 1:
    case 2:
      break;
    case 3:
    case 4:
      s = s + SymbolSum::single(QuatSymbol::make(m1, -d));
      break;
    case 5:
    case 6:
      s = s + SymbolSum::single(QuatSymbol::make(m1, m1));
      break;
    default:  // 7, 0
      s = s + SymbolSum::single(QuatSymbol::make(m1, d));
      break;
  }
  return s;
}

SymbolSum even_clifford_class(const QuadForm& q) {
  if (q.dim() % 2 == 0) fail(errc::even_dimension, "even_clifford_class needs odd dimension");
  const TowerPtr& t = q.tower();
  std::vector<QuatSymbol> syms;
  int m = (q.dim() - 1) / 2;
  FieldElement D = FieldElement::one(t);  // running product a_1 ... a_j
  std::vector<FieldElement> prefix{D};
  for (int i = 0; i < q.dim(); i++) {
    D = D * q.entry(i);
    prefix.push_back(D);
  }
  for (int k = 1; k <= m; k++) {
    // factor k: ((-1)^k D_{2k}, (-1)^k D_{2k-1} a_{2k+1})
    FieldElement sgn = (k % 2) ? -FieldElement::one(t) : FieldElement::one(t);
    FieldElement left = sgn * prefix[2 * k];
    FieldElement right = sgn * prefix[2 * k - 1] * q.entry(2 * k);
    syms.push_back(QuatSymbol::make(left, right));
  }
  return SymbolSum::of(t, std::move(syms));
}

}  // namespace qconic

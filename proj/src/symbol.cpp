#include "symbol.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "nt.hpp"

namespace qconic {

QuatSymbol QuatSymbol::make(const FieldElement& a, const FieldElement& b) {
  QuatSymbol s;
  s.tower = a.tower();
  FieldElement l = canonical_square_class_rep(a);
  FieldElement r = canonical_square_class_rep(b.coerce(s.tower));
  if (r.str() < l.str()) std::swap(l, r);
  s.left = l;
  s.right = r;
  return s;
}

bool QuatSymbol::operator<(const QuatSymbol& o) const {
  std::string a = left.str(), b = o.left.str();
  if (a != b) return a < b;
  return right.str() < o.right.str();
}

QuadForm QuatSymbol::norm_form() const {
  return QuadForm::pfister(tower, {left, right});
}

QuadForm QuatSymbol::pure_form() const {
  return QuadForm(tower, {left, right, -(left * right)});
}

std::string QuatSymbol::str() const { return "(" + left.str() + ", " + right.str() + ")"; }

SymbolSum SymbolSum::of(TowerPtr t, std::vector<QuatSymbol> syms) {
  SymbolSum s(std::move(t));
  std::sort(syms.begin(), syms.end());
  for (auto& q : syms) {
    if (q.split_syntactic()) continue;
    if (!s.syms_.empty() && s.syms_.back() == q)
      s.syms_.pop_back();  // 2-torsion cancellation
    else
      s.syms_.push_back(q);
  }
  return s;
}

SymbolSum SymbolSum::single(const QuatSymbol& s) { return of(s.tower, {s}); }

SymbolSum SymbolSum::operator+(const SymbolSum& o) const {
  std::vector<QuatSymbol> all = syms_;
  for (const auto& s : o.syms_) all.push_back(s);
  return of(tower_ ? tower_ : o.tower_, std::move(all));
}

SymbolSum SymbolSum::coerce(const TowerPtr& to) const {
  std::vector<QuatSymbol> all;
  for (const auto& s : syms_)
    all.push_back(QuatSymbol::make(s.left.coerce(to), s.right.coerce(to)));
  return of(to, std::move(all));
}

bool SymbolSum::operator==(const SymbolSum& o) const {
  if (syms_.size() != o.syms_.size()) return false;
  for (size_t i = 0; i < syms_.size(); i++)
    if (!(syms_[i] == o.syms_[i])) return false;
  return true;
}

std::string SymbolSum::str() const {
  if (syms_.empty()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < syms_.size(); i++) os << (i ? " + " : "") << syms_[i].str();
  return os.str();
}

SymbolSum SymbolSum::parse(const TowerPtr& t, const std::string& text) {
  std::vector<QuatSymbol> syms;
  {
    std::string trimmed;
    for (char c : text)
      if (!std::isspace((unsigned char)c)) trimmed += c;
    if (trimmed.empty() || trimmed == "0") return SymbolSum(t);
  }
  // split on top-level '+'
  int depth = 0;
  size_t start = 0;
  std::vector<std::string> parts;
  for (size_t i = 0; i < text.size(); i++) {
    char c = text[i];
    if (c == '(') depth++;
    if (c == ')') depth--;
    if (c == '+' && depth == 0) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  for (auto& p : parts) {
    size_t l = p.find('(');
    size_t r = p.rfind(')');
    if (l == std::string::npos || r == std::string::npos || r <= l)
      fail(errc::parse, "bad symbol: " + p);
    std::string inner = p.substr(l + 1, r - l - 1);
    // split top-level comma
    int d = 0;
    size_t comma = std::string::npos;
    for (size_t i = 0; i < inner.size(); i++) {
      if (inner[i] == '(') d++;
      if (inner[i] == ')') d--;
      if (inner[i] == ',' && d == 0) {
        comma = i;
        break;
      }
    }
    if (comma == std::string::npos) fail(errc::parse, "bad symbol: " + p);
    FieldElement a = parse_element(t, inner.substr(0, comma));
    FieldElement b = parse_element(t, inner.substr(comma + 1));
    syms.push_back(QuatSymbol::make(a, b));
  }
  return of(t, std::move(syms));
}

Verdict symbol_is_split(const QuatSymbol& s, Budget& b) {
  if (s.split_syntactic()) return Verdict::proved(nullptr, b.spent, "slot 1");
  QuadForm conic(s.tower, {FieldElement::one(s.tower), -s.left, -s.right});
  return isotropy(conic, b);
}

AlbertIndex albert_index(const QuatSymbol& s1, const QuatSymbol& s2, Budget& b) {
  if (!s1.tower->same(*s2.tower)) fail(errc::place_mismatch, "albert_index across towers");
  AlbertIndex out;
  const TowerPtr& t = s1.tower;
  out.albert = QuadForm(
      t, {s1.left, s1.right, -(s1.left * s1.right), -s2.left, -s2.right, s2.left * s2.right});
  WittDecomposition wd = witt_decompose(out.albert, b);
  if (wd.index == 3) {
    out.index = 1;
    out.verdict = Verdict::proved(wd.trace(out.albert), b.spent, "albert form hyperbolic");
    return out;
  }
  if (!wd.kernel_verdict.is(Status::Refuted)) {
    out.verdict = Verdict::unknown("albert kernel not certified: " + wd.kernel_verdict.note,
                                   b.spent);
    return out;
  }
  auto c = std::make_shared<Certificate>();
  c->kind = Certificate::Kind::Composite;
  c->label = "albert witt index " + std::to_string(wd.index);
  c->parts = {wd.trace(out.albert)};
  if (wd.kernel_verdict.cert) c->parts.push_back(wd.kernel_verdict.cert);
  if (wd.index == 0) {
    out.index = 4;
    out.verdict = Verdict::proved(c, b.spent, "albert form anisotropic, index 4");
    return out;
  }
  if (wd.index == 1) {
    out.index = 2;
    out.verdict = Verdict::proved(c, b.spent, "albert witt index 1, index 2");
    return out;
  }
  out.verdict = Verdict::unknown("albert witt index 2 is impossible for a regular albert form",
                                 b.spent);
  return out;
}

// ----------------------------------------------------------------------------
// rewrite chains

namespace {

bool same_class(const FieldElement& a, const FieldElement& b) {
  return canonical_square_class_rep(a / b).is_one();
}

// legality of {s} <-> {s1, s2} under bilinearity: a common slot c with the
// other slots multiplying to s's other slot
bool bilinear_legal(const QuatSymbol& s, const QuatSymbol& s1, const QuatSymbol& s2) {
  auto sides = [](const QuatSymbol& q) {
    return std::array<std::pair<FieldElement, FieldElement>, 2>{
        std::make_pair(q.left, q.right), std::make_pair(q.right, q.left)};
  };
  for (auto& [c1, d1] : sides(s1))
    for (auto& [c2, d2] : sides(s2)) {
      if (!(c1 == c2)) continue;
      for (auto& [c, d] : sides(s)) {
        if (!(c == c1)) continue;
        if (same_class(d, d1 * d2)) return true;
      }
    }
  return false;
}

bool chain_move_legal(const QuatSymbol& s, const QuatSymbol& s2) {
  // (a,b) <-> (a,-ab)
  auto sides = [](const QuatSymbol& q) {
    return std::array<std::pair<FieldElement, FieldElement>, 2>{
        std::make_pair(q.left, q.right), std::make_pair(q.right, q.left)};
  };
  for (auto& [a, b] : sides(s))
    for (auto& [a2, b2] : sides(s2)) {
      if (!(a == a2)) continue;
      if (same_class(b2, -(a * b))) return true;
    }
  return false;
}

bool square_drop_legal(const QuatSymbol& s, const QuatSymbol& s2) {
  // with canonical slots these must agree as unordered class pairs
  return (same_class(s.left, s2.left) && same_class(s.right, s2.right)) ||
         (same_class(s.left, s2.right) && same_class(s.right, s2.left));
}

bool split_evidence_ok(const QuatSymbol& s, const CertPtr& ev, Budget& b) {
  if (s.split_syntactic()) return true;
  QuadForm conic(s.tower, {FieldElement::one(s.tower), -s.left, -s.right});
  if (ev) return replay_isotropy(conic, *ev, Status::Proved);
  return isotropy(conic, b).is(Status::Proved);
}

bool swap_evidence_ok(const QuatSymbol& s1, const QuatSymbol& s2, const CertPtr& ev, Budget& b) {
  QuadForm diff = s1.norm_form().orth(s2.norm_form().negated());
  if (ev) {
    if (ev->kind == Certificate::Kind::WittSplitTrace)
      return ev->witt_index >= 4 && replay_witt_trace(diff, *ev);
    return false;
  }
  WittDecomposition wd = witt_decompose(diff, b, 4);
  return wd.index >= 4;
}

}  // namespace

Verdict verify_rewrite_chain(const SymbolSum& start, const SymbolSum& end,
                             const RewriteChain& chain, Budget& b) {
  // raw working multiset (normalized symbols, but no cancellation until the
  // final comparison)
  std::vector<QuatSymbol> cur = start.symbols();
  auto take = [&](const QuatSymbol& s) -> bool {
    for (size_t i = 0; i < cur.size(); i++)
      if (cur[i] == s) {
        cur.erase(cur.begin() + i);
        return true;
      }
    return false;
  };
  for (size_t k = 0; k < chain.steps.size(); k++) {
    const RewriteStep& st = chain.steps[k];
    auto bad = [&](const std::string& why) {
      fail(errc::step_failure, "step " + std::to_string(k + 1) + ": " + why);
    };
    // drop syntactically-split symbols from before/after transparently
    std::vector<QuatSymbol> before, after;
    for (const auto& s : st.before)
      if (!s.split_syntactic()) before.push_back(s);
    for (const auto& s : st.after)
      if (!s.split_syntactic()) after.push_back(s);
    switch (st.kind) {
      case RewriteStep::Kind::Bilinear: {
        const auto &B = st.before, &A = st.after;
        bool ok = false;
        if (B.size() == 1 && A.size() == 2) ok = bilinear_legal(B[0], A[0], A[1]);
        if (B.size() == 2 && A.size() == 1) ok = bilinear_legal(A[0], B[0], B[1]);
        if (!ok) bad("bilinearity does not hold");
        break;
      }
      case RewriteStep::Kind::Symmetry:
      case RewriteStep::Kind::SquareDrop: {
        if (st.before.size() != 1 || st.after.size() != 1) bad("needs one symbol on each side");
        if (!square_drop_legal(st.before[0], st.after[0])) bad("slot classes differ");
        break;
      }
      case RewriteStep::Kind::Chain: {
        if (st.before.size() != 1 || st.after.size() != 1) bad("needs one symbol on each side");
        if (!chain_move_legal(st.before[0], st.after[0]) &&
            !chain_move_legal(st.after[0], st.before[0]))
          bad("chain identity does not hold");
        break;
      }
      case RewriteStep::Kind::SplitDrop: {
        if (!(st.before.size() == 1 && st.after.empty()) &&
            !(st.before.empty() && st.after.size() == 1))
          bad("split-drop takes one symbol");
        const QuatSymbol& s = st.before.size() ? st.before[0] : st.after[0];
        if (!split_evidence_ok(s, st.evidence, b)) bad("split evidence fails");
        break;
      }
      case RewriteStep::Kind::SymbolSwapEq: {
        if (st.before.size() != 1 || st.after.size() != 1) bad("swap takes one symbol each side");
        if (!swap_evidence_ok(st.before[0], st.after[0], st.evidence, b))
          bad("norm-form equivalence fails");
        break;
      }
    }
    for (const auto& s : before)
      if (!take(s)) bad("operand " + s.str() + " not present");
    for (const auto& s : after) cur.push_back(s);
  }
  SymbolSum reached = SymbolSum::of(start.tower(), cur);
  if (!(reached == end))
    return Verdict::unknown("chain lands on " + reached.str() + ", expected " + end.str(),
                            b.spent);
  return Verdict::proved(nullptr, b.spent, "rewrite chain verified");
}

// ----------------------------------------------------------------------------
// atomizer

AtomBasis AtomBasis::standard(const TowerPtr& t, const std::vector<std::string>& extra_exprs) {
  AtomBasis ab;
  ab.tower = t;
  unsigned long p = t->char_p();
  if (p) {
    // the constant non-residue class
    ab.atoms.push_back(FieldElement::integer(t, (long)least_nonresidue(p)));
  } else {
    ab.atoms.push_back(FieldElement::integer(t, -1));
    for (long q : {2L, 3L, 5L, 7L, 11L, 13L}) ab.atoms.push_back(FieldElement::integer(t, q));
  }
  for (const auto& v : t->vars()) ab.atoms.push_back(FieldElement::var(t, v));
  for (const auto& ex : extra_exprs) ab.atoms.push_back(parse_element(t, ex));
  return ab;
}

namespace {

// factor a canonical square-class representative over the atoms; exponents
// mod 2; nullopt when a leftover does not factor
std::optional<std::vector<int>> factor_over_atoms(const FieldElement& rep, const AtomBasis& ab) {
  std::vector<int> exp(ab.atoms.size(), 0);
  unsigned long p = rep.tower()->char_p();
  Poly num = rep.c0().num(), den = rep.c0().den();
  Poly work = num * den;  // same class
  for (size_t i = 0; i < ab.atoms.size(); i++) {
    const Poly& ap = ab.atoms[i].c0().num();
    if (ap.is_constant()) continue;
    while (true) {
      auto q = work.divexact(ap);
      if (!q) break;
      work = *q;
      exp[i] ^= 1;
    }
  }
  if (!work.is_constant()) return std::nullopt;
  Coef c = work.constant_value();
  if (p) {
    if (legendre(c.residue(), p) == -1) exp[0] ^= 1;
    return exp;
  }
  // rationals: sign and squarefree prime support
  mpq_class r = c.rat();
  mpz_class n = r.get_num() * r.get_den();
  mpz_class sf, s;
  squarefree_decompose(n, sf, s);
  if (sf < 0) {
    exp[0] ^= 1;
    sf = -sf;
  }
  for (size_t i = 1; i < ab.atoms.size(); i++) {
    if (!ab.atoms[i].c0().is_constant()) continue;
    mpz_class q = ab.atoms[i].c0().constant_value().rat().get_num();
    while (sf % q == 0) {
      sf /= q;
      exp[i] ^= 1;
    }
  }
  if (sf != 1) return std::nullopt;
  return exp;
}

using AtomPair = std::pair<int, int>;

// fully expanded atom pairs of a symbol sum, mod 2, diagonal handled
std::optional<std::vector<AtomPair>> atomize(const SymbolSum& s, const AtomBasis& ab,
                                             bool minus_one_square) {
  std::map<AtomPair, int> count;
  for (const auto& sym : s.symbols()) {
    auto l = factor_over_atoms(sym.left, ab);
    auto r = factor_over_atoms(sym.right, ab);
    if (!l || !r) return std::nullopt;
    for (size_t i = 0; i < l->size(); i++) {
      if (!(*l)[i]) continue;
      for (size_t j = 0; j < r->size(); j++) {
        if (!(*r)[j]) continue;
        if (i == j) {
          // (x,x) = (-1,x); drops when -1 is a square
          if (minus_one_square) continue;
          AtomPair d{0, (int)i};
          if (d.first > d.second) std::swap(d.first, d.second);
          count[d] ^= 1;
          continue;
        }
        AtomPair pr{(int)std::min(i, j), (int)std::max(i, j)};
        count[pr] ^= 1;
      }
    }
  }
  std::vector<AtomPair> out;
  for (auto& [pr, c] : count)
    if (c) out.push_back(pr);
  return out;
}

QuatSymbol atom_pair_symbol(const AtomBasis& ab, const AtomPair& pr) {
  return QuatSymbol::make(ab.atoms[pr.first], ab.atoms[pr.second]);
}

// emit the expansion of one symbol into its atom pairs (diagonals converted
// to (-1, x) and dropped when -1 is a square) as rewrite steps
void emit_expansion(const QuatSymbol& sym, const AtomBasis& ab, bool minus_one_square,
                    std::vector<RewriteStep>& steps) {
  auto l = *factor_over_atoms(sym.left, ab);
  auto r = *factor_over_atoms(sym.right, ab);
  std::vector<int> ls, rs;
  for (size_t i = 0; i < l.size(); i++)
    if (l[i]) ls.push_back((int)i);
  for (size_t j = 0; j < r.size(); j++)
    if (r[j]) rs.push_back((int)j);
  const TowerPtr& t = ab.tower;
  auto mk = [&](const FieldElement& a, const FieldElement& b) { return QuatSymbol::make(a, b); };
  auto atom_prod = [&](const std::vector<int>& idx, size_t from) {
    FieldElement e = FieldElement::one(t);
    for (size_t m = from; m < idx.size(); m++) e = e * ab.atoms[idx[m]];
    return e;
  };

  // split the right slot: (L, r1...rk) -> (L, r1) + ... + (L, rk)
  QuatSymbol cur = sym;
  std::vector<QuatSymbol> partial;  // (L, atom_j) symbols
  for (size_t k = 0; k + 1 < rs.size(); k++) {
    FieldElement rk = ab.atoms[rs[k]];
    FieldElement rest = atom_prod(rs, k + 1);
    RewriteStep st;
    st.kind = RewriteStep::Kind::Bilinear;
    st.before = {cur};
    st.after = {mk(sym.left, rk), mk(sym.left, rest)};
    steps.push_back(st);
    partial.push_back(mk(sym.left, rk));
    cur = mk(sym.left, rest);
  }
  partial.push_back(cur);

  auto diagonal_fix = [&](const QuatSymbol& s) {
    if (!same_class(s.left, s.right)) return;
    FieldElement m1 = -FieldElement::one(t);
    RewriteStep st;
    st.kind = RewriteStep::Kind::Chain;  // (x,x) -> (x, -x^2) ~ (x, -1)
    st.before = {s};
    st.after = {QuatSymbol::make(s.left, m1)};
    steps.push_back(st);
    // when -1 is a square the result is a split symbol and the verifier
    // filters it out of the multiset on its own
  };

  // split each left slot: (l1...lm, a_j) -> sum of (l_i, a_j)
  for (size_t pi = 0; pi < partial.size(); pi++) {
    FieldElement aslot = ab.atoms[rs[std::min(pi, rs.size() - 1)]];
    QuatSymbol c2 = partial[pi];
    if (ls.size() == 1) {
      diagonal_fix(c2);
      continue;
    }
    for (size_t k = 0; k + 1 < ls.size(); k++) {
      FieldElement lk = ab.atoms[ls[k]];
      FieldElement rest = atom_prod(ls, k + 1);
      RewriteStep st;
      st.kind = RewriteStep::Kind::Bilinear;
      st.before = {c2};
      QuatSymbol leaf = mk(lk, aslot);
      st.after = {leaf, mk(rest, aslot)};
      steps.push_back(st);
      diagonal_fix(leaf);
      c2 = mk(rest, aslot);
    }
    diagonal_fix(c2);
  }
  (void)minus_one_square;
}

}  // namespace

EqualityProof prove_brauer_equal(const SymbolSum& s1, const SymbolSum& s2, const AtomBasis& ab,
                                 Budget& b) {
  EqualityProof out;
  if (s1 == s2) {
    out.verdict = Verdict::proved(nullptr, b.spent, "syntactically equal");
    return out;
  }
  unsigned long p = ab.tower->char_p();
  bool m1sq = p ? (legendre((uint64_t)(p - 1), p) == 1) : false;
  SymbolSum diff = s1 + s2;
  auto atoms = atomize(diff, ab, m1sq);
  if (!atoms) {
    out.verdict = Verdict::unknown("slots do not factor over the atom basis", b.spent);
    return out;
  }
  std::vector<AtomPair> residual = *atoms;
  // steps for the certificate: expand s1, then the residual fix-ups, then the
  // reversed expansion of s2
  for (const auto& sym : s1.symbols()) emit_expansion(sym, ab, m1sq, out.chain.steps);

  auto insert_pair = [&](const QuatSymbol& s) {
    QuatSymbol trivial = QuatSymbol::make(s.left, FieldElement::one(ab.tower));
    RewriteStep ins;
    ins.kind = RewriteStep::Kind::SplitDrop;
    ins.after = {trivial};
    out.chain.steps.push_back(ins);
    RewriteStep split;
    split.kind = RewriteStep::Kind::Bilinear;
    split.before = {trivial};
    split.after = {s, s};
    out.chain.steps.push_back(split);
  };

  if (!residual.empty()) {
    // try to kill the residual with split merges and norm-form swaps
    // (i) merge two pairs sharing an atom into one symbol and drop it when
    //     split with an exact witness
    // (ii) merge the residual into two symbols connected by SymbolSwapEq
    std::vector<AtomPair> rem = residual;
    std::vector<RewriteStep> fixes;
    {
      // residual pairs contributed by the s2 side are not in the working
      // multiset yet; create them in cancelling duplicates
      std::map<std::string, long> cnt;
      for (const auto& s : s1.symbols())
        if (!s.split_syntactic()) cnt[s.str()]++;
      for (const auto& st : out.chain.steps) {
        for (const auto& s : st.before)
          if (!s.split_syntactic()) cnt[s.str()]--;
        for (const auto& s : st.after)
          if (!s.split_syntactic()) cnt[s.str()]++;
      }
      for (const auto& pr : rem) {
        QuatSymbol s = atom_pair_symbol(ab, pr);
        if (cnt[s.str()] <= 0) insert_pair(s);
      }
    }
    auto merge_two = [&](const AtomPair& x, const AtomPair& y,
                         std::optional<QuatSymbol>& merged) -> std::optional<RewriteStep> {
      int shared = -1;
      if (x.first == y.first || x.first == y.second) shared = x.first;
      if (x.second == y.first || x.second == y.second) shared = x.second;
      if (shared < 0) return std::nullopt;
      int ox = x.first == shared ? x.second : x.first;
      int oy = y.first == shared ? y.second : y.first;
      RewriteStep st;
      st.kind = RewriteStep::Kind::Bilinear;
      st.before = {atom_pair_symbol(ab, x), atom_pair_symbol(ab, y)};
      st.after = {QuatSymbol::make(ab.atoms[shared], ab.atoms[ox] * ab.atoms[oy])};
      merged = st.after[0];
      return st;
    };
    bool progress = true;
    while (!rem.empty() && progress) {
      progress = false;
      // (i)
      for (size_t i = 0; i < rem.size() && !progress; i++)
        for (size_t j = i + 1; j < rem.size() && !progress; j++) {
          std::optional<QuatSymbol> merged;
          auto st = merge_two(rem[i], rem[j], merged);
          if (!st) continue;
          Budget probe(2000);
          Verdict sp = symbol_is_split(*merged, probe);
          if (!sp.is(Status::Proved)) continue;
          fixes.push_back(*st);
          RewriteStep drop;
          drop.kind = RewriteStep::Kind::SplitDrop;
          drop.before = {*merged};
          drop.evidence = sp.cert;
          fixes.push_back(drop);
          rem.erase(rem.begin() + j);
          rem.erase(rem.begin() + i);
          progress = true;
        }
      if (progress) continue;
      // (ii) two halves merging into single symbols linked by a swap
      if (rem.size() >= 2 && rem.size() <= 8) {
        size_t n = rem.size();
        for (size_t mask = 1; mask + 1 < (1u << n) && !progress; mask++) {
          std::vector<AtomPair> h1, h2;
          for (size_t k = 0; k < n; k++)
            ((mask >> k) & 1 ? h1 : h2).push_back(rem[k]);
          if (h1.empty() || h2.empty()) continue;
          // merge each half greedily
          auto merge_half = [&](std::vector<AtomPair> half, std::vector<RewriteStep>& acc)
              -> std::optional<QuatSymbol> {
            std::vector<QuatSymbol> syms;
            for (auto& pr : half) syms.push_back(atom_pair_symbol(ab, pr));
            while (syms.size() > 1) {
              bool merged_once = false;
              for (size_t i = 0; i < syms.size() && !merged_once; i++) {
                for (size_t j = i + 1; j < syms.size() && !merged_once; j++) {
                  std::array<std::pair<FieldElement, FieldElement>, 2> si{
                      std::make_pair(syms[i].left, syms[i].right),
                      std::make_pair(syms[i].right, syms[i].left)};
                  std::array<std::pair<FieldElement, FieldElement>, 2> sj{
                      std::make_pair(syms[j].left, syms[j].right),
                      std::make_pair(syms[j].right, syms[j].left)};
                  for (int ii = 0; ii < 2 && !merged_once; ii++)
                    for (int jj = 0; jj < 2 && !merged_once; jj++) {
                      if (!(si[ii].first == sj[jj].first)) continue;
                      RewriteStep st;
                      st.kind = RewriteStep::Kind::Bilinear;
                      st.before = {syms[i], syms[j]};
                      QuatSymbol m = QuatSymbol::make(si[ii].first, si[ii].second * sj[jj].second);
                      st.after = {m};
                      acc.push_back(st);
                      syms.erase(syms.begin() + j);
                      syms.erase(syms.begin() + i);
                      syms.push_back(m);
                      merged_once = true;
                    }
                }
              }
              if (!merged_once) return std::nullopt;
            }
            return syms.empty() ? std::nullopt : std::make_optional(syms[0]);
          };
          std::vector<RewriteStep> acc1, acc2;
          auto m1 = merge_half(h1, acc1);
          auto m2 = merge_half(h2, acc2);
          if (!m1 || !m2) continue;
          Budget probe(20000);
          if (!swap_evidence_ok(*m1, *m2, nullptr, probe)) continue;
          QuadForm diffn = m1->norm_form().orth(m2->norm_form().negated());
          Budget again(20000);
          WittDecomposition wd = witt_decompose(diffn, again, 4);
          RewriteStep sw;
          sw.kind = RewriteStep::Kind::SymbolSwapEq;
          sw.before = {*m1};
          sw.after = {*m2};
          if (wd.index >= 4) sw.evidence = wd.trace(diffn);
          for (auto& st : acc1) fixes.push_back(st);
          fixes.push_back(sw);
          // m2 now duplicates the merged h2: merge h2 too, the two copies
          // cancel in the final comparison
          for (auto& st : acc2) fixes.push_back(st);
          rem.clear();
          progress = true;
        }
      }
    }
    if (!rem.empty()) {
      out.verdict = Verdict::unknown("residual atom pairs not discharged: " +
                                         std::to_string(rem.size()),
                                     b.spent);
      return out;
    }
    for (auto& st : fixes) out.chain.steps.push_back(st);
  }

  // reversed expansion of s2; balance the raw pair counts first (the verifier
  // works with raw multisets and only cancels at the end)
  std::vector<RewriteStep> back;
  for (const auto& sym : s2.symbols()) emit_expansion(sym, ab, m1sq, back);
  auto simulate = [](const std::vector<QuatSymbol>& init,
                     const std::vector<RewriteStep>& steps) {
    std::map<std::string, std::pair<QuatSymbol, long>> cur;
    auto add = [&](const QuatSymbol& s, long n) {
      auto it = cur.find(s.str());
      if (it == cur.end())
        cur.emplace(s.str(), std::make_pair(s, n));
      else
        it->second.second += n;
    };
    for (const auto& s : init)
      if (!s.split_syntactic()) add(s, 1);
    for (const auto& st : steps) {
      for (const auto& s : st.before)
        if (!s.split_syntactic()) add(s, -1);
      for (const auto& s : st.after)
        if (!s.split_syntactic()) add(s, 1);
    }
    return cur;
  };
  auto have = simulate(s1.symbols(), out.chain.steps);
  auto need = simulate(s2.symbols(), back);
  for (auto& [key, entry] : need) {
    long deficit = entry.second - (have.count(key) ? have[key].second : 0);
    const QuatSymbol& s = entry.first;
    for (; deficit > 0; deficit -= 2) insert_pair(s);
  }
  for (auto it = back.rbegin(); it != back.rend(); ++it) {
    RewriteStep st = *it;
    std::swap(st.before, st.after);
    out.chain.steps.push_back(st);
  }
  Verdict chk = verify_rewrite_chain(s1, s2, out.chain, b);
  if (chk.is(Status::Proved)) {
    out.verdict = Verdict::proved(nullptr, b.spent, "atomized rewrite chain");
    return out;
  }
  out.verdict = Verdict::unknown("emitted chain failed verification: " + chk.note, b.spent);
  return out;
}

// ----------------------------------------------------------------------------

Verdict coh3_trivial(const CohClass3& c, Budget& b) {
  const auto& ps = c.pairs;
  if (ps.empty()) return Verdict::proved(nullptr, b.spent, "empty class");
  auto pfister3 = [&](const std::pair<FieldElement, QuatSymbol>& pr) {
    const TowerPtr& t = pr.first.tower();
    return QuadForm::pfister(t, {pr.first, pr.second.left.coerce(t), pr.second.right.coerce(t)});
  };
  if (ps.size() == 1) {
    QuadForm pf = pfister3(ps[0]);
    // hyperbolic iff isotropic for pfister forms; decide through the witt loop
    WittDecomposition wd = witt_decompose(pf, b, 1);
    if (wd.index >= 1) return Verdict::proved(wd.trace(pf), b.spent, "pfister form isotropic");
    Verdict iso = isotropy(pf, b);
    if (iso.is(Status::Proved)) return Verdict::proved(iso.cert, b.spent);
    if (iso.is(Status::Refuted)) return Verdict::refuted(iso.cert, b.spent);
    return Verdict::unknown(iso.note, b.spent);
  }
  if (ps.size() == 2) {
    QuadForm d = pfister3(ps[0]).orth(pfister3(ps[1]).negated());
    WittDecomposition wd = witt_decompose(d, b);
    if (wd.index == 8) return Verdict::proved(wd.trace(d), b.spent, "3-pfister classes equal");
    if (wd.kernel_verdict.is(Status::Refuted))
      return Verdict::refuted(wd.kernel_verdict.cert, b.spent, "3-pfister classes differ");
    return Verdict::unknown("difference form undecided", b.spent);
  }
  return Verdict::unknown("sums of more than two pairs need an explicit chain", b.spent);
}

// ----------------------------------------------------------------------------
// common slot

CommonSlot present_with_slot(const QuatSymbol& s, const FieldElement& c, Budget& b) {
  CommonSlot out;
  const TowerPtr& t = s.tower;
  // find a representation of c by the pure-part form <a, b, -ab>
  QuadForm pure = s.pure_form();
  Representation rep = represents(pure, c.coerce(t), b);
  if (!rep.verdict.is(Status::Proved) || rep.vector.empty()) {
    out.verdict = Verdict::unknown("slot value not represented by the pure form", b.spent);
    return out;
  }
  // complete the witness vector to an orthogonal basis of the pure form; the
  // second diagonal entry -d gives (a,b) ~ (c, d)
  std::vector<std::vector<FieldElement>> basis;
  std::vector<FieldElement> v = rep.vector;
  basis.push_back(v);
  FieldElement qv = pure.evaluate(v);
  std::vector<std::vector<FieldElement>> complement;
  for (int i = 0; i < 3; i++) {
    std::vector<FieldElement> e(3, FieldElement::zero(t));
    e[i] = FieldElement::one(t);
    FieldElement coef = pure.bilinear(e, v) / qv;
    std::vector<FieldElement> u(3, FieldElement::zero(t));
    for (int k = 0; k < 3; k++) u[k] = e[k] - v[k] * coef;
    bool zero = true;
    for (auto& x : u)
      if (!x.is_zero()) zero = false;
    if (!zero) complement.push_back(u);
  }
  // pick one complement vector with nonzero value
  FieldElement d2;
  bool found = false;
  for (auto& u : complement) {
    FieldElement qu = pure.evaluate(u);
    if (!qu.is_zero()) {
      d2 = qu;
      found = true;
      break;
    }
  }
  if (!found) {
    for (size_t i = 0; i + 1 < complement.size() && !found; i++)
      for (size_t j = i + 1; j < complement.size() && !found; j++) {
        std::vector<FieldElement> u(3, FieldElement::zero(t));
        for (int k = 0; k < 3; k++) u[k] = complement[i][k] + complement[j][k];
        FieldElement qu = pure.evaluate(u);
        if (!qu.is_zero()) {
          d2 = qu;
          found = true;
        }
      }
  }
  if (!found) {
    out.verdict = Verdict::unknown("no regular complement vector", b.spent);
    return out;
  }
  // pure part of (c,d) is <c, d, -cd>; here <c> ⊥ complement with value d2
  // realizes pure ~ <c, d2, *>: d = -d2 ... the pure form of (c,d) represents
  // c and d with c d' = -(det): fix d via the determinant: disc(pure) = 1*...
  // For <a,b,-ab>: det = -(ab)^2 ~ -1. <c, d2, x>: x = -1/(c d2) ~ -c d2.
  // The symbol with pure form <c, d2, -c d2> is (c, d2).
  FieldElement d = d2;
  out.c = c.coerce(t);
  out.d = d;
  QuatSymbol cand = QuatSymbol::make(out.c, d);
  Budget probe = b;
  if (!swap_evidence_ok(s, cand, nullptr, b)) {
    out.verdict = Verdict::unknown("presentation failed the norm-form check", b.spent);
    return out;
  }
  QuadForm diffn = s.norm_form().orth(cand.norm_form().negated());
  Budget again(b.limit);
  WittDecomposition wd = witt_decompose(diffn, again, 4);
  out.eq1 = wd.index >= 4 ? wd.trace(diffn) : nullptr;
  out.verdict = Verdict::proved(out.eq1, b.spent);
  (void)probe;
  return out;
}

CommonSlot common_slot(const QuatSymbol& s1, const QuatSymbol& s2, Budget& b) {
  CommonSlot out;
  const TowerPtr& t = s1.tower;
  if (s1 == s2) {
    out.c = s1.left;
    out.d = s1.right;
    out.dprime = s1.right;
    out.verdict = Verdict::proved(nullptr, b.spent, "identical symbols");
    return out;
  }
  // aligned slots already?
  if (s1.left == s2.left || s1.left == s2.right || s1.right == s2.left ||
      s1.right == s2.right) {
    FieldElement c = (s1.left == s2.left || s1.left == s2.right) ? s1.left : s1.right;
    out.c = c;
    out.d = s1.left == c ? s1.right : s1.left;
    out.dprime = s2.left == c ? s2.right : s2.left;
    out.verdict = Verdict::proved(nullptr, b.spent, "slots already aligned");
    return out;
  }
  // common value of the two pure forms from an albert-form witness
  QuadForm diff = s1.pure_form().orth(s2.pure_form().negated());
  Verdict v = isotropy(diff, b);
  if (!v.is(Status::Proved) || !v.cert || v.cert->kind != Certificate::Kind::IsotropyWitness) {
    out.verdict = Verdict::unknown("no albert-form witness for a common slot", b.spent);
    return out;
  }
  std::vector<FieldElement> x(v.cert->vector.begin(), v.cert->vector.begin() + 3);
  std::vector<FieldElement> y(v.cert->vector.begin() + 3, v.cert->vector.end());
  FieldElement c = s1.pure_form().evaluate(x);
  if (c.is_zero()) {
    out.verdict = Verdict::unknown("common slot witness degenerate (a pure form is isotropic)",
                                   b.spent);
    return out;
  }
  CommonSlot p1 = present_with_slot(s1, c, b);
  CommonSlot p2 = present_with_slot(s2, c, b);
  if (!p1.verdict.is(Status::Proved) || !p2.verdict.is(Status::Proved)) {
    out.verdict = Verdict::unknown("presentation with the common slot failed", b.spent);
    return out;
  }
  out.c = c;
  out.d = p1.d;
  out.dprime = p2.d;
  out.eq1 = p1.eq1;
  out.eq2 = p2.eq1;
  out.verdict = Verdict::proved(nullptr, b.spent);
  (void)t;
  return out;
}

// ----------------------------------------------------------------------------
// division by iterated Laurent reduction

namespace {

TowerPtr insert_quadext(const TowerPtr& t, const FieldElement& w) {
  // place the quadratic extension under the Laurent variables w does not use
  if (t->kind() == FieldTower::Kind::Laurent) {
    int col = t->var_index(t->added_vars()[0]);
    if (!w.c0().num().uses_var(col) && !w.c0().den().uses_var(col)) {
      TowerPtr nb = insert_quadext(t->base(), w.coerce(t->base()));
      return FieldTower::laurent(nb, t->added_vars()[0]);
    }
  }
  return make_quadext(t, w.coerce(t));
}

}  // namespace

DivisionProof division_via_laurent(const SymbolSum& sum, Budget& b) {
  DivisionProof out;
  std::ostringstream tr;
  SymbolSum cur = sum;
  TowerPtr t = sum.tower();

  while (t->kind() == FieldTower::Kind::Laurent && cur.symbols().size() > 1) {
    std::string var = t->added_vars()[0];
    int col = t->var_index(var);
    // find the symbol carrying the uniformizer
    int strip = -1;
    FieldElement w;
    bool orient_left = false;
    for (size_t i = 0; i < cur.symbols().size(); i++) {
      const QuatSymbol& s = cur.symbols()[i];
      long vl = s.left.c0().valuation(col);
      long vr = s.right.c0().valuation(col);
      if ((vl % 2 != 0) && vr == 0) {
        strip = (int)i;
        w = s.right;
        orient_left = true;
      } else if ((vr % 2 != 0) && vl == 0) {
        strip = (int)i;
        w = s.left;
        orient_left = false;
      }
      if (strip >= 0) break;
    }
    if (strip < 0) {
      out.verdict = Verdict::unknown("no symbol with an odd uniformizer slot", b.spent);
      out.transcript = tr.str();
      return out;
    }
    // side condition: every other symbol must be a unit at the place
    for (size_t i = 0; i < cur.symbols().size(); i++) {
      if ((int)i == strip) continue;
      const QuatSymbol& s = cur.symbols()[i];
      if (s.left.c0().valuation(col) != 0 || s.right.c0().valuation(col) != 0) {
        out.verdict = Verdict::unknown("residual symbol not a unit at the place", b.spent);
        out.transcript = tr.str();
        return out;
      }
    }
    const QuatSymbol& s = cur.symbols()[strip];
    tr << "strip " << s.str() << " at " << var << " (uniformizer parity odd); ";
    // residue field gains sqrt of the unit slot
    TowerPtr base = t->base();
    FieldElement wbase = w.coerce(base);
    if (wbase.is_square()) {
      out.verdict = Verdict::unknown("unit slot is a square in the residue field", b.spent);
      out.transcript = tr.str();
      return out;
    }
    TowerPtr next = insert_quadext(base, wbase);
    tr << "residue field extended by sqrt(" << wbase.str() << "); ";
    std::vector<QuatSymbol> rest;
    for (size_t i = 0; i < cur.symbols().size(); i++) {
      if ((int)i == strip) continue;
      const QuatSymbol& si = cur.symbols()[i];
      rest.push_back(QuatSymbol::make(si.left.coerce(next), si.right.coerce(next)));
    }
    cur = SymbolSum::of(next, rest);
    t = next;
    (void)orient_left;
  }

  if (cur.symbols().size() != 1) {
    out.verdict = Verdict::unknown("reduction did not reach a single symbol", b.spent);
    out.transcript = tr.str();
    return out;
  }
  QuatSymbol s = cur.symbols()[0];
  // terminal: the symbol must be division over its tower; over towers with
  // quadratic extensions, try embeddings into Laurent completions where all
  // radicands become squares
  auto terminal_over = [&](const TowerPtr& target, const QuatSymbol& sym) -> Verdict {
    QuadForm nf = sym.norm_form();
    Budget tb(b.limit);
    Verdict v = isotropy(nf, tb);
    b.spent += tb.spent;
    return v;
  };
  if (!t->has_quadext()) {
    Verdict v = terminal_over(t, s);
    if (v.is(Status::Refuted)) {
      tr << "terminal " << s.str() << " anisotropic norm form over " << t->str();
      out.terminal.push_back(v.cert);
      out.verdict = Verdict::proved(v.cert, b.spent);
      out.transcript = tr.str();
      return out;
    }
    out.verdict = v.is(Status::Proved)
                      ? Verdict::refuted(v.cert, b.spent, "terminal symbol splits")
                      : Verdict::unknown(v.note, b.spent);
    out.transcript = tr.str();
    return out;
  }
  // collect radicands and the underlying rational-function tower
  std::vector<FieldElement> radicands;
  TowerPtr core = t;
  while (core->kind() == FieldTower::Kind::QuadExt) {
    radicands.push_back(FieldElement(core->base(), core->radicand_raw()));
    core = core->base();
  }
  if (core->kind() != FieldTower::Kind::RatFun) {
    out.verdict = Verdict::unknown("unsupported terminal tower shape", b.spent);
    out.transcript = tr.str();
    return out;
  }
  for (const auto& var : core->added_vars()) {
    PlaceSpec pl = PlaceSpec::tower_variable(var);
    TowerPtr target = completion_tower(core, pl);
    bool all_square = true;
    for (const auto& rad : radicands) {
      FieldElement moved = rad.coerce(target);
      if (!moved.is_square()) {
        all_square = false;
        break;
      }
    }
    if (!all_square) continue;
    QuatSymbol moved = QuatSymbol::make(s.left.coerce(target), s.right.coerce(target));
    Verdict v = terminal_over(target, moved);
    if (v.is(Status::Refuted)) {
      tr << "radicands are squares in " << target->str() << "; terminal " << moved.str()
         << " anisotropic norm form there";
      out.terminal.push_back(v.cert);
      out.verdict = Verdict::proved(v.cert, b.spent);
      out.transcript = tr.str();
      return out;
    }
  }
  out.verdict = Verdict::unknown("no embedding certified the terminal symbol", b.spent);
  out.transcript = tr.str();
  return out;
}

}  // namespace qconic

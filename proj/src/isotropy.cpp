#include "isotropy.hpp"

#include <sstream>

namespace qconic {

namespace {

CertPtr witness_cert(std::vector<FieldElement> v) {
  auto c = std::make_shared<Certificate>();
  c->kind = Certificate::Kind::IsotropyWitness;
  c->vector = std::move(v);
  return c;
}

CertPtr chain_cert(ChainPtr n) {
  auto c = std::make_shared<Certificate>();
  c->kind = Certificate::Kind::CompletionChain;
  c->chain = std::move(n);
  return c;
}

ChainPtr leaf(std::string rule, std::string transcript = {}, std::vector<int> idx = {}) {
  auto n = std::make_shared<ChainNode>();
  n->rule = std::move(rule);
  n->transcript = std::move(transcript);
  n->idx = std::move(idx);
  return n;
}

// entry pair solved algebraically: e_i x^2 + e_j = 0
Verdict try_pairs(const QuadForm& q, Budget& b) {
  for (int i = 0; i < q.dim(); i++)
    for (int j = 0; j < q.dim(); j++) {
      if (i == j) continue;
      if (!b.tick()) return Verdict::unknown("budget exhausted in pair scan", b.spent);
      FieldElement z = -(q.entry(j) / q.entry(i));
      bool sq;
      try {
        sq = z.is_square();
      } catch (const error&) {
        continue;  // undecidable square test on this tower slice
      }
      if (!sq) continue;
      if (auto s = z.sqrt()) {
        std::vector<FieldElement> v(q.dim(), FieldElement::zero(q.tower()));
        v[i] = *s;
        v[j] = FieldElement::one(q.tower());
        return Verdict::proved(witness_cert(std::move(v)), b.spent);
      }
      return Verdict::proved(chain_cert(leaf("square-transcript", "-e_j/e_i is a square", {i, j})),
                             b.spent, "isotropic pair without rational square root");
    }
  return Verdict::unknown();
}

Verdict prime_field_isotropy(const QuadForm& q, Budget& b) {
  // dim >= 3 over F_p is always isotropic; pair scan has already run, so a
  // witness with last coordinate 1 on the first three entries exists
  unsigned long p = q.tower()->char_p();
  const FieldElement &e1 = q.entry(0), &e2 = q.entry(1), &e3 = q.entry(2);
  for (unsigned long x = 0; x < p; x++) {
    if (!b.tick()) break;
    FieldElement xe = FieldElement::integer(q.tower(), (long)x);
    FieldElement t = -(e3 + e1 * xe * xe) / e2;
    if (t.is_zero()) {
      if (x == 0) continue;
      std::vector<FieldElement> v(q.dim(), FieldElement::zero(q.tower()));
      v[0] = xe;
      v[2] = FieldElement::one(q.tower());
      return Verdict::proved(witness_cert(std::move(v)), b.spent);
    }
    if (auto s = t.sqrt()) {
      std::vector<FieldElement> v(q.dim(), FieldElement::zero(q.tower()));
      v[0] = xe;
      v[1] = *s;
      v[2] = FieldElement::one(q.tower());
      return Verdict::proved(witness_cert(std::move(v)), b.spent);
    }
  }
  return Verdict::unknown("prime-field witness scan exhausted", b.spent);
}

bool tower_is_one_var_gff(const TowerPtr& t) {
  return t->kind() == FieldTower::Kind::RatFun && t->added_vars().size() == 1 &&
         t->base()->kind() == FieldTower::Kind::Prime;
}

}  // namespace

std::optional<std::vector<FieldElement>> search_witness(const QuadForm& q, Budget& b,
                                                        int max_support, long max_degree) {
  const TowerPtr& t = q.tower();
  unsigned long p = t->char_p();
  // candidate pool: small constants, variables, the radical
  std::vector<FieldElement> pool;
  long cmax = p ? std::min<long>((long)p - 1, 4) : 3;
  for (long c = 1; c <= cmax; c++) pool.push_back(FieldElement::integer(t, c));
  if (!p) pool.push_back(FieldElement::integer(t, -1));
  if (max_degree >= 1) {
    size_t base = pool.size();
    for (const auto& v : t->vars()) pool.push_back(FieldElement::var(t, v));
    if (t->has_quadext()) pool.push_back(FieldElement::radical(t));
    if (max_degree >= 2) {
      size_t vend = pool.size();
      for (size_t a = base; a < vend; a++)
        for (size_t bb = a; bb < vend; bb++) pool.push_back(pool[a] * pool[bb]);
    }
  }

  int n = q.dim();
  std::vector<FieldElement> zero(n, FieldElement::zero(t));
  for (int s = 2; s <= std::min(n, max_support); s++) {
    // lex subsets of size s
    std::vector<int> idx(s);
    for (int i = 0; i < s; i++) idx[i] = i;
    while (true) {
      // last support coordinate fixed to 1 (projective scaling)
      std::vector<size_t> pick(s - 1, 0);
      bool done_tuples = false;
      while (!done_tuples) {
        if (!b.tick()) return std::nullopt;
        std::vector<FieldElement> v = zero;
        for (int k = 0; k < s - 1; k++) v[idx[k]] = pool[pick[k]];
        v[idx[s - 1]] = FieldElement::one(t);
        if (q.evaluate(v).is_zero()) return v;
        // increment tuple
        int k = 0;
        while (k < s - 1) {
          if (++pick[k] < pool.size()) break;
          pick[k] = 0;
          k++;
        }
        if (k == s - 1) done_tuples = true;
      }
      // next subset
      int k = s - 1;
      while (k >= 0 && idx[k] == n - s + k) k--;
      if (k < 0) break;
      idx[k]++;
      for (int m = k + 1; m < s; m++) idx[m] = idx[m - 1] + 1;
    }
  }
  return std::nullopt;
}

ChainPtr chain_of(const Verdict& v) {
  if (!v.cert) return leaf("none");
  if (v.cert->kind == Certificate::Kind::IsotropyWitness) {
    auto n = std::make_shared<ChainNode>();
    n->rule = "witness";
    n->witness = v.cert->vector;
    return n;
  }
  if (v.cert->kind == Certificate::Kind::CompletionChain) return v.cert->chain;
  return leaf("opaque");
}

Verdict isotropy(const QuadForm& q, Budget& b) {
  const TowerPtr& t = q.tower();
  if (q.dim() == 0) return Verdict::refuted(chain_cert(leaf("dim0")), b.spent);
  if (q.dim() == 1) return Verdict::refuted(chain_cert(leaf("dim1")), b.spent);

  Verdict pairs = try_pairs(q, b);
  if (pairs.is(Status::Proved)) return pairs;
  if (!b.ok()) return Verdict::unknown("budget exhausted", b.spent);

  if (q.dim() == 2)
    return Verdict::refuted(chain_cert(leaf("dim2", "-e1*e2 is a non-square")), b.spent);

  switch (t->kind()) {
    case FieldTower::Kind::Prime:
      return prime_field_isotropy(q, b);
    case FieldTower::Kind::Rationals: {
      BaseDecision d = decide_qq_isotropy(q);
      if (d.status == Status::Proved) {
        if (d.witness) return Verdict::proved(witness_cert(*d.witness), b.spent);
        return Verdict::proved(chain_cert(leaf("qq-hasse-minkowski", d.transcript)), b.spent,
                               "isotropic over QQ; no witness within search bounds");
      }
      return Verdict::refuted(chain_cert(leaf("qq-hasse-minkowski", d.transcript)), b.spent);
    }
    case FieldTower::Kind::RatFun: {
      if (tower_is_one_var_gff(t)) {
        BaseDecision d = decide_gff_isotropy(q);
        if (d.status == Status::Proved) {
          if (auto w = search_witness(q, b)) return Verdict::proved(witness_cert(*w), b.spent);
          return Verdict::proved(chain_cert(leaf("gff-hasse-minkowski", d.transcript)), b.spent,
                                 "isotropic over Fp(x); no witness within search bounds");
        }
        return Verdict::refuted(chain_cert(leaf("gff-hasse-minkowski", d.transcript)), b.spent);
      }
      if (auto w = search_witness(q, b)) return Verdict::proved(witness_cert(*w), b.spent);
      return Verdict::unknown("no complete decider for this rational function field", b.spent);
    }
    case FieldTower::Kind::Laurent: {
      // entries free of the Laurent variable: decide over the base field and
      // lift witnesses verbatim (they stay exact)
      int col = t->var_index(t->added_vars()[0]);
      bool xfree = true;
      for (int i = 0; i < q.dim() && xfree; i++) {
        const auto& e = q.entry(i);
        if (e.c0().num().uses_var(col) || e.c0().den().uses_var(col) ||
            e.c1().num().uses_var(col) || e.c1().den().uses_var(col))
          xfree = false;
      }
      if (xfree && !t->base()->has_quadext()) {
        std::vector<FieldElement> down;
        bool ok = true;
        try {
          for (int i = 0; i < q.dim(); i++) down.push_back(q.entry(i).coerce(t->base()));
        } catch (const error&) {
          ok = false;
        }
        if (ok) {
          QuadForm qb(t->base(), down);
          Verdict v = isotropy(qb, b);
          if (v.is(Status::Proved) && v.cert &&
              v.cert->kind == Certificate::Kind::IsotropyWitness) {
            std::vector<FieldElement> up;
            for (const auto& x : v.cert->vector) up.push_back(x.coerce(t));
            return Verdict::proved(witness_cert(std::move(up)), b.spent);
          }
          auto n = std::make_shared<ChainNode>();
          n->rule = "descend";
          n->place = t->added_vars()[0];
          n->children = {chain_of(v)};
          if (v.is(Status::Proved)) return Verdict::proved(chain_cert(n), b.spent);
          if (v.is(Status::Refuted)) return Verdict::refuted(chain_cert(n), b.spent);
          return v;
        }
      }
      PlaceSpec pl = PlaceSpec::tower_variable(t->added_vars()[0]);
      auto [qu, qo] = springer_split(q, pl);
      Verdict vu = isotropy(qu, b);
      if (vu.is(Status::Proved)) {
        auto n = std::make_shared<ChainNode>();
        n->rule = "springer";
        n->place = pl.str();
        n->place_spec = pl;
        n->iso_part = 0;
        n->children = {chain_of(vu)};
        return Verdict::proved(chain_cert(n), b.spent);
      }
      Verdict vo = isotropy(qo, b);
      if (vo.is(Status::Proved)) {
        auto n = std::make_shared<ChainNode>();
        n->rule = "springer";
        n->place = pl.str();
        n->place_spec = pl;
        n->iso_part = 1;
        n->children = {chain_of(vo)};
        return Verdict::proved(chain_cert(n), b.spent);
      }
      if (vu.is(Status::Refuted) && vo.is(Status::Refuted)) {
        auto n = std::make_shared<ChainNode>();
        n->rule = "springer";
        n->place = pl.str();
        n->place_spec = pl;
        n->children = {chain_of(vu), chain_of(vo)};
        return Verdict::refuted(chain_cert(n), b.spent);
      }
      return Verdict::unknown("springer recursion undecided: " + vu.note + " / " + vo.note,
                              b.spent);
    }
    case FieldTower::Kind::QuadExt: {
      if (auto w = search_witness(q, b)) return Verdict::proved(witness_cert(*w), b.spent);
      return Verdict::unknown("no general decider over a quadratic extension", b.spent);
    }
  }
  return Verdict::unknown("unreachable", b.spent);
}

Representation represents(const QuadForm& q, const FieldElement& d, Budget& b) {
  if (d.is_zero()) fail(errc::zero_element, "represents: d = 0");
  QuadForm ext = q.orth(QuadForm(q.tower(), {-d}));
  Verdict v = isotropy(ext, b);
  Representation rep;
  rep.verdict = v;
  if (!v.is(Status::Proved) || !v.cert || v.cert->kind != Certificate::Kind::IsotropyWitness)
    return rep;
  std::vector<FieldElement> w = v.cert->vector;
  FieldElement last = w.back();
  w.pop_back();
  if (!last.is_zero()) {
    for (auto& x : w) x = x / last;
    rep.vector = w;
    return rep;
  }
  // witness lies inside q: q is isotropic, hence universal; fix it up with a
  // unit vector that pairs nontrivially with the witness
  int k = -1;
  for (int i = 0; i < q.dim(); i++)
    if (!w[i].is_zero()) {
      k = i;
      break;
    }
  FieldElement beta = q.entry(k) * w[k];  // B(w, e_k)
  FieldElement qk = q.entry(k);
  FieldElement tscale = (d - qk) / (beta + beta);
  std::vector<FieldElement> x(q.dim(), FieldElement::zero(q.tower()));
  for (int i = 0; i < q.dim(); i++) x[i] = w[i] * tscale;
  x[k] = x[k] + FieldElement::one(q.tower());
  rep.vector = x;
  return rep;
}

bool replay_chain(const QuadForm& q, const ChainNode& node, Status want) {
  try {
    if (node.rule == "witness") {
      if (want != Status::Proved) return false;
      if (node.witness.size() != (size_t)q.dim()) return false;
      bool nonzero = false;
      std::vector<FieldElement> w;
      for (const auto& e : node.witness) {
        w.push_back(e.tower()->same(*q.tower()) ? e : e.coerce(q.tower()));
        if (!w.back().is_zero()) nonzero = true;
      }
      return nonzero && q.evaluate(w).is_zero();
    }
    if (node.rule == "square-transcript") {
      if (want != Status::Proved || node.idx.size() != 2) return false;
      FieldElement z = -(q.entry(node.idx[1]) / q.entry(node.idx[0]));
      return z.is_square();
    }
    if (node.rule == "dim0") return want == Status::Refuted && q.dim() == 0;
    if (node.rule == "dim1") return want == Status::Refuted && q.dim() == 1;
    if (node.rule == "dim2") {
      if (want != Status::Refuted || q.dim() != 2) return false;
      return !(-(q.entry(0) * q.entry(1))).is_square();
    }
    if (node.rule == "prime-field") {
      if (q.tower()->kind() != FieldTower::Kind::Prime) return false;
      return want == Status::Proved ? q.dim() >= 3 : q.dim() <= 2;
    }
    if (node.rule == "qq-hasse-minkowski")
      return decide_qq_isotropy(q).status == want;
    if (node.rule == "gff-hasse-minkowski")
      return decide_gff_isotropy(q).status == want;
    if (node.rule == "descend") {
      if (node.children.size() != 1) return false;
      if (q.tower()->kind() != FieldTower::Kind::Laurent) return false;
      std::vector<FieldElement> down;
      for (int i = 0; i < q.dim(); i++) down.push_back(q.entry(i).coerce(q.tower()->base()));
      return replay_chain(QuadForm(q.tower()->base(), down), *node.children[0], want);
    }
    if (node.rule == "springer") {
      auto [qu, qo] = springer_split(q, node.place_spec);
      if (want == Status::Proved) {
        if (node.children.size() != 1 || node.iso_part < 0) return false;
        return replay_chain(node.iso_part == 0 ? qu : qo, *node.children[0], Status::Proved);
      }
      if (node.children.size() != 2) return false;
      return replay_chain(qu, *node.children[0], Status::Refuted) &&
             replay_chain(qo, *node.children[1], Status::Refuted);
    }
  } catch (const error&) {
    return false;
  }
  return false;
}

bool replay_isotropy(const QuadForm& q, const Certificate& cert, Status want) {
  try {
    if (cert.kind == Certificate::Kind::IsotropyWitness) {
      if (want != Status::Proved) return false;
      if (cert.vector.size() != (size_t)q.dim()) return false;
      bool nonzero = false;
      std::vector<FieldElement> w;
      for (const auto& e : cert.vector) {
        w.push_back(e.tower()->same(*q.tower()) ? e : e.coerce(q.tower()));
        if (!w.back().is_zero()) nonzero = true;
      }
      return nonzero && q.evaluate(w).is_zero();
    }
    if (cert.kind == Certificate::Kind::CompletionChain && cert.chain)
      return replay_chain(q, *cert.chain, want);
  } catch (const error&) {
    return false;
  }
  return false;
}

}  // namespace qconic

#include "conic.hpp"

#include <sstream>

namespace qconic {

TowerPtr conic_tower(const TowerPtr& f, const FieldElement& a, const FieldElement& b,
                     const std::string& param) {
  std::string s = param;
  if (f->var_index(s) >= 0) {
    int k = 0;
    while (f->var_index(s + std::to_string(k)) >= 0) k++;
    s += std::to_string(k);
  }
  TowerPtr ft = FieldTower::ratfun(f, {s});
  FieldElement sv = FieldElement::var(ft, s);
  FieldElement rad = a.coerce(ft) * sv * sv + b.coerce(ft);
  return make_quadext(ft, rad);
}

ConicHyperbolic hyperbolic_over_conic(const QuadForm& q, const FieldElement& a,
                                      const FieldElement& b, Budget& budget) {
  ConicHyperbolic out{Verdict::unknown(), QuadForm(q.tower(), {}), {}};
  if (q.dim() == 0) {
    out.verdict = Verdict::proved(nullptr, budget.spent, "zero-dimensional form");
    return out;
  }
  out.wd = witt_decompose(q, budget);
  const QuadForm& ker = out.wd.kernel;
  if (ker.dim() == 0) {
    out.verdict = Verdict::proved(out.wd.trace(q), budget.spent, "hyperbolic over the base");
    return out;
  }
  PfisterMultiple pm = multiple_of_pfister(ker, a, b, budget);
  if (pm.verdict.is(Status::Proved)) {
    auto c = std::make_shared<Certificate>();
    c->kind = Certificate::Kind::Composite;
    c->label = "witt-kernel + pfister-multiple";
    c->parts = {out.wd.trace(q), pm.verdict.cert};
    out.verdict = Verdict::proved(c, budget.spent);
    out.q0 = pm.q0;
    return out;
  }
  if (pm.verdict.is(Status::Refuted)) {
    if (out.wd.kernel_verdict.is(Status::Refuted)) {
      auto c = std::make_shared<Certificate>();
      c->kind = Certificate::Kind::Composite;
      c->label = "anisotropic kernel not a pfister multiple";
      if (out.wd.kernel_verdict.cert) c->parts = {out.wd.kernel_verdict.cert};
      out.verdict = Verdict::refuted(c, budget.spent, pm.verdict.note);
      return out;
    }
    out.verdict = Verdict::unknown("kernel not certified anisotropic", budget.spent);
    return out;
  }
  out.verdict = pm.verdict;
  return out;
}

namespace {

// try to exhibit a lambda<1,-a,-b> block on a coordinate triple
std::optional<std::vector<FieldElement>> conic_point_witness(const QuadForm& q,
                                                             const FieldElement& a,
                                                             const FieldElement& b,
                                                             const TowerPtr& fq, Budget& budget) {
  const TowerPtr& t = q.tower();
  FieldElement rad = FieldElement::radical(fq);
  std::string param;
  // the conic parameter is the single ratfun variable added under the quadext
  param = fq->base()->added_vars()[0];
  FieldElement sv = FieldElement::var(fq, param);
  for (int i = 0; i < q.dim(); i++)
    for (int j = 0; j < q.dim(); j++)
      for (int k = 0; k < q.dim(); k++) {
        if (i == j || i == k || j == k) continue;
        if (!budget.tick()) return std::nullopt;
        FieldElement n2 = -(q.entry(j) / (q.entry(i) * a));
        FieldElement r2 = -(q.entry(k) / (q.entry(i) * b));
        auto n = n2.sqrt();
        if (!n) continue;
        auto r = r2.sqrt();
        if (!r) continue;
        std::vector<FieldElement> w(q.dim(), FieldElement::zero(fq));
        w[i] = rad;
        w[j] = sv / n->coerce(fq);
        w[k] = FieldElement::one(fq) / r->coerce(fq);
        if (q.coerce(fq).evaluate(w).is_zero()) return w;
      }
  (void)t;
  return std::nullopt;
}

}  // namespace

Verdict isotropic_over_conic(const QuadForm& q, const FieldElement& a, const FieldElement& b,
                             Budget& budget, const Certificate* witness) {
  TowerPtr fq = conic_tower(q.tower(), a, b);
  QuadForm qfq = q.coerce(fq);
  if (witness) {
    if (witness->kind != Certificate::Kind::IsotropyWitness)
      fail(errc::invalid_witness, "expected an isotropy witness certificate");
    if (!replay_isotropy(qfq, *witness, Status::Proved))
      fail(errc::invalid_witness, "witness does not vanish over F_Q");
    return Verdict::proved(std::make_shared<Certificate>(*witness), budget.spent,
                           "supplied witness verified over F_Q");
  }
  if (auto w = conic_point_witness(q, a, b, fq, budget)) {
    auto c = std::make_shared<Certificate>();
    c->kind = Certificate::Kind::IsotropyWitness;
    c->vector = *w;
    return Verdict::proved(c, budget.spent, "conic-point witness");
  }
  ConicHyperbolic ch = hyperbolic_over_conic(q, a, b, budget);
  if (ch.verdict.is(Status::Proved))
    return Verdict::proved(ch.verdict.cert, budget.spent, "hyperbolic over F_Q");
  // a subform hyperbolic over F_Q also suffices
  if (q.dim() >= 3 && q.dim() <= 9) {
    for (int drop = 0; drop < q.dim(); drop++) {
      if ((q.dim() - 1) % 2 != 0) break;  // pfister multiples are even-dimensional
      std::vector<int> idx;
      for (int i = 0; i < q.dim(); i++)
        if (i != drop) idx.push_back(i);
      ConicHyperbolic sub = hyperbolic_over_conic(q.subform(idx), a, b, budget);
      if (sub.verdict.is(Status::Proved))
        return Verdict::proved(sub.verdict.cert, budget.spent, "subform hyperbolic over F_Q");
    }
  }
  // refutation through the conic field itself (complete in low dimension)
  Verdict direct = isotropy(qfq, budget);
  if (direct.is(Status::Refuted))
    return Verdict::refuted(direct.cert, budget.spent, "anisotropic over F_Q");
  if (direct.is(Status::Proved)) return Verdict::proved(direct.cert, budget.spent);
  return Verdict::unknown("no witness found and no refutation over F_Q", budget.spent);
}

std::optional<std::vector<std::array<std::vector<FieldElement>, 2>>> split_over_conic(
    const QuadForm& q_over_fq, Budget& budget) {
  WittDecomposition wd = witt_decompose(q_over_fq, budget);
  if (wd.index * 2 != q_over_fq.dim()) return std::nullopt;
  return wd.pairs;
}

CommonValue common_value_pair(const QuadForm& q1, const QuadForm& q2, const TowerPtr& target,
                              Budget& budget) {
  CommonValue out{Verdict::unknown(), FieldElement(), {}, {}};
  QuadForm f = q1.tower()->same(*target) ? q1 : q1.coerce(target);
  QuadForm g = q2.tower()->same(*target) ? q2 : q2.coerce(target);
  Verdict a1 = isotropy(f, budget);
  Verdict a2 = isotropy(g, budget);
  if (a1.is(Status::Proved) || a2.is(Status::Proved))
    fail(errc::precondition, "common_value_pair: an input form is isotropic over the target");
  if (!a1.is(Status::Refuted) || !a2.is(Status::Refuted)) {
    out.verdict = Verdict::unknown("anisotropy of the inputs not certified", budget.spent);
    return out;
  }
  QuadForm diff = f.orth(g.negated());
  Verdict v = isotropy(diff, budget);
  if (v.is(Status::Refuted)) {
    out.verdict = Verdict::refuted(v.cert, budget.spent);
    return out;
  }
  if (v.is(Status::Proved) && v.cert && v.cert->kind == Certificate::Kind::IsotropyWitness) {
    std::vector<FieldElement> x(v.cert->vector.begin(), v.cert->vector.begin() + f.dim());
    std::vector<FieldElement> y(v.cert->vector.begin() + f.dim(), v.cert->vector.end());
    FieldElement d = f.evaluate(x);
    if (!d.is_zero()) {
      out.verdict = Verdict::proved(v.cert, budget.spent);
      out.value = d;
      out.wit1 = x;
      out.wit2 = y;
      return out;
    }
  }
  out.verdict = Verdict::unknown("no exact common-value witness", budget.spent);
  return out;
}

std::optional<std::vector<FieldElement>> represented_classes(const QuadForm& q) {
  const TowerPtr& t = q.tower();
  if (q.dim() == 0) return std::vector<FieldElement>{};
  if (q.dim() == 1) return std::vector<FieldElement>{normalize_square_class(q.entry(0)).canonical};
  if (q.dim() != 2) return std::nullopt;
  Budget small(2000);
  Verdict iso = isotropy(q, small);
  if (!iso.is(Status::Refuted)) return std::nullopt;  // universal or undecided
  if (t->kind() != FieldTower::Kind::Laurent) return std::nullopt;
  PlaceSpec pl = PlaceSpec::tower_variable(t->added_vars()[0]);
  auto [unit, odd] = springer_split(q, pl);
  FieldElement x = FieldElement::var(t, t->added_vars()[0]);
  std::vector<FieldElement> out;
  auto lift_in = [&](const QuadForm& part, bool twist) -> bool {
    if (part.dim() == 0) return true;
    auto sub = represented_classes(part);
    if (!sub) return false;
    for (const auto& c : *sub) {
      FieldElement lifted = c.coerce(t);
      out.push_back(normalize_square_class(twist ? lifted * x : lifted).canonical);
    }
    return true;
  };
  if (!lift_in(unit, false)) return std::nullopt;
  if (!lift_in(odd, true)) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// the (decqf) subform criterion

namespace {

struct CompletionDesc {
  std::string name;
  TowerPtr tower;
  std::optional<PlaceSpec> place;  // substitution completions need a map
  std::string top_var;             // variable carrying the top valuation
};

QuadForm move_form(const QuadForm& q, const CompletionDesc& cd) {
  if (!cd.place) return q.coerce(cd.tower);
  std::vector<FieldElement> es;
  for (const auto& e : q.entries()) es.push_back(into_completion(e, *cd.place, cd.tower));
  return QuadForm(cd.tower, std::move(es));
}

std::vector<CompletionDesc> completion_catalog(const TowerPtr& f1) {
  std::vector<CompletionDesc> cat;
  const auto& vars = f1->vars();
  // single completions F0(rest)((v))
  for (const auto& v : vars) {
    CompletionDesc cd;
    cd.name = "completion at " + v;
    cd.place = PlaceSpec::tower_variable(v);
    cd.tower = completion_tower(f1, *cd.place);
    cd.top_var = v;
    cat.push_back(cd);
  }
  // fully iterated F0((x))((y)) embeddings (plain coercion)
  if (vars.size() == 2) {
    for (int swap = 0; swap < 2; swap++) {
      std::string x = vars[swap], y = vars[1 - swap];
      CompletionDesc cd;
      cd.name = "F0((" + x + "))((" + y + "))";
      TowerPtr base = f1;
      while (base->base()) base = base->base();
      cd.tower = FieldTower::laurent(FieldTower::laurent(base, x), y);
      cd.top_var = y;
      cat.push_back(cd);
    }
    // completion at x+y via the substitution y := s - x
    for (int swap = 0; swap < 2; swap++) {
      std::string x = vars[swap], y = vars[1 - swap];
      CompletionDesc cd;
      cd.name = "completion at " + x + "+" + y;
      cd.place = PlaceSpec::substitution(y, "s", "s - " + x);
      cd.tower = completion_tower(f1, *cd.place);
      cd.top_var = "s";
      cat.push_back(cd);
    }
  }
  return cat;
}

long var_parity(const FieldElement& e, const std::string& v) {
  int col = e.tower()->var_index(v);
  if (col < 0) return 0;
  return (((e.c0().valuation(col)) % 2) + 2) % 2;
}

std::vector<FieldElement> intersect_classes(const std::vector<FieldElement>& A,
                                            const std::vector<FieldElement>& B) {
  std::vector<FieldElement> out;
  for (const auto& a : A)
    for (const auto& b : B)
      if (a == b) out.push_back(a);
  return out;
}

}  // namespace

TernaryContainment contains_similar_ternary(const QuadForm& phi, const FieldElement& a,
                                            const FieldElement& b, Budget& budget) {
  const TowerPtr& F = phi.tower();
  TernaryContainment out{Verdict::unknown(), FieldElement(), {}, {}};

  // the tower must be F1((a))((b)) with a, b the two Laurent variables
  if (F->kind() != FieldTower::Kind::Laurent || F->base()->kind() != FieldTower::Kind::Laurent)
    fail(errc::decomposition_mismatch, "tower is not F1((a))((b))");
  std::string bvar = F->added_vars()[0];
  std::string avar = F->base()->added_vars()[0];
  FieldElement av = FieldElement::var(F, avar), bv = FieldElement::var(F, bvar);
  if (!(normalize_square_class(a.coerce(F) / av).canonical.is_one()) ||
      !(normalize_square_class(b.coerce(F) / bv).canonical.is_one()))
    fail(errc::decomposition_mismatch, "conic slots are not the Laurent uniformizers");
  TowerPtr F1 = F->base()->base();

  auto [U, O] = springer_split(phi, PlaceSpec::tower_variable(bvar));
  auto [alpha, mbeta] = springer_split(U, PlaceSpec::tower_variable(avar));
  auto [mgamma, delta] = springer_split(O, PlaceSpec::tower_variable(avar));
  QuadForm beta = mbeta.negated(), gamma = mgamma.negated();
  out.parts = {alpha, beta, gamma, delta};
  std::array<const QuadForm*, 4> part{&alpha, &beta, &gamma, &delta};
  if (alpha.dim() + beta.dim() + gamma.dim() + delta.dim() != phi.dim())
    fail(errc::decomposition_mismatch, "(decqf) split lost dimensions");

  // Proved route: a common represented value of one of the four triples
  std::array<std::array<int, 3>, 4> triples = {{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  for (const auto& tri : triples) {
    std::vector<FieldElement> cands;
    for (int ti : tri)
      for (const auto& e : part[ti]->entries()) cands.push_back(e);
    for (const auto& lam : cands) {
      bool all = true;
      for (int ti : tri) {
        Representation r = represents(*part[ti], lam, budget);
        if (!r.verdict.is(Status::Proved) || r.vector.empty()) {
          all = false;
          break;
        }
      }
      if (all) {
        out.verdict = Verdict::proved(nullptr, budget.spent, "common value of a triple");
        out.lambda = lam;
        return out;
      }
    }
  }

  std::vector<CompletionDesc> cat = completion_catalog(F1);
  auto exclude_triple = [&](const std::array<int, 3>& tri,
                            TripleExclusion& ex) -> bool {
    // (1) a pair refuted at some completion
    for (int x = 0; x < 3; x++)
      for (int y = x + 1; y < 3; y++) {
        for (const auto& cd : cat) {
          try {
            QuadForm f = move_form(*part[tri[x]], cd);
            QuadForm g = move_form(*part[tri[y]], cd);
            CommonValue cv = common_value_pair(f, g, cd.tower, budget);
            if (cv.verdict.is(Status::Refuted)) {
              ex.triple = tri;
              ex.kind = "pair-refuted";
              ex.pi = tri[x];
              ex.pj = tri[y];
              ex.completion1 = cd.name;
              ex.pair_cert = cv.verdict.cert;
              return true;
            }
          } catch (const error&) {
            continue;
          }
        }
      }
    // (2) parity obstruction: the pair's common classes all have odd
    // valuation at a completion, the third form only represents even ones at
    // a completion with the same underlying valuation
    for (int x = 0; x < 3; x++)
      for (int y = x + 1; y < 3; y++) {
        int z = 3 - x - y;
        for (const auto& cd1 : cat) {
          std::optional<std::vector<FieldElement>> r1, r2;
          try {
            r1 = represented_classes(move_form(*part[tri[x]], cd1));
            r2 = represented_classes(move_form(*part[tri[y]], cd1));
          } catch (const error&) {
            continue;
          }
          if (!r1 || !r2) continue;
          auto common = intersect_classes(*r1, *r2);
          if (common.empty()) {
            ex.triple = tri;
            ex.kind = "pair-refuted";
            ex.pi = tri[x];
            ex.pj = tri[y];
            ex.completion1 = cd1.name + " (empty class intersection)";
            return true;
          }
          bool all_odd = true;
          for (const auto& c : common)
            if (var_parity(c, cd1.top_var) == 0) all_odd = false;
          if (!all_odd) continue;
          // substitution completions change the underlying valuation, so the
          // parity transfer needs the same top variable of F1
          if (F1->var_index(cd1.top_var) < 0) continue;
          for (const auto& cd2 : cat) {
            if (cd2.top_var != cd1.top_var) continue;
            std::optional<std::vector<FieldElement>> r3;
            try {
              r3 = represented_classes(move_form(*part[tri[z]], cd2));
            } catch (const error&) {
              continue;
            }
            if (!r3) continue;
            bool all_even = true;
            for (const auto& c : *r3)
              if (var_parity(c, cd2.top_var) == 1) all_even = false;
            if (!all_even) continue;
            ex.triple = tri;
            ex.kind = "parity-obstruction";
            ex.pi = tri[x];
            ex.pj = tri[y];
            ex.third = tri[z];
            ex.completion1 = cd1.name;
            ex.completion2 = cd2.name;
            ex.shared_var = cd1.top_var;
            for (const auto& c : common) ex.common_classes.push_back(c.str());
            for (const auto& c : *r3) ex.third_classes.push_back(c.str());
            return true;
          }
        }
      }
    return false;
  };

  bool all_excluded = true;
  for (const auto& tri : triples) {
    TripleExclusion ex;
    if (exclude_triple(tri, ex)) {
      out.exclusions.push_back(std::move(ex));
    } else {
      all_excluded = false;
      break;
    }
  }
  if (all_excluded) {
    out.verdict = Verdict::refuted(nullptr, budget.spent, "all four triples excluded");
    return out;
  }
  out.verdict = Verdict::unknown("triples neither realized nor excluded", budget.spent);
  return out;
}

}  // namespace qconic

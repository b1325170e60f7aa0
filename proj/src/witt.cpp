#include "witt.hpp"

namespace qconic {

namespace {

using Vec = std::vector<FieldElement>;

Vec scale_vec(const Vec& v, const FieldElement& c) {
  Vec r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(x * c);
  return r;
}

Vec add_vec(const Vec& a, const Vec& b) {
  Vec r;
  r.reserve(a.size());
  for (size_t i = 0; i < a.size(); i++) r.push_back(a[i] + b[i]);
  return r;
}

bool is_zero_vec(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace

WittDecomposition witt_decompose(const QuadForm& q, Budget& b, int stop_at_index) {
  const TowerPtr& t = q.tower();
  FieldElement one = FieldElement::one(t), two = FieldElement::integer(t, 2);

  // current orthogonal basis (original coordinates) and its diagonal values
  std::vector<Vec> basis;
  std::vector<FieldElement> diag;
  for (int i = 0; i < q.dim(); i++) {
    Vec e(q.dim(), FieldElement::zero(t));
    e[i] = one;
    basis.push_back(std::move(e));
    diag.push_back(q.entry(i));
  }

  WittDecomposition out;
  while (!diag.empty()) {
    if (stop_at_index >= 0 && out.index >= stop_at_index) {
      out.kernel_verdict = Verdict::unknown("stopped at requested index", b.spent);
      break;
    }
    QuadForm cur(t, diag);
    Verdict v = isotropy(cur, b);
    if (!v.is(Status::Proved)) {
      out.kernel_verdict = v;
      break;
    }
    if (!v.cert || v.cert->kind != Certificate::Kind::IsotropyWitness) {
      out.kernel_verdict =
          Verdict::unknown("isotropic without a rational witness; kernel not minimal", b.spent);
      break;
    }
    const Vec& wc = v.cert->vector;  // coordinates w.r.t. the current basis
    // translate into original coordinates
    Vec h1(q.dim(), FieldElement::zero(t));
    for (size_t i = 0; i < diag.size(); i++)
      if (!wc[i].is_zero()) h1 = add_vec(h1, scale_vec(basis[i], wc[i]));
    // partner: basis vector pairing nontrivially with h1
    int i0 = -1;
    for (size_t i = 0; i < diag.size(); i++)
      if (!wc[i].is_zero()) {
        i0 = (int)i;
        break;
      }
    FieldElement beta = diag[i0] * wc[i0];  // B(h1, basis[i0])
    Vec w = scale_vec(basis[i0], beta.inv());
    // h2 = w - (q(w)/2) h1 so that q(h2) = 0, B(h1,h2) = 1
    FieldElement qw = q.evaluate(w);
    Vec h2 = add_vec(w, scale_vec(h1, -(qw / two)));

    // project the current basis off the plane and re-diagonalize
    std::vector<Vec> proj;
    for (size_t i = 0; i < diag.size(); i++) {
      FieldElement c1 = q.bilinear(basis[i], h2);
      FieldElement c2 = q.bilinear(basis[i], h1);
      Vec u = add_vec(basis[i], add_vec(scale_vec(h1, -c1), scale_vec(h2, -c2)));
      if (!is_zero_vec(u)) proj.push_back(std::move(u));
    }
    std::vector<Vec> nbasis;
    std::vector<FieldElement> ndiag;
    size_t want = diag.size() - 2;
    while (nbasis.size() < want) {
      int pivot = -1;
      for (size_t i = 0; i < proj.size(); i++)
        if (!q.evaluate(proj[i]).is_zero()) {
          pivot = (int)i;
          break;
        }
      if (pivot < 0) {
        // all values zero: merge a pairing couple to produce a pivot (the
        // complement is regular, so one exists while rank remains)
        bool fixed = false;
        for (size_t i = 0; i + 1 < proj.size() && !fixed; i++)
          for (size_t j = i + 1; j < proj.size() && !fixed; j++) {
            if (q.bilinear(proj[i], proj[j]).is_zero()) continue;
            proj[i] = add_vec(proj[i], proj[j]);
            fixed = true;
          }
        if (!fixed) fail(errc::precondition, "witt split lost rank (internal)");
        continue;
      }
      Vec piv = proj[pivot];
      FieldElement qp = q.evaluate(piv);
      std::vector<Vec> next;
      for (size_t i = 0; i < proj.size(); i++) {
        if ((int)i == pivot) continue;
        FieldElement c = q.bilinear(proj[i], piv) / qp;
        Vec u = add_vec(proj[i], scale_vec(piv, -c));
        if (!is_zero_vec(u)) next.push_back(std::move(u));
      }
      nbasis.push_back(std::move(piv));
      ndiag.push_back(qp);
      proj = std::move(next);
    }
    out.pairs.push_back({h1, h2});
    out.index++;
    basis = std::move(nbasis);
    diag = std::move(ndiag);
  }

  out.kernel = QuadForm(t, diag.empty() ? std::vector<FieldElement>{} : diag);
  out.kernel_basis = basis;
  out.budget_spent = b.spent;
  if (diag.empty() && out.kernel_verdict.status == Status::Unknown)
    out.kernel_verdict = Verdict::refuted(nullptr, b.spent, "empty kernel");
  return out;
}

CertPtr WittDecomposition::trace(const QuadForm& original) const {
  auto c = std::make_shared<Certificate>();
  c->kind = Certificate::Kind::WittSplitTrace;
  c->witt_index = index;
  for (const auto& pr : pairs) {
    c->basis.push_back(pr[0]);
    c->basis.push_back(pr[1]);
  }
  for (const auto& kb : kernel_basis) c->basis.push_back(kb);
  for (const auto& e : kernel.entries()) c->kernel_entries.push_back(e);
  (void)original;
  return c;
}

bool replay_witt_trace(const QuadForm& q, const Certificate& cert) {
  if (cert.kind != Certificate::Kind::WittSplitTrace) return false;
  int m = cert.witt_index;
  if ((int)cert.basis.size() != 2 * m + (int)cert.kernel_entries.size()) return false;
  try {
    // hyperbolic pairs
    for (int k = 0; k < m; k++) {
      const auto& v = cert.basis[2 * k];
      const auto& w = cert.basis[2 * k + 1];
      if (is_zero_vec(v) || is_zero_vec(w)) return false;
      if (!q.evaluate(v).is_zero() || !q.evaluate(w).is_zero()) return false;
      if (q.bilinear(v, w).is_zero()) return false;
    }
    // kernel vectors realize the kernel entries and the whole basis is
    // orthogonal between blocks
    for (size_t i = 0; i < cert.kernel_entries.size(); i++) {
      const auto& u = cert.basis[2 * m + i];
      if (!(q.evaluate(u) == cert.kernel_entries[i])) return false;
    }
    for (size_t i = 0; i < cert.basis.size(); i++)
      for (size_t j = i + 1; j < cert.basis.size(); j++) {
        bool same_pair = (i / 2 == j / 2) && i < (size_t)(2 * m) && j < (size_t)(2 * m);
        if (same_pair) continue;
        if (!q.bilinear(cert.basis[i], cert.basis[j]).is_zero()) return false;
      }
  } catch (const error&) {
    return false;
  }
  return true;
}

bool apply_isometry_chain(const QuadForm& q1, const Certificate& chain, QuadForm& out) {
  if (chain.kind != Certificate::Kind::IsometryChain) return false;
  std::vector<FieldElement> cur = q1.entries();
  const TowerPtr& t = q1.tower();
  try {
    for (const auto& st : chain.steps) {
      if (st.i < 0 || st.j < 0 || st.i >= (int)cur.size() || st.j >= (int)cur.size() ||
          st.i == st.j)
        return false;
      const FieldElement &d1 = cur[st.i], &d2 = cur[st.j];
      const FieldElement &a = st.T[0], &bb = st.T[1], &c = st.T[2], &dd = st.T[3];
      FieldElement det = a * dd - bb * c;
      if (det.is_zero()) return false;
      // T^t diag(d1,d2) T must be diagonal
      FieldElement off = a * d1 * bb + c * d2 * dd;
      if (!off.is_zero()) return false;
      FieldElement n1 = a * a * d1 + c * c * d2;
      FieldElement n2 = bb * bb * d1 + dd * dd * d2;
      if (n1.is_zero() || n2.is_zero()) return false;
      cur[st.i] = n1;
      cur[st.j] = n2;
    }
    std::vector<FieldElement> fin = cur;
    if (!chain.perm.empty()) {
      if (chain.perm.size() != cur.size()) return false;
      std::vector<FieldElement> perm(cur.size(), FieldElement::zero(t));
      std::vector<bool> used(cur.size(), false);
      for (size_t i = 0; i < cur.size(); i++) {
        int tgt = chain.perm[i];
        if (tgt < 0 || tgt >= (int)cur.size() || used[tgt]) return false;
        used[tgt] = true;
        perm[tgt] = cur[i];
      }
      fin = std::move(perm);
    }
    out = QuadForm(t, fin);
    return true;
  } catch (const error&) {
    return false;
  }
}

Verdict isometric_via_chain(const QuadForm& q1, const QuadForm& q2, const Certificate& chain) {
  if (q1.dim() != q2.dim()) fail(errc::dimension_mismatch, "isometric: dimensions differ");
  QuadForm out;
  if (!apply_isometry_chain(q1, chain, out))
    return Verdict::unknown("isometry chain does not verify");
  if (!(out == q2)) return Verdict::unknown("isometry chain lands on a different form");
  auto c = std::make_shared<Certificate>(chain);
  return Verdict::proved(c);
}

Verdict isometric(const QuadForm& q1, const QuadForm& q2, Budget& b) {
  if (q1.dim() != q2.dim()) fail(errc::dimension_mismatch, "isometric: dimensions differ");
  if (q1.dim() == 0) return Verdict::proved(nullptr, b.spent, "empty forms");
  // invariant screen: discriminant
  SquareClass d1 = q1.discriminant(), d2 = q2.discriminant();
  if (!(d1.canonical == d2.canonical)) {
    auto c = std::make_shared<Certificate>();
    c->kind = Certificate::Kind::CompletionChain;
    auto n = std::make_shared<ChainNode>();
    n->rule = "disc-mismatch";
    n->transcript = d1.canonical.str() + " vs " + d2.canonical.str();
    c->chain = n;
    return Verdict::refuted(c, b.spent, "discriminant mismatch");
  }
  QuadForm diff = q1.orth(q2.negated());
  WittDecomposition wd = witt_decompose(diff, b);
  if (wd.index == q1.dim()) return Verdict::proved(wd.trace(diff), b.spent);
  if (wd.kernel_verdict.is(Status::Refuted) && wd.kernel.dim() > 0) {
    auto c = std::make_shared<Certificate>();
    c->kind = Certificate::Kind::CompletionChain;
    auto n = std::make_shared<ChainNode>();
    n->rule = "witt-kernel";
    n->transcript = "anisotropic kernel of dimension " + std::to_string(wd.kernel.dim()) +
                    " in q1 ⊥ -q2";
    n->children = {chain_of(wd.kernel_verdict)};
    c->chain = n;
    return Verdict::refuted(c, b.spent);
  }
  return Verdict::unknown("witt decomposition of the difference undecided", b.spent);
}

Verdict contains_subform(const QuadForm& q, const QuadForm& phi, Budget& b) {
  if (phi.dim() == 0) return Verdict::proved(nullptr, b.spent, "empty subform");
  if (phi.dim() > q.dim()) return Verdict::refuted(nullptr, b.spent, "dimension");
  QuadForm diff = q.orth(phi.negated());
  WittDecomposition wd = witt_decompose(diff, b);
  if (wd.index >= phi.dim()) return Verdict::proved(wd.trace(diff), b.spent);
  if (wd.kernel_verdict.is(Status::Refuted)) {
    auto c = std::make_shared<Certificate>();
    c->kind = Certificate::Kind::CompletionChain;
    auto n = std::make_shared<ChainNode>();
    n->rule = "witt-kernel";
    n->transcript = "certified witt index " + std::to_string(wd.index) + " < " +
                    std::to_string(phi.dim());
    n->children = {chain_of(wd.kernel_verdict)};
    c->chain = n;
    return Verdict::refuted(c, b.spent);
  }
  return Verdict::unknown("witt index not certified", b.spent);
}

PfisterMultiple multiple_of_pfister(const QuadForm& q, const FieldElement& a,
                                    const FieldElement& b, Budget& budget) {
  const TowerPtr& t = q.tower();
  QuadForm pf = QuadForm::pfister(t, {a.coerce(t), b.coerce(t)});
  PfisterMultiple out{Verdict::unknown(), QuadForm(t, {})};
  if (q.dim() % 4 != 0) {
    out.verdict = Verdict::refuted(nullptr, budget.spent, "dimension not divisible by 4");
    return out;
  }
  QuadForm cur = q;
  std::vector<FieldElement> q0;
  std::vector<CertPtr> traces;
  while (cur.dim() > 0) {
    bool advanced = false;
    bool all_refuted = true;
    for (int cand = 0; cand < cur.dim(); cand++) {
      FieldElement d = cur.entry(cand);
      QuadForm test = cur.orth(pf.scaled(d).negated());
      WittDecomposition wd = witt_decompose(test, budget, 4);
      if (wd.index >= 4) {
        // cur ~ d*pf ⊥ rho with rho = kernel ⊥ (index-4) hyperbolic planes
        std::vector<FieldElement> rho = wd.kernel.entries();
        for (int k = 4; k < wd.index; k++) {
          rho.push_back(FieldElement::one(t));
          rho.push_back(-FieldElement::one(t));
        }
        traces.push_back(wd.trace(test));
        q0.push_back(d);
        cur = QuadForm(t, rho);
        advanced = true;
        break;
      }
      if (!wd.kernel_verdict.is(Status::Refuted)) all_refuted = false;
    }
    if (advanced) continue;
    if (all_refuted) {
      out.verdict = Verdict::refuted(nullptr, budget.spent,
                                     "no entry spans a pfister multiple (certified indices)");
      return out;
    }
    out.verdict = Verdict::unknown("pfister peel undecided within budget", budget.spent);
    return out;
  }
  auto c = std::make_shared<Certificate>();
  c->kind = Certificate::Kind::Composite;
  c->label = "pfister-multiple";
  c->parts = traces;
  out.verdict = Verdict::proved(c, budget.spent);
  out.q0 = QuadForm(t, q0);
  return out;
}

}  // namespace qconic

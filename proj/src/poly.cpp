#include "poly.hpp"

#include <algorithm>
#include <sstream>

namespace qconic {

namespace {
// descending lex, column 0 most significant
int cmp_exp(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = 0; i < a.size(); i++) {
    if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
  }
  return 0;
}
}  // namespace

Poly Poly::constant(unsigned long p, int nvars, Coef c) {
  Poly r(p, nvars);
  if (!c.is_zero()) r.terms_.push_back({std::vector<int>(nvars, 0), std::move(c)});
  return r;
}

Poly Poly::variable(unsigned long p, int nvars, int v, int exp) {
  Poly r(p, nvars);
  std::vector<int> e(nvars, 0);
  e[v] = exp;
  r.terms_.push_back({std::move(e), Coef(p, 1)});
  return r;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  for (int x : terms_[0].e)
    if (x) return false;
  return true;
}

Coef Poly::constant_value() const {
  if (terms_.empty()) return Coef(p_, 0);
  return terms_[0].c;
}

void Poly::push(std::vector<int> e, Coef c) {
  if (!c.is_zero()) terms_.push_back({std::move(e), std::move(c)});
}

void Poly::sort_terms() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return cmp_exp(a.e, b.e) > 0; });
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r(p_, nv_);
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() && cmp_exp(terms_[i].e, o.terms_[j].e) > 0)) {
      r.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || cmp_exp(terms_[i].e, o.terms_[j].e) < 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Coef c = terms_[i].c + o.terms_[j].c;
      if (!c.is_zero()) r.terms_.push_back({terms_[i].e, std::move(c)});
      i++, j++;
    }
  }
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  std::map<std::vector<int>, Coef> acc;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      std::vector<int> e(nv_);
      for (int k = 0; k < nv_; k++) e[k] = a.e[k] + b.e[k];
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(std::move(e), a.c * b.c);
      else
        it->second = it->second + a.c * b.c;
    }
  Poly r(p_, nv_);
  for (auto& [e, c] : acc) r.push(e, c);
  r.sort_terms();
  return r;
}

Poly Poly::operator*(const Coef& c) const {
  if (c.is_zero()) return Poly(p_, nv_);
  Poly r(*this);
  for (auto& t : r.terms_) t.c = t.c * c;
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); i++)
    if (terms_[i].c != o.terms_[i].c || terms_[i].e != o.terms_[i].e) return false;
  return true;
}

long Poly::degree(int v) const {
  long d = 0;
  for (const auto& t : terms_) d = std::max(d, (long)t.e[v]);
  return d;
}

long Poly::total_degree() const {
  long d = 0;
  for (const auto& t : terms_) {
    long s = 0;
    for (int x : t.e) s += x;
    d = std::max(d, s);
  }
  return d;
}

const Coef& Poly::lead_coef() const {
  if (terms_.empty()) fail(errc::zero_element, "lead_coef of 0");
  return terms_[0].c;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return *this * lead_coef().inv();
}

Poly Poly::derivative(int v) const {
  Poly r(p_, nv_);
  for (const auto& t : terms_) {
    if (t.e[v] == 0) continue;
    Coef c = t.c * Coef(p_, t.e[v]);
    if (c.is_zero()) continue;
    std::vector<int> e = t.e;
    e[v]--;
    r.terms_.push_back({std::move(e), std::move(c)});
  }
  r.sort_terms();
  return r;
}

std::map<long, Poly> Poly::coeffs_in(int v) const {
  std::map<long, Poly> cs;
  for (const auto& t : terms_) {
    long d = t.e[v];
    auto it = cs.find(d);
    if (it == cs.end()) it = cs.emplace(d, Poly(p_, nv_)).first;
    std::vector<int> e = t.e;
    e[v] = 0;
    it->second.terms_.push_back({std::move(e), t.c});
  }
  for (auto& [d, c] : cs) c.sort_terms();
  return cs;
}

Poly Poly::assemble(unsigned long p, int nv, int v, const std::map<long, Poly>& cs) {
  Poly r(p, nv);
  for (const auto& [d, c] : cs)
    r = r + c * Poly::variable(p, nv, v, (int)d);
  return r;
}

std::optional<Poly> Poly::divexact(const Poly& d) const {
  if (d.is_zero()) fail(errc::division_by_zero, "divexact by 0");
  Poly rem(*this), q(p_, nv_);
  while (!rem.is_zero()) {
    const Term& lr = rem.terms_[0];
    const Term& ld = d.terms_[0];
    std::vector<int> e(nv_);
    for (int k = 0; k < nv_; k++) {
      e[k] = lr.e[k] - ld.e[k];
      if (e[k] < 0) return std::nullopt;
    }
    Poly m(p_, nv_);
    m.terms_.push_back({std::move(e), lr.c / ld.c});
    q = q + m;
    rem = rem - m * d;
  }
  return q;
}

Poly Poly::prem(const Poly& f, const Poly& g, int v) {
  long df = f.degree(v), dg = g.degree(v);
  if (dg == 0) return Poly(f.p_, f.nv_);
  auto gc = g.coeffs_in(v);
  Poly lg = gc.rbegin()->second;
  Poly r = f;
  long steps = df - dg + 1;
  while (!r.is_zero() && r.degree(v) >= dg && steps-- > 0) {
    auto rc = r.coeffs_in(v);
    long dr = rc.rbegin()->first;
    Poly lr = rc.rbegin()->second;
    // r = lg * r - lr * v^(dr-dg) * g
    r = lg * r - lr * Poly::variable(f.p_, f.nv_, v, (int)(dr - dg)) * g;
  }
  return r;
}

Poly Poly::content_in(int v) const {
  Poly c(p_, nv_);
  for (const auto& [d, coef] : coeffs_in(v)) c = gcd(c, coef);
  return c;
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant())
    return constant(a.p_, a.nv_, Coef(a.p_, 1));
  int v = -1;
  for (int k = 0; k < a.nv_; k++)
    if (a.uses_var(k) || b.uses_var(k)) {
      v = k;
      break;
    }
  if (!a.uses_var(v)) return gcd(a, b.content_in(v));
  if (!b.uses_var(v)) return gcd(a.content_in(v), b);

  Poly ca = a.content_in(v), cb = b.content_in(v);
  Poly d = gcd(ca, cb);
  Poly F = *a.divexact(ca), G = *b.divexact(cb);
  if (F.degree(v) < G.degree(v)) std::swap(F, G);
  while (true) {
    Poly R = prem(F, G, v);
    if (R.is_zero()) break;
    if (R.degree(v) == 0) return d.monic();
    Poly cr = R.content_in(v);
    F = G;
    G = *R.divexact(cr);
  }
  return (d * G).monic();
}

Poly::SquareFree Poly::squarefree() const {
  if (is_zero()) fail(errc::zero_element, "squarefree of 0");
  Poly one = constant(p_, nv_, Coef(p_, 1));
  if (is_constant()) return {one, one, constant_value()};

  int v = -1;
  for (int k = 0; k < nv_; k++)
    if (uses_var(k) && !derivative(k).is_zero()) {
      v = k;
      break;
    }
  if (v < 0) {
    // all partials vanish: every exponent divisible by p, take the p-th root
    Poly root(p_, nv_);
    for (const auto& t : terms_) {
      std::vector<int> e = t.e;
      for (auto& x : e) x /= (int)p_;
      root.terms_.push_back({std::move(e), t.c});
    }
    root.sort_terms();
    SquareFree sub = root.squarefree();
    // f = (c s r^2)^p = (c^p) s (s^((p-1)/2) r^p)^2
    Poly spow = one;
    for (unsigned long i = 0; i < (p_ - 1) / 2; i++) spow = spow * sub.s;
    Poly rpow = one;
    for (unsigned long i = 0; i < p_; i++) rpow = rpow * sub.r;
    Poly r2 = spow * rpow;
    Coef c = sub.c;
    for (unsigned long i = 1; i < p_; i++) c = c * sub.c;
    return {sub.s, r2, c};
  }

  Poly g = gcd(*this, derivative(v));
  if (g.is_constant()) {
    Poly s = monic();
    return {s, one, lead_coef()};
  }
  Poly w = *divexact(g);
  SquareFree sub = g.squarefree();
  Poly d = gcd(w, sub.s);
  Poly s = (*w.divexact(d)) * (*sub.s.divexact(d));
  Poly r = d * sub.r;
  // constant: f / (s r^2)
  Poly sr2 = s * r * r;
  Poly cpoly = *divexact(sr2);
  return {s.monic(), r.monic(), cpoly.constant_value() * s.lead_coef() * r.lead_coef() * r.lead_coef()};
}

Poly Poly::subst(int v, const Poly& value) const {
  auto cs = coeffs_in(v);
  // Horner from the top degree down
  Poly r(p_, nv_);
  long prev = -1;
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
    if (prev >= 0)
      for (long k = it->first; k < prev; k++) r = r * value;
    r = r + it->second;
    prev = it->first;
  }
  if (prev > 0)
    for (long k = 0; k < prev; k++) r = r * value;
  return r;
}

Poly Poly::remap(const std::vector<int>& map, int new_nv) const {
  Poly r(p_, new_nv);
  for (const auto& t : terms_) {
    std::vector<int> e(new_nv, 0);
    for (int k = 0; k < nv_; k++) {
      if (t.e[k] == 0) continue;
      if (map[k] < 0) fail(errc::place_mismatch, "variable eliminated but present");
      e[map[k]] = t.e[k];
    }
    r.terms_.push_back({std::move(e), t.c});
  }
  r.sort_terms();
  return r;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    std::string cs = t.c.str();
    bool neg = cs.size() && cs[0] == '-';
    if (first) {
      if (neg) os << "-", cs = cs.substr(1);
    } else {
      os << (neg ? " - " : " + ");
      if (neg) cs = cs.substr(1);
    }
    first = false;
    bool mono = false;
    std::ostringstream ms;
    for (int k = 0; k < nv_; k++) {
      if (t.e[k] == 0) continue;
      if (mono) ms << "*";
      ms << names[k];
      if (t.e[k] > 1) ms << "^" << t.e[k];
      mono = true;
    }
    if (!mono)
      os << cs;
    else if (cs == "1")
      os << ms.str();
    else
      os << cs << "*" << ms.str();
  }
  return os.str();
}

}  // namespace qconic

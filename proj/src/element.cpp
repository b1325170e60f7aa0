#include "element.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qconic {

namespace {

Poly pad_poly(const Poly& f, int nv) {
  if (f.nvars() == nv) return f;
  std::vector<int> map(f.nvars());
  for (int i = 0; i < f.nvars(); i++) map[i] = i;
  return f.remap(map, nv);
}

RatFunc pad_rf(const RatFunc& f, int nv) {
  return RatFunc(pad_poly(f.num(), nv), pad_poly(f.den(), nv));
}

// radicand of the tower's outermost quadext, widened to the full column set
RatFunc outer_radicand(const TowerPtr& t) {
  TowerPtr q = t->outer_quadext();
  if (!q) fail(errc::unsupported, "tower has no quadratic extension");
  return pad_rf(q->radicand_raw(), t->nvars());
}

}  // namespace

FieldElement::FieldElement(TowerPtr t, RatFunc c0)
    : tower_(std::move(t)), c0_(pad_rf(c0, tower_->nvars())),
      c1_(RatFunc(Poly(tower_->char_p(), tower_->nvars()))) {}

FieldElement::FieldElement(TowerPtr t, RatFunc c0, RatFunc c1)
    : tower_(std::move(t)), c0_(pad_rf(c0, tower_->nvars())), c1_(pad_rf(c1, tower_->nvars())) {
  if (!c1_.is_zero() && !tower_->has_quadext())
    fail(errc::unsupported, "radical part over a tower without quadratic extension");
}

FieldElement FieldElement::zero(const TowerPtr& t) {
  return FieldElement(t, RatFunc(Poly(t->char_p(), t->nvars())));
}
FieldElement FieldElement::one(const TowerPtr& t) { return integer(t, 1); }
FieldElement FieldElement::integer(const TowerPtr& t, long n) {
  return FieldElement(t, RatFunc(Poly::constant(t->char_p(), t->nvars(), n)));
}
FieldElement FieldElement::var(const TowerPtr& t, const std::string& name) {
  int i = t->var_index(name);
  if (i < 0) fail(errc::parse, "unknown variable '" + name + "' in " + t->str());
  return FieldElement(t, RatFunc::variable(t->char_p(), t->nvars(), i));
}
FieldElement FieldElement::radical(const TowerPtr& t) {
  if (!t->has_quadext()) fail(errc::unsupported, "rad outside a quadratic extension");
  Poly one = Poly::constant(t->char_p(), t->nvars(), 1);
  return FieldElement(t, RatFunc(Poly(t->char_p(), t->nvars())), RatFunc(one));
}

FieldElement FieldElement::operator-() const {
  FieldElement r(*this);
  r.c0_ = -r.c0_;
  r.c1_ = -r.c1_;
  return r;
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
  if (a.tower().get() == b.tower().get()) return;
  if (!a.tower()->same(*b.tower())) fail(errc::place_mismatch, "elements of different towers");
}
}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(*this, o);
  FieldElement r(*this);
  r.c0_ = c0_ + o.c0_;
  r.c1_ = c1_ + o.c1_;
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(*this, o);
  FieldElement r(*this);
  if (c1_.is_zero() && o.c1_.is_zero()) {
    r.c0_ = c0_ * o.c0_;
    r.c1_ = c1_;
    return r;
  }
  RatFunc w = outer_radicand(tower_);
  r.c0_ = c0_ * o.c0_ + c1_ * o.c1_ * w;
  r.c1_ = c0_ * o.c1_ + c1_ * o.c0_;
  return r;
}

FieldElement FieldElement::inv() const {
  if (is_zero()) fail(errc::division_by_zero, "inverse of zero element");
  FieldElement r(*this);
  if (c1_.is_zero()) {
    r.c0_ = c0_.inv();
    return r;
  }
  RatFunc w = outer_radicand(tower_);
  RatFunc n = c0_ * c0_ - c1_ * c1_ * w;
  if (n.is_zero()) fail(errc::division_by_zero, "zero norm: radicand is a square");
  r.c0_ = c0_ / n;
  r.c1_ = -(c1_ / n);
  return r;
}

FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inv(); }

FieldElement FieldElement::pow(long e) const {
  FieldElement r = one(tower_);
  FieldElement b = e < 0 ? inv() : *this;
  long n = e < 0 ? -e : e;
  for (long i = 0; i < n; i++) r = r * b;
  return r;
}

FieldElement FieldElement::norm() const {
  FieldElement r(*this);
  if (c1_.is_zero()) {
    r.c0_ = c0_ * c0_;
    return r;
  }
  RatFunc w = outer_radicand(tower_);
  r.c0_ = c0_ * c0_ - c1_ * c1_ * w;
  r.c1_ = RatFunc(Poly(tower_->char_p(), tower_->nvars()));
  return r;
}

bool FieldElement::operator==(const FieldElement& o) const {
  check_same(*this, o);
  return c0_ == o.c0_ && c1_ == o.c1_;
}

// ---------------------------------------------------------------------------
// square classes

namespace {

// content of f viewed in (deep vars)[V]: gcd of the coefficients of the
// V-monomials
Poly content_multi(const Poly& f, const std::vector<int>& V) {
  std::map<std::vector<int>, Poly> groups;
  for (const auto& t : f.terms()) {
    std::vector<int> key(V.size());
    for (size_t i = 0; i < V.size(); i++) key[i] = t.e[V[i]];
    std::vector<int> e = t.e;
    for (int v : V) e[v] = 0;
    auto it = groups.find(key);
    if (it == groups.end()) it = groups.emplace(key, Poly(f.prime(), f.nvars())).first;
    Poly mono(f.prime(), f.nvars());
    Poly term(f.prime(), f.nvars());
    // rebuild single-term poly
    term = Poly::constant(f.prime(), f.nvars(), t.c);
    for (int k = 0; k < f.nvars(); k++)
      if (e[k]) term = term * Poly::variable(f.prime(), f.nvars(), k, e[k]);
    it->second = it->second + term;
  }
  Poly c(f.prime(), f.nvars());
  for (auto& [k, g] : groups) c = Poly::gcd(c, g);
  return c;
}

struct RepState {
  RatFunc rep;        // canonical square-class representative (radical-free)
  RatFunc wit0, wit1; // witness = wit0 + wit1 * sqrt(w_outer)
  bool hensel = false;
};

// canonical square-class representative of radical-free v over node `n`;
// `top` supplies the full column width and the outer radical for witnesses
RepState class_rec(const TowerPtr& n, const TowerPtr& top, const RatFunc& v, bool wit = true) {
  unsigned long p = top->char_p();
  int nv = top->nvars();
  auto cst = [&](Coef c) { return RatFunc(Poly::constant(p, nv, std::move(c))); };
  auto one = [&]() { return cst(Coef(p, 1)); };
  if (v.is_zero()) fail(errc::zero_element, "square class of zero");

  switch (n->kind()) {
    case FieldTower::Kind::Prime:
    case FieldTower::Kind::Rationals: {
      if (!v.is_constant()) fail(errc::place_mismatch, "non-constant over the prime base");
      Coef c = v.constant_value();
      Coef sc = c.square_class();
      if (!wit) return {cst(sc), one(), RatFunc(Poly(p, nv)), false};
      Coef rad = c / sc;
      auto rt = rad.sqrt();
      if (!rt) fail(errc::unsupported, "square-class witness failure");
      return {cst(sc), cst(*rt), RatFunc(Poly(p, nv)), false};
    }
    case FieldTower::Kind::RatFun: {
      std::vector<int> V;
      for (const auto& name : n->added_vars()) V.push_back(top->var_index(name));
      Poly ND = v.num() * v.den();
      auto sf = ND.squarefree();  // ND = c * s * r^2
      Poly s_deep = content_multi(sf.s, V);
      auto s_V = sf.s.divexact(s_deep);
      if (!s_V) fail(errc::unsupported, "content split failure");
      RatFunc deep(s_deep * sf.c);
      RepState sub = class_rec(n->base(), top, deep, wit);
      RepState out;
      out.rep = RatFunc(s_V->monic()) * sub.rep;
      // v = deep * s_V * (r/den)^2 (up to the monic scaling of s_V, a square
      // times the lead coefficient folded into deep already by squarefree)
      RatFunc scale = RatFunc(sf.r) / RatFunc(v.den());
      Coef lc = s_V->lead_coef();
      if (!lc.is_one()) {
        // s_V = lc * monic: fold lc into a squarefree scalar adjustment
        auto lcrt = lc.is_square() ? lc.sqrt() : std::optional<Coef>();
        if (lcrt) {
          scale = scale * cst(*lcrt);
        } else {
          // merge lc into the deep class: rep picks up lc's class
          RepState sub2 = class_rec(n->base(), top, deep * cst(lc), wit);
          out.rep = RatFunc(s_V->monic()) * sub2.rep;
          sub = sub2;
        }
      }
      out.wit0 = sub.wit0 * scale;
      out.wit1 = sub.wit1 * scale;
      out.hensel = sub.hensel;
      return out;
    }
    case FieldTower::Kind::Laurent: {
      int x = top->var_index(n->added_vars()[0]);
      long m = v.valuation(x);
      RatFunc xv = RatFunc::variable(p, nv, x);
      RatFunc u = v * xv.pow(-m);
      RatFunc resid = u.eval0(x);
      RepState sub = class_rec(n->base(), top, resid, wit);
      RepState out;
      long eps = ((m % 2) + 2) % 2;
      out.rep = xv.pow(eps) * sub.rep;
      RatFunc half = xv.pow((m - eps) / 2);
      out.wit0 = sub.wit0 * half;
      out.wit1 = sub.wit1 * half;
      out.hensel = sub.hensel || !(u == resid);
      return out;
    }
    case FieldTower::Kind::QuadExt: {
      RatFunc w = pad_rf(n->radicand_raw(), nv);
      RepState a = class_rec(n->base(), top, v, wit);
      RepState b = class_rec(n->base(), top, v * w, wit);
      std::string sa = a.rep.str(top->vars()), sb = b.rep.str(top->vars());
      if (sa <= sb) return a;
      if (!wit) {
        RepState out;
        out.rep = b.rep;
        out.wit0 = one();
        out.wit1 = RatFunc(Poly(p, nv));
        out.hensel = b.hensel;
        return out;
      }
      // v * w = rep_b * wit_b^2 * h  =>  v = rep_b * (wit_b * sqrt(w)/w)^2 * h
      if (!b.wit1.is_zero())
        fail(errc::unsupported, "square class across stacked quadratic extensions");
      if (n.get() != top->outer_quadext().get())
        fail(errc::unsupported, "square class across stacked quadratic extensions");
      RepState out;
      out.rep = b.rep;
      out.wit0 = RatFunc(Poly(p, nv));
      out.wit1 = b.wit0 / w;
      out.hensel = b.hensel;
      return out;
    }
  }
  fail(errc::unsupported, "unreachable");
}

}  // namespace

SquareClass normalize_square_class(const FieldElement& e) {
  if (e.is_zero()) fail(errc::zero_element, "square class of zero");
  if (e.has_radical())
    fail(errc::unsupported, "square class of an element with a radical part");
  RepState st = class_rec(e.tower(), e.tower(), e.c0());
  SquareClass sc;
  sc.canonical = FieldElement(e.tower(), st.rep);
  sc.witness = st.wit1.is_zero() ? FieldElement(e.tower(), st.wit0)
                                 : FieldElement(e.tower(), st.wit0, st.wit1);
  sc.hensel_unit = st.hensel;
  return sc;
}

bool FieldElement::is_square() const {
  if (is_zero()) return true;
  if (c1_.is_zero()) {
    RepState st = class_rec(tower_, tower_, c0_, false);
    return st.rep.is_one();
  }
  // z = c0 + c1 sqrt(w): square iff norm is a square m^2 in the base with
  // (c0 + m)/2 or (c0 - m)/2 a square; needs a constructible m
  auto r = sqrt();
  return r.has_value();
}

namespace {

// plain rational square root over the full polynomial ring (no Hensel units)
std::optional<RatFunc> rational_sqrt(const RatFunc& v) {
  if (v.is_zero()) return v;
  Poly ND = v.num() * v.den();
  auto sf = ND.squarefree();
  if (!sf.s.is_constant()) return std::nullopt;
  Coef c = sf.c * sf.s.constant_value();
  auto cr = c.sqrt();
  if (!cr) return std::nullopt;
  // v = c * r^2 / den^2
  return RatFunc(sf.r * *cr) / RatFunc(v.den());
}

}  // namespace

std::optional<FieldElement> FieldElement::sqrt() const {
  unsigned long p = tower_->char_p();
  int nv = tower_->nvars();
  if (is_zero()) return zero(tower_);
  if (c1_.is_zero()) {
    if (auto r = rational_sqrt(c0_)) return FieldElement(tower_, *r);
    if (tower_->has_quadext()) {
      RatFunc w = outer_radicand(tower_);
      if (auto r = rational_sqrt(c0_ * w))
        return FieldElement(tower_, RatFunc(Poly(p, nv)), *r / w);
    }
    return std::nullopt;
  }
  RatFunc w = outer_radicand(tower_);
  RatFunc n = c0_ * c0_ - c1_ * c1_ * w;
  auto m = rational_sqrt(n);
  if (!m) return std::nullopt;
  RatFunc two = RatFunc(Poly::constant(p, nv, 2));
  for (int sign = 0; sign < 2; sign++) {
    RatFunc half = (sign ? c0_ - *m : c0_ + *m) / two;
    if (half.is_zero()) continue;
    auto x0 = rational_sqrt(half);
    if (!x0) continue;
    RatFunc x1 = c1_ / (two * *x0);
    FieldElement cand(tower_, *x0, x1);
    if (cand * cand == *this) return cand;
  }
  return std::nullopt;
}

FieldElement FieldElement::coerce(const TowerPtr& to) const {
  if (to.get() == tower_.get() || to->same(*tower_)) {
    FieldElement r(*this);
    r.tower_ = to;
    r.c0_ = pad_rf(c0_, to->nvars());
    r.c1_ = pad_rf(c1_, to->nvars());
    return r;
  }
  std::vector<int> map(tower_->nvars());
  for (int i = 0; i < tower_->nvars(); i++) {
    map[i] = to->var_index(tower_->vars()[i]);
    // variables the element does not use may be absent from the target
    if (map[i] < 0 && (c0_.num().uses_var(i) || c0_.den().uses_var(i) ||
                       c1_.num().uses_var(i) || c1_.den().uses_var(i)))
      fail(errc::place_mismatch,
           "variable '" + tower_->vars()[i] + "' missing in target tower");
    if (map[i] < 0) map[i] = 0;  // unused column, any target slot works
  }
  FieldElement r;
  r.tower_ = to;
  r.c0_ = c0_.remap(map, to->nvars());
  r.c1_ = c1_.remap(map, to->nvars());
  if (!r.c1_.is_zero()) {
    TowerPtr q = to->outer_quadext();
    TowerPtr qs = tower_->outer_quadext();
    if (!q || !qs) fail(errc::place_mismatch, "radical part without matching extension");
    RatFunc ws = pad_rf(qs->radicand_raw(), tower_->nvars()).remap(map, to->nvars());
    if (!(ws == pad_rf(q->radicand_raw(), to->nvars())))
      fail(errc::place_mismatch, "radicand mismatch in coercion");
  }
  return r;
}

std::string FieldElement::str() const {
  const auto& names = tower_->vars();
  if (c1_.is_zero()) return c0_.str(names);
  std::string radpart = "(" + c1_.str(names) + ")*rad";
  if (c0_.is_zero()) return radpart;
  return "(" + c0_.str(names) + ") + " + radpart;
}

FieldElement canonical_square_class_rep(const FieldElement& e) {
  if (e.is_zero()) fail(errc::zero_element, "square class of zero");
  if (e.has_radical())
    fail(errc::unsupported, "square class of an element with a radical part");
  RepState st = class_rec(e.tower(), e.tower(), e.c0(), false);
  return FieldElement(e.tower(), st.rep);
}

TowerPtr make_quadext(const TowerPtr& base, const FieldElement& radicand) {
  if (radicand.is_zero()) fail(errc::zero_element, "zero radicand");
  if (radicand.has_radical())
    fail(errc::unsupported, "radicand must be radical-free over the base");
  if (!base->same(*radicand.tower()))
    fail(errc::place_mismatch, "radicand not over the base tower");
  if (radicand.is_square())
    fail(errc::precondition, "radicand is a square in the base");
  return FieldTower::quadext_unchecked(base, radicand.c0());
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Lexer {
  std::string s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool eof() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      i++;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      fail(errc::parse, std::string("expected '") + c + "' at offset " + std::to_string(i) +
                            " in: " + s);
  }
  std::string ident() {
    skip();
    size_t j = i;
    while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) j++;
    if (j == i) fail(errc::parse, "expected identifier at offset " + std::to_string(i) + " in: " + s);
    std::string r = s.substr(i, j - i);
    i = j;
    return r;
  }
  long integer() {
    skip();
    size_t j = i;
    if (j < s.size() && (s[j] == '-' || s[j] == '+')) j++;
    size_t k = j;
    while (k < s.size() && std::isdigit((unsigned char)s[k])) k++;
    if (k == j) fail(errc::parse, "expected integer at offset " + std::to_string(i) + " in: " + s);
    long v = std::stol(s.substr(i, k - i));
    i = k;
    return v;
  }
};

FieldElement parse_expr(Lexer& lx, const TowerPtr& t);

FieldElement parse_atom(Lexer& lx, const TowerPtr& t) {
  lx.skip();
  if (lx.eat('(')) {
    FieldElement e = parse_expr(lx, t);
    lx.expect(')');
    return e;
  }
  char c = lx.peek();
  if (std::isdigit((unsigned char)c)) return FieldElement::integer(t, lx.integer());
  std::string id = lx.ident();
  if (id == "rad") return FieldElement::radical(t);
  return FieldElement::var(t, id);
}

FieldElement parse_factor(Lexer& lx, const TowerPtr& t) {
  bool neg = false;
  while (true) {
    if (lx.eat('-'))
      neg = !neg;
    else if (lx.eat('+'))
      ;
    else
      break;
  }
  FieldElement e = parse_atom(lx, t);
  if (lx.eat('^')) {
    long ex = lx.integer();
    e = e.pow(ex);
  }
  return neg ? -e : e;
}

FieldElement parse_term(Lexer& lx, const TowerPtr& t) {
  FieldElement e = parse_factor(lx, t);
  while (true) {
    if (lx.eat('*'))
      e = e * parse_factor(lx, t);
    else if (lx.eat('/'))
      e = e / parse_factor(lx, t);
    else
      return e;
  }
}

FieldElement parse_expr(Lexer& lx, const TowerPtr& t) {
  FieldElement e = parse_term(lx, t);
  while (true) {
    lx.skip();
    if (lx.eat('+'))
      e = e + parse_term(lx, t);
    else if (lx.peek() == '-') {
      // binary minus (unary handled in factor)
      lx.eat('-');
      e = e - parse_term(lx, t);
    } else
      return e;
  }
}

TowerPtr parse_field_rec(Lexer& lx) {
  std::string head = lx.ident();
  if (head == "QQ") return FieldTower::rationals();
  if (head == "Fp") {
    lx.expect('(');
    long p = lx.integer();
    lx.expect(')');
    return FieldTower::prime((unsigned long)p);
  }
  if (head == "ratfun" || head == "laurent" || head == "quadext") {
    lx.expect('(');
    TowerPtr base = parse_field_rec(lx);
    lx.expect(';');
    if (head == "ratfun") {
      std::vector<std::string> vars;
      vars.push_back(lx.ident());
      while (lx.eat(',')) vars.push_back(lx.ident());
      lx.expect(')');
      return FieldTower::ratfun(base, std::move(vars));
    }
    if (head == "laurent") {
      std::string v = lx.ident();
      lx.expect(')');
      return FieldTower::laurent(base, v);
    }
    FieldElement rad = parse_expr(lx, base);
    lx.expect(')');
    return make_quadext(base, rad);
  }
  fail(errc::parse, "unknown field constructor '" + head + "'");
}

}  // namespace

TowerPtr parse_field(const std::string& text) {
  Lexer lx{text};
  TowerPtr t = parse_field_rec(lx);
  if (!lx.eof()) fail(errc::parse, "trailing input in field expression: " + text);
  return t;
}

FieldElement parse_element(const TowerPtr& t, const std::string& text) {
  Lexer lx{text};
  FieldElement e = parse_expr(lx, t);
  if (!lx.eof()) fail(errc::parse, "trailing input in element expression: " + text);
  return e;
}

}  // namespace qconic

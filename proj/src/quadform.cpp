#include "quadform.hpp"

#include <sstream>

namespace qconic {

QuadForm::QuadForm(TowerPtr t, std::vector<FieldElement> entries)
    : tower_(std::move(t)), entries_(std::move(entries)) {
  for (auto& e : entries_) {
    if (e.is_zero()) fail(errc::zero_element, "zero diagonal entry");
    if (!e.tower()->same(*tower_)) e = e.coerce(tower_);
  }
}

QuadForm QuadForm::pfister(const TowerPtr& t, const std::vector<FieldElement>& slots) {
  QuadForm r(t, {FieldElement::one(t)});
  for (const auto& a : slots) {
    QuadForm bin(t, {FieldElement::one(t), -a});
    r = r.tensor(bin);
  }
  return r;
}

QuadForm QuadForm::hyperbolic_plane(const TowerPtr& t) {
  return QuadForm(t, {FieldElement::one(t), -FieldElement::one(t)});
}

QuadForm QuadForm::orth(const QuadForm& o) const {
  std::vector<FieldElement> es = entries_;
  for (const auto& e : o.entries_) es.push_back(e.tower()->same(*tower_) ? e : e.coerce(tower_));
  return QuadForm(tower_, std::move(es));
}

QuadForm QuadForm::scaled(const FieldElement& c) const {
  if (c.is_zero()) fail(errc::zero_element, "scaling by zero");
  std::vector<FieldElement> es;
  es.reserve(entries_.size());
  for (const auto& e : entries_) es.push_back(e * c);
  return QuadForm(tower_, std::move(es));
}

QuadForm QuadForm::tensor(const QuadForm& o) const {
  std::vector<FieldElement> es;
  es.reserve(entries_.size() * o.entries_.size());
  for (const auto& a : entries_)
    for (const auto& b : o.entries_) es.push_back(a * b);
  return QuadForm(tower_, std::move(es));
}

QuadForm QuadForm::negated() const {
  std::vector<FieldElement> es;
  es.reserve(entries_.size());
  for (const auto& e : entries_) es.push_back(-e);
  return QuadForm(tower_, std::move(es));
}

QuadForm QuadForm::subform(const std::vector<int>& idx) const {
  std::vector<FieldElement> es;
  for (int i : idx) es.push_back(entries_[i]);
  return QuadForm(tower_, std::move(es));
}

QuadForm QuadForm::coerce(const TowerPtr& to) const {
  std::vector<FieldElement> es;
  es.reserve(entries_.size());
  for (const auto& e : entries_) es.push_back(e.coerce(to));
  return QuadForm(to, std::move(es));
}

QuadForm QuadForm::normalized() const {
  std::vector<FieldElement> es;
  es.reserve(entries_.size());
  for (const auto& e : entries_) es.push_back(normalize_square_class(e).canonical);
  return QuadForm(tower_, std::move(es));
}

FieldElement QuadForm::evaluate(std::span<const FieldElement> x) const {
  if ((int)x.size() != dim()) fail(errc::dimension_mismatch, "evaluate: wrong length");
  FieldElement acc = FieldElement::zero(tower_);
  for (int i = 0; i < dim(); i++) acc = acc + entries_[i] * x[i] * x[i];
  return acc;
}

FieldElement QuadForm::bilinear(std::span<const FieldElement> x,
                                std::span<const FieldElement> y) const {
  if ((int)x.size() != dim() || (int)y.size() != dim())
    fail(errc::dimension_mismatch, "bilinear: wrong length");
  FieldElement acc = FieldElement::zero(tower_);
  for (int i = 0; i < dim(); i++) acc = acc + entries_[i] * x[i] * y[i];
  return acc;
}

FieldElement QuadForm::disc_unsigned() const {
  FieldElement acc = FieldElement::one(tower_);
  for (const auto& e : entries_) acc = acc * e;
  return acc;
}

SquareClass QuadForm::discriminant() const {
  FieldElement d = disc_unsigned();
  long n = dim();
  if (((n * (n - 1) / 2) % 2) != 0) d = -d;
  return normalize_square_class(d);
}

bool QuadForm::operator==(const QuadForm& o) const {
  if (dim() != o.dim()) return false;
  for (int i = 0; i < dim(); i++)
    if (entries_[i] != o.entries_[i]) return false;
  return true;
}

std::string QuadForm::str() const {
  std::ostringstream os;
  os << "<";
  for (int i = 0; i < dim(); i++) os << (i ? ", " : "") << entries_[i].str();
  os << ">";
  return os.str();
}

// --------------------------------------------------------------------------
// form expression grammar

namespace {

struct FormLexer {
  std::string s;
  size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) i++;
  }
  bool starts(const std::string& kw) {
    skip();
    return s.compare(i, kw.size(), kw) == 0;
  }
  bool eat(const std::string& kw) {
    if (!starts(kw)) return false;
    i += kw.size();
    return true;
  }
  bool eof() {
    skip();
    return i >= s.size();
  }
};

// span to matching close, honoring nesting of () <> and pf<< >>
size_t find_close(const std::string& s, size_t open, char oc, char cc) {
  int depth = 0;
  for (size_t k = open; k < s.size(); k++) {
    if (s[k] == oc) depth++;
    else if (s[k] == cc) {
      depth--;
      if (depth == 0) return k;
    }
  }
  fail(errc::parse, "unbalanced brackets in form expression");
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int par = 0, ang = 0;
  size_t start = 0;
  for (size_t k = 0; k < s.size(); k++) {
    char c = s[k];
    if (c == '(') par++;
    if (c == ')') par--;
    if (c == '<') ang++;
    if (c == '>') ang--;
    if (c == sep && par == 0 && ang == 0) {
      parts.push_back(s.substr(start, k - start));
      start = k + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

QuadForm parse_form_expr(const TowerPtr& t, const std::string& text);

QuadForm parse_form_atom(const TowerPtr& t, FormLexer& lx) {
  lx.skip();
  if (lx.starts("pf<<")) {
    size_t open = lx.s.find("<<", lx.i);
    size_t close = lx.s.find(">>", open);
    if (close == std::string::npos) fail(errc::parse, "unterminated pf<<...>>");
    std::string inner = lx.s.substr(open + 2, close - open - 2);
    lx.i = close + 2;
    std::vector<FieldElement> slots;
    for (auto& part : split_top(inner, ','))
      slots.push_back(parse_element(t, part));
    return QuadForm::pfister(t, slots);
  }
  if (lx.starts("<")) {
    size_t close = find_close(lx.s, lx.i, '<', '>');
    std::string inner = lx.s.substr(lx.i + 1, close - lx.i - 1);
    lx.i = close + 1;
    std::vector<FieldElement> es;
    for (auto& part : split_top(inner, ',')) es.push_back(parse_element(t, part));
    return QuadForm(t, std::move(es));
  }
  if (lx.starts("(")) {
    size_t close = find_close(lx.s, lx.i, '(', ')');
    std::string inner = lx.s.substr(lx.i + 1, close - lx.i - 1);
    size_t after = close + 1;
    while (after < lx.s.size() && std::isspace((unsigned char)lx.s[after])) after++;
    if (after < lx.s.size() && lx.s[after] == '*') {
      // scalar multiple (e)*atom
      lx.i = after + 1;
      FieldElement c = parse_element(t, inner);
      QuadForm f = parse_form_atom(t, lx);
      return f.scaled(c);
    }
    lx.i = close + 1;
    return parse_form_expr(t, inner);
  }
  fail(errc::parse, "expected form atom at offset " + std::to_string(lx.i) + " in: " + lx.s);
}

QuadForm parse_tensor_chain(const TowerPtr& t, FormLexer& lx) {
  QuadForm f = parse_form_atom(t, lx);
  while (true) {
    lx.skip();
    // tensor operator: 'x' followed by an atom opener
    if (lx.i < lx.s.size() && lx.s[lx.i] == 'x') {
      size_t save = lx.i;
      lx.i++;
      lx.skip();
      if (lx.i < lx.s.size() && (lx.s[lx.i] == '<' || lx.s[lx.i] == '(' ||
                                 lx.s.compare(lx.i, 4, "pf<<") == 0)) {
        QuadForm g = parse_form_atom(t, lx);
        f = f.tensor(g);
        continue;
      }
      lx.i = save;
    }
    return f;
  }
}

QuadForm parse_form_expr(const TowerPtr& t, const std::string& text) {
  // top-level '+' = orthogonal sum
  auto parts = split_top(text, '+');
  QuadForm acc;
  bool first = true;
  for (auto& p : parts) {
    FormLexer lx{p};
    QuadForm f = parse_tensor_chain(t, lx);
    if (!lx.eof()) fail(errc::parse, "trailing input in form expression: " + p);
    acc = first ? f : acc.orth(f);
    first = false;
  }
  if (first) fail(errc::parse, "empty form expression");
  return acc;
}

}  // namespace

QuadForm QuadForm::parse(const TowerPtr& t, const std::string& text) {
  return parse_form_expr(t, text);
}

std::pair<QuadForm, QuadForm> springer_split(const QuadForm& q, const PlaceSpec& v) {
  TowerPtr rt = residue_tower(q.tower(), v);
  std::vector<FieldElement> unit, odd;
  for (int i = 0; i < q.dim(); i++) {
    FieldElement e = normalize_square_class(q.entry(i)).canonical;
    auto [val, resid] = valuation_and_residue(e, v);
    if (((val % 2) + 2) % 2 == 0)
      unit.push_back(resid);
    else
      odd.push_back(resid);
  }
  return {QuadForm(rt, std::move(unit)), QuadForm(rt, std::move(odd))};
}

}  // namespace qconic

#include "place.hpp"

#include <sstream>

namespace qconic {

PlaceSpec PlaceSpec::tower_variable(std::string v) {
  PlaceSpec p;
  p.kind = Kind::TowerVariable;
  p.var = std::move(v);
  return p;
}

PlaceSpec PlaceSpec::degree_place(std::string v) {
  PlaceSpec p;
  p.kind = Kind::DegreePlace;
  p.var = std::move(v);
  return p;
}

PlaceSpec PlaceSpec::substitution(std::string replaced, std::string fresh, std::string expr) {
  PlaceSpec p;
  p.kind = Kind::Substitution;
  p.var = std::move(replaced);
  p.fresh = std::move(fresh);
  p.subst_expr = std::move(expr);
  return p;
}

PlaceSpec PlaceSpec::irreducible(std::string v, Poly pi) {
  PlaceSpec p;
  p.kind = Kind::IrreduciblePoly;
  p.var = std::move(v);
  p.irred = std::move(pi);
  return p;
}

std::string PlaceSpec::str() const {
  switch (kind) {
    case Kind::TowerVariable:
      return "adic(" + var + ")";
    case Kind::DegreePlace:
      return "deg(" + var + ")";
    case Kind::Substitution:
      return "subst(" + var + " -> " + subst_expr + "; " + fresh + ")";
    case Kind::IrreduciblePoly:
      return "irred(" + var + ")";
  }
  return "?";
}

PlaceSpec PlaceSpec::parse(const std::string& text, const TowerPtr& t) {
  auto strip = [](std::string s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::string s = strip(text);
  auto inner = [&](size_t klen) { return strip(s.substr(klen + 1, s.size() - klen - 2)); };
  if (s.rfind("adic(", 0) == 0) return tower_variable(inner(4));
  if (s.rfind("deg(", 0) == 0) return degree_place(inner(3));
  if (s.rfind("subst(", 0) == 0) {
    std::string body = inner(5);
    size_t arrow = body.find("->");
    size_t semi = body.find(';');
    if (arrow == std::string::npos || semi == std::string::npos)
      fail(errc::parse, "bad substitution place: " + text);
    return substitution(strip(body.substr(0, arrow)),
                        strip(body.substr(semi + 1)),
                        strip(body.substr(arrow + 2, semi - arrow - 2)));
  }
  // bare variable name means the variable-adic place
  if (t->var_index(s) >= 0) return tower_variable(s);
  fail(errc::parse, "cannot parse place: " + text);
}

namespace {

// rebuild the tower without one rational-function / Laurent variable
TowerPtr drop_var(const TowerPtr& t, const std::string& v) {
  if (!t) fail(errc::place_mismatch, "variable '" + v + "' not in tower");
  switch (t->kind()) {
    case FieldTower::Kind::Prime:
    case FieldTower::Kind::Rationals:
      fail(errc::place_mismatch, "variable '" + v + "' not in tower");
    case FieldTower::Kind::Laurent:
      if (t->added_vars()[0] == v) return t->base();
      return FieldTower::laurent(drop_var(t->base(), v), t->added_vars()[0]);
    case FieldTower::Kind::RatFun: {
      auto vars = t->added_vars();
      auto it = std::find(vars.begin(), vars.end(), v);
      if (it == vars.end()) return FieldTower::ratfun(drop_var(t->base(), v), vars);
      vars.erase(it);
      if (vars.empty()) return t->base();
      return FieldTower::ratfun(t->base(), vars);
    }
    case FieldTower::Kind::QuadExt: {
      TowerPtr nb = drop_var(t->base(), v);
      // radicand must not involve the dropped variable
      int col = t->base()->var_index(v);
      if (col >= 0 && (t->radicand_raw().num().uses_var(col) || t->radicand_raw().den().uses_var(col)))
        fail(errc::place_mismatch, "radicand involves the place variable");
      std::vector<int> map(t->base()->nvars());
      for (int i = 0; i < t->base()->nvars(); i++)
        map[i] = nb->var_index(t->base()->vars()[i]);
      return FieldTower::quadext_unchecked(nb, t->radicand_raw().remap(map, nb->nvars()));
    }
  }
  fail(errc::unsupported, "unreachable");
}

FieldElement move_by_name(const TowerPtr& from, const TowerPtr& to, const RatFunc& v) {
  std::vector<int> map(from->nvars());
  for (int i = 0; i < from->nvars(); i++) {
    map[i] = to->var_index(from->vars()[i]);
    if (map[i] < 0) {
      if (v.num().uses_var(i) || v.den().uses_var(i))
        fail(errc::place_mismatch, "variable escapes the residue field");
      map[i] = 0;
    }
  }
  return FieldElement(to, v.remap(map, to->nvars()));
}

}  // namespace

TowerPtr residue_tower(const TowerPtr& t, const PlaceSpec& v) {
  switch (v.kind) {
    case PlaceSpec::Kind::TowerVariable:
    case PlaceSpec::Kind::DegreePlace:
    case PlaceSpec::Kind::Substitution:
      return drop_var(t, v.var);
    case PlaceSpec::Kind::IrreduciblePoly:
      if (v.irred.degree(0) == 1 || v.irred.total_degree() == 1) return drop_var(t, v.var);
      return t;  // residue represented by remainders over the same tower
  }
  fail(errc::unsupported, "unreachable");
}

std::pair<long, FieldElement> valuation_and_residue(const FieldElement& e, const PlaceSpec& v) {
  if (e.is_zero()) fail(errc::zero_element, "valuation of zero");
  if (e.has_radical()) fail(errc::unsupported, "valuation of a radical element");
  const TowerPtr& t = e.tower();
  unsigned long p = t->char_p();
  int nv = t->nvars();

  switch (v.kind) {
    case PlaceSpec::Kind::TowerVariable: {
      int col = t->var_index(v.var);
      if (col < 0) fail(errc::place_mismatch, "no variable '" + v.var + "'");
      long m = e.c0().valuation(col);
      RatFunc u = e.c0() * RatFunc::variable(p, nv, col).pow(-m);
      RatFunc resid = u.eval0(col);
      return {m, move_by_name(t, residue_tower(t, v), resid)};
    }
    case PlaceSpec::Kind::DegreePlace: {
      int col = t->var_index(v.var);
      if (col < 0) fail(errc::place_mismatch, "no variable '" + v.var + "'");
      long dn = e.c0().num().degree(col), dd = e.c0().den().degree(col);
      long m = dd - dn;
      auto lead = [&](const Poly& f, long d) {
        // coefficient of var^d
        auto cs = f.coeffs_in(col);
        auto it = cs.find(d);
        if (it == cs.end()) fail(errc::place_mismatch, "lead extraction failed");
        return it->second;
      };
      RatFunc resid(lead(e.c0().num(), dn), lead(e.c0().den(), dd));
      return {m, move_by_name(t, residue_tower(t, v), resid)};
    }
    case PlaceSpec::Kind::Substitution: {
      TowerPtr target = completion_tower(t, v);
      FieldElement moved = into_completion(e, v, target);
      auto sub = valuation_and_residue(moved, PlaceSpec::tower_variable(v.fresh));
      return sub;
    }
    case PlaceSpec::Kind::IrreduciblePoly: {
      int col = t->var_index(v.var);
      if (col < 0) fail(errc::place_mismatch, "no variable '" + v.var + "'");
      Poly pi = v.irred;
      if (pi.nvars() != nv) {
        std::vector<int> map(pi.nvars());
        for (int i = 0; i < pi.nvars(); i++) map[i] = i;
        pi = pi.remap(map, nv);
      }
      auto strip = [&](Poly f) {
        long k = 0;
        while (!f.is_zero()) {
          auto q = f.divexact(pi);
          if (!q) break;
          f = *q;
          k++;
        }
        return std::pair<long, Poly>(k, f);
      };
      auto [vn, fn] = strip(e.c0().num());
      auto [vd, fd] = strip(e.c0().den());
      long m = vn - vd;
      if (pi.degree(col) == 1 && pi.total_degree() == 1) {
        // pi = var - c: residue by evaluation
        auto cs = pi.coeffs_in(col);
        Poly c0 = cs.count(0) ? cs[0] : Poly(p, nv);
        Poly c1 = cs[1];
        Poly root = -(*c0.divexact(c1));
        RatFunc resid = RatFunc(fn.subst(col, root), fd.subst(col, root));
        return {m, move_by_name(t, residue_tower(t, v), resid)};
      }
      fail(errc::unsupported, "residue at a higher-degree place (valuation only)");
    }
  }
  fail(errc::unsupported, "unreachable");
}

TowerPtr completion_tower(const TowerPtr& t, const PlaceSpec& v) {
  switch (v.kind) {
    case PlaceSpec::Kind::TowerVariable: {
      if (t->kind() == FieldTower::Kind::Laurent && t->added_vars()[0] == v.var) return t;
      return FieldTower::laurent(drop_var(t, v.var), v.var);
    }
    case PlaceSpec::Kind::Substitution:
      return FieldTower::laurent(drop_var(t, v.var), v.fresh);
    default:
      fail(errc::unsupported, "no completion tower for this place kind");
  }
}

FieldElement into_completion(const FieldElement& e, const PlaceSpec& v, const TowerPtr& target) {
  if (e.has_radical()) fail(errc::unsupported, "completion of a radical element");
  const TowerPtr& t = e.tower();
  if (v.kind == PlaceSpec::Kind::TowerVariable) return e.coerce(target);
  if (v.kind != PlaceSpec::Kind::Substitution)
    fail(errc::unsupported, "no completion map for this place kind");
  // substitute var := expr(fresh, others) over an extended variable set
  int col = t->var_index(v.var);
  if (col < 0) fail(errc::place_mismatch, "no variable '" + v.var + "'");
  // extended column set: old columns + fresh at the end
  int nv2 = t->nvars() + 1;
  std::vector<int> pad(t->nvars());
  for (int i = 0; i < t->nvars(); i++) pad[i] = i;
  // parse expr against the target (which has fresh); remap into extended set
  FieldElement expr = parse_element(target, v.subst_expr);
  std::vector<int> emap(target->nvars());
  for (int i = 0; i < target->nvars(); i++) {
    const std::string& name = target->vars()[i];
    emap[i] = name == v.fresh ? nv2 - 1 : t->var_index(name);
    if (emap[i] < 0) fail(errc::place_mismatch, "substitution variable mismatch");
  }
  RatFunc exprv = expr.c0().remap(emap, nv2);
  if (!exprv.den().is_constant())
    fail(errc::unsupported, "substitution must be polynomial");
  RatFunc moved = e.c0().remap(pad, nv2).subst(col, exprv);
  // now drop the old column and land in the target by name
  std::vector<int> back(nv2);
  for (int i = 0; i < t->nvars(); i++)
    back[i] = i == col ? -1 : target->var_index(t->vars()[i]);
  back[nv2 - 1] = target->var_index(v.fresh);
  if (moved.num().uses_var(col) || moved.den().uses_var(col))
    fail(errc::place_mismatch, "substitution did not eliminate the variable");
  return FieldElement(target, moved.remap(back, target->nvars()));
}

}  // namespace qconic

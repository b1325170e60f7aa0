#include "tower.hpp"

#include <sstream>

#include "errors.hpp"

namespace qconic {

TowerPtr finish(std::shared_ptr<FieldTower> t) {
  t->self_ = t;
  return t;
}

TowerPtr FieldTower::prime(unsigned long p) {
  if (p < 3 || p % 2 == 0) fail(errc::unsupported, "prime base must be an odd prime");
  // small primality check; desk-scale moduli
  for (unsigned long d = 3; d * d <= p; d += 2)
    if (p % d == 0) fail(errc::unsupported, "prime base must be an odd prime");
  auto t = std::shared_ptr<FieldTower>(new FieldTower());
  t->kind_ = Kind::Prime;
  t->p_ = p;
  return finish(t);
}

TowerPtr FieldTower::rationals() {
  auto t = std::shared_ptr<FieldTower>(new FieldTower());
  t->kind_ = Kind::Rationals;
  t->p_ = 0;
  return finish(t);
}

TowerPtr FieldTower::ratfun(TowerPtr base, std::vector<std::string> vars) {
  if (vars.empty()) fail(errc::parse, "ratfun needs at least one variable");
  auto t = std::shared_ptr<FieldTower>(new FieldTower());
  t->kind_ = Kind::RatFun;
  t->p_ = base->char_p();
  t->vars_ = base->vars();
  for (auto& v : vars) {
    if (base->var_index(v) >= 0 ||
        std::find(t->vars_.begin() + base->nvars(), t->vars_.end(), v) != t->vars_.end())
      fail(errc::variable_collision, "variable '" + v + "' already in tower");
    t->vars_.push_back(v);
  }
  t->added_ = std::move(vars);
  t->base_ = std::move(base);
  return finish(t);
}

TowerPtr FieldTower::laurent(TowerPtr base, std::string var) {
  if (base->var_index(var) >= 0)
    fail(errc::variable_collision, "variable '" + var + "' already in tower");
  auto t = std::shared_ptr<FieldTower>(new FieldTower());
  t->kind_ = Kind::Laurent;
  t->p_ = base->char_p();
  t->vars_ = base->vars();
  t->vars_.push_back(var);
  t->added_ = {std::move(var)};
  t->base_ = std::move(base);
  return finish(t);
}

TowerPtr FieldTower::quadext_unchecked(TowerPtr base, RatFunc radicand) {
  if (radicand.is_zero()) fail(errc::zero_element, "zero radicand");
  auto t = std::shared_ptr<FieldTower>(new FieldTower());
  t->kind_ = Kind::QuadExt;
  t->p_ = base->char_p();
  t->vars_ = base->vars();
  t->added_ = {};
  t->radicand_ = std::move(radicand);
  t->base_ = std::move(base);
  return finish(t);
}

int FieldTower::var_index(const std::string& name) const {
  for (int i = 0; i < (int)vars_.size(); i++)
    if (vars_[i] == name) return i;
  return -1;
}

bool FieldTower::has_quadext() const {
  for (const FieldTower* t = this; t; t = t->base_.get())
    if (t->kind_ == Kind::QuadExt) return true;
  return false;
}

TowerPtr FieldTower::outer_quadext() const {
  for (const FieldTower* t = this; t; t = t->base_.get())
    if (t->kind_ == Kind::QuadExt) return t->self_.lock();
  return nullptr;
}

bool FieldTower::same(const FieldTower& o) const {
  if (this == &o) return true;
  if (kind_ != o.kind_ || p_ != o.p_ || added_ != o.added_) return false;
  if (kind_ == Kind::QuadExt && !(radicand_ == o.radicand_)) return false;
  if (!base_) return !o.base_;
  return o.base_ && base_->same(*o.base_);
}

std::string FieldTower::str() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Prime:
      os << "Fp(" << p_ << ")";
      break;
    case Kind::Rationals:
      os << "QQ";
      break;
    case Kind::RatFun: {
      os << "ratfun(" << base_->str() << "; ";
      for (size_t i = 0; i < added_.size(); i++) os << (i ? ", " : "") << added_[i];
      os << ")";
      break;
    }
    case Kind::Laurent:
      os << "laurent(" << base_->str() << "; " << added_[0] << ")";
      break;
    case Kind::QuadExt:
      os << "quadext(" << base_->str() << "; " << radicand_.str(vars_) << ")";
      break;
  }
  return os.str();
}

}  // namespace qconic

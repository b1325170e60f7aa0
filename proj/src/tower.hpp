#pragma once
#include <memory>
#include <string>
#include <vector>

#include "ratfunc.hpp"

namespace qconic {

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

// Constructible field tower over F_p (p odd) or Q. Immutable; elements hold a
// shared_ptr to their tower. Variables are globally distinct within a tower
// and map to polynomial columns in root-to-top order.
class FieldTower {
public:
  enum class Kind { Prime, Rationals, RatFun, Laurent, QuadExt };

  static TowerPtr prime(unsigned long p);
  static TowerPtr rationals();
  static TowerPtr ratfun(TowerPtr base, std::vector<std::string> vars);
  static TowerPtr laurent(TowerPtr base, std::string var);
  // radicand given over the base's variable set; nonzero/non-squareness is
  // the caller's responsibility (element layer provides the checked builder)
  static TowerPtr quadext_unchecked(TowerPtr base, RatFunc radicand);

  Kind kind() const { return kind_; }
  unsigned long char_p() const { return p_; }  // 0 over Q
  const TowerPtr& base() const { return base_; }
  const std::vector<std::string>& added_vars() const { return added_; }
  const RatFunc& radicand_raw() const { return radicand_; }  // over vars() columns

  const std::vector<std::string>& vars() const { return vars_; }
  int nvars() const { return (int)vars_.size(); }
  int var_index(const std::string& name) const;  // -1 when absent

  bool has_quadext() const;
  // outermost (topmost) quadext node, nullptr when none
  TowerPtr outer_quadext() const;

  bool same(const FieldTower& o) const;
  std::string str() const;

private:
  FieldTower() = default;

  Kind kind_ = Kind::Prime;
  unsigned long p_ = 0;
  TowerPtr base_;
  std::vector<std::string> added_;
  RatFunc radicand_;
  std::vector<std::string> vars_;  // accumulated root -> here

  mutable std::weak_ptr<const FieldTower> self_;
  friend TowerPtr finish(std::shared_ptr<FieldTower> t);
};

}  // namespace qconic

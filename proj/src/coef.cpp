#include "coef.hpp"

#include "nt.hpp"

namespace qconic {

uint64_t Coef::invmod(uint64_t a) const {
  if (a == 0) fail(errc::division_by_zero, "inverse of zero mod p");
  return mod_inv(a, p_);
}

bool Coef::is_square() const {
  if (is_zero()) return true;
  if (p_) return legendre(r_, p_) == 1;
  if (q_ < 0) return false;
  return mpz_perfect_square_p(q_.get_num().get_mpz_t()) &&
         mpz_perfect_square_p(q_.get_den().get_mpz_t());
}

std::optional<Coef> Coef::sqrt() const {
  if (is_zero()) return Coef(p_, 0);
  if (p_) {
    auto r = sqrt_mod(r_, p_);
    if (!r) return std::nullopt;
    Coef c(*this);
    c.r_ = *r;
    return c;
  }
  if (!is_square()) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q_.get_num().get_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q_.get_den().get_mpz_t());
  Coef c(*this);
  c.q_ = mpq_class(n) / mpq_class(d);
  return c;
}

Coef Coef::square_class() const {
  if (is_zero()) fail(errc::zero_element, "square class of zero");
  if (p_) {
    Coef c(*this);
    c.r_ = legendre(r_, p_) == 1 ? 1 : least_nonresidue(p_);
    return c;
  }
  mpz_class nd = q_.get_num() * q_.get_den();
  mpz_class sf, s;
  squarefree_decompose(nd, sf, s);
  Coef c(*this);
  c.q_ = sf;
  return c;
}

std::string Coef::str() const {
  if (p_) return std::to_string(r_);
  return q_.get_str();
}

}  // namespace qconic

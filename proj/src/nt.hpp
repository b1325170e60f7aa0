#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace qconic {

// Elementary number theory over machine-word primes and over Z, at desk scale.

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t m);
uint64_t mod_inv(uint64_t a, uint64_t p);

// Legendre symbol of a mod odd prime p: +1 square, -1 non-square, 0 if p | a.
int legendre(uint64_t a, uint64_t p);

// Square root mod odd prime p (Tonelli-Shanks); nullopt if a is a non-residue.
std::optional<uint64_t> sqrt_mod(uint64_t a, uint64_t p);

// Least quadratic non-residue mod p.
uint64_t least_nonresidue(uint64_t p);

// n = sf * s^2 with sf squarefree (sign kept on sf). Trial division to a fixed
// bound plus perfect-square extraction on the cofactor; plenty for desk-scale
// inputs.
void squarefree_decompose(const mpz_class& n, mpz_class& sf, mpz_class& s);

// Odd primes dividing n (n != 0), without multiplicity.
std::vector<mpz_class> odd_prime_support(const mpz_class& n);

// Hilbert symbol (a,b)_v over Q: v = odd prime p, v = 2, or the real place.
int hilbert_qq_odd(const mpz_class& a, const mpz_class& b, const mpz_class& p);
int hilbert_qq_2(const mpz_class& a, const mpz_class& b);
int hilbert_qq_real(const mpz_class& a, const mpz_class& b);

// Nontrivial solution of a x^2 + b y^2 + c z^2 = 0 over Z for squarefree,
// pairwise coprime a, b, c of mixed sign; nullopt when unsolvable.
std::optional<std::array<mpz_class, 3>> solve_legendre(mpz_class a, mpz_class b, mpz_class c);

}  // namespace qconic

#include "nt.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "errors.hpp"

namespace qconic {

uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t m) {
  if (m == 1) return 0;
  unsigned __int128 r = 1, b = base % m;
  while (exp) {
    if (exp & 1) r = r * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return (uint64_t)r;
}

uint64_t mod_inv(uint64_t a, uint64_t p) { return mod_pow(a % p, p - 2, p); }

int legendre(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  uint64_t e = mod_pow(a, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

std::optional<uint64_t> sqrt_mod(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (legendre(a, p) != 1) return std::nullopt;
  if (p % 4 == 3) return mod_pow(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  uint64_t q = p - 1, s = 0;
  while (q % 2 == 0) q /= 2, s++;
  uint64_t z = least_nonresidue(p);
  uint64_t m = s;
  uint64_t c = mod_pow(z, q, p);
  uint64_t t = mod_pow(a, q, p);
  uint64_t r = mod_pow(a, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = (unsigned __int128)tt * tt % p;
      i++;
    }
    uint64_t b = c;
    for (uint64_t j = 0; j + 1 < m - i; j++) b = (unsigned __int128)b * b % p;
    m = i;
    c = (unsigned __int128)b * b % p;
    t = (unsigned __int128)t * c % p;
    r = (unsigned __int128)r * b % p;
  }
  return r;
}

uint64_t least_nonresidue(uint64_t p) {
  for (uint64_t n = 2; n < p; n++)
    if (legendre(n, p) == -1) return n;
  fail(errc::unsupported, "no non-residue found (p must be an odd prime > 2)");
}

void squarefree_decompose(const mpz_class& n, mpz_class& sf, mpz_class& s) {
  if (n == 0) fail(errc::zero_element, "squarefree_decompose(0)");
  mpz_class m = abs(n);
  sf = n < 0 ? -1 : 1;
  s = 1;
  for (mpz_class d = 2; d * d <= m && d < (1 << 20); d++) {
    if (m % d != 0) continue;
    unsigned e = 0;
    while (m % d == 0) m /= d, e++;
    for (unsigned i = 0; i + 1 < e; i += 2) s *= d;
    if (e % 2) sf *= d;
  }
  // leftover is prime, 1, or a square of a prime beyond the bound
  if (mpz_perfect_square_p(m.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
    s *= r;
  } else {
    sf *= m;
  }
}

std::vector<mpz_class> odd_prime_support(const mpz_class& n) {
  std::vector<mpz_class> ps;
  mpz_class m = abs(n);
  if (m == 0) fail(errc::zero_element, "odd_prime_support(0)");
  while (m % 2 == 0) m /= 2;
  for (mpz_class d = 3; d * d <= m; d += 2) {
    if (m % d != 0) continue;
    ps.push_back(d);
    while (m % d == 0) m /= d;
  }
  if (m > 1) ps.push_back(m);
  return ps;
}

namespace {

// v_p and unit part of a at odd prime p
std::pair<long, mpz_class> val_unit(mpz_class a, const mpz_class& p) {
  long v = 0;
  while (a % p == 0) a /= p, v++;
  return {v, a};
}

int legendre_mpz(const mpz_class& a, const mpz_class& p) {
  mpz_class r = a % p;
  if (r < 0) r += p;
  return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

}  // namespace

int hilbert_qq_odd(const mpz_class& a, const mpz_class& b, const mpz_class& p) {
  auto [va, ua] = val_unit(a, p);
  auto [vb, ub] = val_unit(b, p);
  // tame formula: (-1)^{va vb eps(p)} (ua|p)^{vb} (ub|p)^{va}
  int r = 1;
  if ((va & 1) && (vb & 1) && ((p - 1) / 2) % 2 == 1) r = -r;
  if (vb & 1) r *= legendre_mpz(ua, p);
  if (va & 1) r *= legendre_mpz(ub, p);
  return r;
}

int hilbert_qq_2(const mpz_class& a, const mpz_class& b) {
  auto [va, ua] = val_unit(a, 2);
  auto [vb, ub] = val_unit(b, 2);
  auto eps = [](const mpz_class& u) { return (((u - 1) / 2) % 2 + 2) % 2; };    // (u-1)/2 mod 2
  auto omega = [](const mpz_class& u) { return (((u * u - 1) / 8) % 2 + 2) % 2; };  // (u^2-1)/8 mod 2
  mpz_class e = eps(ua) * eps(ub) + va * omega(ub) + vb * omega(ua);
  return e % 2 == 0 ? 1 : -1;
}

int hilbert_qq_real(const mpz_class& a, const mpz_class& b) {
  return (a < 0 && b < 0) ? -1 : 1;
}

namespace {

// sqrt of a mod squarefree odd-or-even m by CRT over its prime factors
std::optional<mpz_class> sqrt_mod_squarefree(const mpz_class& a, const mpz_class& m) {
  mpz_class mm = abs(m);
  if (mm == 1) return mpz_class(0);
  std::vector<mpz_class> primes;
  {
    mpz_class x = mm;
    if (x % 2 == 0) {
      primes.push_back(2);
      x /= 2;
    }
    for (mpz_class d = 3; d * d <= x; d += 2)
      if (x % d == 0) {
        primes.push_back(d);
        while (x % d == 0) x /= d;
      }
    if (x > 1) primes.push_back(x);
  }
  mpz_class r = 0, mod = 1;
  for (const auto& q : primes) {
    mpz_class rq;
    if (q == 2) {
      rq = ((a % 2) + 2) % 2;  // squares mod 2 are everything
    } else {
      if (!q.fits_slong_p()) return std::nullopt;
      uint64_t qp = (uint64_t)q.get_si();
      mpz_class am = a % q;
      if (am < 0) am += q;
      auto s = sqrt_mod((uint64_t)am.get_ui(), qp);
      if (!s) return std::nullopt;
      rq = (long)*s;
    }
    // CRT combine r (mod mod) with rq (mod q)
    mpz_class g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t(), q.get_mpz_t());
    mpz_class step = (rq - r) * u % q;
    r = r + mod * step;
    mod *= q;
    r %= mod;
    if (r < 0) r += mod;
  }
  return r;
}

void strip_square(mpz_class& c, mpz_class& scale) {
  mpz_class sf, s;
  squarefree_decompose(c, sf, s);
  c = sf;
  scale = s;
}

}  // namespace

std::optional<std::array<mpz_class, 3>> solve_legendre(mpz_class a, mpz_class b, mpz_class c) {
  if (a == 0 || b == 0 || c == 0) fail(errc::zero_element, "legendre coefficient 0");
  if (a > 0 && b > 0 && c > 0) return std::nullopt;
  if (a < 0 && b < 0 && c < 0) return std::nullopt;

  // x, y, z accumulate the inverse of the reductions applied so far, as a
  // matrix acting on the solution of the reduced equation.
  // We instead recurse; depth is logarithmic in max(|a|,|b|,|c|).
  mpz_class g = gcd(gcd(a, b), c);
  a /= g, b /= g, c /= g;

  // keep coefficients squarefree
  mpz_class sa, sb, sc;
  strip_square(a, sa);
  strip_square(b, sb);
  strip_square(c, sc);
  // solution (x,y,z) of reduced maps back as (x/sa, y/sb, z/sc) ~ clear denominators
  auto rescale = [&](std::array<mpz_class, 3> w) -> std::array<mpz_class, 3> {
    return {w[0] * sb * sc, w[1] * sa * sc, w[2] * sa * sb};
  };

  // pairwise coprime: if q | a and q | b then q | c z^2 => q | z; substitute
  for (int pass = 0; pass < 64; pass++) {
    mpz_class q = gcd(a, b);
    if (q > 1) {
      std::vector<mpz_class> ps = odd_prime_support(q);
      if (q % 2 == 0) ps.insert(ps.begin(), 2);
      mpz_class p0 = ps[0];
      auto sub = solve_legendre(a / p0, b / p0, c * p0);
      if (!sub) return std::nullopt;
      auto [x, y, z] = *sub;
      return rescale({x, y, z * p0});
    }
    q = gcd(a, c);
    if (q > 1) {
      mpz_class p0 = odd_prime_support(q).empty() ? mpz_class(2) : odd_prime_support(q)[0];
      auto sub = solve_legendre(a / p0, b * p0, c / p0);
      if (!sub) return std::nullopt;
      auto [x, y, z] = *sub;
      return rescale({x, y * p0, z});
    }
    q = gcd(b, c);
    if (q > 1) {
      mpz_class p0 = odd_prime_support(q).empty() ? mpz_class(2) : odd_prime_support(q)[0];
      auto sub = solve_legendre(a * p0, b / p0, c / p0);
      if (!sub) return std::nullopt;
      auto [x, y, z] = *sub;
      return rescale({x * p0, y, z});
    }
    break;
  }

  // small case: brute force
  mpz_class mx = std::max({abs(a), abs(b), abs(c)});
  if (mx <= 16) {
    for (long x = 0; x <= 32; x++)
      for (long y = (x == 0 ? 1 : 0); y <= 32; y++) {
        mpz_class rhs = -(a * x * x + b * y * y);
        if (c == 0) continue;
        if (rhs % c != 0) continue;
        mpz_class z2 = rhs / c;
        if (z2 < 0) continue;
        if (mpz_perfect_square_p(z2.get_mpz_t())) {
          mpz_class z;
          mpz_sqrt(z.get_mpz_t(), z2.get_mpz_t());
          return rescale({x, y, z});
        }
      }
    return std::nullopt;
  }

  // order so |c| is the largest, remembering the permutation
  std::array<int, 3> perm = {0, 1, 2};
  std::array<mpz_class, 3> co = {a, b, c};
  std::sort(perm.begin(), perm.end(),
            [&](int i, int j) { return abs(co[i]) < abs(co[j]); });
  mpz_class A = co[perm[0]], B = co[perm[1]], C = co[perm[2]];

  // k^2 = -AB (mod C)
  mpz_class mAB = -A * B;
  auto k = sqrt_mod_squarefree(mAB, C);
  if (!k) return std::nullopt;
  mpz_class kk = *k;
  if (kk > abs(C) / 2) kk = kk - abs(C);
  mpz_class Cp = (kk * kk + A * B) / C;
  std::array<mpz_class, 3> sol;
  if (Cp == 0) {
    // k^2 = -AB with A, B squarefree coprime => |A| = |B| = 1
    // handle directly: A x^2 + B y^2 = 0 nontrivially only if A = -B
    if (A == -B) {
      sol = {1, 1, 0};
    } else {
      return std::nullopt;
    }
  } else {
    auto sub = solve_legendre(A, B, Cp);
    if (!sub) return std::nullopt;
    auto [x1, y1, z1] = *sub;
    // (x,y,z) = (k x1 + B y1, k y1 - A x1, Cp z1) solves A x^2 + B y^2 + C z^2 = 0
    sol = {kk * x1 + B * y1, kk * y1 - A * x1, Cp * z1};
    if (sol[0] == 0 && sol[1] == 0 && sol[2] == 0) return std::nullopt;
  }
  // undo permutation
  std::array<mpz_class, 3> out;
  for (int i = 0; i < 3; i++) out[perm[i]] = sol[i];
  mpz_class gg = gcd(gcd(out[0], out[1]), out[2]);
  if (gg > 1)
    for (auto& w : out) w /= gg;
  return rescale(out);
}

}  // namespace qconic

#pragma once

#include <cstdint>
#include <vector>

#include "fqm/errors.hpp"

namespace fqm {

// Small elementary number theory on machine words. All moduli here are
// desk-scale (p^f, cyclotomic orders); products go through __int128.

std::vector<std::pair<long, int>> factorize(long n);
long euler_phi(long n);
bool is_prime(long n);

long mod_pos(long x, long m);                  // representative in [0, m)
long mul_mod(long a, long b, long m);
long pow_mod(long a, long e, long m);
long inv_mod(long a, long m);                  // throws if gcd(a,m) != 1
long gcd_long(long a, long b);
long lcm_long(long a, long b);

// Legendre symbol, p an odd prime, returns -1/0/1.
int legendre(long a, long p);
// least positive quadratic nonresidue mod odd prime p
long least_nonresidue(long p);
// square root mod p^f for a unit square a (p odd), via root mod p + Hensel.
long sqrt_mod_prime_power(long a, long p, int f);

long ipow(long b, int e);

} // namespace fqm

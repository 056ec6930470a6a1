#include "fqm/numth.hpp"

#include <numeric>
#include <string>

namespace fqm {

std::vector<std::pair<long, int>> factorize(long n) {
    if (n <= 0) throw ValidationError("factorize: argument must be positive");
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

long euler_phi(long n) {
    long r = n;
    for (auto [p, e] : factorize(n)) { (void)e; r -= r / p; }
    return r;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

long mod_pos(long x, long m) {
    long r = x % m;
    return r < 0 ? r + m : r;
}

long mul_mod(long a, long b, long m) {
    return (long)((__int128)a * b % m);
}

long pow_mod(long a, long e, long m) {
    a = mod_pos(a, m);
    long r = 1 % m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }
long lcm_long(long a, long b) {
    if (a == 0 || b == 0) return 0;
    __int128 l = (__int128)(a / std::gcd(a, b)) * b;
    if (l > (__int128)1 << 62) throw SizeLimitError("lcm overflow");
    return (long)l;
}

long inv_mod(long a, long m) {
    long t = 0, nt = 1, r = m, nr = mod_pos(a, m);
    while (nr != 0) {
        long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1)
        throw ValidationError("inv_mod: " + std::to_string(a) + " not a unit mod " + std::to_string(m));
    return mod_pos(t, m);
}

int legendre(long a, long p) {
    a = mod_pos(a, p);
    if (a == 0) return 0;
    long r = pow_mod(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

long least_nonresidue(long p) {
    for (long t = 2; t < p; ++t)
        if (legendre(t, p) == -1) return t;
    throw ComputationError("no quadratic nonresidue mod " + std::to_string(p));
}

long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) {
        if ((__int128)r * b > (__int128)1 << 62) throw SizeLimitError("ipow overflow");
        r *= b;
    }
    return r;
}

long sqrt_mod_prime_power(long a, long p, int f) {
    long q = ipow(p, f);
    a = mod_pos(a, q);
    if (p == 2) throw ValidationError("sqrt_mod_prime_power: p must be odd");
    if (a % p == 0) throw ValidationError("sqrt_mod_prime_power: argument not a unit");
    // root mod p by direct scan (p is desk-scale here)
    long x0 = -1;
    for (long x = 1; x < p; ++x)
        if (mul_mod(x, x, p) == a % p) { x0 = x; break; }
    if (x0 < 0)
        throw ValidationError("sqrt_mod_prime_power: not a square mod p");
    // Hensel: x <- x - (x^2 - a) / (2x), doubling precision
    long prec = 1, x = x0, pk = p;
    while (prec < f) {
        prec = std::min(2 * prec, (long)f);
        pk = ipow(p, (int)prec);
        long num = mod_pos(mul_mod(x, x, pk) - a, pk);
        long den = inv_mod(mod_pos(2 * x, pk), pk);
        x = mod_pos(x - mul_mod(num, den, pk), pk);
    }
    if (mul_mod(x, x, q) != a) throw ComputationError("Hensel lift failed");
    return x;
}

} // namespace fqm

#include "fqm/padic.hpp"

#include <algorithm>

#include "fqm/numth.hpp"

namespace fqm {

PrecisionMatrix::PrecisionMatrix(long p_, int f_, long n_)
    : p(p_), f(f_), q(ipow(p_, f_)), n(n_), a(n_ * n_, 0) {}

bool PrecisionMatrix::is_symmetric() const {
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

long reduce_mod(const Integer& x, long p, int f) {
    long q = ipow(p, f);
    Integer r = x % q;
    if (r < 0) r += q;
    return r.get_si();
}

long reduce_mod(long x, long p, int f) { return mod_pos(x, ipow(p, f)); }

long valuation(long x_mod_q, long p, int f) {
    long q = ipow(p, f);
    long x = mod_pos(x_mod_q, q);
    if (x == 0) return kValuationInfinity;
    long v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
}

long det_mod_p(const PrecisionMatrix& g) {
    long p = g.p, n = g.n;
    std::vector<long> m(g.a.size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = mod_pos(g.a[i], p);
    long det = 1;
    for (long c = 0; c < n; ++c) {
        long piv = -1;
        for (long r = c; r < n; ++r)
            if (m[r * n + c] % p != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c) {
            for (long j = 0; j < n; ++j) std::swap(m[piv * n + j], m[c * n + j]);
            det = mod_pos(-det, p);
        }
        det = mul_mod(det, m[c * n + c], p);
        long inv = inv_mod(m[c * n + c], p);
        for (long r = c + 1; r < n; ++r) {
            long fac = mul_mod(m[r * n + c], inv, p);
            if (!fac) continue;
            for (long j = c; j < n; ++j)
                m[r * n + j] = mod_pos(m[r * n + j] - mul_mod(fac, m[c * n + j], p), p);
        }
    }
    return det;
}

namespace {

// symmetric congruence bookkeeping: G <- E^T G E, S <- S E for column
// operations E on the basis
struct Congruence {
    PrecisionMatrix g, s;
    long q;

    explicit Congruence(const PrecisionMatrix& g0) : g(g0), s(g0.p, g0.f, g0.n), q(g0.q) {
        for (long i = 0; i < g0.n; ++i) s.at(i, i) = 1;
    }
    // basis op e_dst += c * e_src
    void axpy(long dst, long src, long c) {
        c = mod_pos(c, q);
        if (!c) return;
        long n = g.n;
        for (long i = 0; i < n; ++i) g.at(i, dst) = mod_pos(g.at(i, dst) + mul_mod(c, g.at(i, src), q), q);
        for (long j = 0; j < n; ++j) g.at(dst, j) = mod_pos(g.at(dst, j) + mul_mod(c, g.at(src, j), q), q);
        for (long i = 0; i < n; ++i) s.at(i, dst) = mod_pos(s.at(i, dst) + mul_mod(c, s.at(i, src), q), q);
    }
    void scale(long k, long c) {
        long n = g.n;
        for (long i = 0; i < n; ++i) g.at(i, k) = mul_mod(g.at(i, k), c, q);
        for (long j = 0; j < n; ++j) g.at(k, j) = mul_mod(g.at(k, j), c, q);
        for (long i = 0; i < n; ++i) s.at(i, k) = mul_mod(s.at(i, k), c, q);
    }
    void swap(long i, long j) {
        if (i == j) return;
        long n = g.n;
        for (long r = 0; r < n; ++r) std::swap(g.at(r, i), g.at(r, j));
        for (long c = 0; c < n; ++c) std::swap(g.at(i, c), g.at(j, c));
        for (long r = 0; r < n; ++r) std::swap(s.at(r, i), s.at(r, j));
    }
    // 2x2 column mix on (i, j) by [[a, b], [c, d]]
    void mix2(long i, long j, long a, long b, long c, long d) {
        long n = g.n;
        for (long r = 0; r < n; ++r) {
            long vi = g.at(r, i), vj = g.at(r, j);
            g.at(r, i) = mod_pos(mul_mod(a, vi, q) + mul_mod(c, vj, q), q);
            g.at(r, j) = mod_pos(mul_mod(b, vi, q) + mul_mod(d, vj, q), q);
        }
        for (long cc = 0; cc < n; ++cc) {
            long vi = g.at(i, cc), vj = g.at(j, cc);
            g.at(i, cc) = mod_pos(mul_mod(a, vi, q) + mul_mod(c, vj, q), q);
            g.at(j, cc) = mod_pos(mul_mod(b, vi, q) + mul_mod(d, vj, q), q);
        }
        for (long r = 0; r < n; ++r) {
            long vi = s.at(r, i), vj = s.at(r, j);
            s.at(r, i) = mod_pos(mul_mod(a, vi, q) + mul_mod(c, vj, q), q);
            s.at(r, j) = mod_pos(mul_mod(b, vi, q) + mul_mod(d, vj, q), q);
        }
    }
};

PrecisionMatrix mat_mul(const PrecisionMatrix& a, const PrecisionMatrix& b) {
    PrecisionMatrix r(a.p, a.f, a.n);
    long q = a.q, n = a.n;
    for (long i = 0; i < n; ++i)
        for (long k = 0; k < n; ++k) {
            long v = a.at(i, k);
            if (!v) continue;
            for (long j = 0; j < n; ++j)
                r.at(i, j) = mod_pos(r.at(i, j) + mul_mod(v, b.at(k, j), q), q);
        }
    return r;
}

PrecisionMatrix congruence_value(const PrecisionMatrix& g, const PrecisionMatrix& s) {
    PrecisionMatrix st(s.p, s.f, s.n);
    for (long i = 0; i < s.n; ++i)
        for (long j = 0; j < s.n; ++j) st.at(i, j) = s.at(j, i);
    return mat_mul(mat_mul(st, g), s);
}

// inverse mod p^f of a matrix with unit determinant mod p (Gauss-Jordan)
PrecisionMatrix mat_inverse(const PrecisionMatrix& m0) {
    long n = m0.n, q = m0.q, p = m0.p;
    PrecisionMatrix m = m0, inv(m0.p, m0.f, n);
    for (long i = 0; i < n; ++i) inv.at(i, i) = 1;
    for (long c = 0; c < n; ++c) {
        long piv = -1;
        for (long r = c; r < n; ++r)
            if (m.at(r, c) % p != 0) { piv = r; break; }
        if (piv < 0) throw ComputationError("matrix not invertible mod p^f");
        for (long j = 0; j < n; ++j) {
            std::swap(m.a[piv * n + j], m.a[c * n + j]);
            std::swap(inv.a[piv * n + j], inv.a[c * n + j]);
        }
        long s = inv_mod(m.at(c, c), q);
        for (long j = 0; j < n; ++j) {
            m.at(c, j) = mul_mod(m.at(c, j), s, q);
            inv.at(c, j) = mul_mod(inv.at(c, j), s, q);
        }
        for (long r = 0; r < n; ++r) {
            if (r == c || m.at(r, c) == 0) continue;
            long fac = m.at(r, c);
            for (long j = 0; j < n; ++j) {
                m.at(r, j) = mod_pos(m.at(r, j) - mul_mod(fac, m.at(c, j), q), q);
                inv.at(r, j) = mod_pos(inv.at(r, j) - mul_mod(fac, inv.at(c, j), q), q);
            }
        }
    }
    return inv;
}

// x, y with x^2 + y^2 = a (a a unit) mod p^f, x a unit
std::pair<long, long> sum_of_two_squares(long a, long p, int f) {
    long q = ipow(p, f);
    for (long y = 0; y < p; ++y) {
        long z = mod_pos(a - mul_mod(y, y, q), q);
        if (z % p == 0) continue;
        if (legendre(z % p, p) == 1)
            return {sqrt_mod_prime_power(z, p, f), y};
    }
    throw ComputationError("no representation as a sum of two squares found");
}

} // namespace

OddDiagonalization diagonalize_unimodular_odd(const PrecisionMatrix& g0) {
    if (g0.p == 2) throw ValidationError("diagonalize_unimodular_odd: p must be odd");
    if (!g0.is_symmetric()) throw ValidationError("matrix must be symmetric");
    if (det_mod_p(g0) == 0)
        throw ValidationError("matrix is not unimodular mod p");
    long p = g0.p, q = g0.q, n = g0.n;

    Congruence w(g0);
    for (long k = 0; k < n; ++k) {
        long piv = -1;
        for (long i = k; i < n; ++i)
            if (w.g.at(i, i) % p != 0) { piv = i; break; }
        if (piv < 0) {
            // no unit on the diagonal: fold in a unit off-diagonal entry,
            // G_ii + 2 G_ij + G_jj is then a unit (p odd)
            bool done = false;
            for (long i = k; i < n && !done; ++i)
                for (long j = i + 1; j < n && !done; ++j)
                    if (w.g.at(i, j) % p != 0) {
                        w.axpy(i, j, 1);
                        piv = i;
                        done = true;
                    }
            if (!done) throw ValidationError("matrix is not unimodular mod p");
        }
        w.swap(k, piv);
        long inv = inv_mod(w.g.at(k, k), q);
        for (long i = k + 1; i < n; ++i)
            w.axpy(i, k, mod_pos(-mul_mod(w.g.at(i, k), inv, q), q));
    }

    // normalize each unit into its square class representative, 1 or t
    long t = least_nonresidue(p);
    std::vector<bool> is_t(n);
    for (long k = 0; k < n; ++k) {
        long u = w.g.at(k, k);
        if (legendre(u % p, p) == 1) {
            w.scale(k, sqrt_mod_prime_power(inv_mod(u, q), p, g0.f));
            is_t[k] = false;
        } else {
            w.scale(k, sqrt_mod_prime_power(mul_mod(t, inv_mod(u, q), q), p, g0.f));
            is_t[k] = true;
        }
    }
    // ones first, then the run of t's
    for (long k = 0, front = 0; k < n; ++k)
        if (!is_t[k]) {
            w.swap(k, front);
            bool tmp = is_t[k]; is_t[k] = is_t[front]; is_t[front] = tmp;
            ++front;
        }
    long first_t = n;
    for (long k = 0; k < n; ++k)
        if (is_t[k]) { first_t = k; break; }
    long nt = n - first_t;
    // fold t-pairs into ones: columns (x, y), (-y, x) with x^2 + y^2 = t^{-1}
    if (nt >= 2) {
        auto [x, y] = sum_of_two_squares(inv_mod(t, q), p, g0.f);
        for (long k = first_t; k + 1 < n; k += 2)
            w.mix2(k, k + 1, x, mod_pos(-y, q), y, x);
    }

    OddDiagonalization out;
    out.t = t;
    out.has_t = (nt % 2) == 1;
    out.s = w.s;
    out.canonical = PrecisionMatrix(p, g0.f, n);
    for (long i = 0; i < n; ++i) out.canonical.at(i, i) = 1;
    if (out.has_t) out.canonical.at(n - 1, n - 1) = t;

    if (congruence_value(g0, out.s).a != out.canonical.a)
        throw ComputationError("odd diagonalization: congruence check failed");
    return out;
}

PrecisionMatrix transform_to_diagonal_target(const PrecisionMatrix& g,
                                             const std::vector<long>& target_diag) {
    PrecisionMatrix tgt(g.p, g.f, g.n);
    for (long i = 0; i < g.n; ++i) tgt.at(i, i) = mod_pos(target_diag[i], g.q);
    OddDiagonalization dg = diagonalize_unimodular_odd(g);
    OddDiagonalization dt = diagonalize_unimodular_odd(tgt);
    if (dg.canonical.a != dt.canonical.a)
        throw ValidationError("target has a different determinant square class");
    // S = S_g S_t^{-1} satisfies S^T G S = target
    PrecisionMatrix s = mat_mul(dg.s, mat_inverse(dt.s));
    if (congruence_value(g, s).a != tgt.a)
        throw ComputationError("transform_to_diagonal_target: check failed");
    return s;
}

std::vector<std::vector<long>> split_unit_vector(const PrecisionMatrix& g,
                                                 const std::vector<long>& gamma) {
    long n = g.n, q = g.q, p = g.p;
    // row = (G gamma)^T; gamma pairs to a unit with itself, so the row has a unit entry
    std::vector<long> row(n, 0);
    for (long i = 0; i < n; ++i) {
        long acc = 0;
        for (long j = 0; j < n; ++j) acc = mod_pos(acc + mul_mod(g.at(i, j), gamma[j], q), q);
        row[i] = acc;
    }
    long norm = 0;
    for (long i = 0; i < n; ++i) norm = mod_pos(norm + mul_mod(gamma[i], row[i], q), q);
    if (norm % p == 0)
        throw ValidationError("split_unit_vector: gamma^T G gamma is not a unit");
    long piv = -1;
    for (long i = 0; i < n; ++i)
        if (row[i] % p != 0) { piv = i; break; }
    long inv = inv_mod(row[piv], q);
    std::vector<std::vector<long>> basis;
    for (long k = 0; k < n; ++k) {
        if (k == piv) continue;
        std::vector<long> v(n, 0);
        v[k] = 1;
        v[piv] = mod_pos(-mul_mod(row[k], inv, q), q);
        basis.push_back(std::move(v));
    }
    return basis;
}

PairSplit split_primitive_pair(const PrecisionMatrix& g, const std::vector<long>& gamma) {
    long n = g.n, q = g.q, p = g.p;
    if (n < 2) throw ValidationError("split_primitive_pair: rank must be >= 2");
    long unit_pos = -1;
    for (long i = 0; i < n; ++i)
        if (gamma[i] % p != 0) { unit_pos = i; break; }
    if (unit_pos < 0) throw ValidationError("split_primitive_pair: gamma is not primitive");

    auto pair_with = [&](const std::vector<long>& u, const std::vector<long>& v) {
        long acc = 0;
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                acc = mod_pos(acc + mul_mod(mul_mod(u[i], g.at(i, j), q), v[j], q), q);
        return acc;
    };
    long norm = pair_with(gamma, gamma);
    if (norm % p != 0)
        throw ValidationError("split_primitive_pair: gamma has unit norm, use the rank-1 split");

    // solve G delta = e_{unit_pos}, then rescale so gamma^T G delta = 1
    PrecisionMatrix ginv = mat_inverse(g);
    std::vector<long> delta(n);
    for (long i = 0; i < n; ++i) delta[i] = ginv.at(i, unit_pos);
    long pairing = pair_with(gamma, delta);  // = gamma[unit_pos] / scaling, a unit
    long fix = inv_mod(pairing, q);
    for (long i = 0; i < n; ++i) delta[i] = mul_mod(delta[i], fix, q);

    // U-perp: solutions of (G gamma)^T x = (G delta)^T x = 0; the pair Gram
    // [[p^w a, 1], [1, p^s b]] is unimodular, so the system has rank 2 mod p
    std::vector<long> r1(n), r2(n);
    for (long i = 0; i < n; ++i) {
        long a1 = 0, a2 = 0;
        for (long j = 0; j < n; ++j) {
            a1 = mod_pos(a1 + mul_mod(g.at(i, j), gamma[j], q), q);
            a2 = mod_pos(a2 + mul_mod(g.at(i, j), delta[j], q), q);
        }
        r1[i] = a1;
        r2[i] = a2;
    }
    long j1 = -1;
    for (long j = 0; j < n && j1 < 0; ++j)
        if (r1[j] % p != 0) j1 = j;
    if (j1 < 0) throw ComputationError("split_primitive_pair: system rank collapsed");
    long inv1 = inv_mod(r1[j1], q);
    for (long j = 0; j < n; ++j) r1[j] = mul_mod(r1[j], inv1, q);
    long f2 = r2[j1];
    for (long j = 0; j < n; ++j) r2[j] = mod_pos(r2[j] - mul_mod(f2, r1[j], q), q);
    long j2 = -1;
    for (long j = 0; j < n; ++j)
        if (j != j1 && r2[j] % p != 0) { j2 = j; break; }
    if (j2 < 0) throw ComputationError("split_primitive_pair: no second unit pivot");
    long inv2 = inv_mod(r2[j2], q);
    for (long j = 0; j < n; ++j) r2[j] = mul_mod(r2[j], inv2, q);
    long f1 = r1[j2];
    for (long j = 0; j < n; ++j) r1[j] = mod_pos(r1[j] - mul_mod(f1, r2[j], q), q);

    PairSplit out;
    out.delta = delta;
    for (long k = 0; k < n; ++k) {
        if (k == j1 || k == j2) continue;
        std::vector<long> v(n, 0);
        v[k] = 1;
        v[j1] = mod_pos(-r1[k], q);
        v[j2] = mod_pos(-r2[k], q);
        out.perp_basis.push_back(std::move(v));
    }
    // the completed basis (gamma, delta, perp) must be unimodular
    PrecisionMatrix full(g.p, g.f, n);
    for (long i = 0; i < n; ++i) {
        full.at(i, 0) = gamma[i];
        full.at(i, 1) = delta[i];
        for (size_t k = 0; k < out.perp_basis.size(); ++k)
            full.at(i, 2 + (long)k) = out.perp_basis[k][i];
    }
    if (det_mod_p(full) == 0)
        throw ComputationError("split_primitive_pair: completed basis is singular");
    for (const auto& v : out.perp_basis)
        if (pair_with(gamma, v) != 0 || pair_with(delta, v) != 0)
            throw ComputationError("split_primitive_pair: complement not orthogonal");
    long det2 = mod_pos(mul_mod(norm, pair_with(delta, delta), q) - 1, q);
    if (det2 % p == 0)
        throw ComputationError("split_primitive_pair: 2x2 block is not unimodular");
    return out;
}

std::vector<long> find_isotropic_primitive_2(const PrecisionMatrix& g, int e) {
    long n = g.n, q = g.q;
    if (g.p != 2 || g.f != e + 1)
        throw ValidationError("find_isotropic_primitive_2: matrix must live over 2^{e+1}");
    if (det_mod_p(g) == 0)
        throw ValidationError("find_isotropic_primitive_2: Gram not invertible mod 2");
    std::vector<long> y(n, 0);
    // counter enumeration, first coordinate varies fastest
    while (true) {
        long i = 0;
        while (i < n && y[i] == q - 1) { y[i] = 0; ++i; }
        if (i == n) break;
        ++y[i];
        bool primitive = false;
        for (long j = 0; j < n; ++j)
            if (y[j] % 2 != 0) { primitive = true; break; }
        if (!primitive) continue;
        long acc = 0;
        for (long r = 0; r < n; ++r) {
            if (!y[r]) continue;
            for (long c = 0; c < n; ++c)
                if (y[c]) acc = mod_pos(acc + mul_mod(mul_mod(y[r], g.at(r, c), q), y[c], q), q);
        }
        if (acc == 0) return y;
    }
    throw ComputationError("find_isotropic_primitive_2: exhausted search (hypotheses violated)");
}

PrecisionMatrix two_adic_quadratic_gram(const FiniteQuadraticModule& d,
                                        const std::vector<long>& gens, int e) {
    long q2 = ipow(2, e + 1);
    PrecisionMatrix g(2, e + 1, (long)gens.size());
    for (size_t i = 0; i < gens.size(); ++i) {
        Element gi = d.generator(gens[i]);
        QmodZ qv = d.q(gi);
        Integer num = qv.representative().get_num() * (q2 / qv.denominator().get_si());
        g.at(i, i) = reduce_mod(num, 2, e + 1);
        for (size_t j = i + 1; j < gens.size(); ++j) {
            QmodZ bv = d.b(gi, d.generator(gens[j]));
            // pairings carry denominator 2^e; the extra-bit lift is arbitrary
            Integer bnum = bv.representative().get_num() * ((q2 / 2) / bv.denominator().get_si());
            long v = reduce_mod(bnum, 2, e + 1);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    }
    return g;
}

PrecisionMatrix bilinear_gram(const FiniteQuadraticModule& d, long p, int e, int f) {
    long q = ipow(p, e);
    PrecisionMatrix g(p, f, d.rank());
    for (long i = 0; i < d.rank(); ++i)
        for (long j = 0; j < d.rank(); ++j) {
            QmodZ bv = d.gram_entry(i, j);
            Integer num = bv.representative().get_num() * (q / bv.denominator().get_si());
            g.at(i, j) = reduce_mod(num, p, f);
        }
    return g;
}

int weak_independence_level(const FiniteQuadraticModule& d, const Element& delta,
                            const Element& mu, long p, int max_e) {
    int best = 0;
    for (int e = 1; e <= max_e; ++e) {
        long q = ipow(p, e);
        bool ok = true;
        for (long a = 0; a < q && ok; ++a)
            for (long b = 0; b < q && ok; ++b) {
                if (a == 0 && b == 0) continue;
                Element s = d.add(d.scale(Integer(a), delta), d.scale(Integer(b), mu));
                if (d.is_zero_elem(s)) ok = false;
            }
        if (ok) best = e;
        else break;
    }
    return best;
}

namespace {

struct GroupShape {
    long p;
    int e;
    long n;
};

GroupShape detect_shape(const FiniteQuadraticModule& d) {
    if (d.rank() == 0)
        throw ValidationError("find_two_isotropic: trivial form");
    long q = d.orders()[0];
    for (long o : d.orders())
        if (o != q) throw ValidationError("find_two_isotropic: underlying group must be (Z_q)^n");
    auto fac = factorize(q);
    if (fac.size() != 1)
        throw ValidationError("find_two_isotropic: q must be a prime power");
    return {fac[0].first, fac[0].second, d.rank()};
}

void check_rank_hypotheses(const GroupShape& s) {
    bool ok = s.p == 2 ? (s.e <= 2 ? s.n >= 7 : s.n >= 3)
                       : (s.e == 1 ? s.n >= 5 : s.n >= 2);
    if (!ok)
        throw ValidationError("find_two_isotropic: rank hypotheses not met (n = " +
                              std::to_string(s.n) + ", p = " + std::to_string(s.p) +
                              ", e = " + std::to_string(s.e) + ")");
}

bool verify_pair(const FiniteQuadraticModule& d, const TwoIsotropic& out) {
    if (d.is_zero_elem(out.delta) || d.is_zero_elem(out.mu)) return false;
    if (!d.q(out.delta).is_zero() || !d.q(out.mu).is_zero()) return false;
    if (!d.b(out.delta, out.mu).is_zero()) return false;
    return weak_independence_level(d, out.delta, out.mu, out.p, out.level_e) >= out.level_e;
}

// connected components of the generator graph (edges = nonzero pairings)
std::vector<std::vector<long>> orthogonal_components(const FiniteQuadraticModule& d) {
    long r = d.rank();
    std::vector<long> comp(r, -1);
    std::vector<std::vector<long>> out;
    for (long i = 0; i < r; ++i) {
        if (comp[i] >= 0) continue;
        std::vector<long> stack{i}, members;
        comp[i] = (long)out.size();
        while (!stack.empty()) {
            long v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (long j = 0; j < r; ++j)
                if (comp[j] < 0 && !d.gram_entry(v, j).is_zero()) {
                    comp[j] = comp[v];
                    stack.push_back(j);
                }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

} // namespace

TwoIsotropic find_two_isotropic_brute(const FiniteQuadraticModule& d, long bound) {
    GroupShape s = detect_shape(d);
    long n = d.element_count(bound);
    std::vector<long> iso;
    for (long i = 1; i < n; ++i)
        if (d.q(d.element_at(i)).is_zero()) iso.push_back(i);
    for (size_t a = 0; a < iso.size(); ++a) {
        Element da = d.element_at(iso[a]);
        for (size_t b = a + 1; b < iso.size(); ++b) {
            Element mb = d.element_at(iso[b]);
            if (!d.b(da, mb).is_zero()) continue;
            int lvl = weak_independence_level(d, da, mb, s.p, s.e);
            if (lvl >= 1) return TwoIsotropic{da, mb, s.p, lvl};
        }
    }
    throw ComputationError("find_two_isotropic_brute: no pair exists");
}

TwoIsotropic find_two_isotropic(const FiniteQuadraticModule& d) {
    GroupShape s = detect_shape(d);
    check_rank_hypotheses(s);
    long q = ipow(s.p, s.e);

    TwoIsotropic out;
    out.p = s.p;
    try {
        if (s.p % 2 == 1 && s.e >= 2) {
            // p^{e-1} gamma_1, p^{e-1} gamma_2: isotropic and orthogonal for any
            // basis once e >= 2 (p^{2e-2} against denominators dividing p^e)
            out.delta = d.scale(Integer(ipow(s.p, s.e - 1)), d.generator(0));
            out.mu = d.scale(Integer(ipow(s.p, s.e - 1)), d.generator(1));
            out.level_e = 1;
        } else if (s.p % 2 == 1) {
            // e = 1: transform to the alternating pattern diag(1,-1,1,-1,1,...[,t])
            // and pair delta_1+delta_2, delta_3+delta_4
            PrecisionMatrix g = bilinear_gram(d, s.p, s.e, s.e + 1);
            OddDiagonalization canon = diagonalize_unimodular_odd(g);
            std::vector<long> target(s.n, 1);
            target[1] = g.q - 1;
            target[3] = g.q - 1;
            if (canon.has_t) target[s.n - 1] = canon.t;
            PrecisionMatrix st = transform_to_diagonal_target(g, target);
            auto basis_vec = [&](long col) {
                std::vector<long> coords(s.n);
                for (long i = 0; i < s.n; ++i) coords[i] = mod_pos(st.at(i, col), q);
                return d.reduced(std::move(coords));
            };
            out.delta = d.add(basis_vec(0), basis_vec(1));
            out.mu = d.add(basis_vec(2), basis_vec(3));
            out.level_e = 1;
        } else if (s.e >= 3) {
            // 2^{e-1} g_i is isotropic for e >= 3; orthogonality is automatic at e >= 2
            out.delta = d.scale(Integer(ipow(2, s.e - 1)), d.generator(0));
            out.mu = d.scale(Integer(ipow(2, s.e - 1)), d.generator(1));
            out.level_e = 1;
        } else {
            // p = 2, e <= 2: primitive isotropic vectors of order 2^e taken from
            // two orthogonal block groups of rank >= 3 each
            auto comps = orthogonal_components(d);
            std::vector<long> group1, group2;
            for (const auto& c : comps) {
                if ((long)group1.size() < 3) group1.insert(group1.end(), c.begin(), c.end());
                else group2.insert(group2.end(), c.begin(), c.end());
            }
            if ((long)group2.size() < 3)
                throw ComputationError("no orthogonal block split available");
            auto search = [&](const std::vector<long>& gens) {
                PrecisionMatrix g = two_adic_quadratic_gram(d, gens, s.e);
                std::vector<long> y = find_isotropic_primitive_2(g, s.e);
                std::vector<long> coords(d.rank(), 0);
                for (size_t i = 0; i < gens.size(); ++i) coords[gens[i]] = mod_pos(y[i], q);
                return d.reduced(std::move(coords));
            };
            out.delta = search(group1);
            out.mu = search(group2);
            out.level_e = s.e;
        }
        if (verify_pair(d, out)) return out;
    } catch (const ComputationError&) {
        // constructive path failed; fall back to the exhaustive search
    }
    return find_two_isotropic_brute(d);
}

} // namespace fqm

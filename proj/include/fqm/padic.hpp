#pragma once

#include <limits>
#include <vector>

#include "fqm/module.hpp"

namespace fqm {

// Finite-precision p-adic linear algebra: all matrices live over Z/p^f with
// entries in [0, p^f). Exactness of everything produced here is re-verified
// downstream in Q/Z.
struct PrecisionMatrix {
    long p = 2;
    int f = 1;
    long q = 2;  // p^f
    long n = 0;
    std::vector<long> a;  // row-major

    PrecisionMatrix() = default;
    PrecisionMatrix(long p_, int f_, long n_);
    long& at(long i, long j) { return a[i * n + j]; }
    long at(long i, long j) const { return a[i * n + j]; }
    bool is_symmetric() const;
};

inline constexpr long kValuationInfinity = std::numeric_limits<long>::max();

long reduce_mod(const Integer& x, long p, int f);
long reduce_mod(long x, long p, int f);
// min(v_p(x), anything below f); x = 0 at this precision maps to +infinity
long valuation(long x_mod_q, long p, int f);

// determinant mod p (for unimodularity checks)
long det_mod_p(const PrecisionMatrix& g);

struct OddDiagonalization {
    PrecisionMatrix s;          // basis change, columns = new basis
    PrecisionMatrix canonical;  // diag(1,...,1) or diag(1,...,1,t)
    long t = 0;                 // least positive nonresidue mod p
    bool has_t = false;
};

// S^T G S = canonical over Z/p^f for odd p and unimodular symmetric G.
// canonical carries a trailing t exactly when det(G) is a nonresidue.
OddDiagonalization diagonalize_unimodular_odd(const PrecisionMatrix& g);

// congruence transform to an arbitrary unimodular diagonal target with the
// same determinant square class (via the canonical form on both sides)
PrecisionMatrix transform_to_diagonal_target(const PrecisionMatrix& g,
                                             const std::vector<long>& target_diag);

struct PairSplit {
    std::vector<long> delta;                   // gamma^T G delta = 1
    std::vector<std::vector<long>> perp_basis; // rank n-2 complement of (gamma, delta)
};

// Orthogonal split of U = <gamma, delta> off a unimodular form when gamma is
// primitive with p | gamma^T G gamma. The unit-norm case belongs to the caller.
PairSplit split_primitive_pair(const PrecisionMatrix& g, const std::vector<long>& gamma);

// complement basis {x : gamma^T G x = 0} when gamma^T G gamma is a unit
std::vector<std::vector<long>> split_unit_vector(const PrecisionMatrix& g,
                                                 const std::vector<long>& gamma);

// First primitive y with y^T G y = 0 mod 2^{e+1}, G the quadratic-integerized
// 2-adic Gram (diagonal Q * 2^{e+1}, off-diagonal b * 2^e). Enumeration runs
// with the first coordinate varying fastest.
std::vector<long> find_isotropic_primitive_2(const PrecisionMatrix& g, int e);

struct TwoIsotropic {
    Element delta;
    Element mu;
    long p = 2;
    int level_e = 1;  // weak independence holds at p^level_e
};

// Two isotropic, orthogonal, weakly independent vectors in a form with
// underlying group (Z_q)^n, q = p^e, under the rank hypotheses
//   p odd:  n >= 5 (e = 1), n >= 2 (e >= 2)
//   p = 2:  n >= 7 (e <= 2), n >= 3 (e >= 3).
TwoIsotropic find_two_isotropic(const FiniteQuadraticModule& d);

// exhaustive oracle over all element pairs (|D| bounded)
TwoIsotropic find_two_isotropic_brute(const FiniteQuadraticModule& d,
                                      long bound = 10000);

// weak independence level of a concrete pair: largest e with
// (a delta + b mu = 0  =>  a = b = 0 mod p^e); 0 if none
int weak_independence_level(const FiniteQuadraticModule& d, const Element& delta,
                            const Element& mu, long p, int max_e);

// quadratic-integerized Gram of a (Z_{2^e})^n form at precision 2^{e+1}
PrecisionMatrix two_adic_quadratic_gram(const FiniteQuadraticModule& d,
                                        const std::vector<long>& gens, int e);

// bilinear Gram q*(g_i, g_j) of a (Z_{p^e})^n form lifted to precision p^f
PrecisionMatrix bilinear_gram(const FiniteQuadraticModule& d, long p, int e, int f);

} // namespace fqm

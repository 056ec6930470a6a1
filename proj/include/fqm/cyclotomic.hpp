#pragma once

#include <complex>
#include <vector>

#include "fqm/rational.hpp"

namespace fqm {

// Cached data for Q(zeta_L): the rewrite rows x^k mod Phi_L for k in [phi(L), L).
struct CycField {
    long order = 1;
    long degree = 1;                               // phi(L)
    std::vector<std::vector<Integer>> reduce_row;  // row k-degree: x^{degree+k} mod Phi_L
};

const CycField& cyc_field(long order);

// An element of Q(zeta_L), stored reduced modulo the L-th cyclotomic polynomial
// in the basis zeta^0, ..., zeta^{phi(L)-1}. Canonical, so equality is
// coefficient equality. Mixed-order arithmetic lifts both operands to the lcm.
class CycNum {
public:
    CycNum() : order_(1), c_(1, Rational(0)) {}
    explicit CycNum(const Rational& r) : order_(1), c_(1, r) {}
    explicit CycNum(long n) : order_(1), c_(1, Rational(n)) {}

    static CycNum zero(long order);
    static CycNum one(long order);
    static CycNum root(long k, long order);  // zeta_order^k
    // sum of count[k] copies of zeta_order^k
    static CycNum from_exponent_counts(const std::vector<Integer>& count, long order);

    long order() const { return order_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;
    Rational rational_part() const { return c_[0]; }  // exact when is_rational()

    CycNum lifted_to(long new_order) const;  // requires order | new_order
    CycNum conj() const;                     // Galois map zeta -> zeta^{-1}

    CycNum operator+(const CycNum& o) const;
    CycNum operator-(const CycNum& o) const;
    CycNum operator-() const;
    CycNum operator*(const CycNum& o) const;
    CycNum operator*(const Rational& r) const;
    CycNum& operator+=(const CycNum& o);
    CycNum& operator*=(const CycNum& o) { return *this = *this * o; }
    bool operator==(const CycNum& o) const;
    bool operator!=(const CycNum& o) const { return !(*this == o); }

    // acc += x * y with all three at the same order; recycles scratch space
    // across calls (the hot path of matrix products)
    friend void cyc_fma(CycNum& acc, const CycNum& x, const CycNum& y);

    // numeric embedding; used only to disambiguate signs
    std::complex<double> to_complex() const;

    std::string str() const;

private:
    CycNum(long order, std::vector<Rational> c) : order_(order), c_(std::move(c)) {}
    static CycNum reduce_buffer(std::vector<Rational> buf, long order);

    long order_;
    std::vector<Rational> c_;
};

// e(x) = exp(2 pi i x) as an exact root of unity in Q(zeta_L).
// L must be a multiple of the denominator of x.
CycNum root_of_unity(const QmodZ& x, long L);

inline std::complex<double> embed_complex(const CycNum& a) { return a.to_complex(); }

// value * base^{-k/2} with sqrt(base) kept symbolic. Even powers of k fold
// into value exactly; a perfect-square base folds k = 1 as well.
class ScaledNum {
public:
    ScaledNum() : k_(0), base_(1), value_(CycNum(1)) {}
    ScaledNum(int k, CycNum value, long base);

    int k() const { return k_; }
    long base() const { return base_; }
    const CycNum& value() const { return value_; }

    ScaledNum operator*(const ScaledNum& o) const;
    bool operator==(const ScaledNum& o) const;

private:
    void canonicalize();
    int k_;
    long base_;
    CycNum value_;
};

// exact square root of a nonnegative integer if it is a perfect square
bool perfect_square(long n, long* root);

} // namespace fqm

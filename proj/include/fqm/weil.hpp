#pragma once

#include <string>
#include <vector>

#include "fqm/cyclotomic.hpp"
#include "fqm/module.hpp"

namespace fqm {

// A cyclotomic matrix carrying a symbolic scale base^{-k/2}. Even powers of k
// fold into the entries as exact rationals; a perfect-square base folds k = 1
// as well, so canonically k stays in {0, 1}.
class ScaledMatrix {
public:
    ScaledMatrix() = default;
    // takes ownership of the entries and canonicalizes
    ScaledMatrix(int k, long base, long rows, long cols, std::vector<CycNum> entries);
    static ScaledMatrix zero(long rows, long cols, long base);
    static ScaledMatrix identity(long n, long base);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    int k() const { return k_; }
    long base() const { return base_; }
    const CycNum& at(long i, long j) const { return m_[i * cols_ + j]; }

    ScaledMatrix operator*(const ScaledMatrix& o) const;
    ScaledMatrix conj_transpose() const;
    // re-express over a new base whose ratio to the old one is a perfect square
    ScaledMatrix rebased(long new_base) const;

    // exact when the k's agree; across parity, entrywise squared comparison
    // with a float sign disambiguation at tolerance 1e-6
    bool equals(const ScaledMatrix& o) const;
    // first differing entry for reports; valid when !equals
    std::string describe_difference(const ScaledMatrix& o) const;

private:
    void canonicalize();
    int k_ = 0;
    long base_ = 1;
    long rows_ = 0;
    long cols_ = 0;
    std::vector<CycNum> m_;
};

// products with a sparse 0/1 integer matrix given as rows of column indices
ScaledMatrix int_times_scaled(const std::vector<std::vector<long>>& rows, long ncols,
                              const ScaledMatrix& a);
ScaledMatrix scaled_times_int_transposed(const ScaledMatrix& a,
                                         const std::vector<std::vector<long>>& rows,
                                         long ncols);
ScaledMatrix scaled_times_int(const ScaledMatrix& a,
                              const std::vector<std::vector<long>>& rows, long ncols);

struct Mat2 {
    long a = 1, b = 0, c = 0, d = 1;
    bool operator==(const Mat2& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
};

Mat2 mat2_mul(const Mat2& x, const Mat2& y);
long mat2_det(const Mat2& m);

inline Mat2 mat2_s() { return {0, -1, 1, 0}; }
inline Mat2 mat2_t(long n = 1) { return {1, n, 0, 1}; }

// Word over {S, T^n} with product equal to the matrix; T-powers are stored
// run-length encoded, letters() expands to single {S, T, T^-1} steps.
struct SL2Word {
    struct Token {
        char gen;    // 'S' or 'T'
        long power;  // 1 for S; any nonzero value for T
    };
    Mat2 matrix;
    std::vector<Token> tokens;
    std::vector<std::string> letters() const;
};

// Euclidean decomposition on the bottom row; O(log max entry) tokens.
SL2Word sl2_word(const Mat2& m);

// rho(T) = diag(e(Q(gamma))), rho(S) = |D|^{-1/2} (e(-sign/8) e(-(gamma,beta))),
// indexed by the canonical element order; even signature only.
ScaledMatrix rho_generator(const FiniteQuadraticModule& d, char gen);
ScaledMatrix rho(const FiniteQuadraticModule& d, const Mat2& m);

struct CheckResult {
    std::string check;
    bool pass;
    std::string counterexample;  // empty when pass
};
using Report = std::vector<CheckResult>;

bool report_all_pass(const Report& r);

// S^4 = 1, (ST)^3 = S^2, unitarity of the generators, Milgram consistency
Report verify_relations(const FiniteQuadraticModule& d);

// rho(M) = Id for seeded random M in Gamma(level)
Report verify_gamma_trivial(const FiniteQuadraticModule& d, int samples, unsigned seed);
Mat2 random_gamma_n_element(long n, unsigned seed, int index);

} // namespace fqm

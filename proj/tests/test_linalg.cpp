#include "doctest.h"

#include <random>

#include "fqm/linalg.hpp"

using namespace fqm;

namespace {

ZMat random_zmat(long n, long m, std::mt19937& rng, long span) {
    ZMat a(n, std::vector<Integer>(m));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < m; ++j) a[i][j] = (long)(rng() % (2 * span + 1)) - span;
    return a;
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("rref, rank and kernel on a small system") {
    QMat a = {{Rational(1), Rational(2), Rational(3)},
              {Rational(2), Rational(4), Rational(6)},
              {Rational(0), Rational(1), Rational(1)}};
    CHECK(rank(a) == 2);
    QMat k = kernel_basis(a, 3);
    REQUIRE(k.size() == 1);
    for (const auto& row : a) {
        Rational acc(0);
        for (long j = 0; j < 3; ++j) acc += row[j] * k[0][j];
        CHECK(acc == 0);
    }
}

TEST_CASE("solve") {
    QMat a = {{Rational(2), Rational(1)}, {Rational(1), Rational(3)}};
    QVec b = {Rational(5), Rational(10)};
    QVec x;
    REQUIRE(solve(a, b, x));
    CHECK(a[0][0] * x[0] + a[0][1] * x[1] == b[0]);
    CHECK(a[1][0] * x[0] + a[1][1] * x[1] == b[1]);
    QMat bad = {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
    QVec rhs = {Rational(0), Rational(1)};
    CHECK_FALSE(solve(bad, rhs, x));
}

TEST_CASE("Smith normal form properties on random integer matrices") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        long n = 1 + (long)(rng() % 4), m = 1 + (long)(rng() % 4);
        ZMat a = random_zmat(n, m, rng, 6);
        SmithNF s = smith_normal_form(a);
        // U A V = diag(s)
        ZMat uav = z_mat_mul(z_mat_mul(s.u, a), s.v);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < m; ++j)
                CHECK(uav[i][j] == (i == j ? s.diag[i] : Integer(0)));
        // nonnegative and divisibility chain, zeros last
        for (size_t i = 0; i < s.diag.size(); ++i) CHECK(s.diag[i] >= 0);
        for (size_t i = 0; i + 1 < s.diag.size(); ++i) {
            if (s.diag[i + 1] == 0) continue;
            CHECK(s.diag[i] != 0);
            CHECK(s.diag[i + 1] % s.diag[i] == 0);
        }
        // U, V unimodular: integer inverses exist
        CHECK_NOTHROW(z_mat_inverse_unimodular(s.u));
        CHECK_NOTHROW(z_mat_inverse_unimodular(s.v));
    }
}

TEST_CASE("the diag(3,2) regression: quotient orders must stay positive") {
    ZMat a = {{Integer(3), Integer(0)}, {Integer(0), Integer(2)}};
    SmithNF s = smith_normal_form(a);
    CHECK(s.diag[0] == 1);
    CHECK(s.diag[1] == 6);
}

TEST_CASE("lattice column basis spans the same lattice") {
    std::mt19937 rng(321);
    for (int trial = 0; trial < 100; ++trial) {
        long r = 1 + (long)(rng() % 3);
        long extra = (long)(rng() % 3);
        // columns: r x (r + extra), always containing a full-rank diagonal part
        ZMat cols(r, std::vector<Integer>(r + extra, Integer(0)));
        for (long i = 0; i < r; ++i) cols[i][i] = 1 + (long)(rng() % 5);
        for (long j = r; j < r + extra; ++j)
            for (long i = 0; i < r; ++i) cols[i][j] = (long)(rng() % 9) - 4;
        ZMat basis = lattice_column_basis(cols);
        // every original column solves basis * x = col with integer x
        QMat bq(r, QVec(r));
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < r; ++j) bq[i][j] = Rational(basis[i][j]);
        for (long j = 0; j < r + extra; ++j) {
            QVec rhs(r), x;
            for (long i = 0; i < r; ++i) rhs[i] = Rational(cols[i][j]);
            REQUIRE(solve(bq, rhs, x));
            for (const auto& v : x) CHECK(v.get_den() == 1);
        }
    }
}

TEST_CASE("sparse kernel matches the dense computation") {
    std::mt19937 rng(999);
    for (int trial = 0; trial < 50; ++trial) {
        long ncols = 2 + (long)(rng() % 8);
        long nrows = 1 + (long)(rng() % 10);
        std::vector<std::vector<long>> rows(nrows);
        QMat dense(nrows, QVec(ncols, Rational(0)));
        for (long r = 0; r < nrows; ++r) {
            for (long c = 0; c < ncols; ++c)
                if (rng() % 3 == 0) {
                    rows[r].push_back(c);
                    dense[r][c] = 1;
                }
        }
        QMat ks = kernel_basis_sparse(rows, ncols);
        QMat kd = kernel_basis(dense, ncols);
        CHECK(ks.size() == kd.size());
        CHECK(same_row_span(ks, kd, ncols));
        CHECK(rank_sparse(rows, ncols) + (long)ks.size() == ncols);
        // the modular rank certificate is a lower bound that matches here
        CHECK(rank_mod_p(rows, ncols, 2147483647) == rank_sparse(rows, ncols));
    }
}

} // TEST_SUITE

#include "fqm/linalg.hpp"

#include <algorithm>
#include <cstdint>

#include "fqm/numth.hpp"

namespace fqm {

std::vector<long> rref(QMat& a) {
    std::vector<long> pivots;
    if (a.empty()) return pivots;
    long nrows = (long)a.size(), ncols = (long)a[0].size();
    long row = 0;
    for (long col = 0; col < ncols && row < nrows; ++col) {
        long pr = -1;
        for (long i = row; i < nrows; ++i)
            if (a[i][col] != 0) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(a[row], a[pr]);
        Rational inv = 1 / a[row][col];
        for (long j = col; j < ncols; ++j) a[row][j] *= inv;
        for (long i = 0; i < nrows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (long j = col; j < ncols; ++j) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

long rank(QMat a) { return (long)rref(a).size(); }

QMat kernel_basis(const QMat& a, long ncols) {
    QMat m = a;
    if (m.empty()) m.emplace_back(ncols, Rational(0));
    std::vector<long> pivots = rref(m);
    std::vector<bool> is_pivot(ncols, false);
    for (long c : pivots) is_pivot[c] = true;
    QMat basis;
    for (long free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(ncols, Rational(0));
        v[free] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

bool solve(const QMat& a, const QVec& b, QVec& x) {
    long nrows = (long)a.size(), ncols = nrows ? (long)a[0].size() : 0;
    QMat aug(nrows, QVec(ncols + 1));
    for (long i = 0; i < nrows; ++i) {
        std::copy(a[i].begin(), a[i].end(), aug[i].begin());
        aug[i][ncols] = b[i];
    }
    std::vector<long> pivots = rref(aug);
    x.assign(ncols, Rational(0));
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == ncols) return false;  // 0 = 1 row
        x[pivots[r]] = aug[r][ncols];
    }
    return true;
}

bool same_row_span(const QMat& a, const QMat& b, long ncols) {
    QMat stacked = a;
    stacked.insert(stacked.end(), b.begin(), b.end());
    if (a.empty() && b.empty()) return true;
    (void)ncols;
    long ra = rank(a), rb = rank(b), rs = rank(stacked);
    return ra == rb && rb == rs;
}

// --- integer lattice algorithms ---------------------------------------------

ZMat z_identity(long n) {
    ZMat m(n, std::vector<Integer>(n, Integer(0)));
    for (long i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

ZMat z_mat_mul(const ZMat& a, const ZMat& b) {
    long n = (long)a.size(), k = (long)b.size(), m = (long)b[0].size();
    ZMat r(n, std::vector<Integer>(m, Integer(0)));
    for (long i = 0; i < n; ++i)
        for (long l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (long j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

ZMat lattice_column_basis(const ZMat& a_cols) {
    // column HNF by Euclidean column operations
    long r = (long)a_cols.size();
    long m = r ? (long)a_cols[0].size() : 0;
    ZMat w = a_cols;  // r x m, columns are generators
    long col = 0;
    for (long row = 0; row < r; ++row) {
        // gcd out the entries of this row across columns col..m-1
        long piv = -1;
        for (long j = col; j < m; ++j)
            if (w[row][j] != 0) { piv = j; break; }
        if (piv < 0) throw ComputationError("lattice_column_basis: rank deficient");
        for (long i = 0; i < r; ++i) std::swap(w[i][piv], w[i][col]);
        bool again = true;
        while (again) {
            again = false;
            for (long j = col + 1; j < m; ++j) {
                while (w[row][j] != 0) {
                    Integer q = w[row][j] / w[row][col];
                    if (q != 0)
                        for (long i = 0; i < r; ++i) w[i][j] -= q * w[i][col];
                    if (w[row][j] != 0) {
                        for (long i = 0; i < r; ++i) std::swap(w[i][j], w[i][col]);
                        again = true;
                    }
                }
            }
        }
        if (w[row][col] < 0)
            for (long i = 0; i < r; ++i) w[i][col] = -w[i][col];
        ++col;
    }
    ZMat basis(r, std::vector<Integer>(r));
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) basis[i][j] = w[i][j];
    return basis;
}

SmithNF smith_normal_form(ZMat a) {
    long n = a.empty() ? 0 : (long)a.size();
    long m = n ? (long)a[0].size() : 0;
    SmithNF out;
    out.u = z_identity(n);
    out.v = z_identity(m);
    auto row_op = [&](long i, long j, const Integer& q) {  // row i -= q * row j
        for (long c = 0; c < m; ++c) a[i][c] -= q * a[j][c];
        for (long c = 0; c < n; ++c) out.u[i][c] -= q * out.u[j][c];
    };
    auto col_op = [&](long i, long j, const Integer& q) {  // col i -= q * col j
        for (long r = 0; r < n; ++r) a[r][i] -= q * a[r][j];
        for (long r = 0; r < m; ++r) out.v[r][i] -= q * out.v[r][j];
    };
    auto row_swap = [&](long i, long j) { std::swap(a[i], a[j]); std::swap(out.u[i], out.u[j]); };
    auto col_swap = [&](long i, long j) {
        for (long r = 0; r < n; ++r) std::swap(a[r][i], a[r][j]);
        for (long r = 0; r < m; ++r) std::swap(out.v[r][i], out.v[r][j]);
    };

    long t = 0;
    for (; t < std::min(n, m); ++t) {
        // find a nonzero pivot of minimal absolute value
        long pi = -1, pj = -1;
        Integer best = 0;
        for (long i = t; i < n; ++i)
            for (long j = t; j < m; ++j)
                if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < best)) {
                    pi = i; pj = j; best = abs(a[i][j]);
                }
        if (pi < 0) break;
        row_swap(t, pi);
        col_swap(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (long i = t + 1; i < n; ++i)
                if (a[i][t] != 0) {
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                    row_op(i, t, q);
                    if (a[i][t] != 0) { row_swap(t, i); clean = false; }
                }
            for (long j = t + 1; j < m; ++j)
                if (a[t][j] != 0) {
                    Integer q;
                    mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                    col_op(j, t, q);
                    if (a[t][j] != 0) { col_swap(t, j); clean = false; }
                }
        }
        if (a[t][t] < 0) { for (long j = 0; j < m; ++j) a[t][j] = -a[t][j];
                           for (long j = 0; j < n; ++j) out.u[t][j] = -out.u[t][j]; }
    }
    // enforce the divisibility chain, repeating until stable
    bool changed = true;
    while (changed) {
        changed = false;
        for (long i = 0; i + 1 < t; ++i)
            for (long j = i + 1; j < t; ++j)
                if (a[j][j] % a[i][i] != 0) {
                    changed = true;
                    // fold a_jj into position i via one more round
                    col_op(i, j, Integer(-1));  // col i += col j
                    bool clean = false;
                    while (!clean) {
                        clean = true;
                        if (a[j][i] != 0) {
                            Integer q;
                            mpz_fdiv_q(q.get_mpz_t(), a[j][i].get_mpz_t(), a[i][i].get_mpz_t());
                            row_op(j, i, q);
                            if (a[j][i] != 0) { row_swap(i, j); clean = false; }
                        }
                        if (clean && a[i][j] != 0) {
                            Integer q;
                            mpz_fdiv_q(q.get_mpz_t(), a[i][j].get_mpz_t(), a[i][i].get_mpz_t());
                            col_op(j, i, q);
                            if (a[i][j] != 0) { col_swap(i, j); clean = false; }
                        }
                    }
                }
    }
    for (long i = 0; i < t; ++i)
        if (a[i][i] < 0) {
            for (long c = 0; c < m; ++c) a[i][c] = -a[i][c];
            for (long c = 0; c < n; ++c) out.u[i][c] = -out.u[i][c];
        }
    out.diag.resize(std::min(n, m));
    for (long i = 0; i < std::min(n, m); ++i) out.diag[i] = a[i][i];
    return out;
}

ZMat z_mat_inverse_unimodular(const ZMat& u) {
    long n = (long)u.size();
    QMat aug(n, QVec(2 * n, Rational(0)));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) aug[i][j] = Rational(u[i][j]);
        aug[i][n + i] = 1;
    }
    rref(aug);
    ZMat inv(n, std::vector<Integer>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            const Rational& r = aug[i][n + j];
            if (r.get_den() != 1)
                throw ComputationError("matrix is not unimodular");
            inv[i][j] = r.get_num();
        }
    return inv;
}

// --- sparse 0/1 systems ------------------------------------------------------

long rank_mod_p(const std::vector<std::vector<long>>& rows, long ncols, long p) {
    std::vector<std::vector<uint64_t>> pivot_rows;   // normalized, leading 1
    std::vector<long> pivot_col_of(ncols, -1);
    std::vector<uint64_t> buf(ncols);
    long rk = 0;
    for (const auto& r : rows) {
        std::fill(buf.begin(), buf.end(), 0);
        for (long c : r) buf[c] = (buf[c] + 1) % p;
        for (long c = 0; c < ncols; ++c) {
            if (buf[c] == 0) continue;
            long pi = pivot_col_of[c];
            if (pi < 0) {
                // normalize and store
                uint64_t inv = (uint64_t)pow_mod((long)buf[c], p - 2, p);
                for (long j = c; j < ncols; ++j)
                    buf[j] = (unsigned __int128)buf[j] * inv % p;
                pivot_col_of[c] = (long)pivot_rows.size();
                pivot_rows.emplace_back(buf.begin(), buf.end());
                ++rk;
                break;
            }
            uint64_t f = p - buf[c];
            const auto& pr = pivot_rows[pi];
            for (long j = c; j < ncols; ++j)
                buf[j] = (buf[j] + (unsigned __int128)f * pr[j]) % p;
        }
        if (rk == ncols) break;
    }
    return rk;
}

namespace {

// incremental exact elimination for many-rows/few-columns systems
struct QEchelon {
    long ncols;
    std::vector<QVec> rows;          // echelon rows, leading coefficient 1
    std::vector<long> lead;          // leading column per stored row
    std::vector<long> pivot_of_col;  // col -> stored row index or -1

    explicit QEchelon(long n) : ncols(n), pivot_of_col(n, -1) {}

    bool insert(QVec v) {
        for (long c = 0; c < ncols; ++c) {
            if (v[c] == 0) continue;
            long pi = pivot_of_col[c];
            if (pi < 0) {
                Rational inv = 1 / v[c];
                for (long j = c; j < ncols; ++j) v[j] *= inv;
                pivot_of_col[c] = (long)rows.size();
                rows.push_back(std::move(v));
                lead.push_back(c);
                return true;
            }
            Rational f = v[c];
            const QVec& pr = rows[pi];
            for (long j = c; j < ncols; ++j)
                if (pr[j] != 0) v[j] -= f * pr[j];
        }
        return false;
    }
};

} // namespace

long rank_sparse(const std::vector<std::vector<long>>& rows, long ncols) {
    QEchelon e(ncols);
    for (const auto& r : rows) {
        QVec v(ncols, Rational(0));
        for (long c : r) v[c] += 1;
        e.insert(std::move(v));
        if ((long)e.rows.size() == ncols) break;
    }
    return (long)e.rows.size();
}

QMat kernel_basis_sparse(const std::vector<std::vector<long>>& rows, long ncols) {
    // fast certificate first: full column rank mod p proves ker = {0} over Q
    const long p = 2147483647;  // 2^31 - 1
    if (rank_mod_p(rows, ncols, p) == ncols) return {};

    QEchelon e(ncols);
    for (const auto& r : rows) {
        QVec v(ncols, Rational(0));
        for (long c : r) v[c] += 1;
        e.insert(std::move(v));
    }
    // back-substitute to reduced echelon form
    std::vector<long> order(e.rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (long)i;
    std::sort(order.begin(), order.end(), [&](long a, long b) { return e.lead[a] < e.lead[b]; });
    for (size_t ii = 0; ii < order.size(); ++ii)
        for (size_t jj = ii + 1; jj < order.size(); ++jj) {
            long i = order[ii], j = order[jj];
            Rational f = e.rows[i][e.lead[j]];
            if (f == 0) continue;
            for (long c = e.lead[j]; c < ncols; ++c)
                if (e.rows[j][c] != 0) e.rows[i][c] -= f * e.rows[j][c];
        }
    std::vector<bool> is_pivot(ncols, false);
    for (long c : e.lead) is_pivot[c] = true;
    QMat basis;
    for (long free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(ncols, Rational(0));
        v[free] = 1;
        for (long i : order)
            v[e.lead[i]] = -e.rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace fqm

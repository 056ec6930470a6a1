#pragma once

#include <vector>

#include "fqm/rational.hpp"

namespace fqm {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // row major
using ZMat = std::vector<std::vector<Integer>>;

// In-place reduced row echelon form; returns pivot columns.
std::vector<long> rref(QMat& a);
long rank(QMat a);

// Basis of { x : A x = 0 }, one vector per free column.
QMat kernel_basis(const QMat& a, long ncols);

// Solve A x = b exactly; returns false if inconsistent.
bool solve(const QMat& a, const QVec& b, QVec& x);

// span(A) == span(B) for row spans
bool same_row_span(const QMat& a, const QMat& b, long ncols);

// Hermite/Smith over Z -------------------------------------------------------

// Column-style lattice basis: columns of A generate a full-rank lattice in Z^r;
// returns an r x r basis matrix (columns).
ZMat lattice_column_basis(const ZMat& a_cols);

struct SmithNF {
    std::vector<Integer> diag;  // s_1 | s_2 | ... (zeros last)
    ZMat u, v;                  // u * A * v = diag(s)
};
SmithNF smith_normal_form(ZMat a);

ZMat z_identity(long n);
ZMat z_mat_mul(const ZMat& a, const ZMat& b);
// inverse of a unimodular integer matrix (det = +-1)
ZMat z_mat_inverse_unimodular(const ZMat& u);

// Sparse 0/1 systems ---------------------------------------------------------

// Rank of a sparse 0/1 matrix mod p (rows given as sorted column-index lists).
// rank mod p == ncols certifies full column rank over Q exactly.
long rank_mod_p(const std::vector<std::vector<long>>& rows, long ncols, long p);

// Exact rational kernel of a sparse 0/1 matrix (incremental elimination).
QMat kernel_basis_sparse(const std::vector<std::vector<long>>& rows, long ncols);

// Exact rank over Q of a sparse 0/1 matrix.
long rank_sparse(const std::vector<std::vector<long>>& rows, long ncols);

} // namespace fqm

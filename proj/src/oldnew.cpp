#include "fqm/oldnew.hpp"

#include <cmath>

namespace fqm {

QVec CoeffTable::coefficients(long form, long gamma_index) const {
    auto it = forms[form].find(gamma_index);
    if (it != forms[form].end()) return it->second;
    return QVec(sturm + 1, Rational(0));
}

void validate_table(const CoeffTable& t, const FiniteQuadraticModule& d) {
    if (t.level != d.level())
        throw ValidationError("coefficient table level " + std::to_string(t.level) +
                              " does not match level(D) = " + std::to_string(d.level()));
    if (t.sturm < 0) throw ValidationError("negative Sturm bound");
    long n = d.element_count();
    for (const auto& form : t.forms)
        for (const auto& [idx, coeffs] : form) {
            if (idx < 0 || idx >= n)
                throw ValidationError("coefficient table: component index out of range");
            if ((long)coeffs.size() != t.sturm + 1)
                throw ValidationError("coefficient table: vector length != sturm + 1");
        }
}

CoeffTable lift_table(const CoeffTable& g, const FiniteQuadraticModule& d,
                      const Subgroup& h, QuotientCache* cache) {
    QuotientCache local;
    const Quotient& qt = (cache ? *cache : local).get(d, h);
    validate_table(g, qt.form);
    CoeffTable out;
    out.descriptor = g.descriptor;
    out.weight = g.weight;
    out.level = d.level();
    out.sturm = g.sturm;
    out.exact = g.exact;
    out.forms.resize(g.forms.size());
    long n = d.element_count();
    for (size_t fi = 0; fi < g.forms.size(); ++fi)
        for (long idx = 0; idx < n; ++idx) {
            if (qt.proj[idx] < 0) continue;
            auto it = g.forms[fi].find(qt.proj[idx]);
            if (it != g.forms[fi].end() && !it->second.empty())
                out.forms[fi][idx] = it->second;
        }
    return out;
}

CoeffTable down_table(const CoeffTable& f, const FiniteQuadraticModule& d,
                      const Subgroup& h, QuotientCache* cache) {
    validate_table(f, d);
    QuotientCache local;
    const Quotient& qt = (cache ? *cache : local).get(d, h);
    CoeffTable out;
    out.descriptor = f.descriptor;
    out.weight = f.weight;
    out.level = qt.form.level();
    out.sturm = f.sturm;
    out.exact = f.exact;
    out.forms.resize(f.forms.size());
    for (size_t fi = 0; fi < f.forms.size(); ++fi)
        for (const auto& [idx, coeffs] : f.forms[fi]) {
            long cls = qt.proj[idx];
            if (cls < 0) continue;
            auto& acc = out.forms[fi][cls];
            if (acc.empty()) acc.assign(f.sturm + 1, Rational(0));
            for (long k = 0; k <= f.sturm; ++k) acc[k] += coeffs[k];
        }
    return out;
}

namespace {

// rows of the lambda-system: for constraint vector v over D and each n <= S,
// sum_i lambda_i (sum_gamma v_gamma a_{n,gamma}(F_i)) = 0
QMat lambda_system(const CoeffTable& table, const QMat& constraints) {
    long m = table.form_count();
    QMat sys;
    for (const auto& v : constraints) {
        QMat per_form_sums(m, QVec(table.sturm + 1, Rational(0)));
        for (long i = 0; i < m; ++i)
            for (const auto& [idx, coeffs] : table.forms[i]) {
                if (v[idx] == 0) continue;
                for (long k = 0; k <= table.sturm; ++k)
                    per_form_sums[i][k] += v[idx] * coeffs[k];
            }
        for (long k = 0; k <= table.sturm; ++k) {
            QVec row(m);
            bool nonzero = false;
            for (long i = 0; i < m; ++i) {
                row[i] = per_form_sums[i][k];
                if (row[i] != 0) nonzero = true;
            }
            if (nonzero) sys.push_back(std::move(row));
        }
    }
    return sys;
}

// constraint vectors for the newspace: the indicator of each class of each quotient
QMat class_sum_constraints(const LiftSystem& sys) {
    QMat out;
    long n = sys.base.element_count();
    for (long r = 0; r < sys.total_rows; ++r) {
        QVec v(n, Rational(0));
        for (long c : sys.down_rows[r]) v[c] = 1;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

bool is_oldform(const FiniteQuadraticModule& d, const CoeffTable& table,
                const QVec& lambda, const std::vector<Subgroup>& subgroups) {
    validate_table(table, d);
    if ((long)lambda.size() != table.form_count())
        throw ValidationError("lambda length != number of basis forms");
    LiftSystem sys = build_lift_system(d, subgroups);
    QMat kernel = kernel_down(sys);
    for (const auto& v : kernel)
        for (long k = 0; k <= table.sturm; ++k) {
            Rational acc(0);
            for (long i = 0; i < table.form_count(); ++i) {
                if (lambda[i] == 0) continue;
                for (const auto& [idx, coeffs] : table.forms[i])
                    if (v[idx] != 0) acc += lambda[i] * v[idx] * coeffs[k];
            }
            if (acc != 0) return false;
        }
    return true;
}

QMat oldspace_basis(const FiniteQuadraticModule& d, const CoeffTable& table,
                    const std::vector<Subgroup>& subgroups) {
    validate_table(table, d);
    LiftSystem sys = build_lift_system(d, subgroups);
    QMat kernel = kernel_down(sys);
    return kernel_basis(lambda_system(table, kernel), table.form_count());
}

QMat newspace_basis(const FiniteQuadraticModule& d, const CoeffTable& table,
                    const std::vector<Subgroup>& subgroups) {
    validate_table(table, d);
    LiftSystem sys = build_lift_system(d, subgroups);
    return kernel_basis(lambda_system(table, class_sum_constraints(sys)), table.form_count());
}

SplitBases split_old_new(const FiniteQuadraticModule& d, const CoeffTable& table,
                         const std::vector<Subgroup>& subgroups) {
    SplitBases out;
    out.truncated_at = table.sturm;
    out.exact = table.exact;
    LiftSystem sys = build_lift_system(d, subgroups);
    out.kernel_dim = (long)kernel_down(sys).size();
    out.old_basis = oldspace_basis(d, table, subgroups);
    out.new_basis = newspace_basis(d, table, subgroups);
    return out;
}

// ---- float mode ---------------------------------------------------------------

namespace {

constexpr double kFloatTol = 1e-9;

std::vector<std::vector<double>> to_double(const QMat& m) {
    std::vector<std::vector<double>> out(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        out[i].resize(m[i].size());
        for (size_t j = 0; j < m[i].size(); ++j) out[i][j] = m[i][j].get_d();
    }
    return out;
}

// Gauss elimination with partial pivoting and tolerance-based rank decisions
std::vector<std::vector<double>> kernel_basis_double(std::vector<std::vector<double>> a,
                                                     long ncols) {
    std::vector<long> pivot_cols;
    long row = 0, nrows = (long)a.size();
    for (long col = 0; col < ncols && row < nrows; ++col) {
        long best = -1;
        double best_val = kFloatTol;
        for (long i = row; i < nrows; ++i)
            if (std::abs(a[i][col]) > best_val) { best = i; best_val = std::abs(a[i][col]); }
        if (best < 0) continue;
        std::swap(a[row], a[best]);
        double inv = 1.0 / a[row][col];
        for (long j = col; j < ncols; ++j) a[row][j] *= inv;
        for (long i = 0; i < nrows; ++i) {
            if (i == row) continue;
            double f = a[i][col];
            if (std::abs(f) < kFloatTol) continue;
            for (long j = col; j < ncols; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (long c : pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<double>> basis;
    for (long free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<double> v(ncols, 0.0);
        v[free] = 1.0;
        for (size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -a[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::vector<double>> lambda_system_double(const CoeffTable& table,
                                                      const QMat& constraints) {
    return to_double(lambda_system(table, constraints));
}

} // namespace

bool is_oldform_float(const FiniteQuadraticModule& d, const CoeffTable& table,
                      const std::vector<double>& lambda,
                      const std::vector<Subgroup>& subgroups) {
    validate_table(table, d);
    LiftSystem sys = build_lift_system(d, subgroups);
    QMat kernel = kernel_down(sys);
    for (const auto& v : kernel)
        for (long k = 0; k <= table.sturm; ++k) {
            double acc = 0;
            for (long i = 0; i < table.form_count(); ++i) {
                if (lambda[i] == 0) continue;
                for (const auto& [idx, coeffs] : table.forms[i])
                    if (v[idx] != 0) acc += lambda[i] * v[idx].get_d() * coeffs[k].get_d();
            }
            if (std::abs(acc) > kFloatTol) return false;
        }
    return true;
}

std::vector<std::vector<double>> oldspace_basis_float(const FiniteQuadraticModule& d,
                                                      const CoeffTable& table,
                                                      const std::vector<Subgroup>& subgroups) {
    validate_table(table, d);
    LiftSystem sys = build_lift_system(d, subgroups);
    QMat kernel = kernel_down(sys);
    return kernel_basis_double(lambda_system_double(table, kernel), table.form_count());
}

std::vector<std::vector<double>> newspace_basis_float(const FiniteQuadraticModule& d,
                                                      const CoeffTable& table,
                                                      const std::vector<Subgroup>& subgroups) {
    validate_table(table, d);
    LiftSystem sys = build_lift_system(d, subgroups);
    return kernel_basis_double(lambda_system_double(table, class_sum_constraints(sys)),
                               table.form_count());
}

} // namespace fqm

#pragma once

#include <map>
#include <string>
#include <vector>

#include "fqm/lifts.hpp"

namespace fqm {

// Truncated Fourier-coefficient data a_{n,gamma} for a basis of vector-valued
// forms. Components are stored sparsely per form; a missing component is the
// zero vector. All coefficient vectors have length sturm + 1.
struct CoeffTable {
    std::string descriptor;  // Jordan symbol text, or "lattice" for Gram input
    long weight = 0;
    long level = 1;
    long sturm = 0;
    bool exact = true;  // false when float input was ingested (tolerance 1e-9)
    // forms[i][gamma index] = coefficients a_{0..S, gamma}
    std::vector<std::map<long, QVec>> forms;

    long form_count() const { return (long)forms.size(); }
    QVec coefficients(long form, long gamma_index) const;
};

void validate_table(const CoeffTable& t, const FiniteQuadraticModule& d);

// F_gamma = G_{gamma + H} on H-perp, zero elsewhere (componentwise)
CoeffTable lift_table(const CoeffTable& g, const FiniteQuadraticModule& d,
                      const Subgroup& h, QuotientCache* cache = nullptr);
// classwise coefficient sums
CoeffTable down_table(const CoeffTable& f, const FiniteQuadraticModule& d,
                      const Subgroup& h, QuotientCache* cache = nullptr);

// detection criterion: ker(down) must annihilate every truncated coefficient
// row of F = sum lambda_i F_i; the verdict holds up to the Sturm bound
bool is_oldform(const FiniteQuadraticModule& d, const CoeffTable& table,
                const QVec& lambda, const std::vector<Subgroup>& subgroups);

struct SplitBases {
    QMat old_basis;    // lambda-space basis vectors, length m
    QMat new_basis;
    long kernel_dim = 0;
    long truncated_at = 0;
    bool exact = true;
};

QMat oldspace_basis(const FiniteQuadraticModule& d, const CoeffTable& table,
                    const std::vector<Subgroup>& subgroups);
QMat newspace_basis(const FiniteQuadraticModule& d, const CoeffTable& table,
                    const std::vector<Subgroup>& subgroups);
SplitBases split_old_new(const FiniteQuadraticModule& d, const CoeffTable& table,
                         const std::vector<Subgroup>& subgroups);

// float-mode counterparts (zero tests at tolerance 1e-9)
bool is_oldform_float(const FiniteQuadraticModule& d, const CoeffTable& table,
                      const std::vector<double>& lambda,
                      const std::vector<Subgroup>& subgroups);
std::vector<std::vector<double>> oldspace_basis_float(const FiniteQuadraticModule& d,
                                                      const CoeffTable& table,
                                                      const std::vector<Subgroup>& subgroups);
std::vector<std::vector<double>> newspace_basis_float(const FiniteQuadraticModule& d,
                                                      const CoeffTable& table,
                                                      const std::vector<Subgroup>& subgroups);

} // namespace fqm

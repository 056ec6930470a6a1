#pragma once

#include <optional>
#include <vector>

#include "fqm/module.hpp"

namespace fqm {

// Explicit subgroup of a FiniteQuadraticModule: a small generating set plus
// the full element list as sorted enumeration indices.
struct Subgroup {
    std::vector<Element> generators;
    std::vector<long> elem_indices;  // sorted, includes 0

    long order() const { return (long)elem_indices.size(); }
    bool is_trivial() const { return elem_indices.size() == 1; }
    bool contains_index(long idx) const;
};

Subgroup trivial_subgroup(const FiniteQuadraticModule& d);
Subgroup subgroup_closure(const FiniteQuadraticModule& d, const std::vector<Element>& gens,
                          long bound = FiniteQuadraticModule::kDefaultEnumBound);
// rebuild a small generating set from an element list
Subgroup subgroup_from_indices(const FiniteQuadraticModule& d, std::vector<long> indices);

bool is_isotropic(const FiniteQuadraticModule& d, const Subgroup& s);

// { gamma : (gamma, s) = 0 for all s in generators of S }
Subgroup orthogonal_complement(const FiniteQuadraticModule& d, const Subgroup& s);

struct IsotropicOptions {
    bool include_trivial = false;
    std::optional<long> max_order;
    long size_bound = FiniteQuadraticModule::kDefaultEnumBound;
};

// All isotropic subgroups, deduplicated by element set; breadth-first closure
// over isotropic elements with a full isotropy re-check on every extension.
std::vector<Subgroup> isotropic_subgroups(const FiniteQuadraticModule& d,
                                          const IsotropicOptions& opts = {});

// D_H = H_perp / H for isotropic H, with the projection table used by the
// lift operators: proj[index in D] = class index in D_H, or -1 off H_perp.
struct Quotient {
    FiniteQuadraticModule form;
    std::vector<long> proj;
    std::vector<Element> class_reps;    // representative in D per class index
    std::vector<Element> generators_in_d;
    Subgroup h;
    Subgroup h_perp;
};

Quotient quotient(const FiniteQuadraticModule& d, const Subgroup& h);

} // namespace fqm

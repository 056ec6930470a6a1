#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "fqm/linalg.hpp"
#include "fqm/subgroup.hpp"
#include "fqm/weil.hpp"

namespace fqm {

// Thread-safe memo for quotients, keyed by the form and the subgroup's
// element set (one cache may serve several forms).
class QuotientCache {
public:
    const Quotient& get(const FiniteQuadraticModule& d, const Subgroup& h);

private:
    std::map<std::pair<std::string, std::vector<long>>, Quotient> map_;
    std::mutex mtx_;
};

// canonical serialization of a form (orders, Gram, Q values)
std::string form_key(const FiniteQuadraticModule& d);

// The 0/1 matrices of the algebraic down map (rows: classes of each H_i^perp/H_i,
// columns: elements of D) and its transpose, the up map.
struct LiftSystem {
    FiniteQuadraticModule base;
    std::vector<Subgroup> subgroups;
    std::vector<Quotient> quotients;
    std::vector<long> row_offset;               // block start per subgroup
    long total_rows = 0;
    std::vector<std::vector<long>> down_rows;   // per row: member columns

    long row_of(long subgroup_idx, long class_idx) const {
        return row_offset[subgroup_idx] + class_idx;
    }
    QVec apply_down(const QVec& x) const;
    QVec apply_up(const QVec& z) const;  // z indexed by rows
};

LiftSystem build_lift_system(const FiniteQuadraticModule& d,
                             const std::vector<Subgroup>& subgroups,
                             bool allow_trivial = false,
                             QuotientCache* cache = nullptr);

// exact rational kernel basis of the down map (vectors over elements of D)
QMat kernel_down(const LiftSystem& sys);
bool is_up_surjective(const LiftSystem& sys);

// Exact intertwining checks eta(g) down = down rho(g) and
// rho(g) up = up eta(g) for g in {S, T}.
Report check_homomorphism(const FiniteQuadraticModule& d, const Subgroup& h);

// p+1 nicely orthogonal isotropic subgroups for a target element; index 0
// plays the distinguished role in the coset decomposition.
struct NiceSequence {
    long p = 2;
    std::vector<Element> generators;   // size p+1
    std::vector<Subgroup> subgroups;   // closures of the generators
    Element target;
};

// h_{-1} = p^{e-1} mu, h_j = p^{e-1} (delta + j mu); preconditions checked
// exhaustively (isotropy, orthogonality, weak independence at p^e).
NiceSequence nice_sequence(const FiniteQuadraticModule& d, const Element& gamma,
                           const Element& delta, const Element& mu, long p, int e);

struct NiceCheckResult {
    bool ok = true;
    std::string violation;  // first failed condition: "a", "b", "c", "d", ...
};
NiceCheckResult verify_nice(const FiniteQuadraticModule& d, const NiceSequence& seq);

// The explicit preimage of e_gamma under the up map of the sequence's system:
// zeta = -(1/n) sum over the n-1 distinguished classes of D_0
//        +(1/n) sum over the classes gamma + H_i.
struct PreimageVector {
    struct Entry {
        long seq_pos;
        long class_index;
        Element class_rep;
        Rational value;
    };
    std::vector<Entry> entries;
};

PreimageVector preimage_basis_vector(const FiniteQuadraticModule& d, const Element& gamma,
                                     const NiceSequence& seq, QuotientCache& cache);

// ---- main-theorem machinery -------------------------------------------------

struct HypothesisCheck {
    bool satisfied = false;
    std::string which;  // "i".."iv", possibly with "-conservative"
    long p = 0;
    int j = 0;
    long count = 0;     // multiplicity that fired (block count for p = 2)
    std::string detail;
};

HypothesisCheck check_theorem_hypotheses(const JordanSymbol& symbol);
// conservative variant from group structure only: p = 2 demands twice the count
HypothesisCheck check_theorem_hypotheses_group(const FiniteQuadraticModule& d);

struct SizeGateCheck {
    bool size_bound_met = false;  // |D| >= N^9
    bool applies = false;         // and a part repeats with multiplicity >= 9
    Integer size;
    Integer bound;
    long level = 1;
    long p = 0;
    int j = 0;
    long multiplicity = 0;
};
SizeGateCheck check_size_gate(const JordanSymbol& symbol);
// from group structure and level only (lattice-built forms)
SizeGateCheck check_size_gate_group(const FiniteQuadraticModule& d);

struct CertificateEntry {
    std::vector<long> gamma;
    std::vector<long> subgroup_ids;  // indices into Certificate::subgroups
    PreimageVector zeta;
    bool verified = false;
};

struct Certificate {
    HypothesisCheck hypothesis;
    FiniteQuadraticModule form;
    std::vector<Subgroup> subgroups;       // distinct across entries
    std::vector<CertificateEntry> entries; // one per element, enumeration order
};

// For every gamma: split off gamma (or its primitive part) orthogonally,
// find two isotropic orthogonal weakly independent vectors in the complement,
// build the nice sequence and the explicit preimage; every preimage is
// verified exactly.
Certificate surjectivity_certificate(const JordanSymbol& symbol, int threads = 1,
                                     long size_bound = 100000);

} // namespace fqm

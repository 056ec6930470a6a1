#pragma once

#include <vector>

#include "fqm/cyclotomic.hpp"
#include "fqm/jordan.hpp"
#include "fqm/linalg.hpp"
#include "fqm/rational.hpp"

namespace fqm {

// Group element in generator coordinates, reduced mod the generator orders.
struct Element {
    std::vector<long> x;
    bool operator==(const Element& o) const { return x == o.x; }
    bool operator!=(const Element& o) const { return x != o.x; }
    bool operator<(const Element& o) const { return x < o.x; }
};

// A discriminant form: generator orders d_i, bilinear Gram (g_i, g_j) in Q/Z
// and quadratic values Q(g_i) in Q/Z. Immutable after construction; the
// constructor validates symmetry, torsion, 2Q = b on the diagonal and
// non-degeneracy (trivial radical).
class FiniteQuadraticModule {
public:
    static constexpr long kDefaultEnumBound = 10000000;

    FiniteQuadraticModule();  // the trivial form {0}
    FiniteQuadraticModule(std::vector<long> orders,
                          std::vector<std::vector<QmodZ>> gram,
                          std::vector<QmodZ> qvals);

    long rank() const { return (long)orders_.size(); }
    const std::vector<long>& orders() const { return orders_; }
    long order_of_generator(long i) const { return orders_[i]; }
    const Integer& size() const { return size_; }
    long size_long(long bound = kDefaultEnumBound) const;
    long level() const { return level_; }

    const QmodZ& gram_entry(long i, long j) const { return gram_[i][j]; }
    const QmodZ& qval(long i) const { return qvals_[i]; }

    Element zero() const { return Element{std::vector<long>(orders_.size(), 0)}; }
    Element generator(long i) const;
    Element reduced(std::vector<long> coords) const;
    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element neg(const Element& a) const;
    Element scale(const Integer& k, const Element& a) const;
    bool is_zero_elem(const Element& a) const;
    long element_order(const Element& a) const;

    QmodZ q(const Element& g) const;
    QmodZ b(const Element& g, const Element& h) const;

    // mixed-radix enumeration: index = sum coords[i] * prod_{j>i} d_j,
    // index 0 is the zero element; fixed everywhere downstream
    long element_count(long bound = kDefaultEnumBound) const { return size_long(bound); }
    Element element_at(long idx) const;
    long index_of(const Element& g) const;

private:
    void validate() const;
    std::vector<long> orders_;
    std::vector<std::vector<QmodZ>> gram_;
    std::vector<QmodZ> qvals_;
    Integer size_;
    long level_;
};

inline QmodZ eval_q(const FiniteQuadraticModule& d, const Element& g) { return d.q(g); }
inline QmodZ eval_b(const FiniteQuadraticModule& d, const Element& g, const Element& h) {
    return d.b(g, h);
}

// generator index ranges [first, last) of each Jordan component
struct JordanLayout {
    std::vector<std::pair<long, long>> spans;
};

FiniteQuadraticModule from_jordan(const JordanSymbol& symbol, JordanLayout* layout = nullptr);
FiniteQuadraticModule from_jordan(const std::string& symbol_text);

// discriminant form L'/L of an even non-degenerate lattice, via Smith normal form
FiniteQuadraticModule from_even_lattice(const ZMat& gram);

FiniteQuadraticModule direct_sum(const FiniteQuadraticModule& a,
                                 const FiniteQuadraticModule& b);

// sum_{gamma in D} e(Q(gamma)), exact in Q(zeta_level)
CycNum gauss_sum(const FiniteQuadraticModule& d);

// signature mod 8 via the squared Milgram identity gauss^2 = |D| e(s/4),
// with the mod-8 ambiguity resolved by float embedding (tolerance 1e-6)
int signature(const FiniteQuadraticModule& d);

} // namespace fqm

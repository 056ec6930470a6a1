#include "fqm/module.hpp"

#include <cmath>

#include "fqm/numth.hpp"

namespace fqm {

FiniteQuadraticModule::FiniteQuadraticModule() : size_(1), level_(1) {}

FiniteQuadraticModule::FiniteQuadraticModule(std::vector<long> orders,
                                             std::vector<std::vector<QmodZ>> gram,
                                             std::vector<QmodZ> qvals)
    : orders_(std::move(orders)), gram_(std::move(gram)), qvals_(std::move(qvals)) {
    size_ = 1;
    for (long d : orders_) size_ *= d;
    Integer lv(1);
    for (long i = 0; i < rank(); ++i) {
        lv = lcm(lv, qvals_[i].denominator());
        for (long j = 0; j < rank(); ++j) lv = lcm(lv, gram_[i][j].denominator());
    }
    level_ = to_long_checked(lv, "level");
    validate();
}

void FiniteQuadraticModule::validate() const {
    long r = rank();
    if ((long)gram_.size() != r || (long)qvals_.size() != r)
        throw ValidationError("FiniteQuadraticModule: shape mismatch");
    for (long i = 0; i < r; ++i) {
        if (orders_[i] < 2) throw ValidationError("generator orders must be >= 2");
        if ((long)gram_[i].size() != r)
            throw ValidationError("FiniteQuadraticModule: Gram not square");
    }
    for (long i = 0; i < r; ++i) {
        if (gram_[i][i] != qvals_[i] + qvals_[i])
            throw ValidationError("Gram diagonal must equal 2*Q on generators");
        if (!qvals_[i].scaled(Integer(orders_[i]) * orders_[i]).is_zero())
            throw ValidationError("d_i^2 * Q(g_i) must vanish");
        for (long j = 0; j < r; ++j) {
            if (gram_[i][j] != gram_[j][i])
                throw ValidationError("Gram must be symmetric");
            if (!gram_[i][j].scaled(Integer(orders_[i])).is_zero())
                throw ValidationError("d_i * (g_i, g_j) must vanish");
        }
    }
    // non-degeneracy: the radical {x : B x = 0 mod N} / diag(d) must be trivial;
    // counted through the Smith invariants of the integerized Gram
    if (r == 0) return;
    Integer nb(1);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) nb = lcm(nb, gram_[i][j].denominator());
    ZMat bmat(r, std::vector<Integer>(r));
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < r; ++j) {
            Rational v = gram_[i][j].representative() * Rational(nb);
            bmat[i][j] = v.get_num();  // denominator divides nb
        }
    SmithNF s = smith_normal_form(bmat);
    Integer count = size_;
    for (long i = 0; i < r; ++i) count *= gcd(nb, s.diag[i]);
    Integer nbr(1);
    for (long i = 0; i < r; ++i) nbr *= nb;
    if (count % nbr != 0)
        throw ComputationError("radical count is not integral");
    if (count / nbr != 1)
        throw ValidationError("form is degenerate (nontrivial radical)");
}

long FiniteQuadraticModule::size_long(long bound) const {
    if (size_ > bound)
        throw SizeLimitError("|D| = " + size_.get_str() + " exceeds bound " + std::to_string(bound));
    return to_long_checked(size_, "|D|");
}

Element FiniteQuadraticModule::generator(long i) const {
    Element g = zero();
    g.x[i] = 1;
    return g;
}

Element FiniteQuadraticModule::reduced(std::vector<long> coords) const {
    if ((long)coords.size() != rank())
        throw ValidationError("element coordinate count mismatch");
    for (long i = 0; i < rank(); ++i) coords[i] = mod_pos(coords[i], orders_[i]);
    return Element{std::move(coords)};
}

Element FiniteQuadraticModule::add(const Element& a, const Element& b) const {
    Element r = a;
    for (long i = 0; i < rank(); ++i) r.x[i] = mod_pos(r.x[i] + b.x[i], orders_[i]);
    return r;
}

Element FiniteQuadraticModule::sub(const Element& a, const Element& b) const {
    Element r = a;
    for (long i = 0; i < rank(); ++i) r.x[i] = mod_pos(r.x[i] - b.x[i], orders_[i]);
    return r;
}

Element FiniteQuadraticModule::neg(const Element& a) const {
    Element r = a;
    for (long i = 0; i < rank(); ++i) r.x[i] = mod_pos(-r.x[i], orders_[i]);
    return r;
}

Element FiniteQuadraticModule::scale(const Integer& k, const Element& a) const {
    Element r = zero();
    for (long i = 0; i < rank(); ++i) {
        Integer v = (k * a.x[i]) % orders_[i];
        if (v < 0) v += orders_[i];
        r.x[i] = v.get_si();
    }
    return r;
}

bool FiniteQuadraticModule::is_zero_elem(const Element& a) const {
    for (long v : a.x)
        if (v != 0) return false;
    return true;
}

long FiniteQuadraticModule::element_order(const Element& a) const {
    long o = 1;
    for (long i = 0; i < rank(); ++i)
        if (a.x[i] != 0) o = lcm_long(o, orders_[i] / gcd_long(orders_[i], a.x[i]));
    return o;
}

QmodZ FiniteQuadraticModule::q(const Element& g) const {
    if ((long)g.x.size() != rank()) throw ValidationError("element rank mismatch");
    QmodZ acc;
    for (long i = 0; i < rank(); ++i) {
        if (g.x[i] < 0 || g.x[i] >= orders_[i])
            throw ValidationError("element coordinate out of range");
        if (g.x[i] == 0) continue;
        acc = acc + qvals_[i].scaled(Integer(g.x[i]) * g.x[i]);
        for (long j = i + 1; j < rank(); ++j)
            if (g.x[j] != 0)
                acc = acc + gram_[i][j].scaled(Integer(g.x[i]) * g.x[j]);
    }
    return acc;
}

QmodZ FiniteQuadraticModule::b(const Element& g, const Element& h) const {
    QmodZ acc;
    for (long i = 0; i < rank(); ++i) {
        if (g.x[i] == 0) continue;
        for (long j = 0; j < rank(); ++j)
            if (h.x[j] != 0)
                acc = acc + gram_[i][j].scaled(Integer(g.x[i]) * h.x[j]);
    }
    return acc;
}

Element FiniteQuadraticModule::element_at(long idx) const {
    Element g = zero();
    for (long i = rank() - 1; i >= 0; --i) {
        g.x[i] = idx % orders_[i];
        idx /= orders_[i];
    }
    if (idx != 0) throw ValidationError("element index out of range");
    return g;
}

long FiniteQuadraticModule::index_of(const Element& g) const {
    long idx = 0;
    for (long i = 0; i < rank(); ++i) idx = idx * orders_[i] + g.x[i];
    return idx;
}

// --- constructors -------------------------------------------------------------

FiniteQuadraticModule from_jordan(const JordanSymbol& symbol, JordanLayout* layout) {
    std::vector<long> orders;
    std::vector<QmodZ> qvals;
    std::vector<std::pair<long, long>> spans;
    struct Block { long lo, hi; QmodZ offdiag; };
    std::vector<Block> blocks;

    for (const auto& comp : symbol.components) {
        validate_component(comp);
        long first = (long)orders.size();
        if (const auto* o = std::get_if<OddComponent>(&comp)) {
            long q = ipow(o->p, o->e);
            long inv2 = inv_mod(2, q);
            orders.push_back(q);
            qvals.emplace_back(mul_mod(inv2, mod_pos(o->a, q), q), q);
            blocks.push_back({first, first + 1, QmodZ()});
        } else if (const auto* t = std::get_if<TwoOddComponent>(&comp)) {
            long q = ipow(2, t->e);
            orders.push_back(q);
            qvals.emplace_back(mod_pos(t->a + (long)t->v * q, 2 * q), 2 * q);
            blocks.push_back({first, first + 1, QmodZ()});
        } else {
            const auto& ev = std::get<TwoEvenComponent>(comp);
            long q = ipow(2, ev.e);
            long x = ev.kind == 'A' ? 0 : 2;
            orders.push_back(q);
            orders.push_back(q);
            qvals.emplace_back(x == 0 ? QmodZ() : QmodZ(1, q));
            qvals.emplace_back(x == 0 ? QmodZ() : QmodZ(1, q));
            blocks.push_back({first, first + 2, QmodZ(1, q)});
        }
        spans.emplace_back(first, (long)orders.size());
    }

    long r = (long)orders.size();
    std::vector<std::vector<QmodZ>> gram(r, std::vector<QmodZ>(r));
    for (long i = 0; i < r; ++i) gram[i][i] = qvals[i] + qvals[i];
    for (const auto& blk : blocks)
        if (blk.hi - blk.lo == 2) {
            gram[blk.lo][blk.lo + 1] = blk.offdiag;
            gram[blk.lo + 1][blk.lo] = blk.offdiag;
        }
    if (layout) layout->spans = std::move(spans);
    return FiniteQuadraticModule(std::move(orders), std::move(gram), std::move(qvals));
}

FiniteQuadraticModule from_jordan(const std::string& symbol_text) {
    return from_jordan(parse_jordan(symbol_text));
}

FiniteQuadraticModule from_even_lattice(const ZMat& gram) {
    long n = (long)gram.size();
    for (long i = 0; i < n; ++i) {
        if ((long)gram[i].size() != n)
            throw ValidationError("lattice Gram must be square");
        if (gram[i][i] % 2 != 0)
            throw ValidationError("lattice is not even (odd diagonal entry)");
        for (long j = 0; j < n; ++j)
            if (gram[i][j] != gram[j][i])
                throw ValidationError("lattice Gram must be symmetric");
    }
    SmithNF s = smith_normal_form(gram);
    for (long i = 0; i < n; ++i)
        if (s.diag[i] == 0)
            throw ValidationError("lattice is degenerate (det = 0)");
    // L'/L = V (1/s_1 Z x ... x 1/s_n Z) / V Z^n; generators g_i = V e_i / s_i
    ZMat gv = z_mat_mul(gram, s.v);
    ZMat vtgv((size_t)n, std::vector<Integer>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            Integer acc(0);
            for (long k = 0; k < n; ++k) acc += s.v[k][i] * gv[k][j];
            vtgv[i][j] = acc;
        }
    std::vector<long> keep;
    for (long i = 0; i < n; ++i)
        if (s.diag[i] > 1) keep.push_back(i);
    long r = (long)keep.size();
    std::vector<long> orders(r);
    std::vector<std::vector<QmodZ>> g(r, std::vector<QmodZ>(r));
    std::vector<QmodZ> qv(r);
    for (long i = 0; i < r; ++i) {
        orders[i] = to_long_checked(s.diag[keep[i]], "generator order");
        qv[i] = QmodZ(Rational(vtgv[keep[i]][keep[i]], 2 * s.diag[keep[i]] * s.diag[keep[i]]));
        for (long j = 0; j < r; ++j)
            g[i][j] = QmodZ(Rational(vtgv[keep[i]][keep[j]], s.diag[keep[i]] * s.diag[keep[j]]));
    }
    return FiniteQuadraticModule(std::move(orders), std::move(g), std::move(qv));
}

FiniteQuadraticModule direct_sum(const FiniteQuadraticModule& a,
                                 const FiniteQuadraticModule& b) {
    long ra = a.rank(), rb = b.rank(), r = ra + rb;
    std::vector<long> orders;
    orders.reserve(r);
    for (long i = 0; i < ra; ++i) orders.push_back(a.orders()[i]);
    for (long i = 0; i < rb; ++i) orders.push_back(b.orders()[i]);
    std::vector<std::vector<QmodZ>> g(r, std::vector<QmodZ>(r));
    std::vector<QmodZ> qv(r);
    for (long i = 0; i < ra; ++i) {
        qv[i] = a.qval(i);
        for (long j = 0; j < ra; ++j) g[i][j] = a.gram_entry(i, j);
    }
    for (long i = 0; i < rb; ++i) {
        qv[ra + i] = b.qval(i);
        for (long j = 0; j < rb; ++j) g[ra + i][ra + j] = b.gram_entry(i, j);
    }
    return FiniteQuadraticModule(std::move(orders), std::move(g), std::move(qv));
}

CycNum gauss_sum(const FiniteQuadraticModule& d) {
    long n = d.element_count();
    long order = std::max(d.level(), 1L);
    std::vector<Integer> counts(order, Integer(0));
    for (long idx = 0; idx < n; ++idx) {
        QmodZ qv = d.q(d.element_at(idx));
        Integer den = qv.denominator();
        Integer k = qv.representative().get_num() * (order / den.get_si());
        counts[k.get_si()] += 1;
    }
    return CycNum::from_exponent_counts(counts, order);
}

int signature(const FiniteQuadraticModule& d) {
    CycNum g = gauss_sum(d);
    Rational n(d.size());
    // |g|^2 = |D| exactly, else the form would be degenerate
    if (g * g.conj() != CycNum(n))
        throw ValidationError("Gauss sum magnitude check failed (degenerate form)");
    CycNum g2 = g * g;
    int s4 = -1;
    for (int s = 0; s < 4; ++s) {
        if (g2 == root_of_unity(QmodZ(s, 4), 4) * n) { s4 = s; break; }
    }
    if (s4 < 0)
        throw ValidationError("squared Milgram identity failed (degenerate form)");
    // disambiguate s vs s+4 numerically; the two candidates are antipodal
    std::complex<double> z = g.to_complex();
    double root = std::sqrt(mpq_get_d(Rational(d.size()).get_mpq_t()));
    const double pi = 3.14159265358979323846;
    for (int s : {s4, s4 + 4}) {
        std::complex<double> target = root * std::exp(std::complex<double>(0, 2 * pi * s / 8.0));
        if (std::abs(z - target) < 1e-6 * root) return s;
    }
    throw ComputationError("signature disambiguation outside tolerance");
}

} // namespace fqm

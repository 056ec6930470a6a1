#include "fqm/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace fqm {

bool Subgroup::contains_index(long idx) const {
    return std::binary_search(elem_indices.begin(), elem_indices.end(), idx);
}

Subgroup trivial_subgroup(const FiniteQuadraticModule& d) {
    (void)d;
    return Subgroup{{}, {0}};
}

Subgroup subgroup_closure(const FiniteQuadraticModule& d, const std::vector<Element>& gens,
                          long bound) {
    std::set<long> seen{0};
    std::deque<Element> todo{d.zero()};
    while (!todo.empty()) {
        Element cur = todo.front();
        todo.pop_front();
        for (const Element& g : gens) {
            Element nxt = d.add(cur, g);
            long idx = d.index_of(nxt);
            if (seen.insert(idx).second) {
                if ((long)seen.size() > bound)
                    throw SizeLimitError("subgroup closure exceeds bound");
                todo.push_back(nxt);
            }
        }
    }
    Subgroup s;
    s.generators = gens;
    s.elem_indices.assign(seen.begin(), seen.end());
    return s;
}

Subgroup subgroup_from_indices(const FiniteQuadraticModule& d, std::vector<long> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    Subgroup out;
    out.elem_indices = indices;
    std::set<long> closure{0};
    for (long idx : indices) {
        if (closure.count(idx)) continue;
        out.generators.push_back(d.element_at(idx));
        Subgroup c = subgroup_closure(d, out.generators);
        closure = std::set<long>(c.elem_indices.begin(), c.elem_indices.end());
    }
    // sanity: generators reproduce exactly the given set
    Subgroup check = subgroup_closure(d, out.generators);
    if (check.elem_indices != out.elem_indices)
        throw ValidationError("element list is not closed under the group operations");
    return out;
}

bool is_isotropic(const FiniteQuadraticModule& d, const Subgroup& s) {
    for (long idx : s.elem_indices)
        if (!d.q(d.element_at(idx)).is_zero()) return false;
    return true;
}

Subgroup orthogonal_complement(const FiniteQuadraticModule& d, const Subgroup& s) {
    long n = d.element_count();
    std::vector<long> found;
    for (long idx = 0; idx < n; ++idx) {
        Element g = d.element_at(idx);
        bool ok = true;
        for (const Element& gen : s.generators)
            if (!d.b(g, gen).is_zero()) { ok = false; break; }
        if (ok) found.push_back(idx);
    }
    return subgroup_from_indices(d, std::move(found));
}

std::vector<Subgroup> isotropic_subgroups(const FiniteQuadraticModule& d,
                                          const IsotropicOptions& opts) {
    long n = d.element_count(opts.size_bound);
    std::vector<long> iso_elems;
    for (long idx = 1; idx < n; ++idx)
        if (d.q(d.element_at(idx)).is_zero()) iso_elems.push_back(idx);

    // BFS over subgroup extensions by isotropic elements; dedupe by element set
    std::map<std::vector<long>, Subgroup> found;
    std::deque<std::vector<long>> frontier;
    auto try_insert = [&](Subgroup s) -> bool {
        if (opts.max_order && s.order() > *opts.max_order) return false;
        if (!is_isotropic(d, s)) return false;
        auto key = s.elem_indices;
        if (found.count(key)) return false;
        frontier.push_back(key);
        found.emplace(std::move(key), std::move(s));
        return true;
    };

    for (long idx : iso_elems)
        try_insert(subgroup_closure(d, {d.element_at(idx)}));
    while (!frontier.empty()) {
        std::vector<long> key = frontier.front();
        frontier.pop_front();
        Subgroup base = found.at(key);
        for (long idx : iso_elems) {
            if (base.contains_index(idx)) continue;
            std::vector<Element> gens = base.generators;
            gens.push_back(d.element_at(idx));
            try_insert(subgroup_closure(d, gens));
        }
    }

    std::vector<Subgroup> out;
    if (opts.include_trivial) out.push_back(trivial_subgroup(d));
    for (auto& [key, s] : found) out.push_back(std::move(s));
    return out;
}

Quotient quotient(const FiniteQuadraticModule& d, const Subgroup& h) {
    if (!is_isotropic(d, h))
        throw ValidationError("quotient requires an isotropic subgroup (Q_H ill-defined)");
    long n = d.element_count();

    Quotient out;
    out.h = h;
    if (h.is_trivial()) {
        // identity presentation, identity projection
        out.form = d;
        out.h_perp = subgroup_from_indices(d, [&] {
            std::vector<long> all(n);
            for (long i = 0; i < n; ++i) all[i] = i;
            return all;
        }());
        out.proj.resize(n);
        out.class_reps.resize(n, d.zero());
        for (long i = 0; i < n; ++i) {
            out.proj[i] = i;
            out.class_reps[i] = d.element_at(i);
        }
        for (long i = 0; i < d.rank(); ++i) out.generators_in_d.push_back(d.generator(i));
        return out;
    }

    out.h_perp = orthogonal_complement(d, h);
    long r = d.rank();

    // lattice picture: D = Z^r / diag(d); a subgroup S lifts to the lattice
    // spanned by diag(d) and lifts of its generators
    auto sub_lattice = [&](const Subgroup& s) {
        ZMat cols(r);
        for (long i = 0; i < r; ++i)
            cols[i] = std::vector<Integer>();
        long m = (long)s.generators.size() + r;
        for (long i = 0; i < r; ++i) cols[i].assign(m, Integer(0));
        for (long j = 0; j < (long)s.generators.size(); ++j)
            for (long i = 0; i < r; ++i) cols[i][j] = s.generators[j].x[i];
        for (long i = 0; i < r; ++i) cols[i][(long)s.generators.size() + i] = d.orders()[i];
        return lattice_column_basis(cols);
    };

    ZMat b_perp = sub_lattice(out.h_perp);
    ZMat b_h = sub_lattice(h);

    // M = b_perp^{-1} b_h must be integral; quotient = Z^r / M via Smith form
    QMat bq(r, QVec(r));
    ZMat m(r, std::vector<Integer>(r));
    {
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < r; ++j) bq[i][j] = Rational(b_perp[i][j]);
        for (long col = 0; col < r; ++col) {
            QVec rhs(r), x;
            for (long i = 0; i < r; ++i) rhs[i] = Rational(b_h[i][col]);
            if (!solve(bq, rhs, x))
                throw ComputationError("quotient: lattice inclusion failed");
            for (long i = 0; i < r; ++i) {
                if (x[i].get_den() != 1)
                    throw ComputationError("quotient: H-lattice not inside H_perp-lattice");
                m[i][col] = x[i].get_num();
            }
        }
    }
    SmithNF s = smith_normal_form(m);
    ZMat u_inv = z_mat_inverse_unimodular(s.u);
    ZMat c = z_mat_mul(b_perp, u_inv);  // columns: adapted basis of the H_perp lattice

    std::vector<long> keep;
    for (long i = 0; i < r; ++i)
        if (s.diag[i] > 1) keep.push_back(i);
    long rq = (long)keep.size();

    std::vector<Element> gens;
    for (long k = 0; k < rq; ++k) {
        std::vector<long> coords(r);
        for (long i = 0; i < r; ++i)
            coords[i] = to_long_checked(c[i][keep[k]] % d.orders()[i], "coordinate");
        gens.push_back(d.reduced(std::move(coords)));
    }

    std::vector<long> orders(rq);
    for (long k = 0; k < rq; ++k) orders[k] = to_long_checked(s.diag[keep[k]], "quotient order");

    std::vector<std::vector<QmodZ>> gram(rq, std::vector<QmodZ>(rq));
    std::vector<QmodZ> qvals(rq);
    for (long i = 0; i < rq; ++i) {
        qvals[i] = d.q(gens[i]);
        for (long j = 0; j < rq; ++j) gram[i][j] = d.b(gens[i], gens[j]);
    }
    out.form = FiniteQuadraticModule(orders, std::move(gram), std::move(qvals));

    // |D_H| |H|^2 = |D|
    if (out.form.size() * h.order() * h.order() != d.size())
        throw ComputationError("quotient size check failed");

    // projection table: spell out each class rep + H
    long nq = out.form.element_count();
    out.proj.assign(n, -1);
    out.class_reps.resize(nq, d.zero());
    for (long ci = 0; ci < nq; ++ci) {
        Element t = out.form.element_at(ci);
        Element rep = d.zero();
        for (long k = 0; k < rq; ++k)
            rep = d.add(rep, d.scale(Integer(t.x[k]), gens[k]));
        out.class_reps[ci] = rep;
        for (long hi : h.elem_indices) {
            Element member = d.add(rep, d.element_at(hi));
            long idx = d.index_of(member);
            if (out.proj[idx] != -1)
                throw ComputationError("quotient: coset tables collide");
            out.proj[idx] = ci;
        }
    }
    for (long idx : out.h_perp.elem_indices)
        if (out.proj[idx] < 0)
            throw ComputationError("quotient: coset tables do not cover H_perp");
    out.generators_in_d = std::move(gens);
    return out;
}

} // namespace fqm

#include "fqm/lifts.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "fqm/numth.hpp"
#include "fqm/padic.hpp"

namespace fqm {

std::string form_key(const FiniteQuadraticModule& d) {
    std::ostringstream os;
    for (long o : d.orders()) os << o << ",";
    os << "|";
    for (long i = 0; i < d.rank(); ++i) {
        os << d.qval(i).representative().get_str() << ",";
        for (long j = i; j < d.rank(); ++j)
            os << d.gram_entry(i, j).representative().get_str() << ",";
    }
    return os.str();
}

const Quotient& QuotientCache::get(const FiniteQuadraticModule& d, const Subgroup& h) {
    auto key = std::make_pair(form_key(d), h.elem_indices);
    {
        std::lock_guard<std::mutex> lock(mtx_);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
    }
    // compute outside the lock; a lost race recomputes but the first insert
    // wins and results are identical either way
    Quotient qt = quotient(d, h);
    std::lock_guard<std::mutex> lock(mtx_);
    return map_.emplace(std::move(key), std::move(qt)).first->second;
}

QVec LiftSystem::apply_down(const QVec& x) const {
    QVec out(total_rows, Rational(0));
    for (long r = 0; r < total_rows; ++r)
        for (long c : down_rows[r]) out[r] += x[c];
    return out;
}

QVec LiftSystem::apply_up(const QVec& z) const {
    QVec out(base.element_count(), Rational(0));
    for (long r = 0; r < total_rows; ++r) {
        if (z[r] == 0) continue;
        for (long c : down_rows[r]) out[c] += z[r];
    }
    return out;
}

LiftSystem build_lift_system(const FiniteQuadraticModule& d,
                             const std::vector<Subgroup>& subgroups, bool allow_trivial,
                             QuotientCache* cache) {
    LiftSystem sys;
    sys.base = d;
    sys.subgroups = subgroups;
    long n = d.element_count();
    for (const auto& h : subgroups) {
        if (h.is_trivial() && !allow_trivial)
            throw ValidationError("trivial subgroup not allowed in a lift system "
                                  "(pass the include-trivial flag to permit it)");
        if (!is_isotropic(d, h))
            throw ValidationError("lift system requires isotropic subgroups");
        Quotient qt = cache ? cache->get(d, h) : quotient(d, h);
        sys.row_offset.push_back(sys.total_rows);
        long classes = qt.form.element_count();
        std::vector<std::vector<long>> members(classes);
        for (long idx = 0; idx < n; ++idx)
            if (qt.proj[idx] >= 0) members[qt.proj[idx]].push_back(idx);
        for (auto& m : members) sys.down_rows.push_back(std::move(m));
        sys.total_rows += classes;
        sys.quotients.push_back(std::move(qt));
    }
    return sys;
}

QMat kernel_down(const LiftSystem& sys) {
    return kernel_basis_sparse(sys.down_rows, sys.base.element_count());
}

bool is_up_surjective(const LiftSystem& sys) {
    long n = sys.base.element_count();
    // full column rank mod p certifies surjectivity of up = down^T outright
    if (rank_mod_p(sys.down_rows, n, 2147483647) == n) {
        if (!kernel_down(sys).empty())
            throw ComputationError("rank/kernel disagreement in is_up_surjective");
        return true;
    }
    long rk = rank_sparse(sys.down_rows, n);
    QMat ker = kernel_down(sys);
    if (rk + (long)ker.size() != n)
        throw ComputationError("rank/kernel disagreement in is_up_surjective");
    return ker.empty();
}

Report check_homomorphism(const FiniteQuadraticModule& d, const Subgroup& h) {
    Report rep;
    if (!is_isotropic(d, h))
        throw ValidationError("check_homomorphism requires an isotropic subgroup");
    Quotient qt = quotient(d, h);
    long n = d.element_count();
    long base = to_long_checked(d.size(), "|D|");

    // down as 0/1 rows (classes x elements), up rows per element
    long classes = qt.form.element_count();
    std::vector<std::vector<long>> down(classes);
    std::vector<std::vector<long>> up(n);
    for (long idx = 0; idx < n; ++idx)
        if (qt.proj[idx] >= 0) {
            down[qt.proj[idx]].push_back(idx);
            up[idx].push_back(qt.proj[idx]);
        }

    for (char g : {'T', 'S'}) {
        ScaledMatrix rho_d = rho_generator(d, g);
        ScaledMatrix eta = rho_generator(qt.form, g);
        // eta(g) down = down rho(g), compared over the base |D|
        ScaledMatrix lhs = scaled_times_int(eta, down, n).rebased(base);
        ScaledMatrix rhs = int_times_scaled(down, n, rho_d);
        CheckResult c1{std::string("eta(") + g + ") down = down rho(" + g + ")", true, ""};
        if (!lhs.equals(rhs)) {
            c1.pass = false;
            c1.counterexample = lhs.describe_difference(rhs);
        }
        rep.push_back(c1);
        // rho(g) up = up eta(g)
        ScaledMatrix lhs2 = scaled_times_int_transposed(rho_d, down, n);
        ScaledMatrix rhs2 = int_times_scaled(up, classes, eta).rebased(base);
        CheckResult c2{std::string("rho(") + g + ") up = up eta(" + g + ")", true, ""};
        if (!lhs2.equals(rhs2)) {
            c2.pass = false;
            c2.counterexample = lhs2.describe_difference(rhs2);
        }
        rep.push_back(c2);
    }
    return rep;
}

NiceSequence nice_sequence(const FiniteQuadraticModule& d, const Element& gamma,
                           const Element& delta, const Element& mu, long p, int e) {
    if (!is_prime(p)) throw ValidationError("nice_sequence: p must be prime");
    if (e < 1) throw ValidationError("nice_sequence: e must be >= 1");
    if (!d.q(delta).is_zero() || !d.q(mu).is_zero())
        throw ValidationError("nice_sequence: delta and mu must be isotropic");
    if (!d.b(delta, mu).is_zero())
        throw ValidationError("nice_sequence: delta and mu must be orthogonal");
    if (!d.b(gamma, delta).is_zero() || !d.b(gamma, mu).is_zero())
        throw ValidationError("nice_sequence: delta, mu must lie in gamma-perp");
    long q = ipow(p, e);
    for (long a = 0; a < q; ++a)
        for (long b = 0; b < q; ++b) {
            if (a == 0 && b == 0) continue;
            Element s = d.add(d.scale(Integer(a), delta), d.scale(Integer(b), mu));
            if (d.is_zero_elem(s))
                throw ValidationError("nice_sequence: a delta + b mu = 0 at (" +
                                      std::to_string(a) + "," + std::to_string(b) +
                                      "), pair not weakly independent at p^e");
        }

    NiceSequence seq;
    seq.p = p;
    seq.target = gamma;
    Integer lead(ipow(p, e - 1));
    seq.generators.push_back(d.scale(lead, mu));  // h_{-1}
    for (long j = 0; j < p; ++j)
        seq.generators.push_back(
            d.scale(lead, d.add(delta, d.scale(Integer(j), mu))));
    for (const auto& g : seq.generators) {
        Subgroup h = subgroup_closure(d, {g});
        if (h.order() != p)
            throw ComputationError("nice_sequence: subgroup of unexpected order");
        seq.subgroups.push_back(std::move(h));
    }
    NiceCheckResult chk = verify_nice(d, seq);
    if (!chk.ok)
        throw ComputationError("nice_sequence: construction violates condition " + chk.violation);
    return seq;
}

NiceCheckResult verify_nice(const FiniteQuadraticModule& d, const NiceSequence& seq) {
    long count = (long)seq.subgroups.size();
    if (count < 2 || (long)seq.generators.size() != count) return {false, "shape"};
    long n = count - 1;  // common subgroup size per the definition

    for (long i = 0; i < count; ++i) {
        const Subgroup& h = seq.subgroups[i];
        if (h.order() != n) return {false, "c"};
        Subgroup regen = subgroup_closure(d, {seq.generators[i]});
        if (regen.elem_indices != h.elem_indices) return {false, "c"};
        if (!is_isotropic(d, h)) return {false, "isotropy"};
    }
    // (a) pairwise orthogonality, on all element pairs
    for (long i = 0; i < count; ++i)
        for (long j = i + 1; j < count; ++j)
            for (long xi : seq.subgroups[i].elem_indices)
                for (long xj : seq.subgroups[j].elem_indices)
                    if (!d.b(d.element_at(xi), d.element_at(xj)).is_zero())
                        return {false, "a"};
    // (b) H_0 + (H_i \ {0}) stays inside the union of H_1..H_n
    std::set<long> union_tail;
    for (long k = 1; k < count; ++k)
        union_tail.insert(seq.subgroups[k].elem_indices.begin(),
                          seq.subgroups[k].elem_indices.end());
    for (long i = 1; i < count; ++i)
        for (long xi : seq.subgroups[i].elem_indices) {
            if (xi == 0) continue;
            for (long x0 : seq.subgroups[0].elem_indices) {
                Element sum = d.add(d.element_at(x0), d.element_at(xi));
                if (!union_tail.count(d.index_of(sum))) return {false, "b"};
            }
        }
    // (d) weak independence of all generator pairs
    for (long i = 0; i < count; ++i)
        for (long j = 0; j < count; ++j) {
            if (i == j) continue;
            for (long a = 0; a < n; ++a)
                for (long b = 0; b < n; ++b) {
                    Element x = d.scale(Integer(a), seq.generators[i]);
                    Element y = d.scale(Integer(b), seq.generators[j]);
                    if (x == y && !d.is_zero_elem(x)) return {false, "d"};
                }
        }
    // gamma must be orthogonal to every subgroup
    for (long i = 0; i < count; ++i)
        if (!d.b(seq.target, seq.generators[i]).is_zero())
            return {false, "target-orthogonality"};
    return {true, ""};
}

PreimageVector preimage_basis_vector(const FiniteQuadraticModule& d, const Element& gamma,
                                     const NiceSequence& seq, QuotientCache& cache) {
    long count = (long)seq.subgroups.size();
    long n = count - 1;
    if (!(gamma == seq.target))
        throw ValidationError("preimage_basis_vector: gamma differs from the sequence target");

    std::vector<const Quotient*> qts;
    for (const auto& h : seq.subgroups) qts.push_back(&cache.get(d, h));

    // M = disjoint union of gamma + H_i \ {gamma}, i = 1..n
    std::set<long> m_set;
    for (long i = 1; i < count; ++i)
        for (long hidx : seq.subgroups[i].elem_indices) {
            Element mu = d.add(gamma, d.element_at(hidx));
            long idx = d.index_of(mu);
            if (idx == d.index_of(gamma)) continue;
            if (!m_set.insert(idx).second)
                throw ComputationError("preimage: union of shifted subgroups not disjoint");
        }
    if ((long)m_set.size() != n * (n - 1))
        throw ComputationError("preimage: |M| != n(n-1)");

    // M must decompose into exactly n-1 full classes of D_0
    std::map<long, long> class_hits;
    for (long idx : m_set) {
        long c = qts[0]->proj[idx];
        if (c < 0) throw ComputationError("preimage: M leaves H_0-perp");
        ++class_hits[c];
    }
    if ((long)class_hits.size() != n - 1)
        throw ComputationError("preimage: class decomposition count mismatch");
    for (const auto& [c, hits] : class_hits)
        if (hits != n) throw ComputationError("preimage: partial class in M");

    PreimageVector zeta;
    Rational coeff(1, n);
    for (const auto& [c, hits] : class_hits)
        zeta.entries.push_back({0, c, qts[0]->class_reps[c], -coeff});
    for (long i = 1; i < count; ++i) {
        long c = qts[i]->proj[d.index_of(gamma)];
        if (c < 0) throw ComputationError("preimage: gamma not in H_i-perp");
        zeta.entries.push_back({i, c, qts[i]->class_reps[c], coeff});
    }

    // up(zeta) = e_gamma, exactly
    QVec image(d.element_count(), Rational(0));
    for (const auto& e : zeta.entries) {
        const Quotient& qt = *qts[e.seq_pos];
        for (long idx = 0; idx < (long)qt.proj.size(); ++idx)
            if (qt.proj[idx] == e.class_index) image[idx] += e.value;
    }
    for (long idx = 0; idx < (long)image.size(); ++idx) {
        Rational want = idx == d.index_of(gamma) ? Rational(1) : Rational(0);
        if (image[idx] != want)
            throw ComputationError("preimage: up(zeta) != e_gamma");
    }
    return zeta;
}

// ---- repeated p-part hypotheses ------------------------------------------------

namespace {

struct PartCounts {
    // odd[(p, j)] = count; two_even[j], two_odd[j]
    std::map<std::pair<long, int>, long> odd;
    std::map<int, long> two_even, two_odd;
};

PartCounts count_parts(const JordanSymbol& symbol) {
    PartCounts pc;
    for (const auto& comp : symbol.components) {
        if (const auto* o = std::get_if<OddComponent>(&comp)) ++pc.odd[{o->p, o->e}];
        else if (const auto* t = std::get_if<TwoOddComponent>(&comp)) ++pc.two_odd[t->e];
        else ++pc.two_even[std::get<TwoEvenComponent>(comp).e];
    }
    return pc;
}

HypothesisCheck evaluate_hypotheses(const PartCounts& pc, bool conservative) {
    HypothesisCheck out;
    // 2-adic: block counts e_j + o_j (conservative reading: o_j + 2 e_j >= 2 * bound)
    std::set<int> twos;
    for (const auto& [j, c] : pc.two_even) { (void)c; twos.insert(j); }
    for (const auto& [j, c] : pc.two_odd) { (void)c; twos.insert(j); }
    for (int j : twos) {
        long e = pc.two_even.count(j) ? pc.two_even.at(j) : 0;
        long o = pc.two_odd.count(j) ? pc.two_odd.at(j) : 0;
        long need = j <= 2 ? 9 : 5;
        long have = conservative ? o + 2 * e : e + o;
        long bound = conservative ? 2 * need : need;
        if (have >= bound) {
            out.satisfied = true;
            out.which = (j <= 2 ? "iii" : "iv") + std::string(conservative ? "-conservative" : "");
            out.p = 2;
            out.j = j;
            out.count = have;
            return out;
        }
    }
    for (const auto& [key, c] : pc.odd) {
        auto [p, j] = key;
        long need = j == 1 ? 7 : 4;
        if (c >= need) {
            out.satisfied = true;
            out.which = j == 1 ? "i" : "ii";
            out.p = p;
            out.j = j;
            out.count = c;
            return out;
        }
    }
    out.detail = "no p-part repeats often enough";
    return out;
}

} // namespace

HypothesisCheck check_theorem_hypotheses(const JordanSymbol& symbol) {
    return evaluate_hypotheses(count_parts(symbol), false);
}

HypothesisCheck check_theorem_hypotheses_group(const FiniteQuadraticModule& d) {
    // only the group multiplicities are available here
    PartCounts pc;
    for (long o : d.orders()) {
        auto fac = factorize(o);
        if (fac.size() != 1) {
            HypothesisCheck out;
            out.detail = "orders are not prime powers; no conservative bound";
            return out;
        }
        auto [p, e] = fac[0];
        if (p == 2) ++pc.two_odd[e];  // counted as odd blocks, hence the 2x bound
        else ++pc.odd[{p, e}];
    }
    return evaluate_hypotheses(pc, true);
}

SizeGateCheck check_size_gate(const JordanSymbol& symbol) {
    SizeGateCheck out;
    Integer size(1);
    long level = 1;
    for (const auto& comp : symbol.components) {
        if (const auto* o = std::get_if<OddComponent>(&comp)) {
            long q = ipow(o->p, o->e);
            size *= q;
            level = lcm_long(level, q);
        } else if (const auto* t = std::get_if<TwoOddComponent>(&comp)) {
            size *= ipow(2, t->e);
            level = lcm_long(level, ipow(2, t->e + 1));
        } else {
            int e = std::get<TwoEvenComponent>(comp).e;
            size *= Integer(ipow(2, e)) * ipow(2, e);
            level = lcm_long(level, ipow(2, e));
        }
    }
    out.size = size;
    out.level = level;
    Integer bound(1);
    for (int i = 0; i < 9; ++i) bound *= level;
    out.bound = bound;
    out.size_bound_met = size >= bound;

    PartCounts pc = count_parts(symbol);
    long best = 0;
    for (const auto& [key, c] : pc.odd)
        if (c >= 9 && c > best) { best = c; out.p = key.first; out.j = key.second; }
    std::set<int> twos;
    for (const auto& [j, c] : pc.two_even) { (void)c; twos.insert(j); }
    for (const auto& [j, c] : pc.two_odd) { (void)c; twos.insert(j); }
    for (int j : twos) {
        long e = pc.two_even.count(j) ? pc.two_even.at(j) : 0;
        long o = pc.two_odd.count(j) ? pc.two_odd.at(j) : 0;
        long mult = o + 2 * e;  // group multiplicity of Z_{2^j}
        if (mult >= 9 && mult > best) { best = mult; out.p = 2; out.j = j; }
    }
    out.multiplicity = best;
    out.applies = out.size_bound_met && best >= 9;
    return out;
}

SizeGateCheck check_size_gate_group(const FiniteQuadraticModule& d) {
    SizeGateCheck out;
    out.size = d.size();
    out.level = d.level();
    Integer bound(1);
    for (int i = 0; i < 9; ++i) bound *= out.level;
    out.bound = bound;
    out.size_bound_met = out.size >= bound;
    std::map<std::pair<long, int>, long> mult;
    for (long o : d.orders()) {
        auto fac = factorize(o);
        if (fac.size() != 1) continue;  // non prime power order: no witness from it
        ++mult[{fac[0].first, fac[0].second}];
    }
    long best = 0;
    for (const auto& [key, c] : mult)
        if (c >= 9 && c > best) { best = c; out.p = key.first; out.j = key.second; }
    out.multiplicity = best;
    out.applies = out.size_bound_met && best >= 9;
    return out;
}

// ---- certificate construction -------------------------------------------------

namespace {

// the designated part D_imp as a standalone form plus its embedding data
struct ImportantPart {
    FiniteQuadraticModule form;
    std::vector<long> gen_map;                  // imp generator -> D generator
    std::vector<std::vector<long>> blocks;      // imp generator indices per component
};

ImportantPart important_part(const FiniteQuadraticModule& d, const JordanSymbol& symbol,
                             const JordanLayout& layout, long p, int j) {
    ImportantPart imp;
    for (size_t ci = 0; ci < symbol.components.size(); ++ci) {
        const auto& comp = symbol.components[ci];
        bool in = false;
        if (const auto* o = std::get_if<OddComponent>(&comp)) in = o->p == p && o->e == j;
        else if (const auto* t = std::get_if<TwoOddComponent>(&comp)) in = p == 2 && t->e == j;
        else in = p == 2 && std::get<TwoEvenComponent>(comp).e == j;
        if (!in) continue;
        std::vector<long> blk;
        for (long g = layout.spans[ci].first; g < layout.spans[ci].second; ++g) {
            blk.push_back((long)imp.gen_map.size());
            imp.gen_map.push_back(g);
        }
        imp.blocks.push_back(std::move(blk));
    }
    long r = (long)imp.gen_map.size();
    std::vector<long> orders(r);
    std::vector<std::vector<QmodZ>> gram(r, std::vector<QmodZ>(r));
    std::vector<QmodZ> qvals(r);
    for (long i = 0; i < r; ++i) {
        orders[i] = d.orders()[imp.gen_map[i]];
        qvals[i] = d.qval(imp.gen_map[i]);
        for (long k = 0; k < r; ++k) gram[i][k] = d.gram_entry(imp.gen_map[i], imp.gen_map[k]);
    }
    imp.form = FiniteQuadraticModule(std::move(orders), std::move(gram), std::move(qvals));
    return imp;
}

Element embed_into(const FiniteQuadraticModule& d, const ImportantPart& imp,
                   const Element& x) {
    Element out = d.zero();
    for (size_t i = 0; i < imp.gen_map.size(); ++i) out.x[imp.gen_map[i]] = x.x[i];
    return out;
}

// subform of imp spanned by basis vectors (coordinates mod q), with generators
// of order q; used after a Case 1 / Case 2 split
struct SubForm {
    FiniteQuadraticModule form;
    std::vector<Element> gens_in_imp;
};

SubForm make_subform(const FiniteQuadraticModule& imp, long q,
                     const std::vector<std::vector<long>>& basis) {
    SubForm sf;
    for (const auto& v : basis) {
        std::vector<long> coords(imp.rank());
        for (long i = 0; i < imp.rank(); ++i) coords[i] = mod_pos(v[i], imp.orders()[i]);
        sf.gens_in_imp.push_back(imp.reduced(std::move(coords)));
    }
    long r = (long)sf.gens_in_imp.size();
    std::vector<long> orders(r, q);
    std::vector<std::vector<QmodZ>> gram(r, std::vector<QmodZ>(r));
    std::vector<QmodZ> qvals(r);
    for (long i = 0; i < r; ++i) {
        if (imp.element_order(sf.gens_in_imp[i]) != q)
            throw ComputationError("subform generator has wrong order");
        qvals[i] = imp.q(sf.gens_in_imp[i]);
        for (long k = 0; k < r; ++k) gram[i][k] = imp.b(sf.gens_in_imp[i], sf.gens_in_imp[k]);
    }
    sf.form = FiniteQuadraticModule(std::move(orders), std::move(gram), std::move(qvals));
    return sf;
}

Element map_from_subform(const FiniteQuadraticModule& imp, const SubForm& sf,
                         const Element& x) {
    Element out = imp.zero();
    for (size_t i = 0; i < sf.gens_in_imp.size(); ++i)
        out = imp.add(out, imp.scale(Integer(x.x[i]), sf.gens_in_imp[i]));
    return out;
}

// brute-force pair search inside gamma-perp of imp (p = 2 fallback path)
TwoIsotropic brute_pair_in_perp(const FiniteQuadraticModule& imp, const Element& gamma,
                                long p, int e, long bound) {
    long n = imp.element_count(bound);
    std::vector<long> candidates;
    for (long i = 1; i < n; ++i) {
        Element x = imp.element_at(i);
        if (!imp.q(x).is_zero()) continue;
        if (!imp.b(x, gamma).is_zero()) continue;
        candidates.push_back(i);
    }
    for (size_t a = 0; a < candidates.size(); ++a) {
        Element da = imp.element_at(candidates[a]);
        for (size_t b = a + 1; b < candidates.size(); ++b) {
            Element mb = imp.element_at(candidates[b]);
            if (!imp.b(da, mb).is_zero()) continue;
            int lvl = weak_independence_level(imp, da, mb, p, e);
            if (lvl >= 1) return TwoIsotropic{da, mb, p, lvl};
        }
    }
    throw ComputationError("no isotropic orthogonal pair in gamma-perp");
}

TwoIsotropic pair_for_gamma_odd(const FiniteQuadraticModule& imp, const Element& gamma_imp,
                                long p, int j) {
    if (imp.is_zero_elem(gamma_imp)) return find_two_isotropic(imp);
    long q = ipow(p, j);
    // primitive part mu = gamma / p^s
    long s = j;
    for (long c : gamma_imp.x)
        if (c != 0) s = std::min(s, valuation(c, p, j));
    std::vector<long> mu(imp.rank());
    for (long i = 0; i < imp.rank(); ++i) mu[i] = gamma_imp.x[i] / ipow(p, (int)s);

    PrecisionMatrix g = bilinear_gram(imp, p, j, j + 1);
    Element mu_elem = imp.reduced(mu);
    QmodZ norm = imp.b(mu_elem, mu_elem);
    Integer a = norm.representative().get_num() * (q / norm.denominator().get_si());
    std::vector<std::vector<long>> basis;
    if (a % p != 0) {
        basis = split_unit_vector(g, mu);  // Case 1 (on the primitive part)
    } else {
        PairSplit ps = split_primitive_pair(g, mu);  // Case 2
        basis = ps.perp_basis;
    }
    SubForm sf = make_subform(imp, q, basis);
    TwoIsotropic pair = find_two_isotropic(sf.form);
    TwoIsotropic out;
    out.p = pair.p;
    out.level_e = pair.level_e;
    out.delta = map_from_subform(imp, sf, pair.delta);
    out.mu = map_from_subform(imp, sf, pair.mu);
    return out;
}

TwoIsotropic pair_for_gamma_two(const FiniteQuadraticModule& imp, const ImportantPart& part,
                                const Element& gamma_imp, int j, long size_bound) {
    if (imp.is_zero_elem(gamma_imp)) return find_two_isotropic(imp);
    // blocks untouched by gamma keep their Jordan presentation
    std::vector<std::vector<long>> zero_blocks;
    for (const auto& blk : part.blocks) {
        bool zero = true;
        for (long g : blk)
            if (gamma_imp.x[g] != 0) { zero = false; break; }
        if (zero) zero_blocks.push_back(blk);
    }
    long q = ipow(2, j);
    if (j >= 3 && zero_blocks.size() >= 2) {
        TwoIsotropic out;
        out.p = 2;
        out.level_e = 1;
        out.delta = imp.scale(Integer(q / 2), imp.generator(zero_blocks[0][0]));
        out.mu = imp.scale(Integer(q / 2), imp.generator(zero_blocks[1][0]));
        if (!imp.q(out.delta).is_zero() || !imp.q(out.mu).is_zero() ||
            !imp.b(out.delta, out.mu).is_zero() ||
            !imp.b(out.delta, gamma_imp).is_zero() || !imp.b(out.mu, gamma_imp).is_zero() ||
            weak_independence_level(imp, out.delta, out.mu, 2, 1) < 1)
            return brute_pair_in_perp(imp, gamma_imp, 2, j, size_bound);
        return out;
    }
    if (j <= 2) {
        // need two groups of untouched blocks with rank >= 3 each
        std::vector<long> group1, group2;
        for (const auto& blk : zero_blocks) {
            if ((long)group1.size() < 3) group1.insert(group1.end(), blk.begin(), blk.end());
            else group2.insert(group2.end(), blk.begin(), blk.end());
        }
        if ((long)group1.size() >= 3 && (long)group2.size() >= 3) {
            auto search = [&](const std::vector<long>& gens) {
                PrecisionMatrix g = two_adic_quadratic_gram(imp, gens, j);
                std::vector<long> y = find_isotropic_primitive_2(g, j);
                std::vector<long> coords(imp.rank(), 0);
                for (size_t i = 0; i < gens.size(); ++i) coords[gens[i]] = mod_pos(y[i], q);
                return imp.reduced(std::move(coords));
            };
            try {
                TwoIsotropic out;
                out.p = 2;
                out.delta = search(group1);
                out.mu = search(group2);
                out.level_e = weak_independence_level(imp, out.delta, out.mu, 2, j);
                if (out.level_e >= 1 && imp.q(out.delta).is_zero() && imp.q(out.mu).is_zero() &&
                    imp.b(out.delta, out.mu).is_zero() &&
                    imp.b(out.delta, gamma_imp).is_zero() && imp.b(out.mu, gamma_imp).is_zero())
                    return out;
            } catch (const ComputationError&) {
                // fall through to brute force
            }
        }
    }
    return brute_pair_in_perp(imp, gamma_imp, 2, j, size_bound);
}

} // namespace

Certificate surjectivity_certificate(const JordanSymbol& symbol, int threads,
                                     long size_bound) {
    Certificate cert;
    cert.hypothesis = check_theorem_hypotheses(symbol);
    if (!cert.hypothesis.satisfied)
        throw ValidationError("surjectivity_certificate: no hypothesis of the main "
                              "theorem is satisfied");
    JordanLayout layout;
    cert.form = from_jordan(symbol, &layout);
    const FiniteQuadraticModule& d = cert.form;
    long n = d.element_count(size_bound);
    long p = cert.hypothesis.p;
    int j = cert.hypothesis.j;
    ImportantPart imp = important_part(d, symbol, layout, p, j);

    QuotientCache cache;
    std::mutex merge_mtx;
    std::map<std::vector<long>, long> subgroup_ids;
    cert.entries.resize(n);
    std::atomic<long> next{0};
    std::vector<std::string> failures;

    auto worker = [&]() {
        for (;;) {
            long idx = next.fetch_add(1);
            if (idx >= n) return;
            try {
                Element gamma = d.element_at(idx);
                Element gamma_imp = imp.form.zero();
                for (size_t i = 0; i < imp.gen_map.size(); ++i)
                    gamma_imp.x[i] = gamma.x[imp.gen_map[i]];
                TwoIsotropic pair =
                    p == 2 ? pair_for_gamma_two(imp.form, imp, gamma_imp, j, size_bound)
                           : pair_for_gamma_odd(imp.form, gamma_imp, p, j);
                Element delta = embed_into(d, imp, pair.delta);
                Element mu = embed_into(d, imp, pair.mu);
                NiceSequence seq =
                    nice_sequence(d, gamma, delta, mu, pair.p, pair.level_e);
                PreimageVector zeta = preimage_basis_vector(d, gamma, seq, cache);

                CertificateEntry entry;
                entry.gamma = gamma.x;
                entry.zeta = std::move(zeta);
                entry.verified = true;
                {
                    std::lock_guard<std::mutex> lock(merge_mtx);
                    for (const auto& h : seq.subgroups) {
                        auto it = subgroup_ids.find(h.elem_indices);
                        long id;
                        if (it == subgroup_ids.end()) {
                            id = (long)cert.subgroups.size();
                            cert.subgroups.push_back(h);
                            subgroup_ids.emplace(h.elem_indices, id);
                        } else {
                            id = it->second;
                        }
                        entry.subgroup_ids.push_back(id);
                    }
                    cert.entries[idx] = std::move(entry);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(merge_mtx);
                failures.push_back("gamma index " + std::to_string(idx) + ": " + e.what());
                return;
            }
        }
    };

    long nthreads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (long i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (!failures.empty())
        throw ComputationError("certificate failed: " + failures.front());

    // renumber the subgroups deterministically (merge order depends on threads)
    std::vector<long> order((long)cert.subgroups.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (long)i;
    std::sort(order.begin(), order.end(), [&](long a, long b) {
        return cert.subgroups[a].elem_indices < cert.subgroups[b].elem_indices;
    });
    std::vector<long> new_id(order.size());
    std::vector<Subgroup> sorted;
    sorted.reserve(order.size());
    for (size_t rank = 0; rank < order.size(); ++rank) {
        new_id[order[rank]] = (long)rank;
        // canonical generators: the kept representative must not depend on
        // which thread inserted the subgroup first
        sorted.push_back(subgroup_from_indices(d, cert.subgroups[order[rank]].elem_indices));
    }
    cert.subgroups = std::move(sorted);
    for (auto& e : cert.entries)
        for (auto& id : e.subgroup_ids) id = new_id[id];
    return cert;
}

} // namespace fqm

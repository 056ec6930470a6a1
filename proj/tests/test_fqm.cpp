#include "doctest.h"

#include <algorithm>
#include <set>

#include "fqm/module.hpp"
#include "fqm/subgroup.hpp"

using namespace fqm;

TEST_SUITE("fqm") {

TEST_CASE("from_jordan 3^1:a=2") {
    auto d = from_jordan("3^1:a=2");
    REQUIRE(d.rank() == 1);
    CHECK(d.orders()[0] == 3);
    CHECK(d.gram_entry(0, 0) == QmodZ(2, 3));
    CHECK(d.qval(0) == QmodZ(1, 3));  // 2^{-1} = 2 mod 3, 2*2/3 = 1/3
    CHECK(d.level() == 3);
}

TEST_CASE("from_jordan 2^1:A") {
    auto d = from_jordan("2^1:A");
    REQUIRE(d.rank() == 2);
    CHECK(d.size() == 4);
    CHECK(d.qval(0).is_zero());
    CHECK(d.qval(1).is_zero());
    CHECK(d.gram_entry(0, 1) == QmodZ(1, 2));
    Element gd = d.reduced({1, 1});
    CHECK(d.q(gd) == QmodZ(1, 2));  // Q(gamma+delta) by bilinearity
    CHECK(d.level() == 2);
}

TEST_CASE("from_jordan empty symbol is trivial") {
    auto d = from_jordan("");
    CHECK(d.rank() == 0);
    CHECK(d.size() == 1);
    CHECK(d.level() == 1);
}

TEST_CASE("jordan grammar errors") {
    CHECK_THROWS_AS(from_jordan("4^1:a=1"), ValidationError);   // p not prime
    CHECK_THROWS_AS(from_jordan("3^1:a=3"), ValidationError);   // gcd(a,p) != 1
    CHECK_THROWS_AS(from_jordan("2^1:a=2,v=0"), ValidationError);
    CHECK_THROWS_AS(from_jordan("2^1:C"), ValidationError);
    CHECK_THROWS_AS(from_jordan("2^0:A"), ValidationError);
    // residues reduced on construction: a = 5 == 2 mod 3
    CHECK(from_jordan("3^1:a=5").gram_entry(0, 0) == QmodZ(2, 3));
}

TEST_CASE("from_even_lattice [[2]]") {
    auto d = from_even_lattice({{Integer(2)}});
    REQUIRE(d.rank() == 1);
    CHECK(d.orders()[0] == 2);
    // L' = (1/2)Z, Q(v/2) = (1/4)(2/2) = 1/4
    CHECK(d.qval(0) == QmodZ(1, 4));
}

TEST_CASE("from_even_lattice hyperbolic plane is trivial") {
    auto d = from_even_lattice({{Integer(0), Integer(1)}, {Integer(1), Integer(0)}});
    CHECK(d.size() == 1);
}

TEST_CASE("from_even_lattice A2 matches 3^1:a=2") {
    ZMat a2 = {{Integer(2), Integer(-1)}, {Integer(-1), Integer(2)}};
    auto d = from_even_lattice(a2);
    auto j = from_jordan("3^1:a=2");
    REQUIRE(d.rank() == 1);
    CHECK(d.orders() == j.orders());
    CHECK(d.level() == j.level());
    CHECK(signature(d) == signature(j));
    // multiset of Q values over all elements agrees
    std::multiset<Rational> qd, qj;
    for (long i = 0; i < 3; ++i) {
        qd.insert(d.q(d.element_at(i)).representative());
        qj.insert(j.q(j.element_at(i)).representative());
    }
    CHECK(qd == qj);
}

TEST_CASE("from_even_lattice errors") {
    CHECK_THROWS_AS(from_even_lattice({{Integer(1)}}), ValidationError);             // odd
    CHECK_THROWS_AS(from_even_lattice({{Integer(2), Integer(1)},
                                       {Integer(0), Integer(2)}}), ValidationError); // asym
    CHECK_THROWS_AS(from_even_lattice({{Integer(0)}}), ValidationError);             // det 0
}

TEST_CASE("direct_sum") {
    auto x = from_jordan("3^1:a=2");
    auto t = FiniteQuadraticModule();
    auto s = direct_sum(t, x);
    CHECK(s.size() == x.size());
    CHECK(s.gram_entry(0, 0) == x.gram_entry(0, 0));
    auto s2 = direct_sum(from_jordan("3^1:a=1"), from_jordan("3^1:a=2"));
    CHECK(s2.size() == 9);
    CHECK(s2.gram_entry(0, 0) == QmodZ(1, 3));
    CHECK(s2.gram_entry(1, 1) == QmodZ(2, 3));
    CHECK(s2.gram_entry(0, 1).is_zero());
}

TEST_CASE("signature adds mod 8 over direct sums") {
    std::vector<std::string> syms = {"3^1:a=1", "3^1:a=2", "2^1:A", "2^1:B",
                                     "5^1:a=1", "2^1:a=1,v=0", "2^1:a=3,v=1", "7^1:a=1"};
    for (const auto& sa : syms)
        for (const auto& sb : syms) {
            auto a = from_jordan(sa), b = from_jordan(sb);
            CHECK(signature(direct_sum(a, b)) == (signature(a) + signature(b)) % 8);
        }
}

TEST_CASE("eval_q and eval_b") {
    auto d = from_jordan("3^1:a=2");
    CHECK(d.q(d.zero()).is_zero());
    Element g2 = d.reduced({2});
    CHECK(d.q(g2) == QmodZ(1, 3));  // Q(2g) = 4 Q(g) = 4/3 = 1/3
    auto da = from_jordan("2^1:A");
    CHECK(da.q(da.reduced({1, 1})) == QmodZ(1, 2));
    CHECK_THROWS_AS(d.q(Element{{5}}), ValidationError);

    // b(x,y) = Q(x+y) - Q(x) - Q(y) and b(x,x) = 2 Q(x), exhaustively on a sum
    auto s = direct_sum(da, d);
    long n = s.element_count();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            Element x = s.element_at(i), y = s.element_at(j);
            CHECK(s.b(x, y) == s.q(s.add(x, y)) - s.q(x) - s.q(y));
        }
    for (long i = 0; i < n; ++i) {
        Element x = s.element_at(i);
        CHECK(s.b(x, x) == s.q(x) + s.q(x));
    }
}

TEST_CASE("level") {
    CHECK(FiniteQuadraticModule().level() == 1);
    CHECK(from_jordan("2^1:a=1,v=0").level() == 4);  // Q = 1/4
    CHECK(from_jordan("3^1:a=2").level() == 3);
    // minimality of the level, exhaustive on |D| <= 500
    for (const char* sym : {"2^2:A", "2^1:a=3,v=1", "9^0:a=1"}) { (void)sym; }
    for (const auto& txt : {std::string("2^2:B"), std::string("3^2:a=1"),
                            std::string("2^3:a=5,v=1"), std::string("5^1:a=2+2^1:A")}) {
        auto d = from_jordan(txt);
        long n = d.element_count();
        long lv = d.level();
        for (long m = 1; m < lv; ++m) {
            bool kills = true;
            for (long i = 0; i < n && kills; ++i)
                if (!d.q(d.element_at(i)).scaled(m).is_zero()) kills = false;
            CHECK(!kills);
        }
        for (long i = 0; i < n; ++i)
            CHECK(d.q(d.element_at(i)).scaled(lv).is_zero());
    }
}

TEST_CASE("signature examples") {
    CHECK(signature(FiniteQuadraticModule()) == 0);
    CHECK(signature(from_jordan("2^1:A")) == 0);   // gauss = 2
    CHECK(signature(from_jordan("3^1:a=2")) == 2); // gauss = i sqrt(3), like A_2
}

TEST_CASE("gauss sums") {
    CHECK(gauss_sum(FiniteQuadraticModule()) == CycNum(1));
    CHECK(gauss_sum(from_jordan("2^1:A")) == CycNum(2));
    // 1 + 2 e(1/3) = i sqrt(3)
    auto g = gauss_sum(from_jordan("3^1:a=2"));
    CHECK(g == CycNum(1) + root_of_unity(QmodZ(1, 3), 3) * Rational(2));
    CHECK(g * g == CycNum(-3));
}

TEST_CASE("element enumeration order") {
    auto d = from_jordan("2^1:A");  // Z_2 x Z_2
    CHECK(d.element_at(0) == d.reduced({0, 0}));
    CHECK(d.element_at(1) == d.reduced({0, 1}));
    CHECK(d.element_at(2) == d.reduced({1, 0}));
    CHECK(d.element_at(3) == d.reduced({1, 1}));
    for (long i = 0; i < 4; ++i) CHECK(d.index_of(d.element_at(i)) == i);
    auto s = direct_sum(from_jordan("3^1:a=1"), from_jordan("3^1:a=1"));
    CHECK(s.element_count() == 9);
    CHECK(FiniteQuadraticModule().element_count() == 1);
}

TEST_CASE("subgroups: closure, complement, isotropy") {
    auto d = from_jordan("2^1:A");
    Element g = d.reduced({1, 0}), del = d.reduced({0, 1});
    auto hg = subgroup_closure(d, {g});
    CHECK(hg.order() == 2);
    CHECK(is_isotropic(d, hg));
    CHECK(!is_isotropic(d, subgroup_closure(d, {d.add(g, del)})));

    // complement of {0} is everything, complement of D is {0}
    auto all = orthogonal_complement(d, trivial_subgroup(d));
    CHECK(all.order() == 4);
    auto none = orthogonal_complement(d, all);
    CHECK(none.order() == 1);
    // H_perp of <gamma> in 2^1:A is {0, gamma}
    auto comp = orthogonal_complement(d, hg);
    CHECK(comp.elem_indices == hg.elem_indices);

    auto d3 = from_jordan("3^1:a=2");
    CHECK(!is_isotropic(d3, subgroup_closure(d3, {d3.generator(0)})));
}

TEST_CASE("isotropic subgroup enumeration") {
    CHECK(isotropic_subgroups(FiniteQuadraticModule()).empty());
    auto d = from_jordan("2^1:A");
    auto subs = isotropic_subgroups(d);
    CHECK(subs.size() == 2);  // <gamma> and <delta>
    for (const auto& s : subs) CHECK(s.order() == 2);
    CHECK(isotropic_subgroups(from_jordan("3^1:a=2")).empty());
    auto with_triv = isotropic_subgroups(d, {.include_trivial = true});
    CHECK(with_triv.size() == 3);
}

TEST_CASE("isotropic enumeration against brute force") {
    // oracle: closures of every subset of isotropic elements (|D| small)
    for (const auto& txt : {std::string("2^1:A+2^1:A"), std::string("2^1:B+2^1:B"),
                            std::string("3^1:a=1+3^1:a=2"), std::string("2^2:A")}) {
        auto d = from_jordan(txt);
        long n = d.element_count();
        std::vector<long> iso;
        for (long i = 1; i < n; ++i)
            if (d.q(d.element_at(i)).is_zero()) iso.push_back(i);
        std::set<std::vector<long>> expect;
        long m = (long)iso.size();
        REQUIRE(m <= 16);
        for (long mask = 1; mask < (1L << m); ++mask) {
            std::vector<Element> gens;
            for (long b = 0; b < m; ++b)
                if (mask & (1L << b)) gens.push_back(d.element_at(iso[b]));
            auto s = subgroup_closure(d, gens);
            if (is_isotropic(d, s)) expect.insert(s.elem_indices);
        }
        std::set<std::vector<long>> got;
        for (const auto& s : isotropic_subgroups(d)) got.insert(s.elem_indices);
        CHECK(got == expect);
    }
}

TEST_CASE("quotient basics") {
    auto d = from_jordan("2^1:A");
    auto h = subgroup_closure(d, {d.reduced({1, 0})});
    auto qt = quotient(d, h);
    CHECK(qt.form.size() == 1);  // H_perp = H
    CHECK_THROWS_AS(quotient(d, subgroup_closure(d, {d.reduced({1, 1})})), ValidationError);

    // trivial H: identity presentation
    auto qt0 = quotient(d, trivial_subgroup(d));
    CHECK(qt0.form.size() == 4);
    for (long i = 0; i < 4; ++i) CHECK(qt0.proj[i] == i);

    auto dd = direct_sum(d, d);
    auto h1 = subgroup_closure(dd, {dd.reduced({1, 0, 0, 0})});
    auto q2 = quotient(dd, h1);
    CHECK(q2.form.size() == 4);
    CHECK(signature(q2.form) == signature(dd));
}

TEST_CASE("quotient invariants across small forms") {
    for (const auto& txt : {std::string("2^1:A"), std::string("2^1:A+2^1:A"),
                            std::string("2^1:B+2^1:B"), std::string("3^1:a=1+3^1:a=2"),
                            std::string("2^2:A"), std::string("2^1:A+3^1:a=1+3^1:a=2")}) {
        auto d = from_jordan(txt);
        for (const auto& h : isotropic_subgroups(d)) {
            auto qt = quotient(d, h);
            CHECK(qt.form.size() * h.order() * h.order() == d.size());
            CHECK(signature(qt.form) == signature(d));
            // Q_H(gamma + H) = Q(gamma) through the projection table
            long n = d.element_count();
            for (long i = 0; i < n; ++i) {
                if (qt.proj[i] < 0) continue;
                CHECK(d.q(d.element_at(i)) == qt.form.q(qt.form.element_at(qt.proj[i])));
            }
        }
    }
}

TEST_CASE("level minimality on all single blocks up to 16") {
    std::vector<std::string> blocks;
    for (long p : {3L, 5L, 7L, 11L, 13L})
        for (long q = p, e = 1; q <= 16; q *= p, ++e)
            for (long a : {1L, 2L})
                blocks.push_back(std::to_string(p) + "^" + std::to_string(e) +
                                 ":a=" + std::to_string(a));
    for (int e = 1; (1 << e) <= 16; ++e) {
        blocks.push_back("2^" + std::to_string(e) + ":a=1,v=0");
        blocks.push_back("2^" + std::to_string(e) + ":a=3,v=1");
        if ((1 << (2 * e)) <= 16) {
            blocks.push_back("2^" + std::to_string(e) + ":A");
            blocks.push_back("2^" + std::to_string(e) + ":B");
        }
    }
    for (const auto& sym : blocks) {
        auto d = from_jordan(sym);
        long n = d.element_count(), lv = d.level();
        for (long i = 0; i < n; ++i)
            CHECK(d.q(d.element_at(i)).scaled(lv).is_zero());
        for (long m = 1; m < lv; ++m) {
            bool kills = true;
            for (long i = 0; i < n && kills; ++i)
                if (!d.q(d.element_at(i)).scaled(m).is_zero()) kills = false;
            CHECK(!kills);
        }
    }
}

TEST_CASE("quotient size and signature invariants, |D| <= 100") {
    std::vector<std::string> syms = {
        "2^1:A",        "2^1:B",        "2^1:A+2^1:A",  "2^1:A+2^1:B",
        "2^2:A",        "2^1:A+3^1:a=1", "3^1:a=1+3^1:a=2", "2^1:A+2^1:A+2^1:A",
        "2^3:a=1,v=0+2^3:a=3,v=0", "5^1:a=1+5^1:a=2", "2^2:B+3^1:a=2",
        "7^1:a=1+7^1:a=3", "2^1:a=1,v=0+2^1:a=3,v=1+2^1:A",
        "3^2:a=1+3^1:a=1", "2^2:a=1,v=0+2^2:a=3,v=0+2^1:a=1,v=1"};
    for (const auto& sym : syms) {
        auto d = from_jordan(sym);
        REQUIRE(d.size() <= 100);
        for (const auto& h : isotropic_subgroups(d)) {
            auto qt = quotient(d, h);
            CHECK(qt.form.size() * h.order() * h.order() == d.size());
            CHECK(signature(qt.form) == signature(d));
        }
    }
}

TEST_CASE("degenerate forms are rejected") {
    // Z_2 with Q = 0 has a radical
    CHECK_THROWS_AS(FiniteQuadraticModule({2}, {{QmodZ()}}, {QmodZ()}), ValidationError);
    // Gram diagonal must be 2Q
    CHECK_THROWS_AS(FiniteQuadraticModule({2}, {{QmodZ(1, 2)}}, {QmodZ(1, 2)}),
                    ValidationError);
}

} // TEST_SUITE

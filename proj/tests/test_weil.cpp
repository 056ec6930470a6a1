#include "doctest.h"

#include "fqm/weil.hpp"

using namespace fqm;

namespace {

// forms with even signature and small order, assembled by hand
std::vector<std::string> even_catalog_small() {
    return {"", "2^1:A", "2^1:B", "3^1:a=1+3^1:a=2", "2^1:A+2^1:A", "2^1:A+2^1:B",
            "5^1:a=1+5^1:a=2", "3^1:a=2+3^1:a=2+3^1:a=2+3^1:a=2",
            "2^1:a=1,v=0+2^1:a=3,v=1", "2^2:A", "3^2:a=1+3^2:a=2"};
}

} // namespace

TEST_SUITE("weil") {

TEST_CASE("sl2_word basics") {
    CHECK(sl2_word(Mat2{}).tokens.empty());
    auto ws = sl2_word(mat2_s());
    CHECK(ws.tokens.size() == 1);
    CHECK(ws.tokens[0].gen == 'S');
    auto w5 = sl2_word(mat2_t(5));
    auto letters = w5.letters();
    CHECK(letters == std::vector<std::string>{"T", "T", "T", "T", "T"});
    CHECK_THROWS_AS(sl2_word(Mat2{1, 0, 0, -1}), ValidationError);
}

TEST_CASE("sl2_word on random products") {
    std::vector<Mat2> gens = {mat2_s(), mat2_t(1), mat2_t(-1)};
    Mat2 m;
    unsigned state = 12345;
    for (int step = 0; step < 200; ++step) {
        state = state * 1664525u + 1013904223u;
        m = mat2_mul(m, gens[state % 3]);
        SL2Word w = sl2_word(m);  // verifies its own product internally
        CHECK(w.matrix == m);
    }
}

TEST_CASE("rho generators on the trivial form") {
    FiniteQuadraticModule d;
    auto t = rho_generator(d, 'T');
    auto s = rho_generator(d, 'S');
    CHECK(t.at(0, 0) == CycNum(1));
    CHECK(s.at(0, 0) == CycNum(1));
}

TEST_CASE("rho(T) on 2^1:A is diag(1,1,1,-1)") {
    auto d = from_jordan("2^1:A");
    auto t = rho_generator(d, 'T');
    CHECK(t.k() == 0);
    CHECK(t.at(0, 0) == CycNum(1));
    CHECK(t.at(1, 1) == CycNum(1));
    CHECK(t.at(2, 2) == CycNum(1));
    CHECK(t.at(3, 3) == CycNum(-1));
    CHECK(t.at(0, 1).is_zero());
}

TEST_CASE("rho(S) on 2^1:A is (1/2) (+-1 matrix)") {
    auto d = from_jordan("2^1:A");
    auto s = rho_generator(d, 'S');
    // |D| = 4 is a perfect square, so the scale folds into the entries
    CHECK(s.k() == 0);
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j) {
            CycNum e = s.at(i, j) * Rational(2);
            CHECK((e == CycNum(1) || e == CycNum(-1)));
        }
    // entry = (1/2) e(-(gamma, beta)): the (1,2) entry pairs delta with gamma
    CHECK(s.at(1, 2) == CycNum(Rational(-1, 2)));
    CHECK(s.at(0, 0) == CycNum(Rational(1, 2)));
}

TEST_CASE("odd signature is refused") {
    auto d = from_jordan("2^1:a=1,v=0");  // signature 1
    CHECK_THROWS_AS(rho_generator(d, 'S'), ValidationError);
}

TEST_CASE("rho on words: identity, S^2, T^level") {
    for (const auto& sym : {std::string("2^1:A"), std::string("3^1:a=1+3^1:a=2")}) {
        auto d = from_jordan(sym);
        long n = d.element_count();
        long base = d.size().get_si();
        CHECK(rho(d, Mat2{}).equals(ScaledMatrix::identity(n, base)));
        auto s = rho_generator(d, 'S');
        CHECK(rho(d, Mat2{-1, 0, 0, -1}).equals(s * s));
        CHECK(rho(d, mat2_t(d.level())).equals(ScaledMatrix::identity(n, base)));
    }
}

TEST_CASE("word independence of rho") {
    auto d = from_jordan("2^1:A");
    // two decompositions of the same matrix: direct word vs conjugated product
    Mat2 m = mat2_mul(mat2_mul(mat2_t(2), mat2_s()), mat2_t(-1));
    auto direct = rho(d, m);
    auto pieces = rho(d, mat2_t(2)) * rho(d, mat2_s()) * rho(d, mat2_t(-1));
    CHECK(direct.equals(pieces));
}

TEST_CASE("verify_relations across the even catalog") {
    for (const auto& sym : even_catalog_small()) {
        auto d = from_jordan(sym);
        REQUIRE(signature(d) % 2 == 0);
        Report rep = verify_relations(d);
        for (const auto& c : rep) {
            INFO(sym, ": ", c.check, " -> ", c.counterexample);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("Gamma(N) triviality on sampled elements") {
    for (const auto& sym : {std::string("2^1:A"), std::string("3^1:a=1+3^1:a=2"),
                            std::string("2^1:B")}) {
        auto d = from_jordan(sym);
        Report rep = verify_gamma_trivial(d, 4, 7);
        for (const auto& c : rep) {
            INFO(sym, ": ", c.check);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("scaled matrix equality handles cross parity") {
    // (1/sqrt(2)) * [sqrt(2)] == [1]: left side has k = 1 and entry 1+conj pair
    // realized via (rho(S) rho(T))^3 = rho(S)^2 on a base-2 form
    auto d = from_jordan("2^1:a=1,v=0+2^1:a=7,v=1");  // signature 0 mod 8? verify first
    REQUIRE(signature(d) % 2 == 0);
    auto s = rho_generator(d, 'S');
    auto t = rho_generator(d, 'T');
    auto st = s * t;
    CHECK((st * st * st).equals(s * s));
    CHECK_FALSE((st * st * st).equals(s * s * s * s));
}

TEST_CASE("random Gamma(N) elements really are congruent to Id") {
    for (long n : {2L, 3L, 4L, 6L})
        for (int i = 0; i < 10; ++i) {
            Mat2 m = random_gamma_n_element(n, 99, i);
            CHECK(mat2_det(m) == 1);
            CHECK(((m.a - 1) % n) == 0);
            CHECK((m.b % n) == 0);
            CHECK((m.c % n) == 0);
            CHECK(((m.d - 1) % n) == 0);
        }
}

} // TEST_SUITE

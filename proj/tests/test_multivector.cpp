#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weilspin/multivector.hpp"

using namespace weilspin;

static TowerSpec flagship() { return TowerSpec{3, Rational(1)}; }

static Multivector random_mv(std::mt19937_64& rng, const TowerSpec& spec, int rank,
                             int nterms) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<Mask> mask(0, (Mask(1) << rank) - 1);
    std::vector<Multivector::Term> terms;
    for (int i = 0; i < nterms; ++i) {
        TowerElt c(Rational(coeff(rng)), Rational(coeff(rng)), Rational(coeff(rng)),
                   Rational(coeff(rng)));
        terms.push_back({mask(rng), c});
    }
    return Multivector::from_terms(rank, std::move(terms));
}

TEST_CASE("antisymmetry of generators") {
    auto spec = flagship();
    auto e1 = Multivector::generator(4, 0), e2 = Multivector::generator(4, 1);
    CHECK(e1.wedge(e2, spec) == -(e2.wedge(e1, spec)));
    CHECK(e1.wedge(e1, spec).is_zero());
}

TEST_CASE("darboux power expansion") {
    // theta = sum x_i ^ y_i on 8 generators (x_i = 2i, y_i = 2i+1);
    // independent multinomial oracle: theta^4 = 4! x1 y1 x2 y2 x3 y3 x4 y4.
    auto spec = flagship();
    const int rank = 8;
    Multivector theta(rank);
    for (int i = 0; i < 4; ++i)
        theta = theta + Multivector::term(rank, (Mask(1) << (2 * i)) | (Mask(1) << (2 * i + 1)),
                                          TowerElt::one());
    Multivector p = theta;
    for (int k = 1; k < 4; ++k) p = p.wedge(theta, spec);
    CHECK(p.term_count() == 1);
    CHECK(p.coeff_of(0xFF) == TowerElt(Rational(24)));
    CHECK(p.wedge(theta, spec).is_zero());
}

TEST_CASE("ring identity (1+theta)(1-theta)") {
    auto spec = flagship();
    const int rank = 8;
    Multivector theta(rank);
    for (int i = 0; i < 4; ++i)
        theta = theta + Multivector::term(rank, Mask(3) << (2 * i), TowerElt::one());
    Multivector one = Multivector::unit(rank);
    Multivector lhs = (one + theta).wedge(one - theta, spec);
    Multivector rhs = one - theta.wedge(theta, spec);
    CHECK(lhs == rhs);
}

TEST_CASE("associativity randomized and exhaustive on low rank") {
    auto spec = flagship();
    std::mt19937_64 rng(3);
    for (int it = 0; it < 60; ++it) {
        auto a = random_mv(rng, spec, 10, 6);
        auto b = random_mv(rng, spec, 10, 6);
        auto c = random_mv(rng, spec, 10, 6);
        CHECK(a.wedge(b.wedge(c, spec), spec) == a.wedge(b, spec).wedge(c, spec));
    }
    // exhaustive generators for rank <= 6
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k) {
                auto a = Multivector::generator(6, i);
                auto b = Multivector::generator(6, j);
                auto c = Multivector::generator(6, k);
                CHECK(a.wedge(b.wedge(c, spec), spec) == a.wedge(b, spec).wedge(c, spec));
            }
}

TEST_CASE("graded commutativity") {
    auto spec = flagship();
    std::mt19937_64 rng(5);
    for (int it = 0; it < 80; ++it) {
        auto a = random_mv(rng, spec, 8, 4);
        auto b = random_mv(rng, spec, 8, 4);
        for (int p = 0; p <= 8; ++p)
            for (int q = 0; q <= 8; ++q) {
                auto ap = a.grade_part(p), bq = b.grade_part(q);
                auto lhs = ap.wedge(bq, spec);
                auto rhs = bq.wedge(ap, spec);
                if ((p * q) % 2) rhs = -rhs;
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("contraction basics and super-derivation") {
    auto spec = flagship();
    // x1* -| (x1 ^ x2) = x2 ; x2* -| (x1 ^ x2) = -x1
    Multivector x12 = Multivector::term(4, 0b11, TowerElt::one());
    std::vector<TowerElt> xi1(4), xi2(4);
    xi1[0] = TowerElt::one();
    xi2[1] = TowerElt::one();
    CHECK(x12.contract(xi1, spec) == Multivector::generator(4, 1));
    CHECK(x12.contract(xi2, spec) == -Multivector::generator(4, 0));

    std::mt19937_64 rng(9);
    for (int it = 0; it < 60; ++it) {
        auto a = random_mv(rng, spec, 8, 5);
        auto b = random_mv(rng, spec, 8, 5);
        std::vector<TowerElt> xi(8);
        std::uniform_int_distribution<int> coeff(-3, 3);
        for (auto& x : xi) x = TowerElt(Rational(coeff(rng)));
        for (int p = 0; p <= 8; ++p) {
            auto ap = a.grade_part(p);
            auto lhs = ap.wedge(b, spec).contract(xi, spec);
            auto rhs = ap.contract(xi, spec).wedge(b, spec) +
                       (p % 2 ? -ap.wedge(b.contract(xi, spec), spec)
                              : ap.wedge(b.contract(xi, spec), spec));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("exp truncated") {
    auto spec = flagship();
    CHECK(Multivector(8).exp_truncated(spec) == Multivector::unit(8));
    // exp of a square-zero 2-form
    Multivector x12 = Multivector::term(8, 0b11, TowerElt::one());
    CHECK(x12.exp_truncated(spec) == Multivector::unit(8) + x12);
    // exp(sqrt(-q) theta) = alpha + sqrt(-q) beta with the stated truncation
    Multivector theta(8);
    for (int i = 0; i < 4; ++i)
        theta = theta + Multivector::term(8, Mask(3) << (2 * i), TowerElt::one());
    Multivector e = theta.scaled(TowerElt::sqrt_minus_q(), spec).exp_truncated(spec);
    Multivector theta2 = theta.wedge(theta, spec);
    Multivector theta3 = theta2.wedge(theta, spec);
    Multivector theta4 = theta3.wedge(theta, spec);
    Multivector alpha = Multivector::unit(8) - theta2.scaled(spec.q / 2) +
                        theta4.scaled(spec.q * spec.q / 24);
    Multivector beta = theta - theta3.scaled(spec.q / 6);
    CHECK(e == alpha + beta.scaled(TowerElt::sqrt_minus_q(), spec));
    // grade-0 input refuses
    CHECK_THROWS_AS(Multivector::unit(8).exp_truncated(spec), NonNilpotentOverflow);
}

TEST_CASE("tau involution") {
    auto spec = flagship();
    Multivector theta(8);
    for (int i = 0; i < 4; ++i)
        theta = theta + Multivector::term(8, Mask(3) << (2 * i), TowerElt::one());
    CHECK(Multivector::unit(8).tau() == Multivector::unit(8));
    CHECK(theta.tau() == -theta);
    auto theta2 = theta.wedge(theta, spec);
    CHECK(theta2.tau() == theta2);
    std::mt19937_64 rng(21);
    for (int it = 0; it < 40; ++it) {
        auto a = random_mv(rng, spec, 8, 6);
        CHECK(a.tau().tau() == a);
    }
}

TEST_CASE("filtration reconstruction") {
    auto spec = flagship();
    std::mt19937_64 rng(23);
    for (int it = 0; it < 40; ++it) {
        auto a = random_mv(rng, spec, 10, 8);
        for (int k = 0; k <= 10; ++k) {
            CHECK(a.grades_at_most(k) + a.grades_at_least(k + 1) == a);
            auto low = a.grades_at_least(k);
            for (int j = 0; j < k; ++j) CHECK(low.grade_part(j).is_zero());
        }
    }
}

TEST_CASE("ambient mismatch raises") {
    auto spec = flagship();
    auto a = Multivector::generator(4, 0);
    auto b = Multivector::generator(6, 5);
    CHECK_THROWS_AS(a.wedge(b, spec), AmbientMismatch);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weilspin/tower.hpp"

using namespace weilspin;

static TowerSpec flagship() { return TowerSpec{3, Rational(1)}; }
static TowerSpec imag_quad() { return TowerSpec{0, Rational(1)}; }

static TowerElt random_elt(std::mt19937_64& rng, const TowerSpec& spec) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    auto r = [&] {
        Rational x(num(rng), den(rng));
        x.canonicalize();
        return x;
    };
    if (spec.t == 0) return TowerElt(r(), 0, r(), 0);
    return TowerElt(r(), r(), r(), r());
}

TEST_CASE("defining relations") {
    auto spec = flagship();
    CHECK(TowerElt::sqrt_t().mul(TowerElt::sqrt_t(), spec) == TowerElt(Rational(3)));
    CHECK(TowerElt::sqrt_minus_q().mul(TowerElt::sqrt_minus_q(), spec) == TowerElt(Rational(-1)));
    CHECK(TowerElt::sqrt_t().mul(TowerElt::sqrt_minus_q(), spec) == TowerElt::sqrt_minus_tq());
}

TEST_CASE("norm K over F") {
    auto spec = flagship();
    // Nm(a + b sqrt(-q)) = a^2 + q b^2 for a, b in F
    TowerElt a = TowerElt::from_f(2, 1);
    TowerElt b = TowerElt::from_f(1, -1);
    TowerElt x = a + b.mul(TowerElt::sqrt_minus_q(), spec);
    TowerElt nm = x.norm_k_over_f(spec);
    TowerElt expect = a.mul(a, spec) + b.mul(b, spec).scaled(spec.q);
    CHECK(nm == expect);
    CHECK(nm.in_f());
}

TEST_CASE("inverse of 2 + sqrt(3)") {
    auto spec = flagship();
    TowerElt x = TowerElt::from_f(2, 1);
    TowerElt inv = x.inv(spec);
    CHECK(inv == TowerElt::from_f(2, -1));
    CHECK(x.mul(inv, spec) == TowerElt::one());
}

TEST_CASE("inv(0) raises") {
    CHECK_THROWS_AS(TowerElt::zero().inv(flagship()), DivisionByZero);
}

TEST_CASE("galois action") {
    auto spec = flagship();
    CHECK(TowerElt::sqrt_minus_q().galois(galois_iota()) == -TowerElt::sqrt_minus_q());
    CHECK(TowerElt::sqrt_t().galois(galois_gamma()) == -TowerElt::sqrt_t());
    CHECK(TowerElt::sqrt_minus_q().galois(galois_gamma()) == TowerElt::sqrt_minus_q());
    auto ig = galois_iota().compose(galois_gamma());
    CHECK(TowerElt::sqrt_minus_tq().galois(ig) == TowerElt::sqrt_minus_tq());

    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        TowerElt x = random_elt(rng, spec), y = random_elt(rng, spec);
        for (const auto& g : all_galois(spec)) {
            CHECK(x.mul(y, spec).galois(g) == x.galois(g).mul(y.galois(g), spec));
        }
        // iota is an involution and is central
        CHECK(x.galois(galois_iota()).galois(galois_iota()) == x);
    }
}

TEST_CASE("traces") {
    CHECK(TowerElt::one().trace_k(flagship()) == 4);
    CHECK(TowerElt::one().trace_k(imag_quad()) == 2);
    // trace kills the irrational coordinates
    CHECK(TowerElt::sqrt_t().trace_k(flagship()) == 0);
}

TEST_CASE("sign at embedding") {
    auto spec = flagship();
    CHECK(sign_at_embedding(TowerElt::from_f(2, 1), 0, spec) == 1);
    CHECK(sign_at_embedding(TowerElt::from_f(2, 1), 1, spec) == 1);   // 2 - sqrt3 > 0
    CHECK(sign_at_embedding(TowerElt::from_f(1, 1), 1, spec) == -1);  // 1 - sqrt3 < 0
    CHECK(sign_at_embedding(TowerElt::zero(), 0, spec) == 0);

    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
        TowerElt x = random_elt(rng, spec);
        x.c = 0;
        x.d = 0;
        for (int emb = 0; emb < 2; ++emb) {
            int s = sign_at_embedding(x, emb, spec);
            if (x.is_zero())
                CHECK(s == 0);
            else {
                CHECK((s == 1 || s == -1));
                CHECK(sign_at_embedding(x.mul(x, spec), emb, spec) == 1);
            }
        }
    }
}

TEST_CASE("F square detection") {
    auto spec = flagship();
    std::mt19937_64 rng(13);
    for (int it = 0; it < 200; ++it) {
        TowerElt x = random_elt(rng, spec);
        x.c = 0;
        x.d = 0;
        TowerElt sq = x.mul(x, spec), root;
        CHECK(f_is_square(sq, spec, &root));
        CHECK(root.mul(root, spec) == sq);
    }
    CHECK_FALSE(f_is_square(TowerElt::from_f(-1, 0), spec));
    CHECK_FALSE(f_is_square(TowerElt::from_f(0, 1), spec));  // sqrt(3) is not a square in F
}

TEST_CASE("CM types: enumeration, conjugate, overlap") {
    auto spec = flagship();
    auto types = enumerate_cm_types(spec);
    CHECK(types.size() == 4);
    for (const auto& T : types) {
        CHECK(T.overlap(T) == 2);
        CHECK(T.overlap(T.conjugate()) == 0);
    }
    CMType t1{{1, 1}}, t2{{1, -1}};
    CHECK(t1.overlap(t2) == 1);
    // |T cap T'| + |T cap conj T'| = e/2
    for (const auto& a : types)
        for (const auto& b : types) CHECK(a.overlap(b) + a.overlap(b.conjugate()) == 2);

    CHECK(enumerate_cm_types(imag_quad()).size() == 2);
}

TEST_CASE("galois orbits of CM types at e = 4") {
    auto spec = flagship();
    auto types = enumerate_cm_types(spec);
    // orbit of the all-upper type is {T, conj T}; the mixed types form the other orbit
    CMType up{{1, 1}};
    std::vector<CMType> orbit;
    for (const auto& g : all_galois(spec)) {
        CMType img = galois_on_type(g, up);
        if (std::find(orbit.begin(), orbit.end(), img) == orbit.end()) orbit.push_back(img);
    }
    CHECK(orbit.size() == 2);
    CHECK(std::find(orbit.begin(), orbit.end(), up.conjugate()) != orbit.end());

    CMType mixed{{1, -1}};
    orbit.clear();
    for (const auto& g : all_galois(spec)) {
        CMType img = galois_on_type(g, mixed);
        if (std::find(orbit.begin(), orbit.end(), img) == orbit.end()) orbit.push_back(img);
    }
    CHECK(orbit.size() == 2);
    CHECK(std::find(orbit.begin(), orbit.end(), CMType{{-1, 1}}) != orbit.end());
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS((TowerSpec{12, Rational(1)}).validate(), ConfigError);
    CHECK_THROWS_AS((TowerSpec{3, Rational(0)}).validate(), ConfigError);
    CHECK_NOTHROW((TowerSpec{3, Rational(1)}).validate());
    CHECK_NOTHROW((TowerSpec{0, Rational(5)}).validate());
}

TEST_CASE("serialization round trip") {
    Rational r(-22, 7);
    CHECK(rational_from_string(rational_to_string(r)) == r);
}

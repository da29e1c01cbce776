#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weilspin/weil.hpp"

using namespace weilspin;

static const WeilContext& flagship_ctx() {
    static WeilContext ctx = [] {
        TowerSpec spec{3, Rational(1)};
        return build_context(spec, RMData::standard(spec, 4));
    }();
    return ctx;
}

static const WeilContext& baseline_ctx() {
    static WeilContext ctx = [] {
        TowerSpec spec{0, Rational(1)};
        return build_context(spec, RMData::standard(spec, 4));
    }();
    return ctx;
}

TEST_CASE("flagship dimensions") {
    const auto& ctx = flagship_ctx();
    CHECK(ctx.n == 4);
    CHECK(ctx.V.rank() == 16);
    CHECK(ctx.v_sigma.size() == 4);
    for (const auto& vs : ctx.v_sigma) CHECK(vs.dim() == 4);
    CHECK(ctx.hw.dim() == 4);
    CHECK(ctx.xi_avatar.size() == 2);
    CHECK(ctx.sym_part.dim() == 3);
}

TEST_CASE("baseline dimensions (imaginary quadratic)") {
    const auto& ctx = baseline_ctx();
    CHECK(ctx.n == 2);
    CHECK(ctx.V.rank() == 8);
    CHECK(ctx.v_sigma.size() == 2);
    for (const auto& vs : ctx.v_sigma) CHECK(vs.dim() == 4);
    CHECK(ctx.hw.dim() == 2);
    CHECK(ctx.xi_avatar.size() == 1);
    CHECK(ctx.sym_part.dim() == 1);
}

TEST_CASE("theta power integral") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    Multivector p = ctx.rm.theta;
    for (int k = 1; k < 4; ++k) p = p.wedge(ctx.rm.theta, spec);
    CHECK(p.term_count() == 1);
    CHECK(p.coeff_of(0xFF) == TowerElt(Rational(24)));
}

TEST_CASE("eta algebra relations") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    CHECK(ctx.eta_matrix(TowerElt::one()) == Matrix::identity(16));
    Matrix mt = ctx.eta_matrix(TowerElt::sqrt_t());
    Matrix mq = ctx.eta_matrix(TowerElt::sqrt_minus_q());
    CHECK(mt.mul(mt, spec) == Matrix::identity(16).scaled(TowerElt(Rational(3)), spec));
    CHECK(mq.mul(mq, spec) == Matrix::identity(16).scaled(TowerElt(Rational(-1)), spec));
    CHECK(mt.mul(mq, spec) == mq.mul(mt, spec));
    CHECK(mq.is_rational());

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int it = 0; it < 20; ++it) {
        TowerElt s1(Rational(c(rng)), Rational(c(rng)), Rational(c(rng)), Rational(c(rng)));
        TowerElt s2(Rational(c(rng)), Rational(c(rng)), Rational(c(rng)), Rational(c(rng)));
        CHECK(ctx.eta_matrix(s1.mul(s2, spec)) ==
              ctx.eta_matrix(s1).mul(ctx.eta_matrix(s2), spec));
    }
}

TEST_CASE("eta adjoint is the conjugate") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int it = 0; it < 30; ++it) {
        TowerElt s(Rational(c(rng)), Rational(c(rng)), Rational(c(rng)), Rational(c(rng)));
        Matrix es = ctx.eta_matrix(s), econj = ctx.eta_matrix(s.conj());
        Vec x = ctx.random_rational_vector(rng), y = ctx.random_rational_vector(rng);
        CHECK(ctx.V.pairing(es.apply(x, spec), y, spec) ==
              ctx.V.pairing(x, econj.apply(y, spec), spec));
    }
}

TEST_CASE("characteristic polynomial of the K action") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    // min poly of sqrt(-q) over Q is x^2 + q; char poly = (x^2 + q)^{4n/2}
    auto cp = ctx.eta_sqrt_mq.char_poly(spec);
    for (int k = 0; k <= 16; ++k) {
        if (k % 2) {
            CHECK(cp[k].is_zero());
        } else {
            mpz_class expect;
            mpz_bin_uiui(expect.get_mpz_t(), 8, (16 - k) / 2);
            CHECK(cp[k] == TowerElt(Rational(expect)));
        }
    }
}

TEST_CASE("sigma eigenspaces are pairwise orthogonal unless conjugate") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    for (int i = 0; i < ctx.e; ++i)
        for (int j = 0; j < ctx.e; ++j) {
            bool conj_pair = ctx.sigmas[i] == ctx.sigmas[j].conjugate();
            bool any_nonzero = false;
            for (const auto& x : ctx.v_sigma[i].basis())
                for (const auto& y : ctx.v_sigma[j].basis())
                    if (!ctx.V.pairing(x, y, spec).is_zero()) any_nonzero = true;
            if (conj_pair)
                CHECK(any_nonzero);
            else
                CHECK_FALSE(any_nonzero);
        }
}

TEST_CASE("xi forms: antisymmetry, F compatibility, injectivity") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    std::mt19937_64 rng(11);
    for (const auto& g : ctx.xi_gram) {
        CHECK(g.transpose() == g.scaled(TowerElt(Rational(-1)), spec));
        CHECK(g.is_rational());
    }
    for (int it = 0; it < 20; ++it) {
        Vec x = ctx.random_rational_vector(rng), y = ctx.random_rational_vector(rng);
        for (const auto& g : ctx.xi_gram) {
            // Xi(eta_f x, y) = Xi(x, eta_f y)
            CHECK(vec_dot(ctx.eta_hat_sqrt_t.apply(x, spec), g.apply(y, spec), spec) ==
                  vec_dot(x, g.apply(ctx.eta_hat_sqrt_t.apply(y, spec), spec), spec));
        }
    }
    std::vector<Vec> rows;
    for (const auto& a : ctx.xi_avatar) rows.push_back(mv_to_slice(a, 2));
    CHECK(Subspace::span(static_cast<int>(rows[0].size()), rows, spec).dim() == 2);
    CHECK_THROWS_AS(ctx.xi_form(TowerElt::one()), NotPurelyImaginary);
}

TEST_CASE("hermitian form") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    std::mt19937_64 rng(13);
    TowerElt t = TowerElt::sqrt_minus_q() + TowerElt::sqrt_minus_tq();
    for (int it = 0; it < 25; ++it) {
        Vec x = ctx.random_rational_vector(rng), y = ctx.random_rational_vector(rng);
        TowerElt hxy = ctx.hermitian_ht(t, x, y), hyx = ctx.hermitian_ht(t, y, x);
        CHECK(hxy == hyx.conj());
        CHECK(ctx.hermitian_ht(t, x, x).in_f());
        Vec ey = ctx.eta_sqrt_mq.apply(y, spec);
        CHECK(ctx.hermitian_ht(t, x, ey) == TowerElt::sqrt_minus_q().mul(hxy, spec));
    }
    CHECK_THROWS_AS(ctx.hermitian_ht(TowerElt::one(), Vec(16), Vec(16)), NotPurelyImaginary);
}

TEST_CASE("hermitian form is spin invariant") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    std::mt19937_64 rng(17);
    TowerElt t = TowerElt::sqrt_minus_q();
    for (int it = 0; it < 10; ++it) {
        auto g = ctx.spin_sample(rng, 2);
        Vec x = ctx.random_rational_vector(rng), y = ctx.random_rational_vector(rng);
        CHECK(ctx.hermitian_ht(t, g.rho.apply(x, spec), g.rho.apply(y, spec)) ==
              ctx.hermitian_ht(t, x, y));
    }
}

TEST_CASE("spin samples: isometry, eta commutation, eigenspace stability") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    std::mt19937_64 rng(19);
    Matrix mt = ctx.eta_hat_sqrt_t, mq = ctx.eta_sqrt_mq;
    for (int it = 0; it < 8; ++it) {
        auto g = ctx.spin_sample(rng, 2);
        std::mt19937_64 rng2(it);
        Vec x = ctx.random_rational_vector(rng2), y = ctx.random_rational_vector(rng2);
        CHECK(ctx.V.pairing(g.rho.apply(x, spec), g.rho.apply(y, spec), spec) ==
              ctx.V.pairing(x, y, spec));
        CHECK(g.rho.mul(mt, spec) == mt.mul(g.rho, spec));
        CHECK(g.rho.mul(mq, spec) == mq.mul(g.rho, spec));
        for (int s = 0; s < ctx.e; ++s) CHECK(ctx.v_sigma[s].stable_under(g.rho, spec));
    }
}

TEST_CASE("xi forms fixed by spin samples") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    std::mt19937_64 rng(23);
    for (int it = 0; it < 6; ++it) {
        auto g = ctx.spin_sample(rng, 2);
        for (const auto& a : ctx.xi_avatar) CHECK(apply_linear(g.rho, a, spec) == a);
    }
}

TEST_CASE("g_sigma: action and square") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    for (int sh = 0; sh < 2; ++sh) {
        auto g = ctx.g_sigma_element(sh);
        for (int s = 0; s < ctx.e; ++s) {
            int want = ctx.sigmas[s].sigma_hat == sh ? -1 : 1;
            for (const auto& row : ctx.v_sigma[s].basis())
                CHECK(g.rho.apply(row, spec) ==
                      vec_scaled(row, TowerElt(Rational(want)), spec));
        }
        // operator square on spinors is (-1)^{d/2} = +1 at d = 4
        std::mt19937_64 rng(sh);
        std::uniform_int_distribution<Mask> mk(0, 255);
        for (int it = 0; it < 5; ++it) {
            Multivector s = Multivector::term(8, mk(rng), TowerElt::one());
            CHECK(g.act(g.act(s)) == s);
        }
    }
}

TEST_CASE("decompose in invariant sum") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    auto [s0, h0] = ctx.decompose_ad(ctx.hw_basis_mv[0]);
    CHECK(s0.is_zero());
    CHECK(h0 == ctx.hw_basis_mv[0]);
    Multivector xi2 = ctx.xi_avatar[0].wedge(ctx.xi_avatar[0], spec);
    auto [s1, h1] = ctx.decompose_ad(xi2);
    CHECK(h1.is_zero());
    CHECK(s1 == xi2);
    Multivector junk = Multivector::term(16, 0b1111, TowerElt::one());
    CHECK_THROWS_AS(ctx.decompose_ad(junk), NotInInvariantSum);
}

TEST_CASE("primitivity: power of invariant 2-form kills HW") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    // h^{1 + d(e-2)/2} ^ x = 0 for invariant h and x in HW (power 5 here)
    Multivector h = ctx.xi_avatar[0] + ctx.xi_avatar[1].scaled(Rational(2));
    Multivector p = h;
    for (int k = 1; k < 5; ++k) p = p.wedge(h, spec);
    for (const auto& x : ctx.hw_basis_mv) CHECK(p.wedge(x, spec).is_zero());
}

TEST_CASE("split certificate") {
    const auto& ctx = flagship_ctx();
    TowerElt t = TowerElt::sqrt_minus_q();
    auto cert = ctx.split_certificate(t);
    CHECK(cert.size() == 2);
    for (const auto& a : cert)
        for (const auto& b : cert) CHECK(ctx.hermitian_ht(t, a, b).is_zero());
    TowerSpec sp2{3, Rational(1)};
    auto ctx2 = build_context(sp2, RMData::standard(sp2, 2));
    CHECK(ctx2.split_certificate(t).size() == 1);
}

TEST_CASE("degenerate theta raises DegenerateW") {
    TowerSpec spec{3, Rational(1)};
    std::vector<std::vector<TowerElt>> zero(4, std::vector<TowerElt>(4));
    CHECK_THROWS_AS(build_context(spec, RMData::from_f_matrix(spec, 4, zero)), DegenerateW);
}

TEST_CASE("HW spans the eigenspace top wedges over K") {
    const auto& ctx = flagship_ctx();
    auto spec = ctx.spec;
    std::vector<Vec> rows;
    for (const auto& w : ctx.sigma_top) rows.push_back(mv_to_slice(w, ctx.d));
    CHECK(Subspace::span(static_cast<int>(rows[0].size()), rows, spec).dim() == ctx.e);
    std::vector<Vec> both = rows;
    for (const auto& b : ctx.hw_basis_mv) both.push_back(mv_to_slice(b, ctx.d));
    CHECK(Subspace::span(static_cast<int>(rows[0].size()), both, spec).dim() == ctx.e);
}

#include "weilspin/secant.hpp"

#include <algorithm>

namespace weilspin {

namespace {

// Express x as a combination of the given multivectors; nullopt outside.
std::optional<Vec> express_in(const std::vector<Multivector>& basis, const Multivector& x,
                              const TowerSpec& spec) {
    std::vector<Mask> support;
    for (const auto& b : basis)
        for (const auto& t : b.terms()) support.push_back(t.mask);
    for (const auto& t : x.terms()) support.push_back(t.mask);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const int k = static_cast<int>(basis.size());
    const int ns = static_cast<int>(support.size());
    auto idx = [&](Mask m) {
        return static_cast<int>(std::lower_bound(support.begin(), support.end(), m) -
                                support.begin());
    };
    std::vector<Vec> rows;
    for (int i = 0; i < k; ++i) {
        Vec row(ns + k);
        for (const auto& t : basis[i].terms()) row[idx(t.mask)] = t.coeff;
        row[ns + i] = TowerElt::one();
        rows.push_back(std::move(row));
    }
    rref(rows, spec);
    Vec rem(ns), lambda(k);
    for (const auto& t : x.terms()) rem[idx(t.mask)] = t.coeff;
    for (const auto& row : rows) {
        int p = 0;
        while (p < ns && row[p].is_zero()) ++p;
        if (p == ns) continue;
        if (!rem[p].is_zero()) {
            TowerElt f = rem[p];
            for (int j = p; j < ns; ++j) rem[j] = rem[j] - f.mul(row[j], spec);
            for (int j = 0; j < k; ++j) lambda[j] += f.mul(row[ns + j], spec);
        }
    }
    if (!vec_is_zero(rem)) return std::nullopt;
    return lambda;
}

}  // namespace

Multivector ell_of_type(const WeilContext& ctx, const CMType& T) {
    const auto& spec = ctx.spec;
    Multivector sum(ctx.V.half());
    for (size_t i = 0; i < ctx.theta_comp.size(); ++i) {
        Multivector piece = ctx.theta_comp[i].scaled(Rational(T.signs[i]));
        sum = sum + piece;
    }
    return sum.scaled(TowerElt::sqrt_minus_q(), spec).exp_truncated(spec);
}

SecantSpace build_secant(const WeilContext& ctx) {
    const auto& spec = ctx.spec;
    SecantSpace B;
    B.types = enumerate_cm_types(spec);
    for (const auto& T : B.types) B.ell.push_back(ell_of_type(ctx, T));

    // rational basis from the even/odd parts of the exponentials of the
    // polarization and of its eigencomponent difference
    auto even_odd = [&](const Multivector& theta) {
        Multivector plus = theta.scaled(TowerElt::sqrt_minus_q(), spec).exp_truncated(spec);
        Multivector minus = theta.scaled(-TowerElt::sqrt_minus_q(), spec).exp_truncated(spec);
        Multivector a = (plus + minus).scaled(Rational(1, 2));
        TowerElt half_inv = TowerElt::sqrt_minus_q().inv(spec).scaled(Rational(1, 2));
        Multivector b = (plus - minus).scaled(half_inv, spec);
        return std::make_pair(a, b);
    };
    auto [alpha, beta] = even_odd(ctx.rm.theta);
    B.named = {alpha, beta};
    B.names = {"alpha", "beta"};
    if (spec.t > 0) {
        Multivector theta_tilde = ctx.theta_comp[0] - ctx.theta_comp[1];
        auto [alpha_t, beta_t] = even_odd(theta_tilde);
        B.named.push_back(alpha_t);
        B.named.push_back(beta_t.scaled(TowerElt::sqrt_t(), spec));
        B.names.push_back("alpha_tilde");
        B.names.push_back("sqrt_t_beta_tilde");
    }
    for (const auto& b : B.named)
        for (const auto& t : b.terms())
            if (!t.coeff.is_rational()) throw Error("secant basis is not rational");

    const int m = static_cast<int>(B.named.size());
    B.to_named = Matrix(m, m);
    for (int j = 0; j < m; ++j) {
        auto sol = express_in(B.named, B.ell[j], spec);
        if (!sol) throw Error("exponential spinor escapes the named span");
        for (int i = 0; i < m; ++i) B.to_named.at(i, j) = (*sol)[i];
    }
    B.to_ell = B.to_named.inverse(spec);
    return B;
}

Multivector f_scalar_action(const WeilContext& ctx, const TowerElt& f, const Multivector& x) {
    const auto& spec = ctx.spec;
    if (!f.in_f()) throw FieldMismatch("scalar action needs an element of F");
    if (spec.t == 0) return x.scaled(f, spec);
    const int h = ctx.V.half();
    Matrix w1block(h, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) w1block.at(i, j) = ctx.eta_hat_sqrt_t.at(i, j);
    Multivector dx = apply_derivation(w1block, x, spec);
    Multivector d2x = apply_derivation(w1block, dx, spec);
    if (!(d2x == x.scaled(Rational(4 * spec.t))))
        throw NotInFamily("class is not split into opposite eigen-bidegrees");
    TowerElt half_inv_rt = TowerElt::sqrt_t().inv(spec).scaled(Rational(1, 2));
    Multivector comp1 = (dx.scaled(half_inv_rt, spec) + x).scaled(Rational(1, 2));
    Multivector comp2 = x - comp1;
    return comp1.scaled(f, spec) + comp2.scaled(f.galois(galois_gamma()), spec);
}

Multivector class_alpha0(const WeilContext& ctx) {
    const auto& spec = ctx.spec;
    Multivector theta3 = ctx.rm.theta.wedge(ctx.rm.theta, spec).wedge(ctx.rm.theta, spec);
    return ctx.rm.theta - theta3.scaled(spec.q / 6);
}

Multivector class_betaprime(const WeilContext& ctx, const TowerElt& f) {
    const auto& spec = ctx.spec;
    Multivector theta3 = ctx.rm.theta.wedge(ctx.rm.theta, spec).wedge(ctx.rm.theta, spec);
    TowerElt f2 = f.mul(f, spec);
    TowerElt f2inv = f2.inv(spec);
    return f_scalar_action(ctx, f2, ctx.rm.theta) -
           f_scalar_action(ctx, f2inv, theta3).scaled(spec.q / 6);
}

std::optional<Vec> secant_coordinates(const WeilContext& ctx, const SecantSpace& B,
                                      const Multivector& x) {
    return express_in(B.named, x, ctx.spec);
}

BBClass bb_of_pair(const WeilContext& ctx, const SecantSpace& B, const Multivector& chf1,
                   const Multivector& chf2) {
    auto u = secant_coordinates(ctx, B, chf1);
    auto v = secant_coordinates(ctx, B, chf2);
    if (!u || !v) throw Error("class is not in the secant space");
    const int m = static_cast<int>(B.named.size());
    BBClass out;
    out.coeff = Matrix(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.coeff.at(i, j) = (*u)[i].mul((*v)[j], ctx.spec);
    return out;
}

std::vector<Matrix> bb_decompose(const WeilContext& ctx, const SecantSpace& B,
                                 const BBClass& c) {
    const auto& spec = ctx.spec;
    const int m = static_cast<int>(B.named.size());
    // ell coordinates: C_ell = to_ell * coeff * to_ell^T
    Matrix c_ell = B.to_ell.mul(c.coeff, spec).mul(B.to_ell.transpose(), spec);
    std::vector<Matrix> buckets(ctx.e / 2 + 1, Matrix(m, m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int k = B.types[i].overlap(B.types[j]);
            buckets[k].at(i, j) = c_ell.at(i, j);
        }
    return buckets;
}

Multivector bb_to_product_class(const WeilContext& ctx, const SecantSpace& B,
                                const Matrix& ell_coeff) {
    const auto& spec = ctx.spec;
    const int m = static_cast<int>(B.named.size());
    Multivector out(2 * ctx.V.half());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (ell_coeff.at(i, j).is_zero()) continue;
            out = out + kunneth(B.ell[i], B.ell[j], spec).scaled(ell_coeff.at(i, j), spec);
        }
    return out;
}

KB1Result kb1_test(const OrlovContext& octx, const SecantSpace& B, const Matrix& c1_ell) {
    const WeilContext& ctx = octx.weil;
    const auto& spec = ctx.spec;
    const int m = static_cast<int>(B.named.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (!c1_ell.at(i, j).is_zero() && B.types[i].overlap(B.types[j]) != 1)
                throw NotInBB1();

    KB1Result out;
    // top-wedge coordinates of the degree-d projection of the transform
    std::vector<Vec> tops;
    for (const auto& w : ctx.sigma_top) tops.push_back(mv_to_slice(w, ctx.d));
    Subspace hw_k = Subspace::span(static_cast<int>(tops[0].size()), tops, spec);

    auto coords_on_lines = [&](const Multivector& y) -> Vec {
        Vec coords = mv_to_slice(y.grade_part(ctx.d), ctx.d);
        // express in the (independent) top-wedge generators
        std::vector<Vec> rows;
        const int ns = static_cast<int>(coords.size());
        for (int i = 0; i < ctx.e; ++i) {
            Vec row(ns + ctx.e);
            for (int j = 0; j < ns; ++j) row[j] = tops[i][j];
            row[ns + i] = TowerElt::one();
            rows.push_back(std::move(row));
        }
        rref(rows, spec);
        Vec rem = coords, lambda(ctx.e);
        for (const auto& row : rows) {
            int p = 0;
            while (p < ns && row[p].is_zero()) ++p;
            if (p == ns) continue;
            if (!rem[p].is_zero()) {
                TowerElt f = rem[p];
                for (int j = p; j < ns; ++j) rem[j] = rem[j] - f.mul(row[j], spec);
                for (int j = 0; j < ctx.e; ++j) lambda[j] += f.mul(row[ns + j], spec);
            }
        }
        if (!vec_is_zero(rem)) throw Error("degree-d projection escapes the HW lines");
        return lambda;
    };

    Multivector c1 = bb_to_product_class(ctx, B, c1_ell);
    Vec sums = coords_on_lines(octx.phi_check(c1));
    out.sums = sums;
    out.member = vec_is_zero(sums);

    // per-pair gauge scales: the image line of each overlap-1 pair against
    // the chosen top-wedge generator
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (B.types[i].overlap(B.types[j]) != 1) continue;
            Multivector pair_class = kunneth(B.ell[i], B.ell[j], spec);
            Vec lam = coords_on_lines(octx.phi_check(pair_class));
            int nz = -1;
            for (int s = 0; s < ctx.e; ++s)
                if (!lam[s].is_zero()) {
                    if (nz >= 0) throw Error("pair image meets two lines");
                    nz = s;
                }
            if (nz < 0) throw Error("pair image vanishes");
            out.pair_scales.push_back(lam[nz]);
            out.pair_index.push_back({i, j});
        }
    (void)hw_k;
    return out;
}

int kb1_dimension(const OrlovContext& octx, const SecantSpace& B) {
    const WeilContext& ctx = octx.weil;
    const auto& spec = ctx.spec;
    const int m = static_cast<int>(B.named.size());
    // rational basis of the overlap-1 bucket inside named x named coordinates
    std::vector<Vec> pair_vecs;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (B.types[i].overlap(B.types[j]) != 1) continue;
            Vec v(m * m);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    v[a * m + b] = B.to_named.at(a, i).mul(B.to_named.at(b, j), spec);
            pair_vecs.push_back(std::move(v));
        }
    auto rational_rows = rational_restriction(pair_vecs, spec);
    // push each rational bucket element through the transform and project
    std::vector<Vec> images;
    const auto& slice = grade_slice_masks(ctx.V.rank(), ctx.d);
    for (const auto& row : rational_rows) {
        Multivector cls(2 * ctx.V.half());
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                if (row[a * m + b].is_zero()) continue;
                cls = cls +
                      kunneth(B.named[a], B.named[b], spec).scaled(row[a * m + b], spec);
            }
        images.push_back(mv_to_slice(octx.phi_check(cls).grade_part(ctx.d), ctx.d));
    }
    int rank = Subspace::span(static_cast<int>(slice.size()), images, spec).dim();
    return static_cast<int>(rational_rows.size()) - rank;
}

std::vector<Multivector> bi_split(const WeilContext& ctx, const SecantSpace& B,
                                  const Multivector& beta) {
    const auto& spec = ctx.spec;
    auto sol = secant_coordinates(ctx, B, beta);
    if (!sol) throw Error("class is not in the secant space");
    std::vector<Multivector> comps;
    Multivector c0 = B.named[0].scaled((*sol)[0], spec) + B.named[1].scaled((*sol)[1], spec);
    comps.push_back(c0);
    if (spec.t > 0) {
        Multivector c1 =
            B.named[2].scaled((*sol)[2], spec) + B.named[3].scaled((*sol)[3], spec);
        comps.push_back(c1);
    }
    return comps;
}

int h11_algebra_dimension(const WeilContext& ctx) {
    const auto& spec = ctx.spec;
    const int h = ctx.V.half();
    std::vector<Multivector> gens = {ctx.rm.theta};
    if (spec.t > 0)
        gens.push_back((ctx.theta_comp[0] - ctx.theta_comp[1]).scaled(TowerElt::sqrt_t(), spec));
    int total = 1;  // grade 0
    std::vector<Multivector> current = {Multivector::unit(h)};
    for (int grade = 2; grade <= h; grade += 2) {
        std::vector<Multivector> next;
        for (const auto& g : gens)
            for (const auto& c : current) next.push_back(g.wedge(c, spec));
        std::vector<Vec> rows;
        for (const auto& x : next) rows.push_back(mv_to_slice(x, grade));
        Subspace sp = Subspace::span(static_cast<int>(grade_slice_masks(h, grade).size()),
                                     rows, spec);
        total += sp.dim();
        current.clear();
        for (const auto& row : sp.basis()) current.push_back(slice_to_mv(h, grade, row));
        if (current.empty()) break;
    }
    return total;
}

Multivector m_f_endomorphism(const WeilContext& ctx, const TowerElt& f, const Multivector& x) {
    const auto& spec = ctx.spec;
    TowerElt f2 = f.mul(f, spec);
    TowerElt nm_f2 = f2.mul(f2.galois(galois_gamma()), spec);
    Multivector x2 = x.grade_part(2), x6 = x.grade_part(6);
    if (!(x == x2 + x6)) throw NotInFamily("M_f needs a degree-2 + degree-6 class");
    return f_scalar_action(ctx, f2, x2) + x6.scaled(nm_f2, spec);
}

FamilyVerdict b_theta_family_test(const WeilContext& ctx, const Multivector& x,
                                  const TowerElt& f) {
    const auto& spec = ctx.spec;
    if (spec.t == 0) throw NotInFamily("family tests need a quartic field");
    if (f.is_zero() || !f.in_f()) throw NotInFamily("family index must be in F*");
    FamilyVerdict out;
    Multivector x2 = x.grade_part(2), x6 = x.grade_part(6);
    if (!(x == x2 + x6)) return out;

    // solve x2 = f1 . theta in the scalar-action coordinates
    Multivector sqt_tilde =
        (ctx.theta_comp[0] - ctx.theta_comp[1]).scaled(TowerElt::sqrt_t(), spec);
    auto sol2 = express_in({ctx.rm.theta, sqt_tilde}, x2, spec);
    if (!sol2 || !(*sol2)[0].is_rational() || !(*sol2)[1].is_rational()) return out;
    out.in_h2_h6 = true;
    TowerElt f1 = (*sol2)[0] + TowerElt::sqrt_t().mul((*sol2)[1], spec);

    Multivector theta3 = ctx.rm.theta.wedge(ctx.rm.theta, spec).wedge(ctx.rm.theta, spec);
    // membership in the family at f: x6 = -(q/6) (gamma(f1) f^2) . theta^3
    TowerElt gf1 = f1.galois(galois_gamma());
    TowerElt target = gf1.mul(f.mul(f, spec), spec);
    Multivector expect = f_scalar_action(ctx, target, theta3).scaled(-spec.q / 6);
    out.member = (x6 == expect);

    // membership in the union over all f: x6 = f2 . theta^3 with
    // f2 / (-(q/6) gamma(f1)) a non-zero square in F
    Multivector sqt_theta3 =
        f_scalar_action(ctx, TowerElt::sqrt_t(), theta3);
    auto sol6 = express_in({theta3, sqt_theta3}, x6, spec);
    if (sol6 && (*sol6)[0].is_rational() && (*sol6)[1].is_rational() && !f1.is_zero()) {
        TowerElt f2 = (*sol6)[0] + TowerElt::sqrt_t().mul((*sol6)[1], spec);
        TowerElt denom = gf1.scaled(-spec.q / 6);
        TowerElt ratio = f2.mul(denom.inv(spec), spec);
        TowerElt root;
        if (!ratio.is_zero() && f_is_square(ratio, spec, &root)) {
            out.in_union = true;
            out.witness_f2 = ratio;
        }
    }
    return out;
}

CriterionReport criterion_check(const OrlovContext& octx, const SecantSpace& B,
                                const Multivector& chf1, const Multivector& chf2) {
    const WeilContext& ctx = octx.weil;
    const auto& spec = ctx.spec;
    if (ctx.d <= 2) throw Error("criterion needs d > 2");
    CriterionReport rep;

    // The transformed object is built from the pair with the second factor
    // dualized; its rank is the Euler pairing of the two input classes.
    Multivector chf2_dual = chf2.tau();
    BBClass c = bb_of_pair(ctx, B, chf1, chf2_dual);
    auto buckets = bb_decompose(ctx, B, c);
    for (const auto& bk : buckets) rep.bucket_nonzero.push_back(bk.is_zero() ? 0 : 1);

    Multivector cmv = kunneth(chf1, chf2_dual, spec);
    Multivector img = octx.phi_check(cmv);
    TowerElt r0 = img.coeff_of(0);
    if (!r0.is_rational()) throw Error("rank is not rational");
    rep.r = r0.a;
    rep.zero_rank = r0.is_zero();

    rep.kb1 = kb1_test(octx, B, buckets[1]);

    // sufficient conditions from the splitting of the two classes
    auto split2 = bi_split(ctx, B, chf2);
    rep.beta0_nonzero = !split2[0].is_zero();
    rep.beta1_nonzero = split2.size() > 1 && !split2[1].is_zero();
    auto split1 = bi_split(ctx, B, chf1);
    Multivector c00 = kunneth(split1[0], split2[0], spec);
    rep.alpha0_beta0_rank_nonzero = !octx.phi_check(c00).coeff_of(0).is_zero();

    if (!rep.zero_rank) {
        Multivector kap = kappa(img, spec);
        rep.kappa_d2 = kap.grade_part(ctx.d);
        auto [sym, hw] = ctx.decompose_ad(rep.kappa_d2);
        rep.sym_component = sym;
        rep.hw_component = hw;
        rep.hw_nonzero = !hw.is_zero();
    }
    rep.verdict = !rep.zero_rank && !rep.kb1.member && rep.hw_nonzero;
    return rep;
}

}  // namespace weilspin

#include "weilspin/orlov.hpp"

namespace weilspin {

namespace {

// internal product layout: first-factor generators low, second high
Mask low_mask(int n) { return (Mask(1) << (2 * n)) - 1; }

}  // namespace

FMTables::FMTables(int n_, const TowerSpec& spec) : n(n_) {
    const int h = 2 * n, r = 4 * n;
    const Mask low = low_mask(n);
    // Normalized Poincare class on the product, integrated factor in the
    // low block.  The sign is pinned at build time: with the opposite sign
    // the transform of a type-overlap pair projects onto the conjugate
    // eigenspace line instead of the stated one.
    Multivector c1(r);
    for (int i = 0; i < h; ++i)
        c1 = c1 + Multivector::term(r, (Mask(1) << i) | (Mask(1) << (h + i)),
                                    TowerElt(Rational(-1)));
    Multivector expc = c1.exp_truncated(spec);

    auto one_entry = [&](const Multivector& prod, bool integrate_low) {
        std::pair<Mask, TowerElt> out{0, TowerElt::zero()};
        for (const auto& t : prod.terms()) {
            if (integrate_low) {
                if ((t.mask & low) == low) {
                    out = {t.mask >> h, t.coeff};
                    break;
                }
            } else {
                if ((t.mask >> h) == low) {
                    out = {t.mask & low, t.coeff};
                    break;
                }
            }
        }
        return out;
    };

    size_t count = size_t(1) << h;
    fwd.resize(count);
    hat.resize(count);
    fwd_inv.resize(count);
    hat_inv.resize(count);
    for (Mask s = 0; s < count; ++s) {
        Multivector in_low = Multivector::term(r, s, TowerElt::one());
        fwd[s] = one_entry(expc.wedge(in_low, spec), true);
        Multivector in_high = Multivector::term(r, s << h, TowerElt::one());
        hat[s] = one_entry(expc.wedge(in_high, spec), false);
    }
    for (Mask s = 0; s < count; ++s) {
        fwd_inv[fwd[s].first] = {s, fwd[s].second.inv(spec)};
        hat_inv[hat[s].first] = {s, hat[s].second.inv(spec)};
    }
}

Multivector FMTables::apply(const std::vector<std::pair<Mask, TowerElt>>& table,
                            const Multivector& c, const TowerSpec& spec) const {
    std::vector<Multivector::Term> terms;
    for (const auto& t : c.terms()) {
        const auto& [m, k] = table[t.mask];
        terms.push_back({m, t.coeff.mul(k, spec)});
    }
    return Multivector::from_terms(2 * n, std::move(terms));
}

Multivector kunneth(const Multivector& u, const Multivector& v, const TowerSpec& spec) {
    int h = u.ambient_rank();
    std::vector<Multivector::Term> uterms(u.terms().begin(), u.terms().end());
    std::vector<Multivector::Term> shifted;
    for (const auto& t : v.terms()) shifted.push_back({t.mask << h, t.coeff});
    return Multivector::from_terms(2 * h, std::move(uterms))
        .wedge(Multivector::from_terms(2 * h, std::move(shifted)), spec);
}

Multivector tau_second_factor(const Multivector& c, int n) {
    const int h = 2 * n;
    std::vector<Multivector::Term> terms(c.terms().begin(), c.terms().end());
    for (auto& t : terms) {
        int g = mask_grade(t.mask >> h);
        if ((g * (g - 1) / 2) & 1) t.coeff = -t.coeff;
    }
    return Multivector::from_terms(c.ambient_rank(), std::move(terms));
}

namespace {

Multivector mu_map(const Multivector& c, int n, const TowerSpec& spec, bool push) {
    const int h = 2 * n, r = 4 * n;
    Matrix m = Matrix::identity(r);
    for (int i = 0; i < h; ++i)
        m.at(h + i, i) = push ? TowerElt(Rational(-1)) : TowerElt::one();
    return apply_linear(m, c, spec);
}

}  // namespace

Multivector mu_pull(const Multivector& c, int n, const TowerSpec& spec) {
    return mu_map(c, n, spec, false);
}

Multivector mu_push(const Multivector& c, int n, const TowerSpec& spec) {
    return mu_map(c, n, spec, true);
}

OrlovContext::OrlovContext(const WeilContext& ctx) : weil(ctx), fm(ctx.n, ctx.spec) {
    // the double transform must equal (-1)^n times pullback by the
    // inversion, i.e. (-1)^{n+i} on grade i; this pins the orientation of
    // the fiber integration
    const int h = 2 * ctx.n;
    for (Mask s = 0; s < (Mask(1) << h); ++s) {
        const auto& first = fm.fwd[s];
        const auto& second = fm.hat[first.first];
        TowerElt got = first.second.mul(second.second, ctx.spec);
        int want = ((ctx.n + mask_grade(s)) % 2) ? -1 : 1;
        if (second.first != s || !(got == TowerElt(Rational(want))))
            throw Error("double transform normalization failed");
    }
}

Multivector OrlovContext::fm_poincare(const Multivector& c, bool inverse) const {
    return fm.apply(inverse ? fm.fwd_inv : fm.fwd, c, weil.spec);
}

Multivector OrlovContext::fm_poincare_hat(const Multivector& c, bool inverse) const {
    return fm.apply(inverse ? fm.hat_inv : fm.hat, c, weil.spec);
}

Multivector OrlovContext::phi(const Multivector& c) const {
    const int h = 2 * weil.n;
    Multivector pulled = mu_pull(c, weil.n, weil.spec);
    std::vector<Multivector::Term> terms;
    for (const auto& t : pulled.terms()) {
        const auto& [m, k] = fm.fwd_inv[t.mask >> h];
        terms.push_back({(t.mask & low_mask(weil.n)) | (m << h), t.coeff.mul(k, weil.spec)});
    }
    return Multivector::from_terms(4 * weil.n, std::move(terms));
}

Multivector OrlovContext::phi_inv(const Multivector& c) const {
    const int h = 2 * weil.n;
    std::vector<Multivector::Term> terms;
    for (const auto& t : c.terms()) {
        const auto& [m, k] = fm.fwd[t.mask >> h];
        terms.push_back({(t.mask & low_mask(weil.n)) | (m << h), t.coeff.mul(k, weil.spec)});
    }
    Multivector applied = Multivector::from_terms(4 * weil.n, std::move(terms));
    return mu_push(applied, weil.n, weil.spec);
}

Multivector OrlovContext::phi_check(const Multivector& c) const {
    return phi(tau_second_factor(c, weil.n));
}

namespace {

// Star data for one monomial: the orthogonal-complement dual with the exact
// sign from the hyperbolic Gram pairing on each grade.
std::pair<Mask, int> star_term(int n, Mask s) {
    const int h = 2 * n, r = 4 * n;
    const Mask full = r >= 32 ? ~Mask(0) : ((Mask(1) << r) - 1);
    const Mask low = (Mask(1) << h) - 1;
    Mask sigma = ((s & low) << h) | (s >> h);
    // permutation sign: position of the partner of each element of sigma
    // inside sorted(s)
    std::vector<int> order;
    for (int i = 0; i < r; ++i)
        if (sigma & (Mask(1) << i)) {
            int partner = i < h ? i + h : i - h;
            order.push_back(__builtin_popcount(s & ((Mask(1) << partner) - 1)));
        }
    int inv = 0;
    for (size_t i = 0; i < order.size(); ++i)
        for (size_t j = i + 1; j < order.size(); ++j)
            if (order[i] > order[j]) ++inv;
    int g = (inv & 1) ? -1 : 1;
    Mask comp = full & ~sigma;
    int ssgn = wedge_sign(sigma, comp);
    return {comp, g * ssgn};
}

}  // namespace

Multivector OrlovContext::star(const Multivector& c) const {
    std::vector<Multivector::Term> terms;
    for (const auto& t : c.terms()) {
        auto [m, sgn] = star_term(weil.n, t.mask);
        terms.push_back({m, sgn < 0 ? -t.coeff : t.coeff});
    }
    return Multivector::from_terms(c.ambient_rank(), std::move(terms));
}

Multivector OrlovContext::star_inv(const Multivector& c) const {
    const int h = 2 * weil.n, r = 4 * weil.n;
    const Mask full = r >= 32 ? ~Mask(0) : ((Mask(1) << r) - 1);
    std::vector<Multivector::Term> terms;
    for (const auto& t : c.terms()) {
        Mask sigma = full & ~t.mask;
        Mask s = ((sigma & ((Mask(1) << h) - 1)) << h) | (sigma >> h);
        auto [m, sgn] = star_term(weil.n, s);
        if (m != t.mask) throw Error("star inversion mismatch");
        terms.push_back({s, sgn < 0 ? -t.coeff : t.coeff});
    }
    return Multivector::from_terms(c.ambient_rank(), std::move(terms));
}

Multivector OrlovContext::chevalley_tilde(const Multivector& c) const {
    return star_inv(phi_check(c));
}

Multivector kappa(const Multivector& x, const TowerSpec& spec) {
    TowerElt r = x.coeff_of(0);
    if (r.is_zero()) throw ZeroRank();
    Multivector c1 = x.grade_part(2);
    Multivector expo = c1.scaled(-r.inv(spec), spec).exp_truncated(spec);
    return x.wedge(expo, spec);
}

}  // namespace weilspin

#include "weilspin/hodge.hpp"

namespace weilspin {

namespace {

// F-linear rotation on H^1(X) pairing coordinate i with i + d/2, signs per
// pair, extended to the dual side so that the result is anti-self-dual.
Matrix fixture_i_matrix(const TowerSpec& spec, int d, const std::vector<int>& signs) {
    int n = d * spec.e() / 4;
    int h = 2 * n, r = 4 * n;
    int fdim = spec.t > 0 ? 2 : 1;
    Matrix ix(h, h);
    for (int i = 0; i < d / 2; ++i) {
        int j = i + d / 2;
        for (int rep = 0; rep < fdim; ++rep) {
            // e_i -> s e_j, e_j -> -s e_i
            ix.at(fdim * j + rep, fdim * i + rep) = TowerElt(Rational(signs[i]));
            ix.at(fdim * i + rep, fdim * j + rep) = TowerElt(Rational(-signs[i]));
        }
    }
    Matrix m(r, r);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            m.at(i, j) = ix.at(i, j);
            m.at(h + i, h + j) = -ix.at(j, i);
        }
    return m;
}

}  // namespace

bool is_positive_definite(const Matrix& g, const TowerSpec& spec) {
    // symmetric elimination; every pivot must be positive under the standard
    // real embedding
    int n = g.rows();
    Matrix a = g;
    for (int k = 0; k < n; ++k) {
        TowerElt piv = a.at(k, k);
        if (!piv.in_f()) return false;
        if (sign_at_embedding(piv, 0, spec) <= 0) return false;
        TowerElt inv = piv.inv(spec);
        for (int i = k + 1; i < n; ++i) {
            if (a.at(i, k).is_zero()) continue;
            TowerElt f = a.at(i, k).mul(inv, spec);
            for (int j = k; j < n; ++j) a.at(i, j) = a.at(i, j) - f.mul(a.at(k, j), spec);
        }
    }
    return true;
}

Matrix gi_form(const WeilContext& ctx, const ComplexStructure& I, const TowerElt& t) {
    const auto& spec = ctx.spec;
    Matrix et = ctx.eta_matrix(t);
    int r = ctx.V.rank();
    Matrix out(r, r);
    for (int i = 0; i < r; ++i) {
        Vec ei(r);
        ei[i] = TowerElt::one();
        Vec etx = et.apply(ei, spec);
        for (int j = 0; j < r; ++j) {
            Vec ej(r);
            ej[j] = TowerElt::one();
            out.at(i, j) = ctx.V.pairing(etx, I.on_v.apply(ej, spec), spec);
        }
    }
    return out;
}

CMType cm_type_of_imaginary(const WeilContext& ctx, const TowerElt& t) {
    if (t.is_zero() || !t.in_k_minus()) throw NotPurelyImaginary();
    // t = (c + d rt) rmq lands in the upper half-plane at sigma_hat exactly
    // when c + d sigma_hat(rt) > 0
    CMType T;
    for (int sh = 0; sh < ctx.e / 2; ++sh) {
        TowerElt val = TowerElt::from_f(t.c, t.d);
        int s = sign_at_embedding(val, sh, ctx.spec);
        if (s == 0) throw NotPurelyImaginary("degenerate imaginary element");
        T.signs.push_back(s);
    }
    return T;
}

TowerElt polarizing_t_search(const WeilContext& ctx, const ComplexStructure& I) {
    const auto& spec = ctx.spec;
    std::vector<Rational> coeffs = {Rational(1), Rational(-1), Rational(2), Rational(-2),
                                    Rational(0)};
    for (const auto& c1 : coeffs)
        for (const auto& c2 : coeffs) {
            if (c1 == 0 && c2 == 0) continue;
            if (spec.t == 0 && c2 != 0) continue;
            TowerElt t(0, 0, c1, c2);
            Matrix g = gi_form(ctx, I, t);
            if (!(g.transpose() == g)) continue;
            if (is_positive_definite(g, spec)) return t;
        }
    throw SearchExhausted("no polarizing element found");
}

Fixture fixture_for(const WeilContext& ctx) {
    const TowerSpec& spec = ctx.spec;
    const int d = ctx.d;
    for (int bits = 0; bits < (1 << (d / 2)); ++bits) {
        std::vector<int> signs(d / 2);
        for (int i = 0; i < d / 2; ++i) signs[i] = (bits >> i) & 1 ? -1 : 1;
        ComplexStructure I{fixture_i_matrix(spec, d, signs)};
        Matrix sq = I.on_v.mul(I.on_v, spec);
        if (!(sq == Matrix::identity(ctx.V.rank()).scaled(TowerElt(Rational(-1)), spec)))
            continue;
        try {
            TowerElt t = polarizing_t_search(ctx, I);
            auto verdict = omega_membership(ctx, I, t);
            if (verdict.member) return Fixture{ctx.rm, I, t};
        } catch (const SearchExhausted&) {
            continue;
        } catch (const EtaIncompatible&) {
            continue;
        }
    }
    throw FixtureSearchFailed();
}

Fixture builtin_fixture(const TowerSpec& spec, int d) {
    WeilContext ctx = build_context(spec, RMData::standard(spec, d));
    return fixture_for(ctx);
}

bool hodge_type_test(const Matrix& I, const Multivector& x, const TowerSpec& spec) {
    for (int g = 0; g <= x.ambient_rank(); ++g) {
        Multivector part = x.grade_part(g);
        if (part.is_zero()) continue;
        if (g % 2) return false;
        if (!apply_derivation(I, part, spec).is_zero()) return false;
    }
    return true;
}

namespace {

// element of K(i); when q is a rational square the unit i already lies in
// the tower and plain kernels are used instead
struct CElt {
    TowerElt re, im;
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

CElt cmul(const CElt& a, const CElt& b, const TowerSpec& spec) {
    return {a.re.mul(b.re, spec) - a.im.mul(b.im, spec),
            a.re.mul(b.im, spec) + a.im.mul(b.re, spec)};
}

CElt cinv(const CElt& a, const TowerSpec& spec) {
    TowerElt n = a.re.mul(a.re, spec) + a.im.mul(a.im, spec);
    TowerElt ninv = n.inv(spec);
    return {a.re.mul(ninv, spec), (-a.im).mul(ninv, spec)};
}

CElt csub(const CElt& a, const CElt& b) { return {a.re - b.re, a.im - b.im}; }

int kernel_dim_complex(std::vector<std::vector<CElt>> rows, const TowerSpec& spec) {
    if (rows.empty()) return 0;
    int ncols = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (!rows[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        CElt inv = cinv(rows[rank][col], spec);
        for (int j = col; j < ncols; ++j) rows[rank][j] = cmul(rows[rank][j], inv, spec);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col].is_zero()) continue;
            CElt f = rows[r][col];
            for (int j = col; j < ncols; ++j)
                rows[r][j] = csub(rows[r][j], cmul(f, rows[rank][j], spec));
        }
        ++rank;
    }
    return ncols - rank;
}

}  // namespace

std::vector<std::pair<int, int>> weil_condition(const WeilContext& ctx,
                                                const ComplexStructure& I) {
    const auto& spec = ctx.spec;
    if (spec.t > 0 &&
        !(I.on_v.mul(ctx.eta_hat_sqrt_t, spec) == ctx.eta_hat_sqrt_t.mul(I.on_v, spec)))
        throw EtaIncompatible();
    if (!(I.on_v.mul(ctx.eta_sqrt_mq, spec) == ctx.eta_sqrt_mq.mul(I.on_v, spec)))
        throw EtaIncompatible();

    std::vector<std::pair<int, int>> dims;
    bool q_square = rational_is_square(spec.q);
    for (int s = 0; s < ctx.e; ++s) {
        const auto& vs = ctx.v_sigma[s];
        int dd = vs.dim();
        Matrix a(dd, dd);
        for (int j = 0; j < dd; ++j) {
            auto sol = vs.solve(I.on_v.apply(vs.basis()[j], spec), spec);
            if (!sol) throw EtaIncompatible("eigenspace is not I-stable");
            for (int i = 0; i < dd; ++i) a.at(i, j) = (*sol)[i];
        }
        int plus;
        if (q_square) {
            Rational root(mpz_class(sqrt(spec.q.get_num())),
                          mpz_class(sqrt(spec.q.get_den())));
            root.canonicalize();
            TowerElt iu = TowerElt::sqrt_minus_q().scaled(Rational(1) / root);
            Matrix shifted = a - Matrix::identity(dd).scaled(iu, spec);
            plus = Subspace::kernel(shifted, spec).dim();
        } else {
            std::vector<std::vector<CElt>> rows(dd, std::vector<CElt>(dd));
            for (int i = 0; i < dd; ++i)
                for (int j = 0; j < dd; ++j) {
                    rows[i][j] = {a.at(i, j), TowerElt::zero()};
                    if (i == j) rows[i][j].im = rows[i][j].im - TowerElt::one();
                }
            plus = kernel_dim_complex(std::move(rows), spec);
        }
        dims.push_back({plus, dd - plus});
    }
    return dims;
}

OmegaVerdict omega_membership(const WeilContext& ctx, const ComplexStructure& I,
                              const TowerElt& t) {
    const auto& spec = ctx.spec;
    OmegaVerdict out;
    if (t.is_zero() || !t.in_k_minus()) {
        out.failing_clause = "polarizing element not purely imaginary";
        return out;
    }
    Matrix sq = I.on_v.mul(I.on_v, spec);
    if (!(sq == Matrix::identity(ctx.V.rank()).scaled(TowerElt(Rational(-1)), spec))) {
        out.failing_clause = "square is not -1";
        return out;
    }
    try {
        out.weil_dims = weil_condition(ctx, I);
    } catch (const EtaIncompatible&) {
        out.failing_clause = "does not commute with the CM action";
        return out;
    }
    for (const auto& T : enumerate_cm_types(spec)) {
        if (!ctx.w_type(T).stable_under(I.on_v, spec)) {
            out.failing_clause = "a type subspace is not stable";
            return out;
        }
    }
    for (const auto& [p, m] : out.weil_dims)
        if (p != ctx.d / 2 || m != ctx.d / 2) {
            out.failing_clause = "eigenspace dimensions unbalanced";
            return out;
        }
    Matrix g = gi_form(ctx, I, t);
    if (!(g.transpose() == g)) {
        out.failing_clause = "polarization form not symmetric";
        return out;
    }
    if (!is_positive_definite(g, spec)) {
        out.failing_clause = "polarization form not positive definite";
        return out;
    }
    out.member = true;
    return out;
}

ComplexStructure delta_transfer(const WeilContext& ctx, const ComplexStructure& I,
                                const CMType& t1, const CMType& t2) {
    const auto& spec = ctx.spec;
    bool found = false;
    std::vector<Rational> coeffs = {Rational(1), Rational(-1), Rational(2), Rational(-2),
                                    Rational(0)};
    for (const auto& c1 : coeffs) {
        for (const auto& c2 : coeffs) {
            if (c1 == 0 && c2 == 0) continue;
            if (spec.t == 0 && c2 != 0) continue;
            TowerElt t(0, 0, c1, c2);
            if (!(cm_type_of_imaginary(ctx, t) == t1)) continue;
            if (omega_membership(ctx, I, t).member) {
                found = true;
                break;
            }
        }
        if (found) break;
    }
    if (!found) throw NotAMember("input fails membership for the first type");

    int r = ctx.V.rank();
    Matrix delta = Matrix::identity(r);
    for (int sh = 0; sh < ctx.e / 2; ++sh) {
        if (t1.signs[sh] == t2.signs[sh]) continue;
        if (spec.t == 0) {
            delta = delta.scaled(TowerElt(Rational(-1)), spec);
        } else {
            // the field generator scaled by 1/sqrt(t) is +1 on the positive
            // eigenspace block and -1 on the other
            TowerElt inv_rt = TowerElt::sqrt_t().inv(spec);
            Matrix blockflip = ctx.eta_hat_sqrt_t.scaled(sh == 1 ? inv_rt : -inv_rt, spec);
            delta = delta.mul(blockflip, spec);
        }
    }
    return ComplexStructure{delta.mul(I.on_v, spec)};
}

}  // namespace weilspin

#include "weilspin/weil.hpp"

#include <functional>

namespace weilspin {

RMData RMData::standard(const TowerSpec& spec, int d) {
    if (d < 2 || d % 2) throw ConfigError("rank_d must be even and >= 2");
    RMData rm;
    rm.d = d;
    rm.darboux = true;
    int n = d * spec.e() / 4;
    int h = 2 * n;
    Multivector theta(h);
    if (spec.t == 0) {
        for (int i = 0; i < d / 2; ++i)
            theta = theta + Multivector::term(h, (Mask(1) << i) | (Mask(1) << (i + d / 2)),
                                              TowerElt::one());
    } else {
        // F-coordinate i occupies generators (2i, 2i+1) = (e_i x 1, e_i x rt).
        // Pairs (i, i + d/2) carry u ^ w' + w ^ u'; the d-th power of the sum
        // is d! times the ascending volume class.
        for (int i = 0; i < d / 2; ++i) {
            int j = i + d / 2;
            theta = theta + Multivector::term(h, (Mask(1) << (2 * i)) | (Mask(1) << (2 * j + 1)),
                                              TowerElt::one());
            theta = theta + Multivector::term(h, (Mask(1) << (2 * i + 1)) | (Mask(1) << (2 * j)),
                                              TowerElt::one());
        }
    }
    rm.theta = theta;
    return rm;
}

RMData RMData::from_f_matrix(const TowerSpec& spec, int d,
                             const std::vector<std::vector<TowerElt>>& mat) {
    if (d < 2 || d % 2) throw ConfigError("rank_d must be even and >= 2");
    if (static_cast<int>(mat.size()) != d) throw ConfigError("theta matrix must be d x d");
    RMData rm;
    rm.d = d;
    rm.darboux = false;
    int n = d * spec.e() / 4;
    int h = 2 * n;
    Multivector theta(h);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(mat[i].size()) != d) throw ConfigError("theta matrix must be d x d");
        if (!mat[i][i].is_zero()) throw ConfigError("theta matrix must be alternating");
        for (int j = i + 1; j < d; ++j) {
            const TowerElt& c = mat[i][j];
            if (!(mat[j][i] == -c)) throw ConfigError("theta matrix must be alternating");
            if (!c.in_f()) throw ConfigError("theta entries must lie in F");
            if (c.is_zero()) continue;
            if (spec.t == 0) {
                theta = theta + Multivector::term(h, (Mask(1) << i) | (Mask(1) << j), c);
            } else {
                // lift of (a + b rt) e_i ^_F e_j:
                //   a (u_i u_j + t^{-1} w_i w_j) + b (u_i w_j + w_i u_j)
                Mask ui = Mask(1) << (2 * i), wi = Mask(1) << (2 * i + 1);
                Mask uj = Mask(1) << (2 * j), wj = Mask(1) << (2 * j + 1);
                theta = theta + Multivector::term(h, ui | uj, TowerElt(c.a));
                theta = theta + Multivector::term(h, wi | wj, TowerElt(c.a / spec.t));
                theta = theta + Multivector::term(h, ui | wj, TowerElt(c.b));
                theta = theta + Multivector::term(h, wi | uj, TowerElt(c.b));
            }
        }
    }
    rm.theta = theta;
    return rm;
}

namespace {

// Action of sqrt(t) on V: companion blocks on H^1(X), transposed pattern on
// the dual generators.
Matrix build_eta_hat_sqrt_t(const TowerSpec& spec, int n) {
    int h = 2 * n, r = 4 * n;
    Matrix m(r, r);
    if (spec.t == 0) return m;
    Rational t(spec.t);
    for (int i = 0; i < h / 2; ++i) {
        m.at(2 * i + 1, 2 * i) = TowerElt::one();      // u -> w
        m.at(2 * i, 2 * i + 1) = TowerElt(t);          // w -> t u
        m.at(h + 2 * i + 1, h + 2 * i) = TowerElt(t);  // u* -> t w*
        m.at(h + 2 * i, h + 2 * i + 1) = TowerElt::one();
    }
    return m;
}

}  // namespace

int WeilContext::sigma_index(const SigmaIndex& s) const {
    for (size_t i = 0; i < sigmas.size(); ++i)
        if (sigmas[i] == s) return static_cast<int>(i);
    throw Error("bad sigma index");
}

Subspace WeilContext::w_type(const CMType& T) const {
    Subspace acc(V.rank());
    for (int sh = 0; sh < e / 2; ++sh)
        acc = acc.sum(v_sigma[sigma_index(type_value(T, sh))], spec);
    return acc;
}

Matrix WeilContext::eta_matrix(const TowerElt& s) const {
    int r = V.rank();
    Matrix out = Matrix::identity(r).scaled(TowerElt(s.a), spec);
    if (s.b != 0) out = out + eta_hat_sqrt_t.scaled(TowerElt(s.b), spec);
    if (s.c != 0) out = out + eta_sqrt_mq.scaled(TowerElt(s.c), spec);
    if (s.d != 0) out = out + eta_hat_sqrt_t.mul(eta_sqrt_mq, spec).scaled(TowerElt(s.d), spec);
    return out;
}

TowerElt WeilContext::pairing_f(const Vec& x, const Vec& y) const {
    TowerElt p = V.pairing(x, y, spec);
    if (spec.t == 0) return p;
    TowerElt pt = V.pairing(eta_hat_sqrt_t.apply(x, spec), y, spec);
    TowerElt out = p.scaled(Rational(1, 2));
    out += TowerElt::sqrt_t().mul(pt.scaled(Rational(1, 2) / spec.t), spec);
    return out;
}

TowerElt WeilContext::hermitian_ht(const TowerElt& t, const Vec& x, const Vec& y) const {
    if (t.is_zero() || !t.in_k_minus()) throw NotPurelyImaginary();
    TowerElt t2 = t.mul(t, spec);
    Vec etax = eta_matrix(t).apply(x, spec);
    return (-t2).mul(pairing_f(x, y), spec) + t.mul(pairing_f(etax, y), spec);
}

Matrix WeilContext::xi_form(const TowerElt& s) const {
    if (!s.in_k_minus()) throw NotPurelyImaginary();
    int r = V.rank();
    Matrix eta_s = eta_matrix(s);
    Matrix g(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) g.at(i, j) = eta_s.at(V.partner(j), i);
    return g;
}

Multivector WeilContext::xi_form_avatar(const TowerElt& s) const {
    Matrix g = xi_form(s);
    int r = V.rank();
    Multivector out(r);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            TowerElt c = g.at(i, j);
            if (c.is_zero()) continue;
            int pi = V.partner(i), pj = V.partner(j);
            int sgn = wedge_sign(Mask(1) << pi, Mask(1) << pj);
            Mask m = (Mask(1) << pi) | (Mask(1) << pj);
            out = out + Multivector::term(r, m, sgn < 0 ? -c : c);
        }
    return out;
}

std::pair<Multivector, Multivector> WeilContext::decompose_ad(const Multivector& x) const {
    const int r = V.rank();
    Vec coords = mv_to_slice(x, d);
    std::vector<Vec> cols;
    for (const auto& b : sym_basis_mv) cols.push_back(mv_to_slice(b, d));
    for (const auto& b : hw_basis_mv) cols.push_back(mv_to_slice(b, d));
    const int k = static_cast<int>(cols.size());
    const int nslice = static_cast<int>(coords.size());
    std::vector<Vec> rows;
    for (int i = 0; i < k; ++i) {
        Vec row(nslice + k);
        for (int j = 0; j < nslice; ++j) row[j] = cols[i][j];
        row[nslice + i] = TowerElt::one();
        rows.push_back(std::move(row));
    }
    rref(rows, spec);
    Vec rem = coords, lambda(k);
    for (const auto& row : rows) {
        int p = 0;
        while (p < nslice && row[p].is_zero()) ++p;
        if (p == nslice) continue;
        if (!rem[p].is_zero()) {
            TowerElt f = rem[p];
            for (int j = p; j < nslice; ++j) rem[j] = rem[j] - f.mul(row[j], spec);
            for (int j = 0; j < k; ++j) lambda[j] += f.mul(row[nslice + j], spec);
        }
    }
    if (!vec_is_zero(rem)) throw NotInInvariantSum();
    Multivector sym(r), hww(r);
    for (size_t i = 0; i < sym_basis_mv.size(); ++i)
        sym = sym + sym_basis_mv[i].scaled(lambda[i], spec);
    for (size_t i = 0; i < hw_basis_mv.size(); ++i)
        hww = hww + hw_basis_mv[i].scaled(lambda[sym_basis_mv.size() + i], spec);
    if (!(x == sym + hww)) throw NotInInvariantSum("component mismatch outside grade d");
    return {sym, hww};
}

std::vector<Vec> WeilContext::split_certificate(const TowerElt& t) const {
    if (t.is_zero() || !t.in_k_minus()) throw NotPurelyImaginary();
    const int r = V.rank(), h = V.half();
    const int fdim = spec.t > 0 ? 2 : 1;
    std::vector<int> pick(d / 2);
    std::vector<std::vector<int>> combos;
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == d / 2) {
            combos.push_back(pick);
            return;
        }
        for (int i = start; i < d; ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    for (const auto& combo : combos) {
        std::vector<std::vector<TowerElt>> covs;
        for (int idx : combo)
            for (int rep = 0; rep < fdim; ++rep) {
                std::vector<TowerElt> xi(h);
                xi[fdim * idx + rep] = TowerElt::one();
                covs.push_back(std::move(xi));
            }
        bool isotropic = true;
        for (size_t a = 0; a < covs.size() && isotropic; ++a)
            for (size_t b = 0; b < covs.size() && isotropic; ++b)
                if (!rm.theta.contract(covs[a], spec).contract(covs[b], spec).is_zero())
                    isotropic = false;
        if (!isotropic) continue;
        std::vector<Vec> cert;
        for (int idx : combo) {
            Vec v(r);
            v[h + fdim * idx] = TowerElt::one();
            cert.push_back(std::move(v));
        }
        bool ok = true;
        for (const auto& a : cert)
            for (const auto& b : cert)
                if (!hermitian_ht(t, a, b).is_zero()) ok = false;
        if (ok) return cert;
    }
    throw NoCertificateFound();
}

Vec WeilContext::random_rational_vector(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> coeff(-4, 4);
    Vec v(V.rank());
    for (auto& x : v) x = TowerElt(Rational(coeff(rng)));
    return v;
}

Vec WeilContext::random_sigma_vector(std::mt19937_64& rng, int sigma) const {
    std::uniform_int_distribution<int> coeff(-3, 3);
    Vec v(V.rank());
    for (const auto& row : v_sigma[sigma].basis()) {
        TowerElt c(Rational(coeff(rng)));
        for (int j = 0; j < V.rank(); ++j) v[j] += row[j].mul(c, spec);
    }
    return v;
}

namespace {

// nilpotent logarithm of 1 + v w for isotropic orthogonal v, w:
// N x = (w, x) v - (v, x) w, with N^2 = 0.
Matrix nilpotent_log(const QuadSpace& V, const Vec& v, const Vec& w, const TowerSpec& spec) {
    Matrix nil(V.rank(), V.rank());
    for (int j = 0; j < V.rank(); ++j) {
        Vec ej(V.rank());
        ej[j] = TowerElt::one();
        TowerElt cw = V.pairing(w, ej, spec), cv = V.pairing(v, ej, spec);
        for (int i = 0; i < V.rank(); ++i)
            nil.at(i, j) += v[i].mul(cw, spec) - w[i].mul(cv, spec);
    }
    return nil;
}

Matrix nilpotent_rho(const QuadSpace& V, const Vec& v, const Vec& w, const TowerSpec& spec) {
    return Matrix::identity(V.rank()) + nilpotent_log(V, v, w, spec);
}

}  // namespace

SpinOpPair WeilContext::spin_sample(std::mt19937_64& rng, int factors) const {
    std::uniform_int_distribution<int> pick(0, e - 1);
    SpinOpPair out;
    out.rho = Matrix::identity(V.rank());
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int f = 0; f < factors; ++f) {
        int sigma = pick(rng);
        int sigma_bar = sigma_index(sigmas[sigma].conjugate());
        Vec v = random_sigma_vector(rng, sigma);
        Vec w = random_sigma_vector(rng, sigma_bar);
        // force (v, w) = 0 inside the conjugate eigenspace
        TowerElt vw = V.pairing(v, w, spec);
        if (!vw.is_zero()) {
            for (const auto& row : v_sigma[sigma_bar].basis()) {
                TowerElt vr = V.pairing(v, row, spec);
                if (vr.is_zero()) continue;
                TowerElt c = vw.mul(vr.inv(spec), spec);
                for (int j = 0; j < V.rank(); ++j) w[j] = w[j] - row[j].mul(c, spec);
                break;
            }
        }
        if (!V.pairing(v, w, spec).is_zero()) continue;  // degenerate draw, skip
        pairs.push_back({v, w});
        out.factors.push_back({v, w});
        out.log_factors.push_back(nilpotent_log(V, v, w, spec));
        out.rho = out.rho.mul(nilpotent_rho(V, v, w, spec), spec);
    }
    const QuadSpace Vq = V;
    const TowerSpec sp = spec;
    out.act = [pairs, Vq, sp](const Multivector& s) {
        Multivector acc = s;
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
            acc = acc + clifford_act(Vq, it->first, clifford_act(Vq, it->second, acc, sp), sp);
        return acc;
    };
    return out;
}

SpinOpPair WeilContext::spin_sample_eta(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> pick(0, e - 1);
    for (int attempt = 0; attempt < 16; ++attempt) {
        int sigma = pick(rng);
        int sigma_bar = sigma_index(sigmas[sigma].conjugate());
        Vec v = random_sigma_vector(rng, sigma);
        Vec w = random_sigma_vector(rng, sigma_bar);
        TowerElt lam = V.pairing(v, w, spec);
        if (lam.is_zero() || (lam + TowerElt::one()).is_zero()) continue;
        // rho of 1 + v w with (v, w) = lam:
        //   x |-> x + (w, x) v - (v, x) w / (1 + lam)
        TowerElt denom_inv = (TowerElt::one() + lam).inv(spec);
        SpinOpPair out;
        out.rho = Matrix::identity(V.rank());
        for (int j = 0; j < V.rank(); ++j) {
            Vec ej(V.rank());
            ej[j] = TowerElt::one();
            TowerElt cw = V.pairing(w, ej, spec);
            TowerElt cv = V.pairing(v, ej, spec).mul(denom_inv, spec);
            for (int i = 0; i < V.rank(); ++i)
                out.rho.at(i, j) += v[i].mul(cw, spec) - w[i].mul(cv, spec);
        }
        const QuadSpace Vq = V;
        const TowerSpec sp = spec;
        out.act = [v, w, Vq, sp](const Multivector& s) {
            return s + clifford_act(Vq, v, clifford_act(Vq, w, s, sp), sp);
        };
        return out;
    }
    // all draws degenerate; fall back to the identity through a plain sample
    return spin_sample(rng, 0);
}

SpinOpPair WeilContext::g_sigma_element(int sigma_hat) const {
    const int r = V.rank();
    int sp_idx = sigma_index({sigma_hat, 1});
    int sm_idx = sigma_index({sigma_hat, -1});
    // Hyperbolic pairs (p_i, q_i) from the two conjugate eigenspaces; the
    // vectors p_i +- q_i are orthogonal with square norm +-2, and the product
    // of all of them inverts V_{sigma_hat} and fixes the other summands.
    std::vector<Vec> plus = v_sigma[sp_idx].basis();
    std::vector<Vec> minus = v_sigma[sm_idx].basis();
    int dd = static_cast<int>(plus.size());
    Matrix gram(dd, dd);
    for (int i = 0; i < dd; ++i)
        for (int j = 0; j < dd; ++j) gram.at(i, j) = V.pairing(plus[i], minus[j], spec);
    Matrix ginv = gram.inverse(spec);
    std::vector<Vec> dual(dd, Vec(r));
    for (int j = 0; j < dd; ++j)
        for (int k = 0; k < dd; ++k) {
            if (ginv.at(k, j).is_zero()) continue;
            for (int i = 0; i < r; ++i) dual[j][i] += minus[k][i].mul(ginv.at(k, j), spec);
        }
    std::vector<Vec> ortho;
    for (int i = 0; i < dd; ++i) {
        ortho.push_back(vec_add(plus[i], dual[i]));
        ortho.push_back(vec_sub(plus[i], dual[i]));
    }
    SpinOpPair out;
    // rho via the eigenbasis: -1 on both eigenspaces above sigma_hat
    std::vector<Vec> cols;
    std::vector<int> flags;
    for (int s = 0; s < e; ++s)
        for (const auto& row : v_sigma[s].basis()) {
            cols.push_back(row);
            flags.push_back(sigmas[s].sigma_hat == sigma_hat ? 1 : 0);
        }
    Matrix basis(r, r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i) basis.at(i, j) = cols[j][i];
    Matrix binv = basis.inverse(spec);
    Matrix sign(r, r);
    for (int j = 0; j < r; ++j)
        sign.at(j, j) = flags[j] ? TowerElt(Rational(-1)) : TowerElt::one();
    out.rho = basis.mul(sign, spec).mul(binv, spec);
    const QuadSpace Vq = V;
    const TowerSpec sp = spec;
    out.act = [ortho, Vq, sp](const Multivector& s) {
        Multivector acc = s;
        for (auto it = ortho.rbegin(); it != ortho.rend(); ++it)
            acc = clifford_act(Vq, *it, acc, sp);
        return acc;
    };
    return out;
}

std::map<std::string, int> WeilContext::dims_ledger() const {
    std::map<std::string, int> out;
    out["e"] = e;
    out["d"] = d;
    out["n"] = n;
    out["dimHW"] = hw.dim();
    out["dimA2"] = static_cast<int>(xi_avatar.size());
    out["dimSym"] = sym_part.dim();
    return out;
}

WeilContext build_context(const TowerSpec& spec, const RMData& rm) {
    spec.validate();
    WeilContext ctx;
    ctx.spec = spec;
    ctx.rm = rm;
    ctx.d = rm.d;
    ctx.e = spec.e();
    ctx.n = rm.d * ctx.e / 4;
    ctx.V = QuadSpace{ctx.n};
    const int r = ctx.V.rank(), h = ctx.V.half();

    ctx.eta_hat_sqrt_t = build_eta_hat_sqrt_t(spec, ctx.n);

    Matrix th(h, h);
    for (int j = 0; j < h; ++j) {
        std::vector<TowerElt> xi(h);
        xi[j] = TowerElt::one();
        Multivector img = rm.theta.contract(xi, spec);
        for (const auto& t : img.terms()) th.at(__builtin_ctz(t.mask), j) = t.coeff;
    }
    ctx.theta_contract = th;
    try {
        ctx.theta_contract_inv = th.inverse(spec);
    } catch (const DivisionByZero&) {
        throw DegenerateW("theta is degenerate");
    }

    // action of sqrt(-q): (x, y) |-> (q theta(y), -theta^{-1}(x)); scalar
    // multiplication on the graph of y |-> -(theta y) sqrt(-q) and the
    // conjugate rule on the conjugate graph
    Matrix mq(r, r);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            mq.at(i, h + j) = th.at(i, j).scaled(spec.q);
            mq.at(h + i, j) = -ctx.theta_contract_inv.at(i, j);
        }
    ctx.eta_sqrt_mq = mq;

    Matrix sq = mq.mul(mq, spec);
    if (!(sq == Matrix::identity(r).scaled(TowerElt(Rational(-spec.q)), spec)))
        throw Error("square of the sqrt(-q) action is not -q");
    if (spec.t > 0 &&
        !(mq.mul(ctx.eta_hat_sqrt_t, spec) == ctx.eta_hat_sqrt_t.mul(mq, spec)))
        throw NotFCompatible("theta is not compatible with the field action");

    for (int sh = 0; sh < ctx.e / 2; ++sh)
        for (int qs : {1, -1}) ctx.sigmas.push_back(SigmaIndex{sh, qs});
    for (const auto& s : ctx.sigmas) {
        Matrix a = mq - Matrix::identity(r).scaled(
                            TowerElt::sqrt_minus_q().scaled(Rational(s.q_sign)), spec);
        bool use_b = spec.t > 0;
        Matrix sys(use_b ? 2 * r : r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) sys.at(i, j) = a.at(i, j);
        if (use_b) {
            Matrix b = ctx.eta_hat_sqrt_t -
                       Matrix::identity(r).scaled(
                           TowerElt::sqrt_t().scaled(Rational(s.sigma_hat == 0 ? 1 : -1)), spec);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) sys.at(r + i, j) = b.at(i, j);
        }
        Subspace ker = Subspace::kernel(sys, spec);
        if (ker.dim() != ctx.d) throw Error("eigenspace dimension mismatch");
        ctx.v_sigma.push_back(ker);
        ctx.sigma_top.push_back(top_wedge(ker, spec));
    }

    if (spec.t > 0) {
        Matrix w1block(h, h);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < h; ++j) w1block.at(i, j) = ctx.eta_hat_sqrt_t.at(i, j);
        Multivector dtheta = apply_derivation(w1block, rm.theta, spec);
        TowerElt half_inv_rt = TowerElt::sqrt_t().inv(spec).scaled(Rational(1, 2));
        Multivector comp1 = (dtheta.scaled(half_inv_rt, spec) + rm.theta).scaled(Rational(1, 2));
        ctx.theta_comp = {comp1, rm.theta - comp1};
    } else {
        ctx.theta_comp = {rm.theta};
    }

    std::vector<TowerElt> kminus = {TowerElt::sqrt_minus_q()};
    if (spec.t > 0) kminus.push_back(TowerElt::sqrt_minus_tq());
    for (const auto& s : kminus) {
        ctx.xi_gram.push_back(ctx.xi_form(s));
        ctx.xi_avatar.push_back(ctx.xi_form_avatar(s));
    }

    {
        const auto nslice = grade_slice_masks(r, ctx.d).size();
        std::vector<Vec> tops;
        for (const auto& w : ctx.sigma_top) tops.push_back(mv_to_slice(w, ctx.d));
        auto rows = rational_restriction(tops, spec);
        ctx.hw = Subspace::span(static_cast<int>(nslice), rows, spec);
        for (const auto& row : ctx.hw.basis())
            ctx.hw_basis_mv.push_back(slice_to_mv(r, ctx.d, row));
    }

    {
        std::vector<Multivector> prods;
        std::function<void(size_t, int, Multivector)> rec = [&](size_t start, int depth,
                                                                Multivector acc) {
            if (depth == ctx.d / 2) {
                prods.push_back(acc);
                return;
            }
            for (size_t i = start; i < ctx.xi_avatar.size(); ++i)
                rec(i, depth + 1, acc.wedge(ctx.xi_avatar[i], spec));
        };
        rec(0, 0, Multivector::unit(r));
        std::vector<Vec> rows;
        for (const auto& p : prods) rows.push_back(mv_to_slice(p, ctx.d));
        ctx.sym_part =
            Subspace::span(static_cast<int>(grade_slice_masks(r, ctx.d).size()), rows, spec);
        for (const auto& row : ctx.sym_part.basis())
            ctx.sym_basis_mv.push_back(slice_to_mv(r, ctx.d, row));
    }

    if (ctx.sym_part.intersect(ctx.hw, spec).dim() != 0)
        throw Error("invariant decomposition is not direct");
    return ctx;
}

}  // namespace weilspin

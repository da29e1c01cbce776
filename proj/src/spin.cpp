#include "weilspin/spin.hpp"

namespace weilspin {

Multivector exterior_rho(const SpinOpPair& g, const Multivector& x, const TowerSpec& spec) {
    if (g.log_factors.empty()) return apply_linear(g.rho, x, spec);
    Multivector acc = x;
    // exp(N_k) ... exp(N_1) on V corresponds to the same product of
    // derivation exponentials on the exterior algebra
    for (auto it = g.log_factors.rbegin(); it != g.log_factors.rend(); ++it) {
        Multivector sum = acc, power = acc;
        Rational factorial(1);
        for (int k = 1; k <= acc.ambient_rank(); ++k) {
            power = apply_derivation(*it, power, spec);
            if (power.is_zero()) break;
            factorial *= k;
            sum = sum + power.scaled(Rational(1) / factorial);
        }
        acc = sum;
    }
    return acc;
}

Matrix QuadSpace::gram() const {
    Matrix g(rank(), rank());
    for (int i = 0; i < rank(); ++i) g.at(i, partner(i)) = TowerElt::one();
    return g;
}

TowerElt QuadSpace::pairing(const Vec& v, const Vec& w, const TowerSpec& spec) const {
    TowerElt acc;
    for (int i = 0; i < rank(); ++i)
        if (!v[i].is_zero() && !w[partner(i)].is_zero())
            acc += v[i].mul(w[partner(i)], spec);
    return acc;
}

Multivector clifford_act(const QuadSpace& V, const Vec& v, const Multivector& s,
                         const TowerSpec& spec) {
    const int h = V.half();
    std::vector<Multivector::Term> wedge_terms;
    for (int i = 0; i < h; ++i)
        if (!v[i].is_zero()) wedge_terms.push_back({Mask(1) << i, v[i]});
    Multivector w = Multivector::from_terms(h, std::move(wedge_terms));
    std::vector<TowerElt> xi(h);
    for (int i = 0; i < h; ++i) xi[i] = v[h + i];
    return w.wedge(s, spec) + s.contract(xi, spec);
}

Spinor clifford_act(const QuadSpace& V, const Vec& v, const Spinor& s, const TowerSpec& spec) {
    return Spinor{clifford_act(V, v, s.mv, spec), 1 - s.parity};
}

Matrix contraction_matrix(const QuadSpace& V, const Multivector& theta2, const TowerSpec& spec) {
    const int h = V.half();
    Matrix out(h, h);
    for (int j = 0; j < h; ++j) {
        std::vector<TowerElt> xi(h);
        xi[j] = TowerElt::one();
        Multivector img = theta2.contract(xi, spec);
        for (const auto& t : img.terms()) out.at(__builtin_ctz(t.mask), j) = t.coeff;
    }
    return out;
}

SpinOpPair exp2form_action(const QuadSpace& V, const Multivector& theta2,
                           const TowerElt& lambda, const std::vector<Matrix>& eta_hat_gens,
                           const TowerSpec& spec) {
    const int h = V.half();
    Matrix th = contraction_matrix(V, theta2, spec);
    for (const auto& gen : eta_hat_gens) {
        // gen acts on W1 in the upper-left block; the 2-vector is compatible
        // exactly when th * gen|_{W2} = gen|_{W1} * th, i.e. gen-self-adjointness
        // of the associated form.  gen|_{W2} is the transpose of gen|_{W1}.
        Matrix a(h, h), b(h, h);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < h; ++j) {
                a.at(i, j) = gen.at(i, j);
                b.at(i, j) = gen.at(h + i, h + j);
            }
        if (!(th.mul(b, spec) == a.mul(th, spec))) throw NotFCompatible();
    }
    SpinOpPair out;
    out.rho = Matrix::identity(V.rank());
    Matrix block = th.scaled(-lambda, spec);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) out.rho.at(i, h + j) = block.at(i, j);
    Multivector expcls = theta2.scaled(lambda, spec).exp_truncated(spec);
    out.act = [expcls, spec](const Multivector& s) { return expcls.wedge(s, spec); };
    return out;
}

Subspace annihilator_of(const QuadSpace& V, const Multivector& s, const TowerSpec& spec) {
    const int r = V.rank();
    // m(e_i) s across the basis; collect the masks that appear and set up
    // the linear system on the coefficients of v.
    std::vector<Multivector> images(r);
    std::vector<Mask> support;
    for (int i = 0; i < r; ++i) {
        Vec v(r);
        v[i] = TowerElt::one();
        images[i] = clifford_act(V, v, s, spec);
        for (const auto& t : images[i].terms()) support.push_back(t.mask);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    Matrix sys(static_cast<int>(support.size()), r);
    for (int i = 0; i < r; ++i)
        for (const auto& t : images[i].terms()) {
            auto it = std::lower_bound(support.begin(), support.end(), t.mask);
            sys.at(static_cast<int>(it - support.begin()), i) = t.coeff;
        }
    return Subspace::kernel(sys, spec);
}

Spinor pure_spinor_of(const QuadSpace& V, const Subspace& W, const TowerSpec& spec) {
    const int r = V.rank(), h = V.half();
    if (W.dim() != h) throw NotMaximal();
    for (const auto& u : W.basis())
        for (const auto& v : W.basis())
            if (!V.pairing(u, v, spec).is_zero()) throw NotIsotropic();

    // Normal form: s = exp(omega) ^ theta with theta the top wedge of
    // U1 = W cap W1 and omega a 2-vector on W1 solving, for every basis
    // row (a, xi) of W,  (a + xi -| omega) ^ theta = 0.  Rows inside W1
    // contribute trivially satisfied equations.
    std::vector<Vec> w1_gens;
    for (int i = 0; i < h; ++i) {
        Vec v(r);
        v[i] = TowerElt::one();
        w1_gens.push_back(std::move(v));
    }
    Subspace U1_full = W.intersect(Subspace::span(r, w1_gens, spec), spec);
    std::vector<Vec> u1_rows;
    for (const auto& row : U1_full.basis()) u1_rows.push_back(Vec(row.begin(), row.begin() + h));
    Subspace U1 = Subspace::span(h, u1_rows, spec);
    Multivector theta = top_wedge(U1, spec);

    // Solve for omega: unknowns are the coefficients on pairs (p < q).
    const auto& pair_masks = grade_slice_masks(h, 2);
    const int unknowns = static_cast<int>(pair_masks.size());
    const int out_grade = U1.dim() + 1;
    const auto& out_masks = grade_slice_masks(h, out_grade);
    std::vector<Vec> sys;
    for (const auto& row : W.basis()) {
        Vec a(row.begin(), row.begin() + h);
        std::vector<TowerElt> xi(row.begin() + h, row.end());
        std::vector<Multivector::Term> aterm;
        for (int i = 0; i < h; ++i)
            if (!a[i].is_zero()) aterm.push_back({Mask(1) << i, a[i]});
        Multivector a_mv = Multivector::from_terms(h, std::move(aterm));
        Vec rhs = mv_to_slice(a_mv.wedge(theta, spec), out_grade);
        for (size_t k = 0; k < out_masks.size(); ++k) {
            Vec eq(unknowns + 1);
            eq[unknowns] = rhs[k];
            sys.push_back(std::move(eq));
        }
        size_t base = sys.size() - out_masks.size();
        for (int u = 0; u < unknowns; ++u) {
            Multivector basis2 = Multivector::term(h, pair_masks[u], TowerElt::one());
            Multivector img = basis2.contract(xi, spec).wedge(theta, spec);
            for (const auto& t : img.terms()) {
                int k = slice_index_of(h, out_grade, t.mask);
                sys[base + k][u] = t.coeff;
            }
        }
    }
    // RREF of the augmented system [A | b]; a pivot in the last column
    // would mean no normal form exists.
    std::vector<Vec> rows = sys;
    rref(rows, spec);
    Vec omega(unknowns);
    for (const auto& rw : rows) {
        int p = 0;
        while (p <= unknowns && rw[p].is_zero()) ++p;
        if (p == unknowns) throw NotIsotropic("no pure spinor normal form");
        if (p < unknowns) omega[p] = -rw[unknowns];
    }
    std::vector<Multivector::Term> oterms;
    for (int u = 0; u < unknowns; ++u)
        if (!omega[u].is_zero()) oterms.push_back({pair_masks[u], omega[u]});
    Multivector omega_mv = Multivector::from_terms(h, std::move(oterms));
    Multivector s = omega_mv.exp_truncated(spec).wedge(theta, spec);

    for (const auto& row : W.basis())
        if (!clifford_act(V, row, s, spec).is_zero())
            throw NotIsotropic("annihilation failed");
    return Spinor{s, U1.dim() % 2};
}

}  // namespace weilspin

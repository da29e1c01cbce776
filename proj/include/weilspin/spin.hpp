#pragma once

// The hyperbolic quadratic space V = W1 + W2 with W2 the dual of W1, the
// half-spin representation on the exterior algebra of W1 (Clifford action
// by wedge and contraction), pure-spinor / maximal-isotropic conversion,
// and exact sample elements of the spin group.

#include <functional>

#include "weilspin/linalg.hpp"

namespace weilspin {

struct QuadSpace {
    int n = 0;  // complex dimension of the first factor

    int rank() const { return 4 * n; }
    int half() const { return 2 * n; }

    // ((w1,th1),(w2,th2)) = th1(w2) + th2(w1) in dual-basis coordinates:
    // generators i and i + 2n pair to 1.
    int partner(int i) const { return i < half() ? i + half() : i - half(); }
    Matrix gram() const;
    TowerElt pairing(const Vec& v, const Vec& w, const TowerSpec& spec) const;
};

struct Spinor {
    Multivector mv;  // supported on the first 2n generators
    int parity = 0;  // 0 = even, 1 = odd

    static Spinor even(Multivector m) { return Spinor{std::move(m), 0}; }
    static Spinor odd(Multivector m) { return Spinor{std::move(m), 1}; }
};

// m(w,xi)(s) = w ^ s + xi -| s; satisfies m(v)^2 = ((v,v)/2) id.
Multivector clifford_act(const QuadSpace& V, const Vec& v, const Multivector& s,
                         const TowerSpec& spec);
Spinor clifford_act(const QuadSpace& V, const Vec& v, const Spinor& s, const TowerSpec& spec);

// A spin-group element stored through its two actions.  Unipotent samples
// also record their nilpotent logarithms so the exterior-algebra action can
// be applied as an exponential of derivations.
struct SpinOpPair {
    Matrix rho;  // action on V
    std::function<Multivector(const Multivector&)> act;  // action on spinors
    std::vector<std::pair<Vec, Vec>> factors;            // (v, w) per 1 + vw factor
    std::vector<Matrix> log_factors;                     // nilpotent rho logarithms
};

// rho extended multiplicatively to the exterior algebra; uses the recorded
// logarithms when available (cheap for sparse nilpotents), otherwise the
// generic generator-by-generator expansion.
Multivector exterior_rho(const SpinOpPair& g, const Multivector& x, const TowerSpec& spec);

// Cup product with exp(lambda * theta2) for theta2 a 2-vector on W1, paired
// with the unipotent isometry (w, xi) |-> (w - lambda * theta2 -| xi, xi).
// eta_hat_gens are checked for compatibility: theta2 must be fixed (up to
// the eigenvalue) by the field action, i.e. its contraction map must
// commute with each generator.
SpinOpPair exp2form_action(const QuadSpace& V, const Multivector& theta2,
                           const TowerElt& lambda, const std::vector<Matrix>& eta_hat_gens,
                           const TowerSpec& spec);

// Contraction map W2 -> W1 of a 2-vector on W1, as a half x half matrix.
Matrix contraction_matrix(const QuadSpace& V, const Multivector& theta2, const TowerSpec& spec);

// Generator of the annihilator line of a maximal isotropic subspace.
// Throws NotIsotropic / NotMaximal when the input is not one.
Spinor pure_spinor_of(const QuadSpace& V, const Subspace& W, const TowerSpec& spec);

// {v in V : m(v) s = 0}; its dimension is 2n exactly when s is pure.
Subspace annihilator_of(const QuadSpace& V, const Multivector& s, const TowerSpec& spec);

// tau acts on grade i by (-1)^{i(i-1)/2}.
inline Multivector tau_involution(const Multivector& x) { return x.tau(); }

}  // namespace weilspin

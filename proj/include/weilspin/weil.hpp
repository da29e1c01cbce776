#pragma once

// Assembles the complex-multiplication structure on V = H^1(X x Xhat):
// the real multiplication data on H^1(X), the extension to an action of
// K = F(sqrt(-q)) built from a polarization 2-vector, the character
// eigenspaces V_sigma, the invariant 2-forms, the hermitian form, the
// Weil-class space HW and the invariant subalgebra it complements.

#include <array>
#include <map>
#include <random>

#include "weilspin/spin.hpp"

namespace weilspin {

// Index set of complex embeddings: (real embedding index, sign of the
// imaginary part of the image of sqrt(-q)).
struct SigmaIndex {
    int sigma_hat;  // 0-based real embedding
    int q_sign;     // +1 upper half-plane, -1 lower

    bool operator==(const SigmaIndex&) const = default;
    SigmaIndex conjugate() const { return {sigma_hat, -q_sign}; }
};

struct RMData {
    int d = 4;            // rank of H^1(X) over F, even
    Multivector theta;    // polarization 2-vector on the first 2n generators
    // entries of an explicit F-valued alternating matrix, or empty for the
    // built-in Darboux choice
    bool darboux = true;

    static RMData standard(const TowerSpec& spec, int d);
    // theta from an explicit alternating F-matrix (entries a + b sqrt t),
    // interpreted per F-coordinate pair as described in the README.
    static RMData from_f_matrix(const TowerSpec& spec, int d,
                                const std::vector<std::vector<TowerElt>>& mat);
};

class WeilContext {
public:
    TowerSpec spec;
    int d = 0, n = 0, e = 0;
    QuadSpace V;
    RMData rm;

    Matrix eta_hat_sqrt_t;  // action of sqrt(t) on V (zero matrix when t = 0)
    Matrix eta_sqrt_mq;     // action of sqrt(-q) on V, rational
    Matrix theta_contract;      // W2 -> W1 contraction with theta
    Matrix theta_contract_inv;  // its inverse

    std::vector<SigmaIndex> sigmas;       // all e complex embeddings
    std::vector<Subspace> v_sigma;        // eigenspace per sigma, over K
    std::vector<Multivector> sigma_top;   // generator of the top wedge of each V_sigma

    // invariant 2-forms: Gram matrices and 2-vector avatars for the K_-
    // basis sqrt(-q) and sqrt(t) sqrt(-q) (one form when t = 0)
    std::vector<Matrix> xi_gram;
    std::vector<Multivector> xi_avatar;

    Subspace hw;        // rational Weil-class space in the grade-d slice
    Subspace sym_part;  // image of the half-d power of the invariant 2-forms
    std::vector<Multivector> hw_basis_mv;
    std::vector<Multivector> sym_basis_mv;

    // theta eigencomponents over F(sqrt t): theta = theta_comp[0] + theta_comp[1]
    std::vector<Multivector> theta_comp;

    int sigma_index(const SigmaIndex& s) const;
    SigmaIndex type_value(const CMType& T, int sigma_hat) const {
        return SigmaIndex{sigma_hat, T.signs[sigma_hat]};
    }
    // W_T = direct sum of V_{T(sigma_hat)}
    Subspace w_type(const CMType& T) const;

    Matrix eta_matrix(const TowerElt& s) const;
    // F-valued pairing whose trace is the integral pairing on V.
    TowerElt pairing_f(const Vec& x, const Vec& y) const;
    // K-valued hermitian form attached to a purely imaginary t.
    TowerElt hermitian_ht(const TowerElt& t, const Vec& x, const Vec& y) const;

    Matrix xi_form(const TowerElt& s) const;        // Gram matrix of Xi_s
    Multivector xi_form_avatar(const TowerElt& s) const;

    // exact decomposition inside Sym + HW; throws NotInInvariantSum
    std::pair<Multivector, Multivector> decompose_ad(const Multivector& x) const;

    // K-basis of a d/2-dimensional H_t-isotropic subspace, as vectors of V.
    std::vector<Vec> split_certificate(const TowerElt& t) const;

    // Sample element fixing the secant space pointwise: a product of
    // unipotent factors 1 + v w with v in V_sigma, w in the conjugate
    // eigenspace and (v, w) = 0.  Commutes with the K action, has
    // determinant 1 on every eigenspace.
    SpinOpPair spin_sample(std::mt19937_64& rng, int factors = 2) const;
    // K-commuting sample that scales the eigenspaces: 1 + v w with
    // (v, w) != 0, -1; determinant on V_sigma is 1 + (v, w).
    SpinOpPair spin_sample_eta(std::mt19937_64& rng) const;

    // operator pair with rho = -1 on V_{sigma_hat} and +1 elsewhere
    SpinOpPair g_sigma_element(int sigma_hat) const;

    Vec random_rational_vector(std::mt19937_64& rng) const;
    Vec random_sigma_vector(std::mt19937_64& rng, int sigma) const;

    std::map<std::string, int> dims_ledger() const;
};

WeilContext build_context(const TowerSpec& spec, const RMData& rm);

}  // namespace weilspin

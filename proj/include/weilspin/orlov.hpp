#pragma once

// Cohomological Fourier-Mukai machinery: the transform attached to the
// normalized Poincare class, the shear automorphism of the self-product,
// their composite equivalence on cohomology, the exterior-algebra
// comparison through graded duality, and the rank-normalized class.

#include "weilspin/weil.hpp"

namespace weilspin {

// Transform tables on a fixed number of generators: signed monomial
// bijections for both directions and their inverses.
class FMTables {
public:
    FMTables() = default;
    FMTables(int n, const TowerSpec& spec);

    int n = 0;
    // H(Xhat) -> H(X) and its inverse
    std::vector<std::pair<Mask, TowerElt>> fwd, fwd_inv;
    // H(X) -> H(Xhat) (kernel on the swapped product) and its inverse
    std::vector<std::pair<Mask, TowerElt>> hat, hat_inv;

    Multivector apply(const std::vector<std::pair<Mask, TowerElt>>& table,
                      const Multivector& c, const TowerSpec& spec) const;
};

// Kunneth product: u on the first factor, v on the second, both on 2n
// generators; the result lives on 4n generators with the second factor
// shifted up.
Multivector kunneth(const Multivector& u, const Multivector& v, const TowerSpec& spec);

// tau applied to the second Kunneth factor.
Multivector tau_second_factor(const Multivector& c, int n);

// Pullback / pushforward along (x, y) |-> (x + y, y) on the self-product.
Multivector mu_pull(const Multivector& c, int n, const TowerSpec& spec);
Multivector mu_push(const Multivector& c, int n, const TowerSpec& spec);

class OrlovContext {
public:
    explicit OrlovContext(const WeilContext& ctx);

    const WeilContext& weil;
    FMTables fm;

    // the transform H(Xhat) -> H(X) and its inverse
    Multivector fm_poincare(const Multivector& c, bool inverse = false) const;
    // the reverse-direction transform H(X) -> H(Xhat)
    Multivector fm_poincare_hat(const Multivector& c, bool inverse = false) const;

    // cohomological equivalence H(X x X) -> H(X x Xhat) and its inverse
    Multivector phi(const Multivector& c) const;
    Multivector phi_inv(const Multivector& c) const;
    // phi composed with tau on the second factor
    Multivector phi_check(const Multivector& c) const;
    // graded-duality comparison: phi_check followed by the inverse of the
    // degreewise orthogonal-complement star
    Multivector chevalley_tilde(const Multivector& c) const;

    Multivector star(const Multivector& c) const;
    Multivector star_inv(const Multivector& c) const;
};

// ch exp(-c1/rank): requires a non-zero grade-0 part.
Multivector kappa(const Multivector& x, const TowerSpec& spec);

}  // namespace weilspin

#pragma once

// The secant space spanned by the exponential pure spinors of all CM-types,
// its rational bases, the overlap grading of its tensor square, the kernel
// of the induced map onto the Weil classes, and the membership lemmas for
// the polarization family.

#include "weilspin/orlov.hpp"

namespace weilspin {

struct SecantSpace {
    std::vector<CMType> types;            // fixed ordering of CM-types
    std::vector<Multivector> ell;         // exponential pure spinor per type
    std::vector<Multivector> named;       // rational basis
    std::vector<std::string> names;
    // transition: ell[j] = sum_i to_named.at(i, j) * named[i]
    Matrix to_named;
    // inverse: named[i] = sum_j to_ell.at(j, i) * ell[j]
    Matrix to_ell;
};

SecantSpace build_secant(const WeilContext& ctx);

// exponential pure spinor of one CM-type
Multivector ell_of_type(const WeilContext& ctx, const CMType& T);

// F-scalar action on classes generated by the polarization eigencomponents,
// acting by the embedding value on each eigen-bidegree.
Multivector f_scalar_action(const WeilContext& ctx, const TowerElt& f, const Multivector& x);

// named ch classes
Multivector class_alpha0(const WeilContext& ctx);
Multivector class_betaprime(const WeilContext& ctx, const TowerElt& f);

// coordinates of a class in the secant space; nullopt when outside
std::optional<Vec> secant_coordinates(const WeilContext& ctx, const SecantSpace& B,
                                      const Multivector& x);

// element of the tensor square in named-basis coefficients
struct BBClass {
    Matrix coeff;  // named x named
};

BBClass bb_of_pair(const WeilContext& ctx, const SecantSpace& B, const Multivector& chf1,
                   const Multivector& chf2);

// graded pieces by CM-type overlap, in ell x ell coordinates over K
std::vector<Matrix> bb_decompose(const WeilContext& ctx, const SecantSpace& B,
                                 const BBClass& c);

// the multivector on the self-product represented by ell x ell coordinates
Multivector bb_to_product_class(const WeilContext& ctx, const SecantSpace& B,
                                const Matrix& ell_coeff);

struct KB1Result {
    bool member = false;
    std::vector<TowerElt> sums;                  // one per complex embedding
    std::vector<TowerElt> pair_scales;           // gauge scale per overlap-1 pair
    std::vector<std::pair<int, int>> pair_index; // (T, T') indices per scale
};

// kernel test for a bucket-1 class given in ell x ell coordinates
KB1Result kb1_test(const OrlovContext& octx, const SecantSpace& B, const Matrix& c1_ell);

// rational dimension of the kernel of the bucket-1 projection onto HW
int kb1_dimension(const OrlovContext& octx, const SecantSpace& B);

// split of a secant element into overlap components against the all-upper
// type: (component in the rational plane, component in its complement)
std::vector<Multivector> bi_split(const WeilContext& ctx, const SecantSpace& B,
                                  const Multivector& beta);

// dimension of the subalgebra generated by the rational (1,1) classes
int h11_algebra_dimension(const WeilContext& ctx);

struct FamilyVerdict {
    bool in_h2_h6 = false;      // projects into the degree-2 + degree-6 span
    bool member = false;        // lies on the family graph for the given f
    bool in_union = false;      // lies in the union over all non-zero f
    TowerElt witness_f2;        // the square f^2 detected for the union test
};

// membership in the polarization family indexed by f, and in its union
FamilyVerdict b_theta_family_test(const WeilContext& ctx, const Multivector& x,
                                  const TowerElt& f);

// M_f on degree-2 plus degree-6 classes
Multivector m_f_endomorphism(const WeilContext& ctx, const TowerElt& f, const Multivector& x);

struct CriterionReport {
    Rational r;
    bool zero_rank = false;
    std::vector<int> bucket_nonzero;  // per overlap k: 1 if the component is non-zero
    KB1Result kb1;
    Multivector kappa_d2;
    Multivector sym_component;
    Multivector hw_component;
    bool hw_nonzero = false;
    bool verdict = false;
    // sufficient conditions reported separately
    bool beta0_nonzero = false;
    bool beta1_nonzero = false;
    bool alpha0_beta0_rank_nonzero = false;
};

CriterionReport criterion_check(const OrlovContext& octx, const SecantSpace& B,
                                const Multivector& chf1, const Multivector& chf2);

}  // namespace weilspin

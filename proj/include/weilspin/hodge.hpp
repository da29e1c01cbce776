#pragma once

// Complex structures on V, exact Hodge-type tests through the derivation
// action, the balanced-eigenspace condition, period-domain membership for
// the polarization-compatible forms, and transfer between CM-types.

#include "weilspin/weil.hpp"

namespace weilspin {

struct ComplexStructure {
    Matrix on_v;  // 4n x 4n over the tower, squares to -1
};

// the built-in structure: an F-linear rotation on the Darboux coordinate
// pairs of H^1(X), extended to the dual; searches orientation signs until
// a polarizing element exists
struct Fixture {
    RMData rm;
    ComplexStructure I;
    TowerElt polarizing_t;
};

Fixture builtin_fixture(const TowerSpec& spec, int d);
// sign search against an already-built context (used for explicit
// polarization data)
Fixture fixture_for(const WeilContext& ctx);

// exact (k,k)-type test for a homogeneous class of grade 2k: the derivation
// extension of I annihilates x exactly on balanced bidegrees; inhomogeneous
// classes are tested gradewise
bool hodge_type_test(const Matrix& I, const Multivector& x, const TowerSpec& spec);

// dimensions of the two eigenspace halves of I on each V_sigma
std::vector<std::pair<int, int>> weil_condition(const WeilContext& ctx,
                                                const ComplexStructure& I);

struct OmegaVerdict {
    bool member = false;
    std::string failing_clause;  // empty when member
    std::vector<std::pair<int, int>> weil_dims;
};

OmegaVerdict omega_membership(const WeilContext& ctx, const ComplexStructure& I,
                              const TowerElt& t);

// first purely imaginary element with positive-definite polarization form,
// searched over small coordinates
TowerElt polarizing_t_search(const WeilContext& ctx, const ComplexStructure& I);

// the CM-type cut out by the upper-half-plane condition of a purely
// imaginary element
CMType cm_type_of_imaginary(const WeilContext& ctx, const TowerElt& t);

// multiply by -1 on the real-embedding blocks where the two types differ;
// the result inhabits the period domain of the target type
ComplexStructure delta_transfer(const WeilContext& ctx, const ComplexStructure& I,
                                const CMType& t1, const CMType& t2);

// exact positive definiteness of a symmetric tower-valued matrix under the
// real embedding sending sqrt(t) to the positive root
bool is_positive_definite(const Matrix& g, const TowerSpec& spec);

Matrix gi_form(const WeilContext& ctx, const ComplexStructure& I, const TowerElt& t);

}  // namespace weilspin

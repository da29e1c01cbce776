#pragma once

#include <stdexcept>
#include <string>

namespace weilspin {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define WEILSPIN_ERROR(NAME)                                        \
    struct NAME : Error {                                           \
        explicit NAME(const std::string& what = #NAME) : Error(what) {} \
    }

WEILSPIN_ERROR(DivisionByZero);
WEILSPIN_ERROR(AmbientMismatch);
WEILSPIN_ERROR(FieldMismatch);
WEILSPIN_ERROR(NonNilpotentOverflow);
WEILSPIN_ERROR(NotPurelyImaginary);
WEILSPIN_ERROR(DegenerateW);
WEILSPIN_ERROR(NotFCompatible);
WEILSPIN_ERROR(NotIsotropic);
WEILSPIN_ERROR(NotMaximal);
WEILSPIN_ERROR(NotInBB1);
WEILSPIN_ERROR(NotInInvariantSum);
WEILSPIN_ERROR(ZeroRank);
WEILSPIN_ERROR(SearchExhausted);
WEILSPIN_ERROR(NoCertificateFound);
WEILSPIN_ERROR(NotAMember);
WEILSPIN_ERROR(EtaIncompatible);
WEILSPIN_ERROR(NotInFamily);
WEILSPIN_ERROR(FixtureSearchFailed);
WEILSPIN_ERROR(ConfigError);

#undef WEILSPIN_ERROR

}  // namespace weilspin

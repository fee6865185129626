#pragma once

#include <stdexcept>
#include <string>

namespace napde {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define NAPDE_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

NAPDE_DEFINE_ERROR(NonFiniteCoefficient);
NAPDE_DEFINE_ERROR(ShapeMismatch);
NAPDE_DEFINE_ERROR(RankDeficient);
NAPDE_DEFINE_ERROR(MissingDerivative);
NAPDE_DEFINE_ERROR(NonCoercive);
NAPDE_DEFINE_ERROR(InvalidSize);
NAPDE_DEFINE_ERROR(ConstraintInconsistent);
NAPDE_DEFINE_ERROR(SingularWeight);
NAPDE_DEFINE_ERROR(SingularSystem);
NAPDE_DEFINE_ERROR(GridMisaligned);
NAPDE_DEFINE_ERROR(SingularGram);
NAPDE_DEFINE_ERROR(NotSelfAdjoint);
NAPDE_DEFINE_ERROR(NotPositive);
NAPDE_DEFINE_ERROR(IntegratorFailure);
NAPDE_DEFINE_ERROR(IncompatibleBoundary);
NAPDE_DEFINE_ERROR(UnknownPreset);
NAPDE_DEFINE_ERROR(ParseError);
NAPDE_DEFINE_ERROR(SemanticError);

#undef NAPDE_DEFINE_ERROR

} // namespace napde

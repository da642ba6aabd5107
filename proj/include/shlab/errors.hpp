#pragma once

#include <stdexcept>
#include <string>

namespace shlab {

// Base of every failure raised by the library. The CLI maps subclasses to
// exit codes (see cli/report code).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SHLAB_ERROR(Name)                     \
    struct Name : Error {                     \
        using Error::Error;                   \
    }

SHLAB_ERROR(InvalidGrid);
SHLAB_ERROR(GridTooCoarse);
SHLAB_ERROR(SingularMetric);
SHLAB_ERROR(DegenerateSurface);
SHLAB_ERROR(InvalidSpec);
SHLAB_ERROR(NoExpansionKnown);
SHLAB_ERROR(DomainError);
SHLAB_ERROR(NoConvergence);
SHLAB_ERROR(LinearSolveFailure);
SHLAB_ERROR(UnknownComponent);
SHLAB_ERROR(NoBracket);
SHLAB_ERROR(MonotonicityViolation);
SHLAB_ERROR(NearCriticalLevel);
SHLAB_ERROR(OpenMesh);
SHLAB_ERROR(TooManySkipped);
SHLAB_ERROR(ResidualSignViolation);
SHLAB_ERROR(FoliationBroken);
SHLAB_ERROR(ConfigError);

#undef SHLAB_ERROR

}  // namespace shlab

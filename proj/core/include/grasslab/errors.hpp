#pragma once

#include <stdexcept>
#include <string>

namespace grasslab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GRASSLAB_DEFINE_ERROR(Name)                 \
    class Name : public Error {                     \
    public:                                         \
        using Error::Error;                         \
    }

GRASSLAB_DEFINE_ERROR(DimensionMismatch);
GRASSLAB_DEFINE_ERROR(RankDeficient);
GRASSLAB_DEFINE_ERROR(FullSpace);
GRASSLAB_DEFINE_ERROR(DegenerateAngle);
GRASSLAB_DEFINE_ERROR(ClusterOutOfRange);
GRASSLAB_DEFINE_ERROR(NonPositiveW);
GRASSLAB_DEFINE_ERROR(RegionViolation);
GRASSLAB_DEFINE_ERROR(PreconditionViolated);
GRASSLAB_DEFINE_ERROR(AtVertex);
GRASSLAB_DEFINE_ERROR(NotSpherical);
GRASSLAB_DEFINE_ERROR(OutOfBox);
GRASSLAB_DEFINE_ERROR(RankDeficientJacobian);
GRASSLAB_DEFINE_ERROR(ConfigError);

#undef GRASSLAB_DEFINE_ERROR

}  // namespace grasslab

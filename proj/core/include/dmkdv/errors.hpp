#pragma once

#include <stdexcept>
#include <string>

namespace dmkdv {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DMKDV_DEFINE_ERROR(Name)        \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

DMKDV_DEFINE_ERROR(DomainError)
DMKDV_DEFINE_ERROR(InvalidStateError)
DMKDV_DEFINE_ERROR(SpillError)
DMKDV_DEFINE_ERROR(BlowupError)
DMKDV_DEFINE_ERROR(SingularStepError)
DMKDV_DEFINE_ERROR(ReflectionTooLargeError)
DMKDV_DEFINE_ERROR(QuadratureError)
DMKDV_DEFINE_ERROR(MergingPointsError)
DMKDV_DEFINE_ERROR(PoleError)
DMKDV_DEFINE_ERROR(ConventionError)
DMKDV_DEFINE_ERROR(ConfigError)
DMKDV_DEFINE_ERROR(IoError)

#undef DMKDV_DEFINE_ERROR

}  // namespace dmkdv

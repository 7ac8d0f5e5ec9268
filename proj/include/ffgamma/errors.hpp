#pragma once

#include <stdexcept>
#include <string>

namespace ffgamma {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FFGAMMA_ERROR(name)       \
  class name : public Error {     \
   public:                        \
    using Error::Error;           \
  }

FFGAMMA_ERROR(SingularMatrix);
FFGAMMA_ERROR(ClusterAmbiguity);
FFGAMMA_ERROR(NotNormal);
FFGAMMA_ERROR(BudgetExceeded);
FFGAMMA_ERROR(NotInAmbient);
FFGAMMA_ERROR(NotInvertible);
FFGAMMA_ERROR(NotUnipotent);
FFGAMMA_ERROR(NotScalar);
FFGAMMA_ERROR(DirectionMismatch);
FFGAMMA_ERROR(NoNonvanishingPair);
FFGAMMA_ERROR(InconsistentRatio);
FFGAMMA_ERROR(ConfigError);
FFGAMMA_ERROR(CacheError);

#undef FFGAMMA_ERROR

}  // namespace ffgamma

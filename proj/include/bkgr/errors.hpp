#pragma once
#include <stdexcept>
#include <string>

namespace bkgr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define BKGR_ERROR(Name)                 \
  struct Name : Error {                  \
    using Error::Error;                  \
    Name() : Error(#Name) {}             \
  }

BKGR_ERROR(PrecisionExhausted);
BKGR_ERROR(SingularMatrix);
BKGR_ERROR(OutOfRange);
BKGR_ERROR(RankMismatch);
BKGR_ERROR(NotInCone);
BKGR_ERROR(PreconditionFailed);
BKGR_ERROR(BudgetExceeded);
BKGR_ERROR(UnsupportedDelta);
BKGR_ERROR(MoveNotApplicable);
BKGR_ERROR(CyclicDependency);
BKGR_ERROR(BadModulus);
BKGR_ERROR(NoWitnessFound);
BKGR_ERROR(ConfigError);

#undef BKGR_ERROR

}  // namespace bkgr

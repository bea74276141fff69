#pragma once

#include <stdexcept>
#include <string>

namespace rmst {

// Base for all library errors. The CLI maps these to exit code 65.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RMST_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// datamodel
RMST_DEFINE_ERROR(MissingColumnError);
RMST_DEFINE_ERROR(NonNumericValueError);
RMST_DEFINE_ERROR(NonPositiveTimeError);
RMST_DEFINE_ERROR(InvalidIndicatorError);
RMST_DEFINE_ERROR(EmptyDatasetError);
RMST_DEFINE_ERROR(ArmAbsentError);

// estimators
RMST_DEFINE_ERROR(EmptyInputError);
RMST_DEFINE_ERROR(TauBeyondSupportError);
RMST_DEFINE_ERROR(EmptyArmError);

// augmentation
RMST_DEFINE_ERROR(SingularGramError);

// design
RMST_DEFINE_ERROR(DivergentIntegrandError);
RMST_DEFINE_ERROR(NonSurvivalInputError);
RMST_DEFINE_ERROR(NegativeVarianceError);

#undef RMST_DEFINE_ERROR

}  // namespace rmst

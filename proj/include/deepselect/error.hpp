#pragma once

#include <stdexcept>
#include <string>

namespace deepselect {

// Base of every error raised by the library. Subclasses of ValidationError
// describe bad user input and map to exit code 2 in the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

#define DEEPSELECT_DECLARE_ERROR(Name, Base) \
  class Name : public Base {                 \
   public:                                   \
    using Base::Base;                        \
  }

DEEPSELECT_DECLARE_ERROR(ShapeError, ValidationError);
DEEPSELECT_DECLARE_ERROR(StochasticityError, ValidationError);
DEEPSELECT_DECLARE_ERROR(ValueError, ValidationError);
DEEPSELECT_DECLARE_ERROR(IndexError, ValidationError);
DEEPSELECT_DECLARE_ERROR(BudgetError, ValidationError);
DEEPSELECT_DECLARE_ERROR(CoverageError, ValidationError);
DEEPSELECT_DECLARE_ERROR(ConfigError, ValidationError);
DEEPSELECT_DECLARE_ERROR(SampleSizeError, ValidationError);
DEEPSELECT_DECLARE_ERROR(EmptySubsetError, ValidationError);
DEEPSELECT_DECLARE_ERROR(MembershipError, ValidationError);
DEEPSELECT_DECLARE_ERROR(EmptyFrontError, ValidationError);
DEEPSELECT_DECLARE_ERROR(IoError, ValidationError);

#undef DEEPSELECT_DECLARE_ERROR

}  // namespace deepselect

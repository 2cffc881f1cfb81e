#pragma once

#include <stdexcept>
#include <string>

namespace normhol {

/// Base of every error raised by the library. Input validation problems
/// derive from InvalidInput; broken internal invariants from InternalError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

#define NORMHOL_INPUT_ERROR(Name)                                 \
  class Name : public InvalidInput {                              \
   public:                                                        \
    explicit Name(const std::string& what) : InvalidInput(#Name ": " + what) {} \
  }

NORMHOL_INPUT_ERROR(DimensionMismatch);
NORMHOL_INPUT_ERROR(NotInStabilizer);
NORMHOL_INPUT_ERROR(NonOrthogonalTransport);
NORMHOL_INPUT_ERROR(NotLieClosed);
NORMHOL_INPUT_ERROR(TensorNotInAlgebra);
NORMHOL_INPUT_ERROR(SignatureMismatch);
NORMHOL_INPUT_ERROR(UnrecognizedStructure);
NORMHOL_INPUT_ERROR(InvalidEpimorphism);
NORMHOL_INPUT_ERROR(DegenerateMetric);
NORMHOL_INPUT_ERROR(NotOnCone);

#undef NORMHOL_INPUT_ERROR

}  // namespace normhol

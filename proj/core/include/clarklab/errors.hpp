#pragma once

#include <stdexcept>
#include <string>

namespace clarklab {

/// Broad classification used by the CLI to pick an exit code.
enum class ErrorClass {
  kValidation,  // the symbol is not a self-map of the disk, bad input data
  kNumerical,   // a numerical diagnostic failed (root residuals, contact points, ...)
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), class_(cls) {}

  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

#define CLARKLAB_DEFINE_ERROR(Name, Class)                         \
  class Name : public Error {                                      \
   public:                                                         \
    Name(const std::string& where, const std::string& what)        \
        : Error(ErrorClass::Class, where, what) {}                 \
  };

// |1 - <z, zeta>| fell under the kernel cutoff.
CLARKLAB_DEFINE_ERROR(DegenerateKernelError, kNumerical)
// |phi(z)| >= 1 at an interior point: not a self-map of the disk.
CLARKLAB_DEFINE_ERROR(RangeViolationError, kValidation)
// Rational symbol with a vanishing denominator.
CLARKLAB_DEFINE_ERROR(DivisionDegeneracyError, kNumerical)
// Boundary evaluation requested at a declared pole or singular atom.
CLARKLAB_DEFINE_ERROR(ExceptionalPointError, kNumerical)
// phi(zeta) == alpha on the sphere; the Clark density is not defined there.
CLARKLAB_DEFINE_ERROR(ContactPointError, kNumerical)
// A solution of phi(zeta) = alpha for an inner symbol left the circle.
CLARKLAB_DEFINE_ERROR(RootOffCircleError, kNumerical)
CLARKLAB_DEFINE_ERROR(ConstantSliceError, kNumerical)
CLARKLAB_DEFINE_ERROR(ExcludedTargetError, kNumerical)
CLARKLAB_DEFINE_ERROR(InsufficientResolutionError, kNumerical)
CLARKLAB_DEFINE_ERROR(RootSolveError, kNumerical)
CLARKLAB_DEFINE_ERROR(InvalidArgumentError, kValidation)
CLARKLAB_DEFINE_ERROR(IoError, kIo)

#undef CLARKLAB_DEFINE_ERROR

}  // namespace clarklab

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace affgrass {

/// Base class for every typed failure raised by the library. The CLI maps
/// these to exit code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept = 0;
};

#define AFFGRASS_DOMAIN_ERROR(Name)                                   \
  class Name : public DomainError {                                   \
   public:                                                            \
    using DomainError::DomainError;                                   \
    std::string_view kind() const noexcept override { return #Name; } \
  }

AFFGRASS_DOMAIN_ERROR(ShapeMismatch);
AFFGRASS_DOMAIN_ERROR(SingularMatrix);
AFFGRASS_DOMAIN_ERROR(ZeroPolynomial);
AFFGRASS_DOMAIN_ERROR(ZeroMatrix);
AFFGRASS_DOMAIN_ERROR(DimensionMismatch);
AFFGRASS_DOMAIN_ERROR(DependentSpan);
AFFGRASS_DOMAIN_ERROR(PreconditionViolation);
AFFGRASS_DOMAIN_ERROR(DegeneratePointSet);
AFFGRASS_DOMAIN_ERROR(VerticalLine);
AFFGRASS_DOMAIN_ERROR(VerticalHyperplane);
AFFGRASS_DOMAIN_ERROR(ParallelPlanes);
AFFGRASS_DOMAIN_ERROR(IdenticalPlanes);
AFFGRASS_DOMAIN_ERROR(BudgetExhausted);
AFFGRASS_DOMAIN_ERROR(NotCovered);
AFFGRASS_DOMAIN_ERROR(InsufficientScales);
AFFGRASS_DOMAIN_ERROR(ParseError);

#undef AFFGRASS_DOMAIN_ERROR

}  // namespace affgrass

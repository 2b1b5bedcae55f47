#pragma once

#include <stdexcept>
#include <string>

namespace turingcert {

// Every failure the library can signal derives from this, so callers that
// classify cells can catch one type and mark the cell Undetermined.
class CertError : public std::runtime_error {
 public:
  CertError(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define TURINGCERT_ERROR(Name)                                            \
  class Name : public CertError {                                         \
   public:                                                                \
    explicit Name(const std::string& what = "") : CertError(#Name, what) {} \
  }

TURINGCERT_ERROR(InvalidInterval);
TURINGCERT_ERROR(DivisionByZeroInterval);
TURINGCERT_ERROR(NegativeBase);
TURINGCERT_ERROR(InvalidProblem);
TURINGCERT_ERROR(ConfigError);
TURINGCERT_ERROR(ConvergenceFailure);
TURINGCERT_ERROR(NotVerifiablyInvertible);
TURINGCERT_ERROR(DimensionMismatch);
TURINGCERT_ERROR(NoThresholdFound);
TURINGCERT_ERROR(ComplexLeadingEigenvalue);
TURINGCERT_ERROR(TruncationTooSmall);
TURINGCERT_ERROR(SingularDenominator);
TURINGCERT_ERROR(ContractionFails);
TURINGCERT_ERROR(NeumannSeriesDiverges);
TURINGCERT_ERROR(CannotCertifyUniqueness);

#undef TURINGCERT_ERROR

}  // namespace turingcert

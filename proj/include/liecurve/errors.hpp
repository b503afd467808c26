#pragma once

#include <stdexcept>
#include <string>

namespace liecurve {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define LIECURVE_ERROR(NAME)                      \
  struct NAME : Error {                           \
    explicit NAME(const std::string& msg = #NAME) \
        : Error(std::string(#NAME) + ": " + msg) {}  \
  }

LIECURVE_ERROR(DimensionMismatch);
LIECURVE_ERROR(SingularMatrix);
LIECURVE_ERROR(NotPositiveDefinite);
LIECURVE_ERROR(NotAdapted);
LIECURVE_ERROR(NotHermitian);
LIECURVE_ERROR(NotAbelian);
LIECURVE_ERROR(NotUnimodular);
LIECURVE_ERROR(ZeroBracket);
LIECURVE_ERROR(NotAnIdeal);
LIECURVE_ERROR(NotAbelianIdeal);
LIECURVE_ERROR(InvalidCartan);
LIECURVE_ERROR(HypothesisViolated);
LIECURVE_ERROR(UnknownEntry);
LIECURVE_ERROR(NonFiniteRHS);
LIECURVE_ERROR(StepsizeUnderflow);
LIECURVE_ERROR(ConfigError);

#undef LIECURVE_ERROR

}  // namespace liecurve

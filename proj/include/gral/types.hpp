#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gral {

using cdouble = std::complex<double>;

/// Global multiplier applied to all tolerances (CLI --tolerance-scale).
inline double& tolerance_scale() {
  static double scale = 1.0;
  return scale;
}

/// Gram-Schmidt pivot threshold.
inline double eps_rank() { return 1e-9 * tolerance_scale(); }
/// Relative subspace-membership threshold.
inline double eps_member() { return 1e-8 * tolerance_scale(); }
/// Structure-constant associativity threshold.
inline double eps_assoc() { return 1e-10 * tolerance_scale(); }

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GRAL_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                          \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

GRAL_DEFINE_ERROR(NotLatinSquare);
GRAL_DEFINE_ERROR(NotAssociative);
GRAL_DEFINE_ERROR(NoIdentity);
GRAL_DEFINE_ERROR(NoInverse);
GRAL_DEFINE_ERROR(OrderBoundExceeded);
GRAL_DEFINE_ERROR(DimBoundExceeded);
GRAL_DEFINE_ERROR(ParentMismatch);
GRAL_DEFINE_ERROR(NotAbelian);
GRAL_DEFINE_ERROR(NotCentral);
GRAL_DEFINE_ERROR(ZeroElement);
GRAL_DEFINE_ERROR(CentralPartNotCentral);
GRAL_DEFINE_ERROR(SandwichViolation);
GRAL_DEFINE_ERROR(DegenerateSpectrum);
GRAL_DEFINE_ERROR(OrthogonalityFailure);
GRAL_DEFINE_ERROR(CrossCheckMismatch);
GRAL_DEFINE_ERROR(NonUnital);
GRAL_DEFINE_ERROR(InvalidInput);

#undef GRAL_DEFINE_ERROR

}  // namespace gral

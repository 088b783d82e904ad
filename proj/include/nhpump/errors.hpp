#pragma once

#include <stdexcept>
#include <string>

namespace nhpump {

/// Base class for recoverable numerical-domain failures (gap closures,
/// degenerate GBZ, integrator breakdown). `name()` is the stable identifier
/// printed by the command-line front end.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
};

#define NHPUMP_DOMAIN_ERROR(Type)                                   \
  class Type : public DomainError {                                 \
   public:                                                          \
    using DomainError::DomainError;                                 \
    const char* name() const noexcept override { return #Type; }   \
  }

// |mu| == gamma: GBZ radius is zero or undefined.
NHPUMP_DOMAIN_ERROR(DegenerateGBZ);
// |E| <= ep_tol: eigenvectors coalesce.
NHPUMP_DOMAIN_ERROR(ExceptionalPoint);
// t2(t) == 0: the beta-dependence of E^2 vanishes.
NHPUMP_DOMAIN_ERROR(DegenerateDrive);
NHPUMP_DOMAIN_ERROR(DegeneratePhi);
NHPUMP_DOMAIN_ERROR(AdmissibilityViolation);
NHPUMP_DOMAIN_ERROR(GaplessSpectrum);
NHPUMP_DOMAIN_ERROR(NotConverged);
NHPUMP_DOMAIN_ERROR(NoConvergence);

#undef NHPUMP_DOMAIN_ERROR

/// Biorthogonal overlap of an evolved pair drifted away from one.
class OverlapCollapse : public DomainError {
 public:
  OverlapCollapse(const std::string& what, double momentum)
      : DomainError(what), momentum_(momentum) {}
  const char* name() const noexcept override { return "OverlapCollapse"; }
  double momentum() const noexcept { return momentum_; }

 private:
  double momentum_;
};

}  // namespace nhpump

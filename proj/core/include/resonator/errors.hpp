#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace resonator {

// Base class for all toolkit errors. `code()` is a stable machine-readable
// identifier; the CLI prints it verbatim so scripts can branch on it.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define RESONATOR_DEFINE_ERROR(Name)                           \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

// schottky
RESONATOR_DEFINE_ERROR(OverlappingDisks);
RESONATOR_DEFINE_ERROR(MappingMismatch);
RESONATOR_DEFINE_ERROR(NonUnitDeterminant);
RESONATOR_DEFINE_ERROR(PoleHit);
RESONATOR_DEFINE_ERROR(BranchObstruction);
RESONATOR_DEFINE_ERROR(SizeLimit);
// thermo
RESONATOR_DEFINE_ERROR(NoConvergence);
RESONATOR_DEFINE_ERROR(BracketFailure);
RESONATOR_DEFINE_ERROR(NegativeWeight);
// groups
RESONATOR_DEFINE_ERROR(NotClosed);
RESONATOR_DEFINE_ERROR(TooLarge);
RESONATOR_DEFINE_ERROR(DecompositionFailure);
// wordops
RESONATOR_DEFINE_ERROR(TrivialComponentPresent);
RESONATOR_DEFINE_ERROR(NotIrreducible);
// transfer
RESONATOR_DEFINE_ERROR(NoUnitEigenvalue);
RESONATOR_DEFINE_ERROR(SingularAtPoint);
// zeta
RESONATOR_DEFINE_ERROR(ContourAmbiguity);
RESONATOR_DEFINE_ERROR(NewtonDivergence);
RESONATOR_DEFINE_ERROR(ConvergenceDomain);
// cli
RESONATOR_DEFINE_ERROR(ConfigMismatch);
RESONATOR_DEFINE_ERROR(ConfigError);

#undef RESONATOR_DEFINE_ERROR

}  // namespace resonator

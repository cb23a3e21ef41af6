#pragma once

#include <stdexcept>
#include <string>

namespace cf {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
  std::string key;
  ConfigError(const std::string& what, std::string key_ = {})
      : Error(what), key(std::move(key_)) {}
};

// Numerical failures map to CLI exit code 2.
struct NumericalError : Error {
  using Error::Error;
};

struct NoBifurcation : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateBifurcation : NumericalError {
  using NumericalError::NumericalError;
};
struct ZeroEpsilon : NumericalError {
  using NumericalError::NumericalError;
};
struct UnsupportedOrder : NumericalError {
  using NumericalError::NumericalError;
};

struct NoConvergence : NumericalError {
  int iterations = 0;
  double final_residual = 0.0;
  NoConvergence(const std::string& what, int iters, double resid)
      : NumericalError(what), iterations(iters), final_residual(resid) {}
};
struct SingularJacobian : NumericalError {
  using NumericalError::NumericalError;
};
struct NotSaddleFocus : NumericalError {
  using NumericalError::NumericalError;
};
struct IntegratorBlowup : NumericalError {
  using NumericalError::NumericalError;
};
struct TrackingLost : NumericalError {
  using NumericalError::NumericalError;
};
struct WindowTooSmall : NumericalError {
  using NumericalError::NumericalError;
};
struct FitIllConditioned : NumericalError {
  using NumericalError::NumericalError;
};
struct Blowup : NumericalError {
  using NumericalError::NumericalError;
};
struct DomainTooSmall : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace cf

#pragma once

#include <stdexcept>
#include <string>

namespace kgnu {

/// Base of every error raised by the library. Carries a stable code string
/// used by the CLI for messages and by tests for matching.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string &what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string &code() const noexcept { return code_; }

private:
  std::string code_;
};

/// A deformed hyperbolic denominator vanishes. `location` is the analytic
/// position of the pole in the caller's coordinate.
class PoleAtX : public Error {
public:
  PoleAtX(double location, const std::string &what)
      : Error("PoleAtX", what), location_(location) {}
  double location() const noexcept { return location_; }

private:
  double location_;
};

class DomainViolation : public Error {
public:
  explicit DomainViolation(const std::string &what) : Error("DomainViolation", what) {}
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string &what) : Error("InvalidArgument", what) {}
};

// nu_engine
class NoRealKappa : public Error {
public:
  explicit NoRealKappa(const std::string &what) : Error("NoRealKappa", what) {}
};
class DegenerateSigma : public Error {
public:
  explicit DegenerateSigma(const std::string &what) : Error("DegenerateSigma", what) {}
};
class NotPerfectSquare : public Error {
public:
  explicit NotPerfectSquare(const std::string &what) : Error("NotPerfectSquare", what) {}
};
class NoAdmissibleBranch : public Error {
public:
  explicit NoAdmissibleBranch(const std::string &what)
      : Error("NoAdmissibleBranch", what) {}
};
class UnsupportedSigmaClass : public Error {
public:
  explicit UnsupportedSigmaClass(const std::string &what)
      : Error("UnsupportedSigmaClass", what) {}
};

// kg_core
class DiscriminantNegative : public Error {
public:
  explicit DiscriminantNegative(const std::string &what)
      : Error("DiscriminantNegative", what) {}
};
class DegenerateLevel : public Error {
public:
  explicit DegenerateLevel(const std::string &what) : Error("DegenerateLevel", what) {}
};
class NotPhysical : public Error {
public:
  explicit NotPhysical(const std::string &what) : Error("NotPhysical", what) {}
};

// variants
class InvalidVariantParams : public Error {
public:
  explicit InvalidVariantParams(const std::string &what)
      : Error("InvalidVariantParams", what) {}
};

// oracle
class NoRoot : public Error {
public:
  explicit NoRoot(const std::string &what) : Error("NoRoot", what) {}
};

} // namespace kgnu

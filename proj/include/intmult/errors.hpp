#pragma once

#include <stdexcept>
#include <string>

namespace intmult {

// Base class for every failure raised by the library. `code()` is a stable
// machine-readable tag used by the CLI when it reports errors as JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error("resource_limit", what) {}
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double worst_residual)
      : Error("non_convergence", what), worst_residual_(worst_residual) {}

  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

class OrbitError : public Error {
 public:
  explicit OrbitError(const std::string& what) : Error("orbit_error", what) {}
};

class ToleranceTooSmall : public Error {
 public:
  explicit ToleranceTooSmall(const std::string& what) : Error("tolerance_too_small", what) {}
};

class SearchExhausted : public Error {
 public:
  explicit SearchExhausted(const std::string& what) : Error("search_exhausted", what) {}
};

class VerificationFailure : public Error {
 public:
  explicit VerificationFailure(const std::string& what) : Error("verification_failure", what) {}
};

class ContractionFailure : public Error {
 public:
  explicit ContractionFailure(const std::string& what) : Error("contraction_failure", what) {}
};

}  // namespace intmult

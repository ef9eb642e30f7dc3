#pragma once

#include <stdexcept>
#include <string>

namespace advcal {

// Malformed loss parameters (e.g. rho <= 0) or a declared property that
// fails its numerical verifier.
struct InvalidLossError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the operation's domain (eta outside [0,1], l > u,
// dimension mismatch, gamma outside (0,1), empty sample, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The requested analytic reduction does not apply to this loss/family
// combination (e.g. sup evaluation of a loss not declared non-increasing).
struct UnsupportedReductionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brute-force paths are restricted to d in {1,2}.
struct UnsupportedDimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation not defined for this hypothesis family (e.g. region tags for glm).
struct UnsupportedFamilyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid experiment / CLI configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace advcal

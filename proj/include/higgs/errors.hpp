#pragma once

#include <stdexcept>
#include <string>

namespace higgs {

// Malformed input files or datum invariant violations discovered while parsing.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arguments outside an operation's domain: shape mismatches, singular gauge
// factors, metrics that are not Hermitian positive definite.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical breakdowns that must never be silent: eigensolver
// non-convergence, joint eigenspace clusters that refuse to separate.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested a construction that only exists for polystable data.
struct NotPolystableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested a certificate that only exists for Yang-Mills metrics.
struct NotYangMillsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace higgs

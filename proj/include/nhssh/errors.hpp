#pragma once

#include <stdexcept>
#include <string>

namespace nhssh {

// Pauli index outside 0..3.
class InvalidTerm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Lattice sizes that cannot be assembled (zero cells, or a periodic axis with one cell).
class InvalidLattice : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigensolver or root-finder failure. The label says where (e.g. "k=(0.1,0.2)").
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::string label)
      : std::runtime_error(label.empty() ? what : what + " at " + label),
        label_(std::move(label)) {}

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

// Malformed analysis input: missing localization data, bad grouping, empty filter result,
// reference energy on the spectrum, and so on.
class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nhssh

namespace nhssh {

// Spectral winding: a per-step phase jump too large to unwind at the given resolution.
class PhaseUnwindingError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

// Characteristic polynomial whose leading or trailing coefficient collapsed.
class DegeneratePolynomial : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

}  // namespace nhssh

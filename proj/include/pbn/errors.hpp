// Error types shared across the library. Every precondition violation maps to
// one of these so callers (and tests) can distinguish failure modes.

#pragma once

#include <stdexcept>
#include <string>

namespace pbn {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Conditioning on a zero-mass (or empty) event: P(.|B) is undefined there.
class ConditioningError : public Error {
 public:
  explicit ConditioningError(const std::string& what) : Error(what) {}
};

// Mismatched sizes: observable vs space, matrix vs vector, arity mismatch.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// Masses / amplitudes that fail their normalization contract.
class NormalizationError : public Error {
 public:
  explicit NormalizationError(const std::string& what) : Error(what) {}
};

// Transition kernels require t2 > t1.
class TimeOrderError : public Error {
 public:
  explicit TimeOrderError(const std::string& what) : Error(what) {}
};

// Invalid solver / algorithm configuration (e.g. FTCS stability violation).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Model-level inconsistency (non-commuting split Hamiltonian, bad generator).
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(what) {}
};

// Heisenberg picture needs an invertible propagator; discrete chains with
// singular P report this instead of silently pseudo-inverting.
class SingularPropagatorError : public Error {
 public:
  explicit SingularPropagatorError(const std::string& what) : Error(what) {}
};

// Malformed input file; message carries the line number where known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace pbn

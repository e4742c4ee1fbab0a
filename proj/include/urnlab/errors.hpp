#pragma once

#include <stdexcept>
#include <string>

namespace urnlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyMeasureError : public Error {
 public:
  explicit EmptyMeasureError(const std::string& what) : Error(what) {}
};

/// No exact route exists to integrate this function against this measure.
class UnsupportedPairError : public Error {
 public:
  explicit UnsupportedPairError(const std::string& what) : Error(what) {}
};

class ColorSpaceError : public Error {
 public:
  explicit ColorSpaceError(const std::string& what) : Error(what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(what) {}
};

/// Declared innovation intensities are not of the form a(s) * mu.
class FactorizationError : public Error {
 public:
  explicit FactorizationError(const std::string& what) : Error(what) {}
};

class InexactIntegralError : public Error {
 public:
  explicit InexactIntegralError(const std::string& what) : Error(what) {}
};

/// Broken urn bookkeeping (a multiplicity would become negative, etc).
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what) : Error(what) {}
};

class InsufficientReplicasError : public Error {
 public:
  explicit InsufficientReplicasError(const std::string& what) : Error(what) {}
};

class BudgetExceededError : public Error {
 public:
  explicit BudgetExceededError(const std::string& what) : Error(what) {}
};

}  // namespace urnlab

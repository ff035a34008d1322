#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace oqe {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad signature, bad point, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Folding into the fundamental domain exceeded the word-length cap.
class FoldError : public Error {
 public:
  FoldError(const std::string& what, std::vector<int> partial_word)
      : Error(what), partial_word_(std::move(partial_word)) {}

  /// Reflection letters (side indices) applied before giving up.
  const std::vector<int>& partial_word() const noexcept { return partial_word_; }

 private:
  std::vector<int> partial_word_;
};

/// Integration produced a non-finite value.
class NumericalBlowup : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class EigenSolverError : public Error {
 public:
  enum class Kind { indefinite_mass, factorization_failed, not_converged };

  EigenSolverError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class UnsupportedObservable : public Error {
 public:
  using Error::Error;
};

class UnsupportedBackend : public Error {
 public:
  using Error::Error;
};

/// A finite-part evaluation hit a pole (integer order with a degree -n term).
class PoleError : public Error {
 public:
  using Error::Error;
};

/// The zeta tail model did not converge or the extrapolation is unstable.
class ZetaTailError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oqe

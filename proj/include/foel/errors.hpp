#ifndef FOEL_ERRORS_HPP
#define FOEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace foel {

// Base of every error thrown by the library. The CLI maps the concrete
// type onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSizeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class SectorError : public Error {
 public:
  using Error::Error;
};

class SymmetryViolationError : public Error {
 public:
  using Error::Error;
};

enum class TreeErrorKind {
  kCycle,
  kDisconnected,
  kDuplicateEdge,
  kRootOutOfRange,
  kVertexOutOfRange,
  kSelfLoop,
};

class TreeError : public Error {
 public:
  TreeError(TreeErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  TreeErrorKind kind() const noexcept { return kind_; }

 private:
  TreeErrorKind kind_;
};

// A numerically derived quantity disagrees with a count known in closed form.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IndependenceViolationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ComplexSpectrumError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace foel

#endif  // FOEL_ERRORS_HPP

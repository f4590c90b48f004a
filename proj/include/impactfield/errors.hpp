#pragma once

#include <stdexcept>
#include <string>

namespace impactfield {

/// Broad failure classes. The CLI maps each to a process exit code.
enum class ErrorClass { kValidation = 1, kParse = 2, kNumerical = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorClass::kValidation, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorClass::kParse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorClass::kNumerical, what) {}
};

/// Raised when W cannot be normalized because rho(A) = 0.
class NormalizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what + " (achieved residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DefectivenessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double condition_estimate)
      : NumericalError(what + " (condition estimate " + std::to_string(condition_estimate) + ")"),
        condition_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Imaginary residue of a spectral sum exceeded tolerance: a mode set was not conjugate-closed.
class ConjugateClosureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace impactfield

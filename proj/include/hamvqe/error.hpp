#pragma once

#include <stdexcept>
#include <string>

namespace hamvqe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (Pauli labels, bitstrings, ansatz names).
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t position)
        : Error(what + " (position " + std::to_string(position) + ")"), position_(position) {}
    [[nodiscard]] std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A lambda query outside the family's grid box.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A family file that does not match the schema.
class SchemaError : public Error {
  public:
    using Error::Error;
};

class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Non-finite energies, non-Hermitian residues, non-conserving operators.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Raised by the continuation predictor when the Hessian cannot be inverted.
class SingularMatrixError : public NumericalError {
  public:
    SingularMatrixError(const std::string &what, double condition)
        : NumericalError(what), condition_(condition) {}
    [[nodiscard]] double condition() const noexcept { return condition_; }

  private:
    double condition_;
};

} // namespace hamvqe

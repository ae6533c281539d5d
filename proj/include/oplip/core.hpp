#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace oplip {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix that should be self-adjoint is not (within tolerance).
class SymmetryError : public Error {
 public:
  using Error::Error;
};

// Argument outside the set on which an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied object broke a stated contract (e.g. a map that is not linear).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Quadrature could not reach the requested accuracy with the given grid or budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oplip

#pragma once

#include <stdexcept>
#include <string>

namespace schrocap {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mesh resolution below the minimum the model supports.
class InvalidResolutionError : public Error {
public:
  using Error::Error;
};

/// Vertex index outside [0, n_vertices).
class IndexError : public Error {
public:
  using Error::Error;
};

/// Vector/matrix dimensions do not match.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Standing assumption violated (potential must satisfy min V > 0 and be bounded).
class AssumptionError : public Error {
public:
  using Error::Error;
};

/// Requested more eigenpairs than the pencil dimension allows.
class SizeError : public Error {
public:
  using Error::Error;
};

/// Iterative solver did not reach the requested residual tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Dirichlet excision removed every degree of freedom.
class EmptyDomainError : public Error {
public:
  using Error::Error;
};

/// Numerical degeneracy (singular solve, division by a vanishing quantity).
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Manifold carries no construction record, so it cannot be refined.
class RefineError : public Error {
public:
  using Error::Error;
};

/// Configuration file rejected; the message names the offending key.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Not enough data points to produce an estimate.
class InsufficientDataError : public Error {
public:
  using Error::Error;
};

/// Filesystem failure; the message carries the path.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace schrocap

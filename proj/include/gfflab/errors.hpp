#pragma once

#include <stdexcept>
#include <string>

namespace gfflab {

/// Caller violated a documented precondition (bad level, empty batch, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense representation requested above the configured cap.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Boundary data for a Dirichlet solve is missing, duplicated or misplaced.
class BoundaryDataError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RegionShapeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Cholesky failed; the covariance handed in was not positive definite.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridCoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persisted rows disagree with the requested configuration.
class ResumeMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gfflab

#pragma once

#include <stdexcept>
#include <string>

namespace kver {

// Metric evaluation produced a matrix that is not safely positive definite.
struct SingularMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigenvalue clustering failed: the two expected groups are closer than gap_tol.
struct DegenerateSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quantity of the form d log|mu| was requested where |mu| is below tolerance.
struct MuVanishes : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-difference step failed the quadratic-convergence (Richardson) check.
struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotKahler : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotHamiltonian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotKilling : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProfileInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A field was asked for more derivative levels than its construction supports.
struct UnsupportedOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kver

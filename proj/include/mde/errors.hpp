#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mde {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMeasure : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class MassMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyMeasure : public Error {
 public:
  using Error::Error;
};

class NotProbability : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class InitialDataIdentical : public Error {
 public:
  using Error::Error;
};

class NonMeshTime : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An atom fell outside the bounded lattice [-N, N]^d. The scheme cannot
/// continue at this N; `suggested_n` is filled in by the solver when a priori
/// bounds are available (0 otherwise).
class AtomOutsideMesh : public Error {
 public:
  enum class Grid { Space, Velocity };

  AtomOutsideMesh(Grid grid, std::size_t atom, double coordinate, int n,
                  const std::string& msg)
      : Error(msg), grid(grid), atom(atom), coordinate(coordinate), n(n) {}

  Grid grid;
  std::size_t atom;
  double coordinate;
  int n;
  int suggested_n = 0;
  double time = 0.0;
};

}  // namespace mde

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace purikit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The chemical potential does not lie strictly inside the spectral bounds,
/// so the guess cannot be scaled into [0,1].
class InvalidChemicalPotential : public Error {
 public:
  using Error::Error;
};

/// Tr[D(I-D)] fell below the degeneracy floor; c is undefined.
class DegenerateTraces : public Error {
 public:
  using Error::Error;
};

/// eps_N and eps_{N+1} coincide, the ground-state projector is ill-defined.
class DegenerateFrontier : public Error {
 public:
  using Error::Error;
};

class EigenNonConvergence : public Error {
 public:
  using Error::Error;
};

class NonPhysicalState : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace purikit

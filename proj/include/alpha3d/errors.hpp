#pragma once

#include <stdexcept>
#include <string>

namespace alpha3d {

/// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (e.g. repeated point indices).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A radius or attachment query on a simplex whose vertices are affinely dependent.
class DegenerateSimplexError : public Error {
 public:
  using Error::Error;
};

/// Malformed, duplicated or too small point input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The whole input is flat: every tetrahedron has zero volume.
class DegenerateInputError : public Error {
 public:
  DegenerateInputError(int affine_rank, const std::string& what)
      : Error(what), affine_rank_(affine_rank) {}

  int affine_rank() const noexcept { return affine_rank_; }

 private:
  int affine_rank_;
};

/// An alpha value that coincides with a spectrum threshold.
class OnThresholdError : public Error {
 public:
  using Error::Error;
};

/// Something that must be unreachable was reached.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace alpha3d

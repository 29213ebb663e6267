#pragma once

#include <stdexcept>
#include <string>

namespace mixpose {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point fell outside the grid extent where the operation requires it inside.
struct OutOfBoundsError : Error {
  using Error::Error;
};

/// A smoothing kernel cannot be resolved on the grid (sigma too small).
struct DegenerateKernelError : Error {
  using Error::Error;
};

/// An object model does not satisfy the requirements of the operation.
struct InvalidModelError : Error {
  using Error::Error;
};

/// The objective is identically zero around the start pose; optimization
/// cannot make progress.
struct NoOverlapError : Error {
  using Error::Error;
};

/// Command line usage error; maps to exit status 2.
struct UsageError : Error {
  using Error::Error;
};

/// File input/output failure; maps to exit status 4.
struct IoError : Error {
  using Error::Error;
};

}  // namespace mixpose

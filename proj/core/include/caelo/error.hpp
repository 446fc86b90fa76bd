#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace caelo {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pitch of an XYZ Euler decomposition is too close to +-90 degrees.
class GimbalLockError : public Error {
 public:
  using Error::Error;
};

/// Malformed text or binary input. Carries the 1-based line when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Tensor shape does not fit a layer or network.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Weight file was written for a different architecture.
class FingerprintError : public Error {
 public:
  using Error::Error;
};

/// Training loss became NaN or infinite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Correspondences are collinear or otherwise rank deficient.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// RANSAC could not produce a single model.
class NoModelError : public Error {
 public:
  using Error::Error;
};

/// Read of a ring pixel that holds no point.
class InvalidPixelError : public Error {
 public:
  using Error::Error;
};

}  // namespace caelo

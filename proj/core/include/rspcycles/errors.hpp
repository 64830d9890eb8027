#pragma once

#include <stdexcept>
#include <string>

namespace rsp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: parameters outside (-1, 1), points off the simplex, bad
/// resolutions and similar precondition violations.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A single integration step drove a coordinate below -1e-9.
class StepRejected : public Error {
 public:
  StepRejected(double time, int coordinate, double value);

  double time() const noexcept { return time_; }
  int coordinate() const noexcept { return coordinate_; }
  double value() const noexcept { return value_; }

 private:
  double time_;
  int coordinate_;
  double value_;
};

class InvalidContext : public Error {
 public:
  using Error::Error;
};

class NotAVertex : public Error {
 public:
  using Error::Error;
};

class NodeNotInCycle : public Error {
 public:
  using Error::Error;
};

/// Section or log coordinates outside their open domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

using OutsideDomain = DomainError;

/// Routh-Hurwitz sequence undefined because the trace vanishes.
class DegenerateTrace : public Error {
 public:
  using Error::Error;
};

/// Two distinct eigenvalues share the maximum modulus; the dominant one is
/// not well defined and is left unresolved.
class TieBreak : public Error {
 public:
  using Error::Error;
};

/// Parameters lie inside the boundary band of a sign condition.
class BoundaryParams : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsp

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace projhull {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes (validation -> 2, resource caps -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation hit a pole of a partial-fraction series. `index` is the 1-based
// pole index j; for the rotated Example 2 poles `rotation` carries l.
class PoleError : public DomainError {
 public:
  PoleError(std::size_t index, std::size_t rotation = 0)
      : DomainError(make_message(index, rotation)), index_(index), rotation_(rotation) {}

  std::size_t index() const noexcept { return index_; }
  std::size_t rotation() const noexcept { return rotation_; }

 private:
  static std::string make_message(std::size_t index, std::size_t rotation) {
    std::string msg = "evaluation at pole j=" + std::to_string(index);
    if (rotation != 0) msg += " (rotation l=" + std::to_string(rotation) + ")";
    return msg;
  }

  std::size_t index_;
  std::size_t rotation_;
};

class UnsupportedPoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Requested polynomial space is too large for the curve sampling.
class DegreeCapError : public Error {
 public:
  DegreeCapError(std::size_t dim, std::size_t cap)
      : Error("degree cap violated: basis dimension " + std::to_string(dim) +
              " exceeds m/4 = " + std::to_string(cap)),
        dim_(dim),
        cap_(cap) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t dim_;
  std::size_t cap_;
};

class SingularGramError : public Error {
 public:
  using Error::Error;
};

class UnboundedLpError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string msg, double best_penalty)
      : Error(std::move(msg)), best_penalty_(best_penalty) {}
  double best_penalty() const noexcept { return best_penalty_; }

 private:
  double best_penalty_;
};

}  // namespace projhull

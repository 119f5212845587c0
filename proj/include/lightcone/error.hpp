#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lightcone {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t position, const std::string& name)
      : Error("unknown identifier '" + name + "' at position " + std::to_string(position)),
        name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class VariableOutOfRange : public Error {
 public:
  using Error::Error;
};

/// An expression was evaluated outside its domain (division by ~0, log/sqrt of a
/// nonpositive value, ...). The message names the subexpression and the point.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

class WrongSignature : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

/// The axis decomposition produced nonzero residuals where they vanish identically.
class IdentityViolation : public Error {
 public:
  using Error::Error;
};

/// |1 - sum b_i^2| fell below the threshold where the reduced ODE can be put in
/// normal form.
class SingularC : public Error {
 public:
  SingularC(double y, double c)
      : Error("singular leading coefficient C=" + std::to_string(c) + " at y=" + std::to_string(y)),
        y_(y),
        c_(c) {}
  double y() const { return y_; }
  double c() const { return c_; }

 private:
  double y_;
  double c_;
};

class NotLightLike : public Error {
 public:
  using Error::Error;
};

class ReGraphFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace lightcone

#pragma once

#include <stdexcept>
#include <string>

namespace qsu2 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a + b <= 0 or a - b <= 0: the weighted trace has no spectral dimension.
class DivergentParameters : public Error {
 public:
  using Error::Error;
};

/// Evaluation point sits on (or numerically at) a pole of the zeta function.
class PoleHit : public Error {
 public:
  PoleHit(const std::string& what, double location) : Error(what), location_(location) {}
  double location() const { return location_; }

 private:
  double location_;
};

/// b == 0 gives double poles; residues are undefined there.
class DoublePole : public Error {
 public:
  using Error::Error;
};

class GammaPole : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsu2

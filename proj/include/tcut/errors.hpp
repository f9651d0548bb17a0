#pragma once

#include <stdexcept>
#include <string>

namespace tcut {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (shape, finiteness, dwell bounds).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Eigenvalue or singular value computation did not converge.
class SpectralError : public Error {
 public:
  using Error::Error;
};

class NotHurwitz : public Error {
 public:
  using Error::Error;
};

// Collocation / cone matrix singular or too ill-conditioned for the chosen points.
class DegenerateBasis : public Error {
 public:
  using Error::Error;
};

// Doubling search for a cut-tail upper bracket exhausted its budget.
class NoUpperBracket : public Error {
 public:
  using Error::Error;
};

}  // namespace tcut

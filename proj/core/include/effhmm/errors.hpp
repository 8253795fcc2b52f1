#pragma once

#include <stdexcept>
#include <string>

namespace effhmm {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not agree (matrix sizes, alphabet sizes, stats to merge).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed input text: JSON models, CSV rows, sequence files.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data precondition (symbol out of range,
// empty class, too few frames, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Numeric degeneracy: zero-mass posteriors, degenerate ranges or boxes,
// unsamplable rows, oracle size guard.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace effhmm

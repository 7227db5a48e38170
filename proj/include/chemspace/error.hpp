#pragma once

#include <stdexcept>
#include <string>

namespace chemspace {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fingerprint widths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed input text (fingerprint strings, TSV/CSV rows, measure specs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Data that parsed but violates an invariant (duplicate id, bad matrix, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A reference-based measure was asked about a record without fragments.
class AnnotationError : public Error {
 public:
  using Error::Error;
};

// A request exceeds a configured size limit (exact #Circles cap, DPP cap).
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace chemspace

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace immersion {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at byte offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside the domain of an elementary function (log of a
/// nonpositive number, sqrt of a negative one, division by zero, overflow).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document or chart.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A parametrized hypersurface that is not a valid immersion into the model.
class ModelError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

/// A structure fails a requirement of the operation it was handed to.
class AdmissionError : public Error {
 public:
  using Error::Error;
};

}  // namespace immersion

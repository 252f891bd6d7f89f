#pragma once

#include <stdexcept>
#include <string>

namespace aif {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All-zero, negative or otherwise unnormalizable weights.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// NaN/inf values or out-of-range indices.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Vector/matrix dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A model spec file does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A model violates one or more structural invariants.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Planner or experiment configuration is inconsistent (e.g. missing state prior).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace aif

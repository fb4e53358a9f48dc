#pragma once

#include <stdexcept>
#include <string>

namespace nnac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The plant state reached a3 + x1^2 + x2^2 ~ 0.
class SingularDenominator : public Error {
 public:
  using Error::Error;
};

/// A reference was requested at a time no segment covers.
class OutOfWindow : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteOutput : public Error {
 public:
  using Error::Error;
};

class NonFinitePrediction : public Error {
 public:
  using Error::Error;
};

class NonFiniteSensitivity : public Error {
 public:
  using Error::Error;
};

/// An integration window holds fewer than two samples.
class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class RangeOutsideTrace : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario or controller configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nnac

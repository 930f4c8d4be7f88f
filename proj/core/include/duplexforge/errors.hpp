// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <stdexcept>
#include <string>

namespace duplexforge {

/// Root of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation (negative SNR, alpha > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix sizes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Physically impossible array placement (coincident elements, non-orthonormal rotation).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Malformed, inconsistent or incomplete configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A solver could not produce a finite answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace duplexforge

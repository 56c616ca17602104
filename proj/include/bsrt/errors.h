// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_ERRORS_H
#define BSRT_ERRORS_H

// Error taxonomy. Every failure mode the library can signal is a distinct
// exception type rooted at bsrt::Error, so callers (and tests) can react to
// the specific condition rather than parsing message strings.

#include <stdexcept>
#include <string>

namespace bsrt {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A query coordinate fell outside the span of a grid axis.
class OutOfDomainError : public Error {
  public:
    using Error::Error;
};

// The query point lies on the refracted beam axis (d_r = 0), where the
// dipole integrand is singular.
class DegenerateDistanceError : public Error {
  public:
    using Error::Error;
};

// A sampling routine was asked to draw from a distribution with zero total
// mass (e.g. a zero-albedo table cell).
class ZeroMassError : public Error {
  public:
    using Error::Error;
};

// An input value violated a precondition (negative or non-finite anchor
// value, invalid scene description, ...).
class InvalidInputError : public Error {
  public:
    using Error::Error;
};

// An iterative solver failed to converge within its step budget. Should be
// unreachable for well-formed parameters.
class IterationLimitError : public Error {
  public:
    using Error::Error;
};

// Serialized table stream is truncated, has a bad magic/version, declares
// mismatched dimensions, or violates a table invariant.
class TableFormatError : public Error {
  public:
    using Error::Error;
};

// Filesystem-level failure while reading or writing an artifact.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace bsrt

#endif  // BSRT_ERRORS_H

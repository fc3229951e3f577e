// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fermicorr {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix entries contain NaN or Inf.
struct NotFiniteError : Error {
    using Error::Error;
};

/// Input is further from Hermitian than the construction tolerance admits.
struct NotHermitianError : Error {
    using Error::Error;
};

/// Iterative diagonalization failed to converge within the sweep budget.
struct IterationLimitExceededError : Error {
    using Error::Error;
};

/// A diagonal entry required to be strictly positive is not (an unilluminated
/// detector in kernel terms).
struct ZeroDiagonalError : Error {
    explicit ZeroDiagonalError(int i)
        : Error("diagonal entry " + std::to_string(i) + " is not strictly positive"), index(i) {}
    int index;
};

/// The matrix is indefinite where positive semidefiniteness is a hypothesis.
struct NotPsdError : Error {
    using Error::Error;
};

/// Dimension exceeds the limit of an enumeration-based routine.
struct DimensionTooLargeError : Error {
    using Error::Error;
};

/// Energy bandwidth must be strictly positive.
struct NonPositiveBandwidthError : Error {
    using Error::Error;
};

/// A constructed coherence kernel failed the positive-semidefiniteness check.
struct KernelNotPsdError : Error {
    explicit KernelNotPsdError(double min_eig)
        : Error("kernel is not positive semidefinite (min eigenvalue " + std::to_string(min_eig) + ")"),
          min_eigenvalue(min_eig) {}
    double min_eigenvalue;
};

/// Index selection is out of range, empty, or contains duplicates.
struct IndexOutOfRangeError : Error {
    using Error::Error;
};

/// The short-interval detection probability would exceed one.
struct ProbabilityOverflowError : Error {
    using Error::Error;
};

/// Partition blocks are empty, overlapping, or do not cover the index set.
struct InvalidPartitionError : Error {
    using Error::Error;
};

/// Set-partition sweep requested beyond the supported order.
struct TooManyPartitionsError : Error {
    using Error::Error;
};

/// Sampling-kernel spectrum left [0, 1] beyond snapping tolerance, or the
/// per-bin occupancy precondition was violated.
struct SpectrumOutOfRangeError : Error {
    SpectrumOutOfRangeError(const std::string& msg, double offending)
        : Error(msg), offending_eigenvalue(offending) {}
    double offending_eigenvalue;
};

/// Numerical breakdown while deflating the projection kernel (near-duplicate
/// grid points).
struct DeflationBreakdownError : Error {
    using Error::Error;
};

/// Malformed or physically invalid configuration input.
struct InvalidConfigError : Error {
    using Error::Error;
};

/// Filesystem read/write failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace fermicorr

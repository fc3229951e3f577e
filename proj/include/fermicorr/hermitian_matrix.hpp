// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "fermicorr/errors.hpp"

namespace fermicorr {

template <class Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/**
 * Dense complex square matrix carrying a Hermitian contract.
 *
 * Any dense expression within kHermitianTol (relative to the largest entry
 * magnitude) of Hermitian is accepted and symmetrized as (A + A^H)/2, which
 * makes entries(i,j) == conj(entries(j,i)) hold exactly; the diagonal is
 * pinned to be exactly real. Inputs violating the tolerance are rejected,
 * as are non-finite entries. Instances are immutable after construction.
 */
template <class Real>
class HermitianMatrix {
public:
    using Scalar = std::complex<Real>;
    using Matrix = ComplexMatrix<Real>;

    /// Construction tolerance on max|A - A^H| relative to max|A|.
    static constexpr Real kHermitianTol = Real(1e-12);

    template <class Derived>
    explicit HermitianMatrix(const Eigen::MatrixBase<Derived>& a) : m_(a) {
        if (m_.rows() != m_.cols() || m_.rows() < 1) {
            throw NotHermitianError("Hermitian matrix must be square with dim >= 1");
        }
        if (!m_.allFinite()) {
            throw NotFiniteError("matrix entries must be finite");
        }
        const Real scale = m_.cwiseAbs().maxCoeff();
        const Real violation = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (violation > kHermitianTol * scale) {
            throw NotHermitianError("matrix is not Hermitian: max|A - A^H| = " +
                                    std::to_string(static_cast<double>(violation)) +
                                    " exceeds tolerance " +
                                    std::to_string(static_cast<double>(kHermitianTol * scale)));
        }
        Matrix symmetrized = (m_ + m_.adjoint()) / Real(2);
        m_ = std::move(symmetrized);
        for (Eigen::Index i = 0; i < m_.rows(); ++i) {
            m_(i, i) = Scalar(std::real(m_(i, i)), Real(0));
        }
    }

    static HermitianMatrix identity(int dim) { return HermitianMatrix(Matrix::Identity(dim, dim)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& mat() const { return m_; }
    Scalar operator()(int i, int j) const { return m_(i, j); }

    /// Largest entry magnitude; the scale used by relative tolerances.
    Real max_abs() const { return m_.cwiseAbs().maxCoeff(); }

private:
    Matrix m_;
};

using HermitianXcd = HermitianMatrix<double>;

/// Principal submatrix on the given (distinct, in-range) indices.
template <class Real>
HermitianMatrix<Real> submatrix(const HermitianMatrix<Real>& a, const std::vector<int>& indices) {
    if (indices.empty()) {
        throw IndexOutOfRangeError("index selection must be nonempty");
    }
    std::vector<bool> seen(static_cast<std::size_t>(a.dim()), false);
    for (int i : indices) {
        if (i < 0 || i >= a.dim()) {
            throw IndexOutOfRangeError("index " + std::to_string(i) + " outside [0, " +
                                       std::to_string(a.dim()) + ")");
        }
        if (seen[static_cast<std::size_t>(i)]) {
            throw IndexOutOfRangeError("duplicate index " + std::to_string(i));
        }
        seen[static_cast<std::size_t>(i)] = true;
    }
    return HermitianMatrix<Real>(a.mat()(indices, indices));
}

/**
 * Maps A to a = (a_ij) with a_ij = A_ij / sqrt(A_ii A_jj): every diagonal
 * entry becomes exactly one and Hermiticity is preserved. Requires a strictly
 * positive diagonal; a nonpositive entry names an unilluminated detector and
 * raises ZeroDiagonalError.
 */
template <class Real>
HermitianMatrix<Real> unit_diagonal_normalize(const HermitianMatrix<Real>& a) {
    using Scalar = std::complex<Real>;
    const int n = a.dim();
    RealVector<Real> root_diag(n);
    for (int i = 0; i < n; ++i) {
        const Real d = std::real(a(i, i));
        if (!(d > Real(0))) {
            throw ZeroDiagonalError(i);
        }
        root_diag[i] = std::sqrt(d);
    }
    ComplexMatrix<Real> out(n, n);
    for (int i = 0; i < n; ++i) {
        out(i, i) = Scalar(Real(1), Real(0));
        for (int j = i + 1; j < n; ++j) {
            const Scalar v = a(i, j) / (root_diag[i] * root_diag[j]);
            out(i, j) = v;
            out(j, i) = std::conj(v);
        }
    }
    return HermitianMatrix<Real>(out);
}

}  // namespace fermicorr

// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "fermicorr/errors.hpp"
#include "fermicorr/hermitian_matrix.hpp"

namespace fermicorr {

/**
 * Unitary diagonalization A = U diag(w) U^H with eigenvalues w ascending and
 * eigenvectors as the columns of U. Each column's global phase is fixed by
 * making its first significant component real positive, so the decomposition
 * of a fixed input is reproducible byte for byte.
 */
template <class Real>
struct EigenDecomposition {
    RealVector<Real> eigenvalues;
    ComplexMatrix<Real> eigenvectors;
};

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };

template <class Real>
struct DefinitenessVerdict {
    Definiteness kind;
    Real min_eigenvalue;
};

/// Scale-relative tolerance separating semidefinite from indefinite spectra.
template <class Real>
Real psd_tolerance(const HermitianMatrix<Real>& a) {
    return Real(1e-10) * std::max(Real(1), a.max_abs());
}

namespace detail {

template <class Real>
Real off_diagonal_norm(const ComplexMatrix<Real>& m) {
    Real sum = Real(0);
    const int n = static_cast<int>(m.rows());
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            sum += Real(2) * std::norm(m(p, q));
        }
    }
    return std::sqrt(sum);
}

/// Multiplies each column by a unit phase so that its first component of
/// magnitude above threshold becomes real positive.
template <class Real>
void normalize_column_phases(ComplexMatrix<Real>& v) {
    using Scalar = std::complex<Real>;
    const int n = static_cast<int>(v.rows());
    for (int j = 0; j < static_cast<int>(v.cols()); ++j) {
        for (int i = 0; i < n; ++i) {
            const Real mag = std::abs(v(i, j));
            if (mag > Real(1e-12)) {
                const Scalar phase = std::conj(v(i, j)) / mag;
                v.col(j) *= phase;
                break;
            }
        }
    }
}

/// Index of the first component of column j above the phase threshold.
template <class Real>
int first_significant_index(const ComplexMatrix<Real>& v, int j) {
    for (int i = 0; i < static_cast<int>(v.rows()); ++i) {
        if (std::abs(v(i, j)) > Real(1e-12)) return i;
    }
    return static_cast<int>(v.rows());
}

/// Tie-breaker for exactly degenerate eigenvalues: order phase-normalized
/// eigenvectors by the position of their first significant component, then
/// lexicographically on (re, im) pairs. Keeps the identity matrix's
/// eigenbasis in natural order and makes the decomposition reproducible.
template <class Real>
bool column_order_less(const ComplexMatrix<Real>& v, int a, int b) {
    const int fa = first_significant_index(v, a);
    const int fb = first_significant_index(v, b);
    if (fa != fb) return fa < fb;
    for (int i = 0; i < static_cast<int>(v.rows()); ++i) {
        const auto& x = v(i, a);
        const auto& y = v(i, b);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
}

}  // namespace detail

/**
 * Cyclic Jacobi diagonalization for complex Hermitian matrices. Sweeps
 * annihilate off-diagonal entries with 2x2 unitary rotations until the
 * off-diagonal Frobenius norm falls below 1e-14 * ||A||_F; the sweep budget
 * of 100 * dim^2 only trips on pathological input.
 */
template <class Real>
EigenDecomposition<Real> eigendecompose(const HermitianMatrix<Real>& a) {
    using Scalar = std::complex<Real>;
    const int n = a.dim();
    ComplexMatrix<Real> m = a.mat();
    ComplexMatrix<Real> v = ComplexMatrix<Real>::Identity(n, n);

    const Real frobenius = m.norm();
    if (n > 1 && frobenius > Real(0)) {
        const Real target = Real(1e-14) * frobenius;
        const long max_sweeps = 100L * n * n;
        long sweep = 0;
        while (detail::off_diagonal_norm(m) > target) {
            if (++sweep > max_sweeps) {
                throw IterationLimitExceededError("Jacobi diagonalization did not converge in " +
                                                  std::to_string(max_sweeps) + " sweeps");
            }
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    if (std::abs(m(p, q)) == Real(0)) continue;
                    Eigen::JacobiRotation<Scalar> rot;
                    if (!rot.makeJacobi(std::real(m(p, p)), m(p, q), std::real(m(q, q)))) continue;
                    m.applyOnTheLeft(p, q, rot.adjoint());
                    m.applyOnTheRight(p, q, rot);
                    v.applyOnTheRight(p, q, rot);
                }
            }
        }
    }

    detail::normalize_column_phases(v);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    RealVector<Real> diag = m.diagonal().real();
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (diag[x] != diag[y]) return diag[x] < diag[y];
        return detail::column_order_less(v, x, y);
    });

    EigenDecomposition<Real> result;
    result.eigenvalues.resize(n);
    result.eigenvectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        result.eigenvalues[j] = diag[order[static_cast<std::size_t>(j)]];
        result.eigenvectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
    }
    return result;
}

/// Determinant as the product of eigenvalues (real for Hermitian input),
/// multiplied in ascending order.
template <class Real>
Real determinant(const HermitianMatrix<Real>& a) {
    const auto eig = eigendecompose(a);
    Real det = Real(1);
    for (int i = 0; i < a.dim(); ++i) {
        det *= eig.eigenvalues[i];
    }
    return det;
}

template <class Real>
DefinitenessVerdict<Real> definiteness(const HermitianMatrix<Real>& a) {
    const auto eig = eigendecompose(a);
    const Real min_eig = eig.eigenvalues[0];
    const Real tol = psd_tolerance(a);
    Definiteness kind = Definiteness::Indefinite;
    if (min_eig > tol) {
        kind = Definiteness::PositiveDefinite;
    } else if (std::abs(min_eig) <= tol) {
        kind = Definiteness::PositiveSemidefinite;
    }
    return {kind, min_eig};
}

template <class Real>
struct LemmaReport {
    bool holds;
    Real lhs;
    Real rhs;
    bool is_equality;
};

/**
 * Checks det(A) <= prod_i A_ii for a positive-(semi)definite Hermitian matrix
 * with strictly positive diagonal; equality is flagged when the two sides
 * agree within 1e-10 * rhs, which coincides with A being diagonal.
 */
template <class Real>
LemmaReport<Real> lemma_check(const HermitianMatrix<Real>& a) {
    for (int i = 0; i < a.dim(); ++i) {
        if (!(std::real(a(i, i)) > Real(0))) {
            throw ZeroDiagonalError(i);
        }
    }
    const auto eig = eigendecompose(a);
    const Real tol = psd_tolerance(a);
    if (eig.eigenvalues[0] < -tol) {
        throw NotPsdError("lemma hypothesis fails: matrix is indefinite (min eigenvalue " +
                          std::to_string(static_cast<double>(eig.eigenvalues[0])) + ")");
    }
    Real lhs = Real(1);
    for (int i = 0; i < a.dim(); ++i) {
        lhs *= eig.eigenvalues[i];
    }
    Real rhs = Real(1);
    for (int i = 0; i < a.dim(); ++i) {
        rhs *= std::real(a(i, i));
    }
    const Real eq_tol = Real(1e-10) * rhs;
    return {lhs <= rhs + eq_tol, lhs, rhs, std::abs(lhs - rhs) <= eq_tol};
}

/**
 * Permutation-sum determinant, the independent oracle for determinant().
 * Exact up to round-off but factorial in cost, hence capped at dim 8.
 */
template <class Real>
std::complex<Real> leibniz_determinant_oracle(const HermitianMatrix<Real>& a) {
    using Scalar = std::complex<Real>;
    const int n = a.dim();
    if (n > 8) {
        throw DimensionTooLargeError("Leibniz determinant limited to dim <= 8, got " +
                                     std::to_string(n));
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Scalar sum(Real(0), Real(0));
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
            }
        }
        Scalar term(Real(1), Real(0));
        for (int i = 0; i < n; ++i) {
            term *= a(i, perm[static_cast<std::size_t>(i)]);
        }
        sum += (inversions % 2 == 0) ? term : -term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

}  // namespace fermicorr

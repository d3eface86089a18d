#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "foulwall/errors.hpp"

namespace foulwall::detail {

// Gaussian elimination with partial pivoting for small square systems.
// A is row-major n x n; b has length n. Returns x.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0.0)
            throw SingularSystemError("dense system is singular");
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[piv * n + k], A[col * n + k]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) A[r * n + k] -= f * A[col * n + k];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * x[k];
        x[i] = s / A[i * n + i];
    }
    return x;
}

// Householder QR least-squares solve of min ||A x - b||, A row-major m x n, m >= n.
// Backward stable; exact-interpolation cases (m == n) come out to roundoff.
inline std::vector<double> solve_least_squares(std::vector<double> A, std::vector<double> b,
                                               std::size_t m, std::size_t n) {
    if (m < n)
        throw InsufficientDataError("least-squares system is underdetermined");
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += A[i * n + k] * A[i * n + k];
        norm = std::sqrt(norm);
        if (norm == 0.0)
            throw SingularSystemError("least-squares matrix is rank deficient");
        if (A[k * n + k] > 0.0) norm = -norm;
        std::vector<double> v(m - k);
        v[0] = A[k * n + k] - norm;
        for (std::size_t i = k + 1; i < m; ++i) v[i - k] = A[i * n + k];
        double vtv = 0.0;
        for (double vi : v) vtv += vi * vi;
        A[k * n + k] = norm;
        for (std::size_t i = k + 1; i < m; ++i) A[i * n + k] = 0.0;
        if (vtv == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * A[i * n + j];
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = k; i < m; ++i) A[i * n + j] -= f * v[i - k];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * b[i];
        const double f = 2.0 * dot / vtv;
        for (std::size_t i = k; i < m; ++i) b[i] -= f * v[i - k];
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * x[k];
        if (A[i * n + i] == 0.0)
            throw SingularSystemError("least-squares matrix is rank deficient");
        x[i] = s / A[i * n + i];
    }
    return x;
}

} // namespace foulwall::detail

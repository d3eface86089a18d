#pragma once

#include <cstddef>
#include <vector>

#include "foulwall/errors.hpp"

namespace foulwall::detail {

// Thomas elimination for a*x[i-1] + b*x[i] + c*x[i+1] = d.
// No pivoting; callers must assemble diagonally dominant systems.
inline std::vector<double> solve_tridiagonal(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const std::vector<double>& c,
                                             const std::vector<double>& d) {
    const std::size_t n = b.size();
    if (n == 0 || a.size() != n || c.size() != n || d.size() != n)
        throw SingularSystemError("tridiagonal system has inconsistent sizes");

    std::vector<double> cp(n), dp(n), x(n);
    if (b[0] == 0.0)
        throw SingularSystemError("tridiagonal system has a zero pivot");
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = b[i] - a[i] * cp[i - 1];
        if (m == 0.0)
            throw SingularSystemError("tridiagonal system has a zero pivot");
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

} // namespace foulwall::detail

#include "foulwall/wall_laws.hpp"

#include <cmath>
#include <string>

namespace foulwall {

void validate(const WallLawParams& p) {
    if (!(p.kappa > 0.0) || !(p.y_star_plus > 0.0) || !(p.inner_constant > 0.0))
        throw ConfigError("wall-law constants must be positive");
}

double u_plus(double y_plus, const WallLawParams& p) {
    validate(p);
    if (y_plus < 0.0)
        throw NegativeInputError("y_plus must be nonnegative, got " + std::to_string(y_plus));
    const double a = p.inner_constant;
    if (y_plus <= p.y_star_plus)
        return a * std::atan(y_plus / a);
    const double u_star = a * std::atan(p.y_star_plus / a);
    return std::log((1.0 + p.kappa * y_plus) / (1.0 + p.kappa * p.y_star_plus)) / p.kappa +
           u_star;
}

double nu_t_plus(double y_plus, const WallLawParams& p) {
    validate(p);
    if (y_plus < 0.0)
        throw NegativeInputError("y_plus must be nonnegative, got " + std::to_string(y_plus));
    if (y_plus <= p.y_star_plus) {
        const double r = y_plus / p.inner_constant;
        return r * r;
    }
    return p.kappa * y_plus;
}

double invert_friction_velocity(double u_known, double y_known, double nu,
                                const WallLawParams& p) {
    validate(p);
    if (!(u_known > 0.0) || !(y_known > 0.0) || !(nu > 0.0))
        throw NegativeInputError("invert_friction_velocity requires positive inputs");

    // residual(u_tau) = u_tau * u_plus(u_tau*y/nu) - u_known, strictly increasing
    const auto residual = [&](double u_tau) {
        return u_tau * u_plus(u_tau * y_known / nu, p) - u_known;
    };

    double lo = 1e-8, hi = 10.0;
    double flo = residual(lo), fhi = residual(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw NoBracketError("no friction-velocity root in [1e-8, 10] m/s");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;

    const double tol = 1e-10 * u_known;
    double x = lo, fx = flo;
    for (int it = 0; it < 200; ++it) {
        // alternate guaranteed bisection with secant refinement steps
        double cand;
        if (it % 2 == 0) {
            cand = 0.5 * (lo + hi);
        } else {
            cand = lo - flo * (hi - lo) / (fhi - flo);
            if (!(cand > lo) || !(cand < hi)) cand = 0.5 * (lo + hi);
        }
        x = cand;
        fx = residual(x);
        if (std::abs(fx) < tol) return x;
        if (fx < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo < 1e-16 * hi) break;
    }
    if (std::abs(fx) < 1e-8 * u_known) return x;
    throw NotConvergedError("friction-velocity inversion did not reach tolerance",
                            {std::abs(fx) / u_known});
}

} // namespace foulwall

#pragma once

#include <functional>
#include <vector>

#include "foulwall/errors.hpp"
#include "foulwall/subgrid.hpp"

namespace foulwall {

/// Area-weighted mean deposition rate: sum(j*A)/sum(A).
double area_averaged_rate(const std::vector<double>& j_dep,
                          const std::vector<double>& areas);

double area_averaged_rate(const std::vector<DepositionResult>& results,
                          const std::vector<double>& areas, std::size_t species_index);

struct CalibrationResult {
    double diffusivity = 0.0; // D* [m^2/s]
    double rate = 0.0;        // achieved area-averaged rate
    int iterations = 0;
    struct TracePoint {
        int iteration;
        double diffusivity;
        double rate;
        double bracket_width;
    };
    std::vector<TracePoint> trace;
};

/// Tunes the Fickian diffusivity until the area-averaged deposition rate
/// matches target_rate. rate_of_diffusivity must be monotone increasing;
/// bisection with a final secant polish. Throws NotBracketedError when the
/// target lies outside [rate(d_lo), rate(d_hi)] and NotConvergedError after
/// max_iterations.
CalibrationResult calibrate_diffusivity(
    double target_rate, double d_lo, double d_hi, double rel_tol, int max_iterations,
    const std::function<double(double)>& rate_of_diffusivity);

} // namespace foulwall

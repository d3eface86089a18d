#include "foulwall/calibration.hpp"

#include <cmath>
#include <string>

namespace foulwall {

double area_averaged_rate(const std::vector<double>& j_dep,
                          const std::vector<double>& areas) {
    if (j_dep.empty() || j_dep.size() != areas.size())
        throw EmptyInputError("area averaging needs matching nonempty inputs");
    double weighted = 0.0, total = 0.0;
    for (std::size_t i = 0; i < j_dep.size(); ++i) {
        if (!(areas[i] > 0.0))
            throw ConfigError("cell areas must be positive");
        weighted += j_dep[i] * areas[i];
        total += areas[i];
    }
    return weighted / total;
}

double area_averaged_rate(const std::vector<DepositionResult>& results,
                          const std::vector<double>& areas, std::size_t species_index) {
    if (results.empty())
        throw EmptyInputError("no deposition results to average");
    std::vector<double> j(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (species_index >= results[i].j_dep.size())
            throw ConfigError("species index out of range in deposition results");
        j[i] = results[i].j_dep[species_index];
    }
    return area_averaged_rate(j, areas);
}

CalibrationResult calibrate_diffusivity(
    double target_rate, double d_lo, double d_hi, double rel_tol, int max_iterations,
    const std::function<double(double)>& rate_of_diffusivity) {
    if (!(d_lo > 0.0) || !(d_hi > d_lo))
        throw ConfigError("diffusivity bracket must satisfy 0 < D_lo < D_hi");
    if (!(target_rate > 0.0))
        throw ConfigError("target rate must be positive");
    if (!(rel_tol > 0.0))
        throw ConfigError("relative tolerance must be positive");

    double rate_lo = rate_of_diffusivity(d_lo);
    double rate_hi = rate_of_diffusivity(d_hi);
    if (!(rate_lo < target_rate) || !(rate_hi > target_rate))
        throw NotBracketedError(
            "target rate " + std::to_string(target_rate) + " not bracketed by [" +
            std::to_string(rate_lo) + ", " + std::to_string(rate_hi) + "]");

    CalibrationResult res;
    double lo = d_lo, hi = d_hi;
    double best_d = 0.5 * (lo + hi), best_rate = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rate = rate_of_diffusivity(mid);
        res.trace.push_back({it, mid, rate, hi - lo});
        res.iterations = it;
        best_d = mid;
        best_rate = rate;
        if (std::abs(rate - target_rate) / target_rate < rel_tol) {
            // secant polish between the bracket ends sharpens the last digit
            const double span_rate = rate > target_rate ? rate - rate_lo : rate_hi - rate;
            if (span_rate > 0.0) {
                double a = rate > target_rate ? lo : mid;
                double fa = rate > target_rate ? rate_lo : rate;
                double b = rate > target_rate ? mid : hi;
                double fb = rate > target_rate ? rate : rate_hi;
                const double d_sec = a + (target_rate - fa) * (b - a) / (fb - fa);
                if (d_sec > lo && d_sec < hi) {
                    const double rate_sec = rate_of_diffusivity(d_sec);
                    if (std::abs(rate_sec - target_rate) <= std::abs(rate - target_rate)) {
                        best_d = d_sec;
                        best_rate = rate_sec;
                        res.trace.push_back(
                            {it + 1, d_sec, rate_sec, std::abs(b - a)});
                        res.iterations = it + 1;
                    }
                }
            }
            res.diffusivity = best_d;
            res.rate = best_rate;
            return res;
        }
        if (rate < target_rate) {
            lo = mid;
            rate_lo = rate;
        } else {
            hi = mid;
            rate_hi = rate;
        }
    }
    std::vector<double> history;
    for (const auto& tp : res.trace)
        history.push_back(std::abs(tp.rate - target_rate) / target_rate);
    throw NotConvergedError("diffusivity calibration exceeded " +
                                std::to_string(max_iterations) + " iterations",
                            history);
}

} // namespace foulwall

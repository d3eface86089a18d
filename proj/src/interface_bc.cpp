#include "foulwall/interface_bc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "foulwall/detail/dense.hpp"
#include "foulwall/detail/text_io.hpp"

namespace foulwall {

void validate(const LogisticParams& p) {
    if (!(p.plateau > 0.0) || !(p.threshold_temperature > 0.0) || !(p.steepness > 0.0))
        throw ConfigError("logistic parameters must be positive");
}

double logistic_interface_fraction(double T_wall, const LogisticParams& p) {
    validate(p);
    if (!(T_wall > 0.0))
        throw NegativeInputError("wall temperature must be positive");
    return p.plateau / (1.0 + std::pow(T_wall / p.threshold_temperature, p.steepness));
}

void validate(const VelocityPolynomials& vp) {
    if (vp.plateau_coeffs.size() != 4 || vp.threshold_coeffs.size() != 3 ||
        vp.steepness_coeffs.size() != 3)
        throw ConfigError("velocity polynomials need 4 (plateau) / 3 / 3 coefficients");
    if (!(vp.u_min < vp.u_max))
        throw ConfigError("velocity validity interval must be nonempty");
}

namespace {

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

} // namespace

LogisticParams params_at_velocity(double u_in, const VelocityPolynomials& vp) {
    validate(vp);
    if (!(u_in >= vp.u_min) || !(u_in <= vp.u_max))
        throw OutOfRangeError("inlet velocity " + std::to_string(u_in) +
                              " m/s outside polynomial validity [" +
                              std::to_string(vp.u_min) + ", " + std::to_string(vp.u_max) +
                              "]");
    LogisticParams p;
    p.plateau = horner(vp.plateau_coeffs, u_in);
    p.threshold_temperature = horner(vp.threshold_coeffs, u_in);
    p.steepness = horner(vp.steepness_coeffs, u_in);
    validate(p);
    return p;
}

double interface_mass_fraction(double T_wall, double u_in, const VelocityPolynomials& vp,
                               double x_sat_at_wall, double wall_temperature_offset) {
    const LogisticParams p = params_at_velocity(u_in, vp);
    const double corrected = T_wall - wall_temperature_offset;
    if (!(corrected > 0.0))
        throw NegativeInputError("corrected wall temperature must stay positive");
    const double x_reg = logistic_interface_fraction(corrected, p);
    // below saturation the surface would be undersaturated, so clamp
    return std::max(x_reg, x_sat_at_wall);
}

namespace {

// residuals and analytic Jacobian of the logistic model
void logistic_residuals(const std::vector<double>& T, const std::vector<double>& X,
                        const LogisticParams& p, std::vector<double>& r,
                        std::vector<double>& J) {
    const std::size_t n = T.size();
    r.resize(n);
    J.resize(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ratio = T[i] / p.threshold_temperature;
        const double s = std::pow(ratio, p.steepness);
        const double den = 1.0 + s;
        const double model = p.plateau / den;
        r[i] = model - X[i];
        J[i * 3 + 0] = 1.0 / den;
        J[i * 3 + 1] = p.plateau * s * p.steepness / (p.threshold_temperature * den * den);
        J[i * 3 + 2] = -p.plateau * s * std::log(ratio) / (den * den);
    }
}

double sum_sq(const std::vector<double>& r) {
    return std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
}

} // namespace

LogisticFit fit_logistic(const std::vector<double>& T_wall,
                         const std::vector<double>& x_interface) {
    const std::size_t n = T_wall.size();
    if (n != x_interface.size())
        throw ConfigError("sample vectors must have equal length");
    if (n < 4)
        throw InsufficientDataError("logistic fit needs at least 4 samples, got " +
                                    std::to_string(n));
    for (double t : T_wall)
        if (!(t > 0.0))
            throw NegativeInputError("wall temperatures must be positive");

    const double x_max = *std::max_element(x_interface.begin(), x_interface.end());
    const double x_min = *std::min_element(x_interface.begin(), x_interface.end());
    if (!(x_max > 0.0))
        throw FitDivergedError("interface fractions are not positive");
    if (x_max - x_min < 1e-12 * x_max)
        throw FitDivergedError("samples are flat; logistic parameters are unidentifiable");

    // initial guess: plateau from the largest sample, threshold from the
    // half-plateau crossing, moderate steepness
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return T_wall[a] < T_wall[b]; });
    LogisticParams p;
    p.plateau = x_max;
    p.steepness = 20.0;
    p.threshold_temperature = T_wall[order[n / 2]];
    const double half = 0.5 * x_max;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double x0 = x_interface[order[k]], x1 = x_interface[order[k + 1]];
        if ((x0 - half) * (x1 - half) <= 0.0 && x0 != x1) {
            const double f = (half - x0) / (x1 - x0);
            p.threshold_temperature =
                T_wall[order[k]] + f * (T_wall[order[k + 1]] - T_wall[order[k]]);
            break;
        }
    }
    if (!(p.threshold_temperature > 0.0)) p.threshold_temperature = T_wall[order[n / 2]];

    std::vector<double> r, J;
    logistic_residuals(T_wall, x_interface, p, r, J);
    double sse = sum_sq(r);

    double lambda = 1e-3;
    int iterations = 0;
    for (int outer = 0; outer < 200; ++outer) {
        ++iterations;
        // normal equations with Marquardt diagonal damping
        std::vector<double> jtj(9, 0.0), jtr(3, 0.0);
        for (std::size_t i = 0; i < T_wall.size(); ++i)
            for (int a = 0; a < 3; ++a) {
                jtr[a] += J[i * 3 + a] * r[i];
                for (int b = 0; b < 3; ++b) jtj[a * 3 + b] += J[i * 3 + a] * J[i * 3 + b];
            }

        bool accepted = false;
        for (int inner = 0; inner < 25 && !accepted; ++inner) {
            std::vector<double> lhs = jtj;
            for (int a = 0; a < 3; ++a)
                lhs[a * 3 + a] += lambda * std::max(jtj[a * 3 + a], 1e-300);
            std::vector<double> step;
            try {
                step = detail::solve_dense(lhs, {-jtr[0], -jtr[1], -jtr[2]});
            } catch (const SingularSystemError&) {
                lambda *= 10.0;
                continue;
            }
            LogisticParams trial{p.plateau + step[0], p.threshold_temperature + step[1],
                                 p.steepness + step[2]};
            if (!(trial.plateau > 0.0) || !(trial.threshold_temperature > 0.0) ||
                !(trial.steepness > 0.0)) {
                lambda *= 10.0;
                continue;
            }
            std::vector<double> r_trial, J_trial;
            logistic_residuals(T_wall, x_interface, trial, r_trial, J_trial);
            const double sse_trial = sum_sq(r_trial);
            if (sse_trial <= sse) {
                const double improvement = sse - sse_trial;
                p = trial;
                r = std::move(r_trial);
                J = std::move(J_trial);
                sse = sse_trial;
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
                if (improvement <= 1e-14 * std::max(sse, 1e-300)) outer = 200; // converged
            } else {
                lambda *= 10.0;
            }
            if (lambda > 1e15)
                throw FitDivergedError("logistic fit stalled (damping exhausted)");
        }
        if (!accepted) break; // no further progress possible
    }

    LogisticFit fit;
    fit.params = p;
    fit.diagnostics.iterations = iterations;
    fit.diagnostics.rmse = std::sqrt(sse / static_cast<double>(n));

    // covariance estimate sigma^2 (J^T J)^-1
    std::vector<double> jtj(9, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) jtj[a * 3 + b] += J[i * 3 + a] * J[i * 3 + b];
    const double sigma2 = n > 3 ? sse / static_cast<double>(n - 3) : 0.0;
    try {
        for (int col = 0; col < 3; ++col) {
            std::vector<double> e(3, 0.0);
            e[static_cast<std::size_t>(col)] = 1.0;
            const std::vector<double> inv_col = detail::solve_dense(jtj, e);
            for (int row = 0; row < 3; ++row)
                fit.diagnostics.covariance[static_cast<std::size_t>(row * 3 + col)] =
                    sigma2 * inv_col[static_cast<std::size_t>(row)];
        }
    } catch (const SingularSystemError&) {
        fit.diagnostics.degenerate = true;
    }
    return fit;
}

namespace {

std::vector<double> fit_polynomial(const std::vector<double>& u,
                                   const std::vector<double>& values, std::size_t n_coeff,
                                   double& rms_residual) {
    const std::size_t m = u.size();
    std::vector<double> A(m * n_coeff);
    for (std::size_t i = 0; i < m; ++i) {
        double pw = 1.0;
        for (std::size_t j = 0; j < n_coeff; ++j) {
            A[i * n_coeff + j] = pw;
            pw *= u[i];
        }
    }
    const std::vector<double> coeffs =
        detail::solve_least_squares(A, values, m, n_coeff);
    double sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double fitted = 0.0, pw = 1.0;
        for (std::size_t j = 0; j < n_coeff; ++j) {
            fitted += coeffs[j] * pw;
            pw *= u[i];
        }
        sse += (fitted - values[i]) * (fitted - values[i]);
    }
    rms_residual = std::sqrt(sse / static_cast<double>(m));
    return coeffs;
}

} // namespace

VelocityPolynomialFit fit_velocity_polynomials(const std::vector<double>& u_in,
                                               const std::vector<LogisticParams>& params) {
    if (u_in.size() != params.size())
        throw ConfigError("velocity and parameter lists must match");
    if (u_in.size() < 4)
        throw InsufficientDataError("velocity polynomial fit needs at least 4 velocities, got " +
                                    std::to_string(u_in.size()));

    std::vector<double> a(u_in.size()), b(u_in.size()), c(u_in.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        a[i] = params[i].plateau;
        b[i] = params[i].threshold_temperature;
        c[i] = params[i].steepness;
    }

    VelocityPolynomialFit fit;
    fit.polynomials.plateau_coeffs = fit_polynomial(u_in, a, 4, fit.plateau_residual);
    fit.polynomials.threshold_coeffs = fit_polynomial(u_in, b, 3, fit.threshold_residual);
    fit.polynomials.steepness_coeffs = fit_polynomial(u_in, c, 3, fit.steepness_residual);
    fit.polynomials.u_min = *std::min_element(u_in.begin(), u_in.end());
    fit.polynomials.u_max = *std::max_element(u_in.begin(), u_in.end());
    return fit;
}

InterfaceProfileData read_interface_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open interface profile file: " + path.string());

    InterfaceProfileData data;
    bool have_velocity = false, have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (line.find("u_in_m_s") != std::string::npos && eq != std::string::npos) {
                try {
                    data.u_in = std::stod(line.substr(eq + 1));
                    have_velocity = true;
                } catch (const std::exception&) {
                    throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                      ": cannot parse inlet velocity");
                }
            }
            continue;
        }
        if (!have_header) {
            if (line != "x_m,T_w_K,X_I")
                throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected header 'x_m,T_w_K,X_I'");
            have_header = true;
            continue;
        }
        const auto fields = detail::split(line, ',');
        if (fields.size() != 3)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 3 comma-separated values");
        try {
            data.x.push_back(detail::parse_double(fields[0]));
            data.T_wall.push_back(detail::parse_double(fields[1]));
            data.x_interface.push_back(detail::parse_double(fields[2]));
        } catch (const CorruptFileError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    if (!have_velocity)
        throw ConfigError(path.string() + ": missing '# u_in_m_s = <value>' header line");
    if (data.x.empty())
        throw ConfigError(path.string() + ": no data rows");
    return data;
}

} // namespace foulwall

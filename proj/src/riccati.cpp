#include "dsm/riccati.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dsm/ode.hpp"
#include "dsm/quadrature.hpp"

namespace dsm {

RiccatiSpec dsm_riccati_spec(const EpsilonSchedule& schedule, double m,
                             double y_norm_bound, double g0, double t0) {
    if (!(m > 0.0))
        throw ConfigError("dsm_riccati_spec: M must be > 0 (linear problems "
                          "use linear_envelope)");
    RiccatiSpec spec;
    spec.gamma = [](double) { return 1.0; };
    spec.sigma = [schedule, m](double t) {
        return 0.5 * m / schedule.eps(t);
    };
    spec.beta = [schedule, y_norm_bound](double t) {
        return y_norm_bound * schedule.decay_ratio(t);
    };
    spec.mu = [schedule, m](double t) { return 2.0 * m / schedule.eps(t); };
    // mu = 2M/eps gives mu_dot/mu = -eps_dot/eps = |eps_dot|/eps.
    spec.mu_dot = [schedule, m](double t) {
        const double eps = schedule.eps(t);
        return -2.0 * m * schedule.eps_dot(t) / (eps * eps);
    };
    spec.t0 = t0;
    spec.g0 = g0;
    return spec;
}

RiccatiConditionReport check_conditions(const RiccatiSpec& spec,
                                        const std::vector<double>& grid) {
    if (grid.empty() || grid.front() < spec.t0)
        throw ConfigError("check_conditions: grid must start at or after t0");
    RiccatiConditionReport report;
    report.min_sigma_slack = std::numeric_limits<double>::infinity();
    report.min_sigma_value = std::numeric_limits<double>::infinity();
    report.min_beta_slack = std::numeric_limits<double>::infinity();
    report.mu_positive = true;
    for (double t : grid) {
        const double mu = spec.mu(t);
        if (!(mu > 0.0) || !std::isfinite(spec.mu_dot(t)))
            report.mu_positive = false;
        const double drift = spec.gamma(t) - spec.mu_dot(t) / mu;
        const double sigma = spec.sigma(t);
        const double beta = spec.beta(t);
        report.min_sigma_value = std::fmin(report.min_sigma_value, sigma);
        report.min_sigma_slack =
            std::fmin(report.min_sigma_slack, 0.5 * mu * drift - sigma);
        report.min_beta_slack =
            std::fmin(report.min_beta_slack, drift / (2.0 * mu) - beta);
    }
    report.initial_product = spec.g0 * spec.mu(spec.t0);
    report.pass = report.mu_positive && report.min_sigma_value >= 0.0 &&
                  report.min_sigma_slack >= 0.0 &&
                  report.min_beta_slack >= 0.0 &&
                  report.initial_product < 1.0;
    return report;
}

namespace {

double drift_integral(const RiccatiSpec& spec, double t, double quad_tol) {
    if (t == spec.t0) return 0.0;
    return quadrature::adaptive_simpson(
        [&spec](double s) {
            return spec.gamma(s) - spec.mu_dot(s) / spec.mu(s);
        },
        spec.t0, t, quad_tol);
}

}  // namespace

double nu(const RiccatiSpec& spec, double t, double quad_tol) {
    if (t < spec.t0)
        throw ConfigError("nu: t must be >= t0");
    const double head = 1.0 / (1.0 - spec.mu(spec.t0) * spec.g0);
    return 1.0 / (head + 0.5 * drift_integral(spec, t, quad_tol));
}

double envelope(const RiccatiSpec& spec, double t, double quad_tol) {
    return (1.0 - nu(spec, t, quad_tol)) / spec.mu(t);
}

double riccati_closed_form(const RiccatiSpec& spec, double t,
                           double quad_tol) {
    const double gamma_integral =
        (t == spec.t0) ? 0.0
                       : quadrature::adaptive_simpson(spec.gamma, spec.t0, t,
                                                      quad_tol);
    return std::exp(gamma_integral) * envelope(spec, t, quad_tol);
}

std::vector<MajorantSample> integrate_majorant(const RiccatiSpec& spec,
                                               double t_end, double tol) {
    std::vector<MajorantSample> samples;
    double g = spec.g0;
    ode::Options opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol * 1e-2;
    auto rhs = [&spec](double t, const double* y, double* dy) {
        dy[0] = -spec.gamma(t) * y[0] + spec.sigma(t) * y[0] * y[0] +
                spec.beta(t);
    };
    auto observe = [&](double t, const double* y) {
        if (y[0] > 10.0 / spec.mu(t))
            throw BlowUp("majorant exceeded 10/mu at t=" + std::to_string(t) +
                         " (g=" + std::to_string(y[0]) + ")");
        samples.push_back(MajorantSample{t, y[0]});
    };
    ode::integrate_dopri5(1, rhs, spec.t0, t_end, &g, opt, observe);
    return samples;
}

ComparisonReport comparison_check(const std::vector<MajorantSample>& samples,
                                  const RiccatiSpec& spec, double slack,
                                  double quad_tol) {
    ComparisonReport report;
    report.pass = true;
    for (const MajorantSample& s : samples) {
        const double env = envelope(spec, s.t, quad_tol);
        const double ratio = env > 0.0
            ? s.g / env
            : (s.g > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_t = s.t;
        }
        if (ratio > 1.0 + slack) report.pass = false;
    }
    return report;
}

RiccatiSpec random_majorant_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double gamma0 = 0.5 + 1.5 * unif(rng);
    const double mu0 = 0.2 + 2.0 * unif(rng);
    const double kappa = 0.1 + unif(rng);
    // growth exponent below gamma0/kappa keeps the drift positive
    const double p = 0.8 * gamma0 / kappa * unif(rng);
    const double t0 = 2.0 * unif(rng);
    const double frac = 0.05 + 0.9 * unif(rng);

    RiccatiSpec spec;
    spec.gamma = [gamma0](double) { return gamma0; };
    spec.mu = [mu0, kappa, p, t0](double t) {
        return mu0 * std::pow(1.0 + kappa * (t - t0), p);
    };
    spec.mu_dot = [mu0, kappa, p, t0](double t) {
        return mu0 * p * kappa * std::pow(1.0 + kappa * (t - t0), p - 1.0);
    };
    spec.sigma = [mu = spec.mu, mu_dot = spec.mu_dot, gamma0](double t) {
        return 0.5 * mu(t) * (gamma0 - mu_dot(t) / mu(t));
    };
    spec.beta = [mu = spec.mu, mu_dot = spec.mu_dot, gamma0](double t) {
        return (gamma0 - mu_dot(t) / mu(t)) / (2.0 * mu(t));
    };
    spec.t0 = t0;
    spec.g0 = frac / mu0;
    return spec;
}

double linear_envelope(const EpsilonSchedule& schedule, double y_norm,
                       double g0, double t, double t0, double quad_tol) {
    if (t < t0) throw ConfigError("linear_envelope: t must be >= t0");
    if (t == t0) return g0;
    // e^{-(t-s)} suppresses anything older than ~46 time units below
    // double precision of the result.
    const double lo = std::fmax(t0, t - 46.0);
    const double tail = quadrature::adaptive_simpson(
        [&](double s) {
            return std::exp(s - t) * y_norm * schedule.decay_ratio(s);
        },
        lo, t, quad_tol);
    return g0 * std::exp(t0 - t) + tail;
}

}  // namespace dsm

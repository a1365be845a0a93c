#ifndef DSM_RICCATI_HPP
#define DSM_RICCATI_HPP

#include <functional>
#include <random>
#include <vector>

#include "dsm/schedule.hpp"

// The scalar differential-inequality machinery bounding g = ||u - V||:
// validity conditions, the envelope (1 - nu)/mu, the closed-form solution
// of the majorant Riccati equation, its numerical integration, and the
// comparison check applied to sampled g trajectories.
//
// The flow instantiation uses gamma = 1, sigma = M / (2 eps),
// beta = ||y|| |eps_dot| / eps and the weight mu = 2 M / eps, so the
// envelope is strictly below eps(t) / (2 M).

namespace dsm {

struct RiccatiSpec {
    std::function<double(double)> gamma;
    std::function<double(double)> sigma;   // >= 0
    std::function<double(double)> beta;    // >= 0
    std::function<double(double)> mu;      // > 0, C^1
    std::function<double(double)> mu_dot;
    double t0 = 0.0;
    double g0 = 0.0;
};

/// The flow instantiation for a schedule and second-derivative bound M.
RiccatiSpec dsm_riccati_spec(const EpsilonSchedule& schedule, double m,
                             double y_norm_bound, double g0, double t0 = 0.0);

/// Validity conditions evaluated on a grid:
///   (a) 0 <= sigma <= (mu/2)(gamma - mu_dot/mu)
///   (b)      beta  <= (1/(2 mu))(gamma - mu_dot/mu)
///   (c) g0 mu(t0) < 1
struct RiccatiConditionReport {
    double min_sigma_slack = 0.0;  // min of (mu/2)(gamma-mu_dot/mu) - sigma
    double min_sigma_value = 0.0;  // min of sigma (nonnegativity)
    double min_beta_slack = 0.0;   // min of (1/(2 mu))(gamma-mu_dot/mu) - beta
    double initial_product = 0.0;  // g0 mu(t0)
    bool mu_positive = false;
    bool pass = false;
};

RiccatiConditionReport check_conditions(const RiccatiSpec& spec,
                                        const std::vector<double>& grid);

/// nu(t) = [ 1/(1 - mu(t0) g0) + (1/2) int_{t0}^t (gamma - mu_dot/mu) ]^{-1}.
double nu(const RiccatiSpec& spec, double t, double quad_tol = 1e-10);

/// The bound (1 - nu(t)) / mu(t); equals g0 at t0 and stays below 1/mu.
double envelope(const RiccatiSpec& spec, double t, double quad_tol = 1e-10);

/// Solution of the majorant Riccati equation through (t0, g0) expressed
/// in the transformed variable: exp(int gamma) * (1 - nu(t)) / mu(t).
double riccati_closed_form(const RiccatiSpec& spec, double t,
                           double quad_tol = 1e-10);

struct MajorantSample {
    double t = 0.0;
    double g = 0.0;
};

/// Numerically integrate dg/dt = -gamma g + sigma g^2 + beta from
/// (t0, g0), sampling every accepted step. Throws BlowUp once g exceeds
/// 10/mu(t), which signals violated validity conditions.
std::vector<MajorantSample> integrate_majorant(const RiccatiSpec& spec,
                                               double t_end, double tol);

/// Check sampled g(t) values against the envelope with relative slack.
struct ComparisonReport {
    bool pass = false;
    double worst_ratio = 0.0;  // max g / envelope
    double worst_t = 0.0;
};

ComparisonReport comparison_check(const std::vector<MajorantSample>& samples,
                                  const RiccatiSpec& spec, double slack = 0.05,
                                  double quad_tol = 1e-10);

/// Random spec satisfying the validity conditions with the sigma and beta
/// inequalities tight. For such specs the transformed closed form solves
/// the integrated equation exactly, which is what verification sweeps
/// compare against. gamma is constant, mu a mildly growing power law.
RiccatiSpec random_majorant_spec(std::mt19937_64& rng);

/// Envelope for the linear case M = 0, where the inequality degenerates
/// to dg/dt <= -g + beta with beta = y_norm |eps_dot|/eps:
///   g(t) <= g0 e^{-(t-t0)} + int_{t0}^t e^{-(t-s)} beta(s) ds.
/// The integral is evaluated by quadrature over the last ~46 time units;
/// the exponentially suppressed remainder is below double precision.
double linear_envelope(const EpsilonSchedule& schedule, double y_norm,
                       double g0, double t, double t0 = 0.0,
                       double quad_tol = 1e-12);

}  // namespace dsm

#endif  // DSM_RICCATI_HPP

#include "dsm/schedule.hpp"

#include <cmath>
#include <string>

namespace dsm {

EpsilonSchedule::EpsilonSchedule(double c1, double c0, double b)
    : c1_(c1), c0_(c0), b_(b) {
    if (!(c1 > 0.0) || !(c0 > 0.0))
        throw ConfigError("schedule: c1 and c0 must be positive");
    if (!(b > 0.0) || !(b < 1.0))
        throw ConfigError("schedule: b must lie in (0,1), got " +
                          std::to_string(b));
}

double EpsilonSchedule::eps(double t) const {
    return c1_ * std::pow(c0_ + t, -b_);
}

double EpsilonSchedule::eps_dot(double t) const {
    return -b_ * c1_ * std::pow(c0_ + t, -b_ - 1.0);
}

double EpsilonSchedule::time_for_eps_factor(double factor) const {
    if (!(factor > 0.0) || factor > 1.0)
        throw ConfigError("time_for_eps_factor: factor must be in (0,1]");
    return c0_ * (std::pow(factor, -1.0 / b_) - 1.0);
}

EpsilonSchedule derive_schedule(double m, double r, double b) {
    if (!(m > 0.0)) throw ConfigError("derive_schedule: M must be > 0");
    if (!(r > 0.0)) throw ConfigError("derive_schedule: r must be > 0");
    const double c0 = 4.0 * b;
    const double c1 = 4.0 * m * r * std::pow(c0, b);
    EpsilonSchedule s(c1, c0, b);
    s.set_derivation(ScheduleDerivation{m, r, std::nullopt, std::nullopt});
    return s;
}

EpsilonSchedule derive_schedule(double m, double r, double b, double u0_norm,
                                double y_norm_bound) {
    EpsilonSchedule s = derive_schedule(m, r, b);
    s.set_derivation(ScheduleDerivation{m, r, u0_norm, y_norm_bound});
    return s;
}

ConditionReport validate_conditions(const EpsilonSchedule& s, double m,
                                    double r, double y_norm_bound) {
    if (m < 0.0) throw ConfigError("validate_conditions: M must be >= 0");
    if (!(r > 0.0)) throw ConfigError("validate_conditions: r must be > 0");

    ConditionReport report;
    report.vacuous = (m == 0.0);

    // (i) decay ratio peaks at t = 0.
    report.decay.name = "decay-ratio";
    report.decay.value = s.b() / s.c0();
    report.decay.bound = 0.25;
    report.decay.pass = report.decay.value <= report.decay.bound;

    // (ii) |eps_dot| eps^-2 = b c1^-1 (c0+t)^(b-1) also peaks at t = 0
    // since b < 1.
    report.damping.name = "damping";
    const double sup_ratio2 =
        s.b() * std::pow(s.c0(), s.b() - 1.0) / s.c1();
    report.damping.value = 8.0 * m * y_norm_bound * sup_ratio2;
    report.damping.bound = 1.0;
    report.damping.pass = report.damping.value <= report.damping.bound;

    // (iii) initial gap 2 M ||u0 - V0|| / eps(0) <= 2 M r / eps(0).
    report.initial_gap.name = "initial-gap";
    report.initial_gap.value = 2.0 * m * r / s.eps(0.0);
    report.initial_gap.bound = 1.0;
    report.initial_gap.pass = report.initial_gap.value < 1.0;

    report.pass = report.decay.pass && report.damping.pass &&
                  report.initial_gap.pass;
    return report;
}

}  // namespace dsm

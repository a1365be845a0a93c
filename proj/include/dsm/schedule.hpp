#ifndef DSM_SCHEDULE_HPP
#define DSM_SCHEDULE_HPP

#include <optional>
#include <string>

#include "dsm/errors.hpp"

// The regularizer schedule eps(t) = c1 (c0 + t)^(-b) together with the
// constant derivation eps(0) = 4 M r, b/c0 = 1/4 and the validation of
// the three sufficient conditions the convergence analysis rests on.

namespace dsm {

/// Inputs remembered from derive_schedule for later validation/reports.
struct ScheduleDerivation {
    double m = 0.0;  // second-derivative bound used (M2 at reach 3r)
    double r = 0.0;  // ||y|| bound + ||u0||
    std::optional<double> u0_norm;
    std::optional<double> y_norm_bound;
};

class EpsilonSchedule {
public:
    /// Requires c1, c0 > 0 and b in (0,1). The decay-ratio cap
    /// |eps_dot|/eps <= 1/4 is reported by validate_conditions, not
    /// enforced here, so invalid schedules can be constructed and shown
    /// to fail.
    EpsilonSchedule(double c1, double c0, double b);

    double eps(double t) const;      // c1 (c0+t)^-b
    double eps_dot(double t) const;  // -b c1 (c0+t)^(-b-1), always negative

    /// |eps_dot(t)| / eps(t) = b / (c0 + t); maximal at t = 0.
    double decay_ratio(double t) const { return b_ / (c0_ + t); }

    /// Time at which eps(t) = eps(0) * factor, factor in (0,1].
    double time_for_eps_factor(double factor) const;

    double c1() const { return c1_; }
    double c0() const { return c0_; }
    double b() const { return b_; }

    const std::optional<ScheduleDerivation>& derivation() const {
        return derivation_;
    }
    void set_derivation(ScheduleDerivation d) { derivation_ = d; }

private:
    double c1_, c0_, b_;
    std::optional<ScheduleDerivation> derivation_;
};

/// The constructive choice from the convergence proof: c0 = 4b (so the
/// decay ratio starts at exactly 1/4) and c1 = 4 M r c0^b (so
/// eps(0) = 4 M r). Requires M > 0, r > 0, b in (0,1).
EpsilonSchedule derive_schedule(double m, double r, double b);
EpsilonSchedule derive_schedule(double m, double r, double b, double u0_norm,
                                double y_norm_bound);

/// One validated inequality with its analytically computed worst case.
struct ConditionEntry {
    std::string name;
    double value = 0.0;  // worst-case left-hand side over t >= 0
    double bound = 0.0;
    bool pass = false;
};

/// The three schedule conditions:
///   decay:        sup |eps_dot|/eps = b/c0        <= 1/4
///   damping:      sup 8 M ||y|| |eps_dot| eps^-2  <= 1
///   initial_gap:  2 M r / eps(0)                  <  1
/// With M = 0 (linear problems) the last two are vacuous.
struct ConditionReport {
    ConditionEntry decay;
    ConditionEntry damping;
    ConditionEntry initial_gap;
    bool vacuous = false;  // M == 0
    bool pass = false;
};

ConditionReport validate_conditions(const EpsilonSchedule& s, double m,
                                    double r, double y_norm_bound);

}  // namespace dsm

#endif  // DSM_SCHEDULE_HPP

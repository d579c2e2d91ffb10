#pragma once

// Inverse Loewner chains driven by q = (1 + psi)/(1 - psi), evaluated by
// integrating characteristics backward in time.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "tb/beltrami.hpp"

namespace tb {

class HerglotzFamily {
public:
    explicit HerglotzFamily(BeltramiSpec spec);

    /// Unchecked q(z, t).
    cplx q(cplx z, double t) const {
        const cplx p = spec_.family()(z, t);
        return (1.0 + p) / (1.0 - p);
    }

    const BeltramiSpec& spec() const { return spec_; }
    double k() const { return spec_.k(); }
    const std::vector<Breakpoint>& breakpoints() const { return spec_.breakpoints(); }
    bool oscillatory_at_zero() const;
    /// Lower bound (1 - k)/(1 + k) on Re q.
    double min_re_q() const { return (1.0 - k()) / (1.0 + k()); }

private:
    BeltramiSpec spec_;
};

/// Checked q; throws InvariantViolation if Re q <= 0.
cplx q_at(const HerglotzFamily& family, cplx z, double t);

struct ChainOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.5;
    /// Step cap as a fraction of the current time inside a segment whose
    /// lower end is an oscillation accumulation point at t = 0.
    double osc_cap = 0.125;
    /// Relative depth at which such a segment finishes with one final step.
    double osc_floor = 1e-12;
    /// omega_rho(z, t) = omega(rho z, t) / rho; rho = 1 is the plain chain.
    double start_radius = 1.0;
    double t_max = 12.0;
    std::size_t max_steps = 2'000'000;
};

struct ChainStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t warnings = 0;  // steps accepted above tolerance near t = 0
    double worst_error = 0.0;  // largest normalised local error accepted
};

struct TrajectoryPoint {
    double s;
    cplx zeta;
    double step;
};

/// Step nodes of one integration, stored per time segment as fractions of
/// the segment so the same discretisation can be replayed for nearby t.
struct StepPlan {
    struct Segment {
        double lo = 0.0;
        double hi = 0.0;
        bool oscillatory = false;
        std::vector<double> fractions;  // 1 -> 0, node s = lo + f (hi - lo)
    };
    std::vector<Segment> segments;
    std::size_t steps() const;
};

class ChainEvaluator {
public:
    explicit ChainEvaluator(HerglotzFamily family, ChainOptions options = {});

    const HerglotzFamily& family() const { return family_; }
    const ChainOptions& options() const { return options_; }
    ChainEvaluator with_tolerances(double rtol, double atol) const;

    /// zeta(to) for the characteristic d zeta/ds = zeta q(zeta, s) through
    /// zeta(from) = z, integrated backward (from >= to).
    cplx characteristic(cplx z, double from, double to, ChainStats* stats = nullptr,
                        std::vector<TrajectoryPoint>* trajectory = nullptr,
                        StepPlan* plan = nullptr) const;

    /// omega(z, t) = zeta(0) along the characteristic through (z, t).
    cplx omega(cplx z, double t, ChainStats* stats = nullptr) const;

    StepPlan plan(cplx z, double t) const;

    /// omega(z, t) with step nodes taken from a plan built at a nearby t
    /// in the same breakpoint interval. No error control.
    cplx omega_planned(cplx z, double t, const StepPlan& plan) const;

    /// b(t) = omega_t'(0) = exp(-int_0^t q(0, s) ds).
    cplx omega_prime_zero(double t) const;

private:
    std::vector<StepPlan::Segment> segments(double to, double from) const;

    HerglotzFamily family_;
    ChainOptions options_;
};

cplx omega(const ChainEvaluator& ev, cplx z, double t);
cplx omega_prime_zero(const ChainEvaluator& ev, double t);

/// CSV with columns s, re_zeta, im_zeta, step_size.
std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory);

}  // namespace tb

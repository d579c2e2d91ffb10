#include "tb/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "tb/errors.hpp"

namespace tb {

HerglotzFamily::HerglotzFamily(BeltramiSpec spec) : spec_(std::move(spec)) {}

bool HerglotzFamily::oscillatory_at_zero() const {
    const auto& bps = breakpoints();
    return !bps.empty() && bps.front().t == 0.0 && bps.front().oscillatory;
}

cplx q_at(const HerglotzFamily& family, cplx z, double t) {
    if (std::abs(z) > 1.0 + kDiskSlack) throw DomainError("q_at: |z| exceeds the closed unit disk");
    if (!(t >= 0.0)) throw DomainError("q_at: t must be non-negative");
    const cplx q = family.q(z, t);
    if (!(q.real() > 0.0)) throw InvariantViolation("q_at: Re q <= 0; the family violates |psi| < 1");
    return q;
}

std::size_t StepPlan::steps() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.fractions.empty() ? 0 : s.fractions.size() - 1;
    return n;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// d lambda/ds = q(exp(lambda), s), lambda = log zeta. Time is clamped into
// the closed segment, with the top end nudged inward so that a breakpoint
// at the top evaluates the piece below it.
struct LogRhs {
    const HerglotzFamily& family;
    double lo;
    double hi_eval;

    cplx operator()(double s, cplx lambda) const {
        return family.q(std::exp(lambda), std::clamp(s, lo, hi_eval));
    }
};

struct StepResult {
    cplx y;
    cplx err;
    cplx k7;
};

// One step of signed size h from (s, y) with FSAL slope k1.
StepResult dopri5_step(const LogRhs& f, double s, cplx y, double h, cplx k1) {
    const cplx k2 = f(s + c2 * h, y + h * (a21 * k1));
    const cplx k3 = f(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const cplx k4 = f(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const cplx k5 = f(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const cplx k6 = f(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const cplx y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const cplx k7 = f(s + h, y1);
    const cplx err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y1, err, k7};
}

void check_escape(cplx lambda, double bound, double s) {
    if (lambda.real() > bound) {
        throw EscapeError("characteristic left the closed disk at s = " + std::to_string(s) +
                          " (|zeta| = " + std::to_string(std::exp(lambda.real())) + ")");
    }
}

}  // namespace

ChainEvaluator::ChainEvaluator(HerglotzFamily family, ChainOptions options)
    : family_(std::move(family)), options_(options) {
    if (!(options_.rtol > 0.0 && options_.atol > 0.0)) throw ConfigError("chain tolerances must be positive");
    if (!(options_.start_radius > 0.0 && options_.start_radius <= 1.0))
        throw ConfigError("start radius must lie in (0, 1]");
}

ChainEvaluator ChainEvaluator::with_tolerances(double rtol, double atol) const {
    ChainOptions o = options_;
    o.rtol = rtol;
    o.atol = atol;
    return ChainEvaluator(family_, o);
}

std::vector<StepPlan::Segment> ChainEvaluator::segments(double to, double from) const {
    std::vector<double> cuts{to};
    for (const auto& bp : family_.breakpoints())
        if (bp.t > to && bp.t < from) cuts.push_back(bp.t);
    cuts.push_back(from);
    const bool osc0 = family_.oscillatory_at_zero();
    std::vector<StepPlan::Segment> out;
    for (std::size_t i = cuts.size() - 1; i > 0; --i) {
        StepPlan::Segment seg;
        seg.lo = cuts[i - 1];
        seg.hi = cuts[i];
        seg.oscillatory = osc0 && seg.lo == 0.0;
        out.push_back(seg);
    }
    return out;  // top segment first
}

cplx ChainEvaluator::characteristic(cplx z, double from, double to, ChainStats* stats,
                                    std::vector<TrajectoryPoint>* trajectory, StepPlan* plan) const {
    if (!(to >= 0.0 && from >= to)) throw DomainError("characteristic: requires 0 <= to <= from");
    if (!std::isfinite(from)) throw DomainError("characteristic: time must be finite");
    if (z == cplx{0.0, 0.0}) return z;
    if (std::abs(z) > 1.0 + kDiskSlack) throw DomainError("characteristic: start point outside the closed disk");

    ChainStats local;
    ChainStats& st = stats ? *stats : local;
    const double tol = options_.atol + options_.rtol;
    const double escape = std::log1p(10.0 * options_.rtol);
    cplx lambda = std::log(z);
    if (trajectory) trajectory->push_back({from, z, 0.0});
    if (from == to) return z;

    auto segs = segments(to, from);
    double h = std::min({1e-2, options_.max_step, from - to});
    for (auto& seg : segs) {
        const LogRhs f{family_, seg.lo, std::nextafter(seg.hi, seg.lo)};
        const double width = seg.hi - seg.lo;
        double s = seg.hi;
        cplx k1 = f(s, lambda);
        double err_old = 1e-4;
        if (plan) seg.fractions.push_back(1.0);
        while (s > seg.lo) {
            if (st.accepted + st.rejected >= options_.max_steps)
                throw StepFailure("characteristic: step budget exhausted", st.worst_error);
            bool final_jump = false;
            double hs = std::min(h, options_.max_step);
            if (seg.oscillatory) {
                if (s <= options_.osc_floor * seg.hi) {
                    final_jump = true;
                    hs = s - seg.lo;
                } else {
                    hs = std::min(hs, options_.osc_cap * s);
                }
            }
            // absorb a sliver at the segment end into this step
            if (s - hs - seg.lo <= 1e-12 * width) hs = s - seg.lo;

            const StepResult r = dopri5_step(f, s, lambda, -hs, k1);
            const double err = std::abs(r.err) / tol;
            if (err <= 1.0 || final_jump) {
                if (err > 1.0) ++st.warnings;
                st.worst_error = std::max(st.worst_error, err);
                ++st.accepted;
                s = (hs == s - seg.lo) ? seg.lo : s - hs;
                lambda = r.y;
                k1 = r.k7;
                check_escape(lambda, escape, s);
                if (trajectory) trajectory->push_back({s, std::exp(lambda), hs});
                if (plan) seg.fractions.push_back((s - seg.lo) / width);
                const double e = std::max(err, 1e-10);
                double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_old, 0.4 / 5.0);
                fac = std::clamp(fac, 0.2, 5.0);
                err_old = std::max(err, 1e-4);
                h = hs * fac;
            } else {
                ++st.rejected;
                h = hs * std::max(0.2, 0.9 * std::pow(err, -0.2));
                if (h < 1e-15 * std::max(1.0, s)) {
                    throw StepFailure("characteristic: step size underflow at s = " + std::to_string(s), err);
                }
            }
        }
    }
    if (plan) plan->segments = std::move(segs);
    return std::exp(lambda);
}

cplx ChainEvaluator::omega(cplx z, double t, ChainStats* stats) const {
    const double r = std::abs(z);
    if (!(r > 0.0)) throw DomainError("omega: requires 0 < |z|");
    if (r > 1.0 + kDiskSlack) throw DomainError("omega: |z| exceeds the closed unit disk");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("omega: t must be finite and non-negative");
    if (t == 0.0) return z;
    const double rho = options_.start_radius;
    return characteristic(rho * z, t, 0.0, stats) / rho;
}

StepPlan ChainEvaluator::plan(cplx z, double t) const {
    StepPlan p;
    if (t > 0.0) characteristic(options_.start_radius * z, t, 0.0, nullptr, nullptr, &p);
    return p;
}

cplx ChainEvaluator::omega_planned(cplx z, double t, const StepPlan& plan) const {
    if (t == 0.0) return z;
    const auto segs = segments(0.0, t);
    if (segs.size() != plan.segments.size()) throw BreakpointStraddle("omega_planned: plan built in another interval");
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].lo != plan.segments[i].lo || (i > 0 && segs[i].hi != plan.segments[i].hi))
            throw BreakpointStraddle("omega_planned: plan built in another interval");
    }
    const double rho = options_.start_radius;
    cplx lambda = std::log(rho * z);
    const double escape = std::log1p(10.0 * options_.rtol);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& seg = segs[i];
        const auto& fr = plan.segments[i].fractions;
        const LogRhs f{family_, seg.lo, std::nextafter(seg.hi, seg.lo)};
        const double width = seg.hi - seg.lo;
        double s = seg.hi;
        cplx k1 = f(s, lambda);
        for (std::size_t j = 1; j < fr.size(); ++j) {
            const double next = (j + 1 == fr.size()) ? seg.lo : seg.lo + fr[j] * width;
            const StepResult r = dopri5_step(f, s, lambda, next - s, k1);
            s = next;
            lambda = r.y;
            k1 = r.k7;
        }
        check_escape(lambda, escape, s);
    }
    return std::exp(lambda) / rho;
}

cplx ChainEvaluator::omega_prime_zero(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("omega_prime_zero: t must be finite and non-negative");
    if (t == 0.0) return {1.0, 0.0};
    using GL = boost::math::quadrature::gauss<double, 20>;
    cplx integral{0.0, 0.0};
    for (const auto& seg : segments(0.0, t)) {
        const double lo = seg.lo;
        const double hi_eval = std::nextafter(seg.hi, seg.lo);
        auto g = [&](double s) { return family_.q(cplx{0.0, 0.0}, std::clamp(s, lo, hi_eval)); };
        if (seg.oscillatory) {
            // dyadic panels toward the accumulation point, one-point tail
            constexpr int kPanels = 45;
            double b = seg.hi;
            for (int j = 0; j < kPanels; ++j) {
                const double a = 0.5 * b;
                integral += GL::integrate(g, a, b);
                b = a;
            }
            integral += b * g(0.5 * b);
        } else {
            // q(0, .) is smooth inside a segment; short panels keep a fixed
            // 20-point rule near machine precision
            const int panels = std::max(1, static_cast<int>(std::ceil((seg.hi - lo) / 0.25)));
            for (int p = 0; p < panels; ++p) {
                const double a = lo + (seg.hi - lo) * p / panels;
                const double b = (p + 1 == panels) ? seg.hi : lo + (seg.hi - lo) * (p + 1) / panels;
                integral += GL::integrate(g, a, b);
            }
        }
    }
    return std::exp(-integral);
}

cplx omega(const ChainEvaluator& ev, cplx z, double t) { return ev.omega(z, t); }
cplx omega_prime_zero(const ChainEvaluator& ev, double t) { return ev.omega_prime_zero(t); }

std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory) {
    std::ostringstream os;
    os.precision(17);
    os << "s,re_zeta,im_zeta,step_size\n";
    for (const auto& p : trajectory) os << p.s << ',' << p.zeta.real() << ',' << p.zeta.imag() << ',' << p.step << '\n';
    return os.str();
}

}  // namespace tb

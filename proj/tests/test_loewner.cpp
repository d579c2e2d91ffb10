#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tb/errors.hpp"

using namespace tb;
using support::rel_err;

namespace {

cplx two_term_q(cplx z, double s) {
    const cplx p = support::two_term_psi(z, s);
    return (1.0 + p) / (1.0 - p);
}

// classical RK4 on lambda = log zeta, backward from s = hi to s = lo, step
// size either fixed or a fraction of s (for the approach to s = 0)
cplx rk4_segment(cplx lam, double hi, double lo, bool geometric) {
    // the top end belongs to the piece below it
    const double top = std::nextafter(hi, lo);
    auto f = [&](cplx l, double s) { return two_term_q(std::exp(l), std::min(s, top)); };
    double s = hi;
    while (s > lo) {
        double h = geometric ? s / 256.0 : 2e-3;
        if (s - h < lo) h = s - lo;
        const cplx k1 = f(lam, s);
        const cplx k2 = f(lam - 0.5 * h * k1, s - 0.5 * h);
        const cplx k3 = f(lam - 0.5 * h * k2, s - 0.5 * h);
        const cplx k4 = f(lam - h * k3, s - h);
        lam -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s -= h;
        if (geometric && s < 1e-10) break;
    }
    return lam;
}

// omega for the two-term spec by an independent fixed-step integration
cplx two_term_omega_rk4(cplx z, double t) {
    const double ln2 = std::numbers::ln2;
    cplx lam = std::log(z);
    if (t > ln2) {
        lam = rk4_segment(lam, t, ln2, false);
        t = ln2;
    }
    const double mid = std::min(t, 0.05);
    lam = rk4_segment(lam, t, mid, false);
    lam = rk4_segment(lam, mid, 0.0, true);
    return std::exp(lam);
}

}  // namespace

TEST_CASE("q values") {
    CHECK(std::abs(q_at(HerglotzFamily(support::zero_spec()), 0.3, 1.0) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(q_at(HerglotzFamily(support::constant_spec(0.3)), 0.3, 1.0) - cplx{13.0 / 7.0, 0.0}) < 1e-14);
    CHECK(std::abs(q_at(HerglotzFamily(support::constant_spec({0.0, 0.5})), 0.0, 2.0) - cplx{0.6, 0.8}) < 1e-15);
    HerglotzFamily two_term(support::two_term_spec());
    CHECK(two_term.oscillatory_at_zero());
    CHECK_FALSE(HerglotzFamily(support::constant_spec(0.3)).oscillatory_at_zero());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.7, 0.7), ut(0.0, 6.0);
    for (int i = 0; i < 200; ++i) {
        const cplx z{u(rng), u(rng)};
        CHECK(q_at(two_term, z, ut(rng)).real() >= two_term.min_re_q() - 1e-14);
    }
}

TEST_CASE("omega: closed forms") {
    ChainEvaluator id(HerglotzFamily(support::zero_spec()));
    CHECK(std::abs(id.omega(0.5, std::numbers::ln2) - cplx{0.25, 0.0}) < 1e-12);
    CHECK(id.omega({0.2, 0.3}, 0.0) == cplx{0.2, 0.3});

    ChainEvaluator c(HerglotzFamily(support::constant_spec(0.3)));
    CHECK(std::abs(c.omega(0.5, 1.0) - 0.5 * std::exp(-13.0 / 7.0)) < 1e-9);
    const cplx q{0.6, 0.8};
    ChainEvaluator ci(HerglotzFamily(support::constant_spec({0.0, 0.5})));
    const cplx z = std::polar(1.0, 0.7);
    CHECK(rel_err(ci.omega(z, 2.5), z * std::exp(-q * 2.5)) < 1e-9);
}

TEST_CASE("omega: two-term spec against fixed-step RK4") {
    ChainEvaluator ev(HerglotzFamily(support::two_term_spec()));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ut(0.05, 3.0), uth(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 12; ++i) {
        const cplx z = std::polar(1.0, uth(rng));
        const double t = ut(rng);
        CHECK(std::abs(ev.omega(z, t) - two_term_omega_rk4(z, t)) < 1e-8);
    }
}

TEST_CASE("b(t)") {
    ChainEvaluator id(HerglotzFamily(support::zero_spec()));
    CHECK(std::abs(id.omega_prime_zero(std::numbers::ln2) - cplx{0.5, 0.0}) < 1e-14);
    ChainEvaluator c(HerglotzFamily(support::constant_spec(0.3)));
    CHECK(std::abs(c.omega_prime_zero(1.0) - std::exp(-13.0 / 7.0)) < 1e-14);
    ChainEvaluator p(HerglotzFamily(support::two_term_spec()));
    CHECK(p.omega_prime_zero(0.0) == cplx{1.0, 0.0});

    // composite Simpson in u = log s on (0, ln 2) and in s beyond
    auto simpson = [](auto g, double a, double b, int n) {
        const double h = (b - a) / n;
        cplx acc = g(a) + g(b);
        for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
        return acc * h / 3.0;
    };
    const double ln2 = std::numbers::ln2;
    auto in_u = [&](double u) { return std::exp(u) * two_term_q(0.0, std::exp(u)); };
    const double t = 2.0;
    cplx integral = simpson(in_u, std::log(1e-14), std::log(std::nextafter(ln2, 0.0)), 20000);
    integral += simpson([&](double s) { return two_term_q(0.0, s); }, ln2, t, 2000);
    CHECK(std::abs(p.omega_prime_zero(t) - std::exp(-integral)) < 1e-10);
}

TEST_CASE("chain invariants on seeded samples") {
    HerglotzFamily fam(support::two_term_spec());
    ChainEvaluator ev(fam);
    const double rate = fam.min_re_q();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ur(0.0, 1.0), ut(0.01, 4.0), uth(0.0, 2.0 * std::numbers::pi);
    double prev_abs = 1.0;
    for (int i = 1; i <= 40; ++i) {
        const double t = 0.1 * i;
        const double b = std::abs(ev.omega_prime_zero(t));
        CHECK(b <= std::exp(-t * rate) * (1 + 1e-12));
        CHECK(b < prev_abs);
        prev_abs = b;
    }
    for (int i = 0; i < 30; ++i) {
        const cplx z = std::polar(std::sqrt(ur(rng)), uth(rng));
        const double t = ut(rng);
        const cplx w = ev.omega(z, t);
        CHECK(std::abs(w) <= std::abs(z) + 1e-12);
        // omega_t = omega_s o (characteristic from t to s)
        const double s = t * ur(rng);
        const cplx mid = ev.characteristic(z, t, s);
        CHECK(std::abs(ev.omega(mid, s) - w) <= 1e-9 * std::max(1.0, std::abs(w)) + 1e-12);
    }
}

TEST_CASE("plans replay the same discretisation") {
    ChainEvaluator ev(HerglotzFamily(support::two_term_spec()));
    const cplx z = std::polar(1.0, 0.4);
    auto plan = ev.plan(z, 1.3);
    CHECK(plan.steps() > 0);
    CHECK(std::abs(ev.omega_planned(z, 1.3, plan) - ev.omega(z, 1.3)) < 1e-9);
    CHECK_THROWS_AS(ev.omega_planned(z, 0.5, plan), BreakpointStraddle);
}

TEST_CASE("trajectory csv and stats") {
    ChainEvaluator ev(HerglotzFamily(support::two_term_spec()));
    ChainStats st;
    std::vector<TrajectoryPoint> traj;
    ev.characteristic(0.9, 2.0, 0.0, &st, &traj);
    CHECK(st.accepted > 0);
    CHECK(traj.size() >= st.accepted);
    auto csv = trajectory_csv(traj);
    CHECK(csv.rfind("s,re_zeta,im_zeta,step_size\n", 0) == 0);
    CHECK_THROWS_AS(ev.omega(1.5, 1.0), DomainError);
}

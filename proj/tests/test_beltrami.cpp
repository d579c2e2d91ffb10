#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tb/errors.hpp"

using namespace tb;

TEST_CASE("budget: two-term spec") {
    auto spec = support::two_term_spec();
    const double sh = std::sinh(1.0);
    const double expect = std::sqrt(5.0) / 10.0 * sh * sh + 0.2;
    CHECK(spec.k() == doctest::Approx(expect).epsilon(1e-9));
    CHECK(spec.k() == doctest::Approx(0.5088).epsilon(1e-4));
    CHECK(spec.budget().accepted());
    auto bps = spec.breakpoints();
    REQUIRE(bps.size() == 2);
    CHECK(bps[0] == Breakpoint{0.0, true});
    CHECK(bps[1].t == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("budget: single terms") {
    SumForm ok;
    ok.terms.push_back({TimeCoefficient::constant(0.8), HoloExpr::mobius(2.0 / 3.0)});
    BeltramiSpec s(PsiFamily(std::move(ok)));
    CHECK(s.k() == doctest::Approx(0.8).epsilon(1e-12));

    SumForm bad;
    bad.terms.push_back({TimeCoefficient::constant(1.2), HoloExpr::constant(1.0)});
    CHECK_THROWS_AS(BeltramiSpec(PsiFamily(std::move(bad))), BudgetExceeded);

    CHECK_THROWS_AS(support::dilation_spec(HoloExpr::constant(1.0)), BudgetExceeded);
    CHECK(support::dilation_spec(HoloExpr::constant(0.9)).k() == doctest::Approx(0.9));
}

TEST_CASE("mu and psi") {
    auto c = support::constant_spec(0.3);
    CHECK(std::abs(mu_at(c, 0.5) - cplx{0.3, 0.0}) < 1e-15);
    CHECK(std::abs(mu_at(c, cplx{0.0, 0.5}) - cplx{-0.3, 0.0}) < 1e-15);
    CHECK_THROWS_AS(mu_at(c, 0.0), DomainError);
    CHECK_THROWS_AS(mu_at(c, 1.5), DomainError);

    auto d = support::dilation_spec(HoloExpr::constant(0.9));
    CHECK(std::abs(mu_at(d, 0.5) - cplx{0.225, 0.0}) < 1e-15);
    CHECK(std::abs(psi_at(d, 0.3, std::numbers::ln2) - cplx{0.9 / 4.0, 0.0}) < 1e-15);

    auto p = support::two_term_spec();
    CHECK(std::abs(psi_at(p, 0.0, 1.0) - cplx{-1.0, 3.0} / 30.0) < 1e-15);
}

TEST_CASE("mu: two-term spec against hand formula, seeded") {
    auto p = support::two_term_spec();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.01, 1.0), ut(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 300; ++i) {
        const cplx z = std::polar(ur(rng), ut(rng));
        const cplx zeta = z / std::abs(z);
        const cplx expect = zeta * zeta * support::two_term_psi(zeta, -std::log(std::abs(z)));
        CHECK(std::abs(mu_at(p, z) - expect) < 1e-14);
        CHECK(std::abs(mu_at(p, z)) <= p.k() + 1e-12);
    }
}

TEST_CASE("spec json round trip") {
    auto j = support::two_term_spec().to_json();
    auto back = BeltramiSpec::from_json(j);
    CHECK(back.k() == support::two_term_spec().k());
    for (cplx z : {cplx{0.3, 0.2}, cplx{-0.1, -0.8}}) CHECK(mu_at(back, z) == mu_at(support::two_term_spec(), z));
    auto bad = j;
    bad["form"] = "nonsense";
    CHECK_THROWS_AS(BeltramiSpec::from_json(bad), ParseError);
    CHECK_THROWS_AS(BeltramiSpec::from_json(json{{"form", "sum"}}), ParseError);
    CHECK_THROWS_AS(BeltramiSpec::from_json(json{{"form", "dilation"}}), ParseError);
    CHECK_THROWS_AS(BeltramiSpec::from_json(json{{"terms", {{{"a", {0.1, 0.0}}}}}}), ParseError);
}

TEST_CASE("slices: fourier modes") {
    auto c = support::constant_spec(0.3);
    MuSampler mc = [&](cplx z) { return mu_at(c, z); };
    auto s = slice_fourier(mc, 0.5, 16);
    CHECK(std::abs(s.c(0) - cplx{0.3, 0.0}) < 1e-14);
    for (int n = -16; n <= 16; ++n)
        if (n != 0) CHECK(std::abs(s.c(n)) <= 1e-14);
    CHECK(analyticity_defect(s) <= 1e-14);

    MuSampler anti = [](cplx z) {
        const cplx w = std::conj(z) / std::abs(z);
        return 0.2 * w * w;
    };
    auto a = slice_fourier(anti, 1.0, 16);
    CHECK(std::abs(a.c(-4) - cplx{0.2, 0.0}) < 1e-14);
    CHECK(analyticity_defect(a) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(a.parseval_mass() == doctest::Approx(0.04).epsilon(1e-12));

    auto p = support::two_term_spec();
    MuSampler mp = [&](cplx z) { return mu_at(p, z); };
    for (double t : {0.1, 0.5, 1.0, 2.0}) CHECK(analyticity_defect(slice_fourier(mp, t, 256)) <= 1e-10);
}

TEST_CASE("slices: analytic modes match the Taylor coefficients of psi") {
    // U_t = psi_t on the circle; for the two-term spec at t = 1 the Taylor
    // coefficients of sinc^2 and the Mobius factor are known in closed form
    auto p = support::two_term_spec();
    MuSampler mp = [&](cplx z) { return mu_at(p, z); };
    auto s = slice_fourier(mp, 1.0, 32);
    const cplx a1{0.1, 0.1};
    const cplx a2{0.2, 0.0};
    const double r = 2.0 / 3.0;
    // sinc^2 = 1 - z^2/3 + 2 z^4/45 - ...; mobius = -r + (1 - r^2) sum r^{n-1} z^n
    CHECK(std::abs(s.c(0) - (a1 - a2 * r)) < 1e-13);
    CHECK(std::abs(s.c(1) - a2 * (1 - r * r)) < 1e-13);
    CHECK(std::abs(s.c(2) - (-a1 / 3.0 + a2 * (1 - r * r) * r)) < 1e-13);
    CHECK(std::abs(s.c(4) - (a1 * 2.0 / 45.0 + a2 * (1 - r * r) * r * r * r)) < 1e-13);
}

TEST_CASE("slices: extension") {
    BoundarySlice s;
    s.modes = 4;
    s.coeffs.assign(9, 0.0);
    s.coeffs[4] = 0.3;
    const cplx z{0.3, -0.4};
    CHECK(std::abs(extend_from_slice(s, z).analytic - cplx{0.3, 0.0}) < 1e-15);
    s.coeffs[4] = 0.0;
    s.coeffs[5] = 1.0;
    CHECK(std::abs(extend_from_slice(s, z).analytic - z) < 1e-15);
    s.coeffs[5] = 0.0;
    s.coeffs[0] = 0.2;
    auto e = extend_from_slice(s, z);
    CHECK(std::abs(e.analytic) < 1e-15);
    CHECK(std::abs(e.harmonic - 0.2 * std::pow(std::conj(z), 4)) < 1e-15);
}

TEST_CASE("slices: csv") {
    auto s = slice_fourier([](cplx) { return cplx{0.0, 0.0}; }, 0.5, 2);
    auto csv = slice_csv(s);
    CHECK(csv.rfind("n,re_c,im_c\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

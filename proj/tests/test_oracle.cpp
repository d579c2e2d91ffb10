#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "tb/errors.hpp"
#include "tb/oracle.hpp"
#include "tb/verify.hpp"

using namespace tb;

namespace {
cplx constant_map(cplx z) {
    const double q = 13.0 / 7.0;
    return std::abs(z) <= 1.0 ? z * std::pow(std::abs(z), q - 1.0) : z;
}
MuSampler constant_mu() {
    return [](cplx z) {
        const cplx w = z / std::abs(z);
        return 0.3 * w * w;
    };
}
}  // namespace

TEST_CASE("beurling selftest") {
    CHECK(beurling_error(512, 2.0, BeurlingConvention::Standard) <= 1e-8);
    CHECK(beurling_error(512, 2.0, BeurlingConvention::Flipped) > 1e-2);
    CHECK(beurling_error(64, 2.0, BeurlingConvention::Standard, true) == 0.0);
    auto grid = PlaneGrid::sample([](cplx) { return cplx{0.0, 0.0}; }, 256, 2.0);
    auto r = beurling_selftest(grid);
    CHECK(r.pass);
    CHECK(r.error_flipped > r.error_standard);
}

TEST_CASE("grid sampling") {
    auto g = PlaneGrid::sample(constant_mu(), 64, 2.0);
    CHECK(g.mu.size() == 64u * 64u);
    CHECK(g.mu_sup() <= 0.3 + 1e-15);
    CHECK(g.spacing() == doctest::Approx(4.0 / 64));
    // far cells are zero, deep interior cells carry the full value
    CHECK(g.mu[0] == cplx{0.0, 0.0});
    CHECK_THROWS_AS(PlaneGrid::sample(constant_mu(), 100, 2.0), DomainError);
    CHECK_THROWS_AS(PlaneGrid::sample(constant_mu(), 64, 0.9), DomainError);
}

TEST_CASE("zero coefficient gives the identity") {
    auto g = PlaneGrid::sample([](cplx) { return cplx{0.0, 0.0}; }, 128, 2.0);
    auto sol = principal_solution(g);
    CHECK(sol.converged);
    auto res = triviality_residual(sol);
    CHECK(res.res_outer == 0.0);
    CHECK(res.res_boundary == 0.0);
    CHECK(std::abs(sol({0.3, 0.2}) - cplx{0.3, 0.2}) == 0.0);
    auto j = residual_report(sol, res);
    for (const char* k : {"n", "L", "iterations", "residual_l2", "res_outer", "res_boundary"}) CHECK(j.contains(k));
}

TEST_CASE("constant coefficient against the closed form") {
    auto g = PlaneGrid::sample(constant_mu(), 512, 2.0);
    auto sol = principal_solution(g);
    CHECK(sol.converged);
    // Neumann residuals contract at least geometrically in k
    for (std::size_t i = 1; i < sol.history.size(); ++i) CHECK(sol.history[i] <= sol.history[i - 1] * 0.31);
    CHECK(annulus_disagreement(sol, constant_map, 0.2, 0.9) <= 5e-3);
    auto res = triviality_residual(sol);
    CHECK(res.res_outer <= 5e-3);
    CHECK(res.res_boundary <= 5e-3);
}

TEST_CASE("grid convergence") {
    double prev = 0.0;
    for (int n : {256, 512}) {
        auto sol = principal_solution(PlaneGrid::sample(constant_mu(), n, 2.0));
        const double e = annulus_disagreement(sol, constant_map, 0.2, 0.9);
        if (prev > 0.0) CHECK(prev / e >= 1.5);
        prev = e;
    }
}

TEST_CASE("negative-mode coefficient is not trivial") {
    auto anti = [](cplx z) {
        const cplx w = std::conj(z) / std::abs(z);
        return 0.2 * w * w;
    };
    auto sol = principal_solution(PlaneGrid::sample(anti, 256, 2.0));
    auto res = triviality_residual(sol);
    CHECK(res.res_outer > 0.02);
}

TEST_CASE("iteration cap leaves the solution unconverged") {
    OracleOptions o;
    o.max_iterations = 3;
    o.tolerance = 1e-14;
    auto sol = principal_solution(PlaneGrid::sample(constant_mu(), 64, 2.0), o);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 3);
    CHECK(sol.history.size() == 3u);
}

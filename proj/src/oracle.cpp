#include "tb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tb/errors.hpp"
#include "tb/fft.hpp"

namespace tb {

namespace {

enum class Multiplier { Beurling, BeurlingFlipped, Cauchy };

// Symbols with K = kx + i ky: Beurling conj(K)/K, Cauchy -2i/K; 0 at K = 0.
std::vector<cplx> symbol(int n, double half_width, Multiplier which) {
    std::vector<cplx> s(static_cast<std::size_t>(n) * n);
    const double base = std::numbers::pi / half_width;
    for (int j = 0; j < n; ++j) {
        const double ky = base * (j < n / 2 ? j : j - n);
        for (int i = 0; i < n; ++i) {
            const double kx = base * (i < n / 2 ? i : i - n);
            const cplx K{kx, ky};
            cplx v{0.0, 0.0};
            if (i != 0 || j != 0) {
                switch (which) {
                    case Multiplier::Beurling: v = std::conj(K) / K; break;
                    case Multiplier::BeurlingFlipped: v = K / std::conj(K); break;
                    case Multiplier::Cauchy: v = cplx{0.0, -2.0} / K; break;
                }
            }
            s[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return s;
}

struct MultiplierOp {
    MultiplierOp(int n, double half_width, Multiplier which)
        : n(n), sym(symbol(n, half_width, which)), fwd(n, fft::Direction::Forward), bwd(n, fft::Direction::Backward) {}

    std::vector<cplx> apply(std::vector<cplx> data) const {
        fwd.execute(data);
        const double norm = 1.0 / (static_cast<double>(n) * n);
        for (std::size_t i = 0; i < data.size(); ++i) data[i] *= sym[i] * norm;
        bwd.execute(data);
        return data;
    }

    int n;
    std::vector<cplx> sym;
    fft::Plan2d fwd;
    fft::Plan2d bwd;
};

double grid_l2(const std::vector<cplx>& v, double spacing) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s) * spacing;
}

void check_size(int n, double half_width) {
    if (n < 8 || (n & (n - 1)) != 0) throw DomainError("plane grid size must be a power of two >= 8");
    if (!(half_width > 1.0)) throw DomainError("plane grid half-width must exceed 1 so the disk lies inside");
}

}  // namespace

double PlaneGrid::mu_sup() const {
    double m = 0.0;
    for (const auto& v : mu) m = std::max(m, std::abs(v));
    return m;
}

PlaneGrid PlaneGrid::sample(const MuSampler& mu, int n, double half_width) {
    check_size(n, half_width);
    PlaneGrid g;
    g.n = n;
    g.half_width = half_width;
    g.mu.assign(static_cast<std::size_t>(n) * n, cplx{0.0, 0.0});
    const double h = g.spacing();
    constexpr int kSub = 8;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const cplx z = g.node(i, j);
            const double r = std::abs(z);
            cplx& cell = g.mu[static_cast<std::size_t>(j) * n + i];
            if (std::abs(r - 1.0) < h) {
                // cell straddles the circle: average mu 1_D over a sub-grid
                cplx acc{0.0, 0.0};
                for (int b = 0; b < kSub; ++b) {
                    for (int a = 0; a < kSub; ++a) {
                        const cplx w = z + h * cplx{(a + 0.5) / kSub - 0.5, (b + 0.5) / kSub - 0.5};
                        if (std::abs(w) <= 1.0) acc += mu(w);
                    }
                }
                cell = acc / static_cast<double>(kSub * kSub);
            } else if (r < 1.0 && r > 0.0) {
                cell = mu(z);
            }
        }
    }
    return g;
}

PrincipalSolution principal_solution(const PlaneGrid& grid, const OracleOptions& options) {
    check_size(grid.n, grid.half_width);
    if (!(grid.mu_sup() < 1.0)) throw DomainError("principal_solution: requires sup |mu| < 1");
    const MultiplierOp beurling(grid.n, grid.half_width, Multiplier::Beurling);
    const double dx = grid.spacing();

    PrincipalSolution sol;
    sol.n = grid.n;
    sol.half_width = grid.half_width;
    sol.h.assign(grid.mu.size(), cplx{0.0, 0.0});
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        // h <- mu (1 + B h)
        std::vector<cplx> next = beurling.apply(sol.h);
        double diff = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = grid.mu[i] * (1.0 + next[i]);
            diff += std::norm(next[i] - sol.h[i]);
        }
        sol.h = std::move(next);
        sol.iterations = it;
        sol.residual_l2 = std::sqrt(diff) * dx;
        sol.history.push_back(sol.residual_l2);
        if (sol.residual_l2 <= options.tolerance) {
            sol.converged = true;
            break;
        }
        if (sol.residual_l2 < best) {
            best = sol.residual_l2;
            since_best = 0;
        } else if (++since_best >= options.stall_window) {
            throw NonConvergence("principal_solution: residual stalled at " + std::to_string(sol.residual_l2),
                                 sol.history);
        }
    }

    const MultiplierOp cauchy(grid.n, grid.half_width, Multiplier::Cauchy);
    sol.cauchy = cauchy.apply(sol.h);
    // The periodic transform drops the zero mode; pin the free constant by
    // making the outermost ring of cells average to zero.
    cplx edge{0.0, 0.0};
    int count = 0;
    const int n = grid.n;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
                edge += sol.cauchy[static_cast<std::size_t>(j) * n + i];
                ++count;
            }
        }
    }
    edge /= static_cast<double>(count);
    for (auto& v : sol.cauchy) v -= edge;
    return sol;
}

cplx PrincipalSolution::operator()(cplx z) const {
    const double dx = 2.0 * half_width / n;
    const double u = (z.real() + half_width) / dx - 0.5;
    const double v = (z.imag() + half_width) / dx - 0.5;
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    const double au = u - fu;
    const double av = v - fv;
    auto wrap = [this](long i) { return static_cast<std::size_t>(((i % n) + n) % n); };
    const auto i0 = wrap(static_cast<long>(fu));
    const auto i1 = wrap(static_cast<long>(fu) + 1);
    const auto j0 = wrap(static_cast<long>(fv));
    const auto j1 = wrap(static_cast<long>(fv) + 1);
    const auto N = static_cast<std::size_t>(n);
    const cplx c = (1.0 - au) * (1.0 - av) * cauchy[j0 * N + i0] + au * (1.0 - av) * cauchy[j0 * N + i1] +
                   (1.0 - au) * av * cauchy[j1 * N + i0] + au * av * cauchy[j1 * N + i1];
    return z + c;
}

TrivialityResidual triviality_residual(const PrincipalSolution& solution, int samples) {
    TrivialityResidual r;
    for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * std::numbers::pi * i / samples;
        const cplx outer = std::polar(1.5, th);
        const cplx bnd = std::polar(1.0, th);
        r.res_outer = std::max(r.res_outer, std::abs(solution(outer) - outer));
        r.res_boundary = std::max(r.res_boundary, std::abs(solution(bnd) - bnd));
    }
    return r;
}

json residual_report(const PrincipalSolution& solution, const TrivialityResidual& residual) {
    return {{"n", solution.n},
            {"L", solution.half_width},
            {"iterations", solution.iterations},
            {"residual_l2", solution.residual_l2},
            {"res_outer", residual.res_outer},
            {"res_boundary", residual.res_boundary}};
}

double beurling_error(int n, double half_width, BeurlingConvention convention, bool zero_bump) {
    check_size(n, half_width);
    const double sigma = half_width / 8.0;
    const double dx = 2.0 * half_width / n;
    std::vector<cplx> dbar(static_cast<std::size_t>(n) * n);
    std::vector<cplx> d(dbar.size());
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const cplx z{-half_width + (i + 0.5) * dx, -half_width + (j + 0.5) * dx};
            const double g = zero_bump ? 0.0 : std::exp(-std::norm(z) / (sigma * sigma));
            const auto idx = static_cast<std::size_t>(j) * n + i;
            dbar[idx] = -z * g / (sigma * sigma);
            d[idx] = -std::conj(z) * g / (sigma * sigma);
        }
    }
    const MultiplierOp op(n, half_width,
                          convention == BeurlingConvention::Standard ? Multiplier::Beurling : Multiplier::BeurlingFlipped);
    const auto bd = op.apply(dbar);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= bd[i];
    return grid_l2(d, dx);
}

SelftestResult beurling_selftest(const PlaneGrid& grid) {
    SelftestResult r;
    r.error_standard = beurling_error(grid.n, grid.half_width, BeurlingConvention::Standard);
    r.error_flipped = beurling_error(grid.n, grid.half_width, BeurlingConvention::Flipped);
    r.pass = r.error_standard <= kBeurlingSelftestTolerance;
    if (!r.pass && r.error_flipped > kBeurlingSelftestTolerance)
        throw ConventionError("beurling_selftest: neither multiplier convention reproduces d g from dbar g");
    return r;
}

}  // namespace tb

#pragma once

// Principal solution of the Beltrami equation f_zbar = mu f_z on the plane,
// mu extended by zero outside the disk, via a Neumann series for
// h = f_zbar with the Beurling transform applied as a Fourier multiplier on
// a periodic grid. Independent of the Loewner-chain route.

#include <complex>
#include <string>
#include <vector>

#include "tb/beltrami.hpp"

namespace tb {

/// n x n cell-centred samples of mu on [-L, L]^2, row-major (row = y).
struct PlaneGrid {
    int n = 512;
    double half_width = 2.0;
    std::vector<cplx> mu;

    double spacing() const { return 2.0 * half_width / n; }
    cplx node(int i, int j) const {
        const double h = spacing();
        return {-half_width + (i + 0.5) * h, -half_width + (j + 0.5) * h};
    }
    double mu_sup() const;

    /// Samples mu at cell centres inside the closed disk, zero elsewhere.
    static PlaneGrid sample(const MuSampler& mu, int n = 512, double half_width = 2.0);
};

struct OracleOptions {
    int max_iterations = 200;
    double tolerance = 1e-10;
    int stall_window = 10;
};

struct PrincipalSolution {
    int n = 0;
    double half_width = 0.0;
    std::vector<cplx> h;        // f_zbar at nodes
    std::vector<cplx> cauchy;   // f(z) - z at nodes
    int iterations = 0;
    double residual_l2 = 0.0;
    std::vector<double> history;
    bool converged = false;

    /// z + bilinear interpolation of the Cauchy transform.
    cplx operator()(cplx z) const;
};

/// Throws NonConvergence if the residual stops decreasing above tolerance.
PrincipalSolution principal_solution(const PlaneGrid& grid, const OracleOptions& options = {});

struct TrivialityResidual {
    double res_outer = 0.0;     // max |F(z) - z| on |z| = 1.5
    double res_boundary = 0.0;  // max |F(z) - z| on |z| = 1
};

TrivialityResidual triviality_residual(const PrincipalSolution& solution, int samples = 256);

/// {"n", "L", "iterations", "residual_l2", "res_outer", "res_boundary"}
json residual_report(const PrincipalSolution& solution, const TrivialityResidual& residual);

enum class BeurlingConvention { Standard, Flipped };

/// Grid L2 error of B(dbar g) - d g for a Gaussian bump (or g = 0).
double beurling_error(int n, double half_width, BeurlingConvention convention, bool zero_bump = false);

struct SelftestResult {
    double error_standard = 0.0;
    double error_flipped = 0.0;
    bool pass = false;
};

inline constexpr double kBeurlingSelftestTolerance = 1e-6;

/// Throws ConventionError if neither multiplier convention passes.
SelftestResult beurling_selftest(const PlaneGrid& grid);

}  // namespace tb

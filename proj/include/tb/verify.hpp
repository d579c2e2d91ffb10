#pragma once

// Verification suite: pairing integrals against monomials, orchestration of
// every triviality check, and file emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tb/beltrami.hpp"
#include "tb/oracle.hpp"
#include "tb/qcmap.hpp"

namespace tb {

/// A Beltrami coefficient to check: either a validated spec, or a raw
/// sampler used for negative controls that no spec can express.
struct MuSource {
    std::string name;
    MuSampler mu;
    double k = 0.0;
    std::vector<double> jump_radii;  // exp(-breakpoint), increasing
    std::optional<BeltramiSpec> spec;

    static MuSource from_spec(BeltramiSpec spec);
    /// mu(z) = c (z/|z|)^m on the disk.
    static MuSource angular_mode(cplx c, int m, std::string name = {});
    /// Either a spec object or {"sampler": {"kind": "angular_mode", "c": .., "m": ..}}.
    static MuSource from_json(const json& j);
};

json load_json(const std::filesystem::path& path);
MuSource load_source(const std::filesystem::path& path);

struct InfinitesimalResult {
    std::vector<double> values;  // |int_D mu z^n dx dy|, n = 0..n_max
    double max = 0.0;
};

/// Angular integrals by FFT, radial Gauss-Legendre on panels split at the
/// jump radii.
InfinitesimalResult infinitesimal_defect(const MuSource& source, int n_max, int radial_panels_per_piece = 4);

struct RunConfig {
    json spec_json;
    std::filesystem::path base_dir;
    std::uint64_t seed = 20240611;
    std::optional<std::filesystem::path> output_dir;

    struct Checks {
        bool budget = true;
        bool membership = true;
        bool chain = true;
        bool dilatation = true;
        bool infinitesimal = true;
        bool oracle = true;
        bool mesh = true;
    } checks;

    double rtol = 1e-10;
    double atol = 1e-12;
    double t_max = 12.0;
    double membership_tol = kAnalyticityTolerance;
    double dilatation_tol = 1e-4;
    double infinitesimal_tol = 1e-8;
    double chain_tol = 1e-9;
    double chain_fd_tol = 1e-6;

    int membership_times = 16;
    int modes = 256;
    int chain_points = 200;
    int dilatation_points = 100;
    double fd_h = kDefaultFdStep;
    int n_max = 16;
    int oracle_n = 512;
    double oracle_L = 2.0;
    int mesh_rings = 32;
    int mesh_sectors = 64;
    int polar_p = 32;
    int polar_m = 64;

    /// Throws ConfigError on malformed or non-positive settings.
    static RunConfig from_json(const json& j, const std::filesystem::path& base_dir = {});
    MuSource source() const;
};

struct CheckResult {
    std::string name;
    std::string status;  // "pass", "fail" or "skipped"
    double value = 0.0;
    double threshold = 0.0;
    double runtime_s = 0.0;
    json details = json::object();
};

struct VerificationReport {
    std::string spec_name;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool passed() const;
    json to_json(bool include_timing = true) const;
};

VerificationReport run_suite(const RunConfig& config);

/// Oracle threshold calibrated on the constant coefficient 0.3 (z/|z|)^2
/// at the same grid, where the exact solution is z |z|^{q-1}, q = 13/7.
struct OracleCalibration {
    double res_outer = 0.0;
    double res_boundary = 0.0;
    double interior_error = 0.0;
    double threshold = 0.0;
};

inline constexpr double kOracleSafety = 2.0;
inline constexpr double kOracleTarget = 5e-3;

OracleCalibration calibrate_oracle(int n, double half_width);

/// max |F(z) - exact(z)| over an annulus sample, for a closed-form exact map.
double annulus_disagreement(const PrincipalSolution& sol, const std::function<cplx(cplx)>& exact, double r_lo,
                            double r_hi, int radial = 8, int angular = 64);

/// Source and image meshes, viewBox [-1.1, 1.1]^2, one path per triangle.
std::pair<std::string, std::string> render_svg(const Triangulation& mesh, const std::vector<FieldRow>& rows);

/// Writes text to a file, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tb

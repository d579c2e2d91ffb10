#pragma once

// The quasiconformal self-map of the disk assembled from an inverse Loewner
// chain: f(z) = omega(z/|z|, -log|z|) inside the disk, identity outside.

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "tb/loewner.hpp"

namespace tb {

class QCMap {
public:
    explicit QCMap(ChainEvaluator evaluator);

    cplx operator()(cplx z) const;

    const ChainEvaluator& evaluator() const { return evaluator_; }
    double t_max() const { return evaluator_.options().t_max; }
    double r_min() const;
    /// Error committed for 0 < |z| < r_min by evaluating at t_max.
    double truncation_bound() const;

private:
    ChainEvaluator evaluator_;
};

cplx f_at(const QCMap& map, cplx z);

struct PolarGrid {
    std::vector<double> radii;  // increasing
    int angular = 0;

    /// p geometric radii in [r_min, 1] plus every exp(-breakpoint) radius
    /// inside that range.
    static PolarGrid standard(int p, int m, double t_max, const std::vector<Breakpoint>& bps = {});
    std::vector<cplx> nodes() const;
};

struct Triangulation {
    std::vector<cplx> vertices;
    std::vector<std::array<int, 3>> triangles;

    /// Vertex 0 at the origin; ring j = 1..rings has about sectors*j/rings
    /// vertices (at least 4) on |z| = (j+2)/(rings+2), the last ring on
    /// |z| = 1. rings*sectors triangles when sectors = 2*rings.
    /// Counter-clockwise triangles.
    static Triangulation concentric(int rings = 32, int sectors = 64);
    std::vector<int> boundary_vertices() const;
};

struct FieldRow {
    cplx z;
    cplx fz;
    bool ok = true;
};

/// One row per node in input order; failures flag the row (fz = NaN).
std::vector<FieldRow> f_grid(const QCMap& map, std::span<const cplx> nodes);

/// CSV with columns x, y, fx, fy, flag.
std::string field_csv(const std::vector<FieldRow>& rows);

inline constexpr double kDefaultFdStep = 1e-3;

struct DilatationEstimate {
    cplx value;
    double t;
    double theta;
    double h;
};

/// Complex dilatation of f at z = exp(-t - i theta) by central differences
/// of F(t, theta) = omega(exp(-i theta), t). All stencil points share one
/// step plan built at (t, theta).
DilatationEstimate dilatation_fd(const QCMap& map, double t, double theta, double h = kDefaultFdStep);

/// The same estimate for several step sizes on a shared plan.
std::vector<cplx> dilatation_fd_multi(const QCMap& map, double t, double theta, std::span<const double> hs);

/// mu at exp(-t) zeta with zeta = exp(-i theta): zeta^2 psi_t(zeta).
cplx dilatation_target(const BeltramiSpec& spec, double t, double theta);

struct OrientationReport {
    std::size_t triangles = 0;
    std::size_t negative = 0;
    double min_signed_area = 0.0;
    double max_boundary_displacement = 0.0;
    bool all_positive() const { return negative == 0; }
};

double signed_area(cplx a, cplx b, cplx c);
OrientationReport orientation_check(const Triangulation& mesh, const std::vector<FieldRow>& rows);

}  // namespace tb

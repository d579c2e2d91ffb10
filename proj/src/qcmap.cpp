#include "tb/qcmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "tb/errors.hpp"
#include "tb/parallel.hpp"

namespace tb {

QCMap::QCMap(ChainEvaluator evaluator) : evaluator_(std::move(evaluator)) {}

double QCMap::r_min() const { return std::exp(-t_max()); }

double QCMap::truncation_bound() const {
    const double k = evaluator_.family().k();
    return std::exp(-t_max() * (1.0 - k) / (1.0 + k));
}

cplx QCMap::operator()(cplx z) const {
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    // |z| within rounding of the circle counts as boundary: t = 0 there
    if (r >= 1.0 - 4.0 * std::numeric_limits<double>::epsilon()) return z;
    const double t = std::min(-std::log(r), t_max());
    return evaluator_.omega(z / r, t);
}

cplx f_at(const QCMap& map, cplx z) { return map(z); }

PolarGrid PolarGrid::standard(int p, int m, double t_max, const std::vector<Breakpoint>& bps) {
    if (p < 2 || m < 1) throw DomainError("polar grid needs p >= 2 radial and m >= 1 angular nodes");
    PolarGrid g;
    g.angular = m;
    for (int i = 0; i < p; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(p - 1);
        g.radii.push_back(std::exp(-t_max * (1.0 - u)));
    }
    g.radii.back() = 1.0;
    for (const auto& bp : bps)
        if (bp.t > 0.0 && bp.t < t_max) g.radii.push_back(std::exp(-bp.t));
    std::sort(g.radii.begin(), g.radii.end());
    g.radii.erase(std::unique(g.radii.begin(), g.radii.end()), g.radii.end());
    return g;
}

std::vector<cplx> PolarGrid::nodes() const {
    std::vector<cplx> out;
    out.reserve(radii.size() * static_cast<std::size_t>(angular));
    for (double r : radii)
        for (int j = 0; j < angular; ++j)
            out.push_back(std::polar(r, 2.0 * std::numbers::pi * j / angular));
    return out;
}

double signed_area(cplx a, cplx b, cplx c) {
    const cplx u = b - a;
    const cplx v = c - a;
    return 0.5 * (u.real() * v.imag() - u.imag() * v.real());
}

Triangulation Triangulation::concentric(int rings, int sectors) {
    if (rings < 1 || sectors < 3) throw DomainError("triangulation needs rings >= 1 and sectors >= 3");
    std::vector<int> count{1};
    for (int j = 1; j <= rings; ++j)
        count.push_back(static_cast<int>(std::lround(static_cast<double>(sectors) * j / rings)));
    // pool the innermost rings so none has fewer than 4 vertices; the total is unchanged
    int pooled = 0;
    int inner_rings = 0;
    for (int j = 1; j < rings; ++j) {
        pooled += count[j];
        if (pooled >= 4 * j) {
            inner_rings = j;
            break;
        }
    }
    if (inner_rings > 0) {
        for (int j = 1; j < inner_rings; ++j) count[j] = 4;
        count[inner_rings] = pooled - 4 * (inner_rings - 1);
    } else {
        for (int j = 1; j < rings; ++j) count[j] = std::max(count[j], 4);
    }
    count[rings] = std::max(count[rings], 3);
    // radii are shifted outward so the central fan is not much smaller than its neighbours
    const double shift = 2.0;
    Triangulation m;
    m.vertices.push_back({0.0, 0.0});
    std::vector<int> start{0};
    for (int j = 1; j <= rings; ++j) {
        const int n = count[j];
        start.push_back(static_cast<int>(m.vertices.size()));
        const double r = (j + shift) / (rings + shift);
        for (int i = 0; i < n; ++i) {
            if (j == rings) {
                // boundary vertices exactly on the circle
                const double th = 2.0 * std::numbers::pi * i / n;
                m.vertices.push_back({std::cos(th), std::sin(th)});
            } else {
                m.vertices.push_back(std::polar(r, 2.0 * std::numbers::pi * i / n));
            }
        }
    }
    auto add = [&](int a, int b, int c) {
        if (signed_area(m.vertices[a], m.vertices[b], m.vertices[c]) < 0.0) std::swap(b, c);
        m.triangles.push_back({a, b, c});
    };
    for (int i = 0; i < count[1]; ++i) add(0, start[1] + i, start[1] + (i + 1) % count[1]);
    for (int j = 2; j <= rings; ++j) {
        const int ni = count[j - 1];
        const int no = count[j];
        auto inner = [&](int a) { return start[j - 1] + a % ni; };
        auto outer = [&](int b) { return start[j] + b % no; };
        int a = 0;
        int b = 0;
        while (a < ni || b < no) {
            const double next_in = static_cast<double>(a + 1) / ni;
            const double next_out = static_cast<double>(b + 1) / no;
            if (b < no && (a == ni || next_out <= next_in)) {
                add(inner(a), outer(b), outer(b + 1));
                ++b;
            } else {
                add(inner(a), outer(b), inner(a + 1));
                ++a;
            }
        }
    }
    return m;
}

std::vector<int> Triangulation::boundary_vertices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (std::abs(vertices[i]) >= 1.0 - 1e-15) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<FieldRow> f_grid(const QCMap& map, std::span<const cplx> nodes) {
    std::vector<FieldRow> rows(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        rows[i].z = nodes[i];
        try {
            rows[i].fz = map(nodes[i]);
        } catch (const Error&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rows[i].fz = {nan, nan};
            rows[i].ok = false;
        }
    });
    return rows;
}

std::string field_csv(const std::vector<FieldRow>& rows) {
    std::string out = "x,y,fx,fy,flag\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", r.z.real(), r.z.imag(), r.fz.real(),
                      r.fz.imag(), r.ok ? 0 : 1);
        out += buf;
    }
    return out;
}

namespace {

void check_stencil(const QCMap& map, double t, double h) {
    if (!(h >= 1e-5)) throw DomainError("dilatation_fd: step must be at least 1e-5");
    if (!(t > h && t < map.t_max() - h)) throw DomainError("dilatation_fd: t must lie in (h, t_max - h)");
    for (const auto& bp : map.evaluator().family().breakpoints()) {
        if (bp.t > 0.0 && bp.t >= t - h && bp.t <= t + h)
            throw BreakpointStraddle("dilatation_fd: stencil crosses the breakpoint t = " + std::to_string(bp.t));
    }
}

cplx fd_value(const ChainEvaluator& ev, const StepPlan& plan, double t, double theta, double h) {
    const cplx zeta = std::polar(1.0, -theta);
    const cplx ft = (ev.omega_planned(zeta, t + h, plan) - ev.omega_planned(zeta, t - h, plan)) / (2.0 * h);
    const cplx fth =
        (ev.omega_planned(std::polar(1.0, -(theta + h)), t, plan) - ev.omega_planned(std::polar(1.0, -(theta - h)), t, plan)) /
        (2.0 * h);
    const cplx i{0.0, 1.0};
    return std::polar(1.0, -2.0 * theta) * (ft + i * fth) / (ft - i * fth);
}

}  // namespace

std::vector<cplx> dilatation_fd_multi(const QCMap& map, double t, double theta, std::span<const double> hs) {
    for (double h : hs) check_stencil(map, t, h);
    const auto& ev = map.evaluator();
    const StepPlan plan = ev.plan(std::polar(1.0, -theta), t);
    std::vector<cplx> out;
    for (double h : hs) out.push_back(fd_value(ev, plan, t, theta, h));
    return out;
}

DilatationEstimate dilatation_fd(const QCMap& map, double t, double theta, double h) {
    const double hs[] = {h};
    return {dilatation_fd_multi(map, t, theta, hs).front(), t, theta, h};
}

cplx dilatation_target(const BeltramiSpec& spec, double t, double theta) {
    if (!(t >= 0.0)) throw DomainError("dilatation_target: t must be non-negative");
    const cplx zeta = std::polar(1.0, -theta);
    return zeta * zeta * spec.family()(zeta, t);
}

OrientationReport orientation_check(const Triangulation& mesh, const std::vector<FieldRow>& rows) {
    if (rows.size() != mesh.vertices.size()) throw DomainError("orientation_check: sample count does not match mesh");
    OrientationReport rep;
    rep.triangles = mesh.triangles.size();
    rep.min_signed_area = std::numeric_limits<double>::infinity();
    for (const auto& tri : mesh.triangles) {
        const double a = signed_area(rows[tri[0]].fz, rows[tri[1]].fz, rows[tri[2]].fz);
        if (!(a > 0.0)) ++rep.negative;
        rep.min_signed_area = std::min(rep.min_signed_area, a);
    }
    for (int v : mesh.boundary_vertices())
        rep.max_boundary_displacement = std::max(rep.max_boundary_displacement, std::abs(rows[v].fz - mesh.vertices[v]));
    return rep;
}

}  // namespace tb

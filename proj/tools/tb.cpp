// tb: construct and verify boundary-fixing quasiconformal maps of the disk
// from analytic Beltrami coefficients.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tb/errors.hpp"
#include "tb/verify.hpp"

namespace fs = std::filesystem;
using namespace tb;

namespace {

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

BeltramiSpec require_spec(const MuSource& src) {
    if (!src.spec) throw ConfigError("this command needs a psi-family spec, not a sampler");
    return *src.spec;
}

QCMap make_map(const BeltramiSpec& spec, double rtol, double atol) {
    ChainOptions o;
    o.rtol = rtol;
    o.atol = atol;
    return QCMap(ChainEvaluator(HerglotzFamily(spec), o));
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

// "polar:PxM" or "tri:RxS"
struct GridSpec {
    std::string kind;
    int a = 0;
    int b = 0;
};

GridSpec parse_grid(const std::string& s) {
    const auto colon = s.find(':');
    const auto x = s.find('x', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || x == std::string::npos) throw ConfigError("grid must be polar:PxM or tri:RxS");
    GridSpec g{s.substr(0, colon), std::stoi(s.substr(colon + 1, x - colon - 1)), std::stoi(s.substr(x + 1))};
    if (g.kind != "polar" && g.kind != "tri") throw ConfigError("grid kind must be polar or tri");
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trivial Beltrami coefficients via inverse Loewner chains"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_dir;
    double rtol = 1e-10;
    double atol = 1e-12;

    auto* validate = app.add_subcommand("validate", "check the norm budget of a spec");
    validate->add_option("spec", spec_path, "spec JSON")->required();

    std::string grid = "polar:32x64";
    auto* construct = app.add_subcommand("construct", "evaluate f on a polar grid or triangulation");
    construct->add_option("spec", spec_path)->required();
    construct->add_option("--grid", grid, "polar:PxM or tri:RxS");
    construct->add_option("--out", out_dir, "output directory")->required();
    construct->add_option("--rtol", rtol);
    construct->add_option("--atol", atol);

    int points = 100;
    double h = kDefaultFdStep;
    std::uint64_t seed = 20240611;
    auto* dilat = app.add_subcommand("dilatation", "finite-difference dilatation against the target");
    dilat->set_help_flag("--help", "Print this help message and exit");
    dilat->add_option("spec", spec_path)->required();
    dilat->add_option("--points", points);
    dilat->add_option("--h", h);
    dilat->add_option("--seed", seed);
    dilat->add_option("--rtol", rtol);
    dilat->add_option("--atol", atol);

    std::string times = "0.1,0.5,1,2";
    int modes = 256;
    auto* fourier = app.add_subcommand("fourier", "boundary-slice Fourier modes and analyticity defect");
    fourier->add_option("spec", spec_path)->required();
    fourier->add_option("--t", times, "comma-separated times");
    fourier->add_option("--modes", modes);
    fourier->add_option("--out", out_dir, "write slice CSVs here");

    int nmax = 16;
    auto* infin = app.add_subcommand("infinitesimal", "pairing integrals against z^n");
    infin->add_option("spec", spec_path)->required();
    infin->add_option("--nmax", nmax);

    int n = 512;
    double L = 2.0;
    auto* oracle = app.add_subcommand("oracle", "plane principal solution and triviality residual");
    oracle->add_option("spec", spec_path)->required();
    oracle->add_option("--n", n);
    oracle->add_option("--L", L);

    std::string config_path;
    auto* suite = app.add_subcommand("suite", "run the full verification suite");
    suite->add_option("config", config_path, "config JSON")->required();

    int rings = 32;
    int sectors = 64;
    auto* render = app.add_subcommand("render", "SVG of a triangulation and its image");
    render->add_option("spec", spec_path)->required();
    render->add_option("--out", out_dir)->required();
    render->add_option("--rings", rings);
    render->add_option("--sectors", sectors);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            try {
                const auto spec = require_spec(load_source(spec_path));
                print(validate_spec(spec).to_json());
                return 0;
            } catch (const BudgetExceeded& e) {
                print({{"accepted", false}, {"error", "BudgetExceeded"}, {"message", e.what()}});
                return 2;
            } catch (const BoundViolation& e) {
                print({{"accepted", false}, {"error", "BoundViolation"}, {"message", e.what()}});
                return 2;
            }
        }

        if (*construct) {
            const auto spec = require_spec(load_source(spec_path));
            const auto map = make_map(spec, rtol, atol);
            const auto g = parse_grid(grid);
            json summary;
            if (g.kind == "polar") {
                const auto nodes = PolarGrid::standard(g.a, g.b, map.t_max(), spec.breakpoints()).nodes();
                const auto rows = f_grid(map, nodes);
                write_text(fs::path(out_dir) / "field.csv", field_csv(rows));
                summary = {{"grid", grid}, {"nodes", rows.size()}};
            } else {
                const auto mesh = Triangulation::concentric(g.a, g.b);
                const auto rows = f_grid(map, mesh.vertices);
                write_text(fs::path(out_dir) / "field.csv", field_csv(rows));
                const auto rep = orientation_check(mesh, rows);
                summary = {{"grid", grid},
                           {"nodes", rows.size()},
                           {"triangles", rep.triangles},
                           {"negative", rep.negative},
                           {"min_signed_area", rep.min_signed_area},
                           {"max_boundary_displacement", rep.max_boundary_displacement}};
            }
            print(summary);
            return 0;
        }

        if (*dilat) {
            const auto spec = require_spec(load_source(spec_path));
            const auto map = make_map(spec, rtol, atol);
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> tdist(0.05, 5.0);
            std::uniform_real_distribution<double> adist(0.0, 2.0 * 3.141592653589793);
            json rows = json::array();
            double worst = 0.0;
            while (static_cast<int>(rows.size()) < points) {
                const double t = tdist(rng);
                const double th = adist(rng);
                bool near = false;
                for (const auto& bp : spec.breakpoints()) near = near || std::abs(bp.t - t) <= 4.0 * h;
                if (near) continue;
                const auto est = dilatation_fd(map, t, th, h);
                const cplx target = dilatation_target(spec, t, th);
                const double err = std::abs(est.value - target);
                worst = std::max(worst, err);
                rows.push_back({{"t", t}, {"theta", th}, {"fd", complex_to_json(est.value)},
                                {"target", complex_to_json(target)}, {"error", err}});
            }
            print({{"h", h}, {"max_error", worst}, {"points", rows}});
            return 0;
        }

        if (*fourier) {
            const auto src = load_source(spec_path);
            json out = json::array();
            for (double t : parse_list(times)) {
                const auto slice = slice_fourier(src.mu, t, modes);
                const double d = analyticity_defect(slice);
                out.push_back({{"t", t}, {"defect", d}, {"member", d <= kAnalyticityTolerance},
                               {"parseval_mass", slice.parseval_mass()}});
                if (!out_dir.empty()) {
                    char name[64];
                    std::snprintf(name, sizeof name, "slice_t%.6g.csv", t);
                    write_text(fs::path(out_dir) / name, slice_csv(slice));
                }
            }
            print({{"modes", modes}, {"slices", out}});
            return 0;
        }

        if (*infin) {
            const auto res = infinitesimal_defect(load_source(spec_path), nmax);
            print({{"n_max", nmax}, {"values", res.values}, {"max", res.max}});
            return 0;
        }

        if (*oracle) {
            const auto src = load_source(spec_path);
            const auto sol = principal_solution(PlaneGrid::sample(src.mu, n, L));
            print(residual_report(sol, triviality_residual(sol)));
            return 0;
        }

        if (*suite) {
            const fs::path cfg_path(config_path);
            const auto cfg = RunConfig::from_json(load_json(cfg_path), cfg_path.parent_path());
            const auto report = run_suite(cfg);
            const auto j = report.to_json();
            if (cfg.output_dir) write_text(*cfg.output_dir / "report.json", j.dump(2) + "\n");
            print(j);
            return report.passed() ? 0 : 1;
        }

        if (*render) {
            const auto spec = require_spec(load_source(spec_path));
            const auto map = make_map(spec, rtol, atol);
            const auto mesh = Triangulation::concentric(rings, sectors);
            const auto rows = f_grid(map, mesh.vertices);
            const auto [source_svg, image_svg] = render_svg(mesh, rows);
            write_text(fs::path(out_dir) / "mesh_source.svg", source_svg);
            write_text(fs::path(out_dir) / "mesh_image.svg", image_svg);
            print({{"triangles", mesh.triangles.size()}, {"out", out_dir}});
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "tb: configuration error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "tb: " << e.what() << '\n';
        return 4;
    }
    return 0;
}

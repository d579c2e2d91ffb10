// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "support.hpp"
#include "tb/parallel.hpp"
#include "tb/verify.hpp"

using namespace tb;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << std::endl;
    if (!ok) ++failures;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

MuSampler sampler(const BeltramiSpec& s) {
    return [s](cplx z) { return mu_at(s, z); };
}

void identity_case() {
    const auto t0 = Clock::now();
    QCMap map{ChainEvaluator(HerglotzFamily(support::zero_spec()))};
    auto nodes = PolarGrid::standard(32, 64, map.t_max()).nodes();
    double worst = 0.0;
    for (const auto& r : f_grid(map, nodes)) worst = std::max(worst, std::abs(r.fz - r.z));
    const double dt = seconds_since(t0);
    report(1, worst <= 1e-9 && dt < 1.0, "identity max|f-z| = " + fmt(worst) + ", " + fmt(dt) + " s");
}

void constant_case() {
    const auto t0 = Clock::now();
    const double q = 13.0 / 7.0;
    QCMap map{ChainEvaluator(HerglotzFamily(support::constant_spec(0.3)))};
    auto nodes = PolarGrid::standard(32, 64, map.t_max()).nodes();
    double worst = 0.0;
    for (const auto& r : f_grid(map, nodes)) {
        if (std::abs(r.z) < std::exp(-12.0)) continue;
        const cplx exact = r.z * std::pow(std::abs(r.z), q - 1.0);
        worst = std::max(worst, std::abs(r.fz - exact) / std::abs(exact));
    }
    const double w = std::abs(map.evaluator().omega(0.5, 1.0) - 0.5 * std::exp(-q));
    const double dt = seconds_since(t0);
    report(2, worst <= 1e-8 && w <= 1e-9 && dt < 10.0,
           "constant rel err = " + fmt(worst) + ", omega(0.5,1) err = " + fmt(w) + ", " + fmt(dt) + " s");
}

void dilatation_case() {
    QCMap map{ChainEvaluator(HerglotzFamily(support::two_term_spec()))};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ut(0.05, 5.0), uth(0.0, 2.0 * std::numbers::pi);
    const int n = 500;
    std::vector<double> ts, ths;
    while (static_cast<int>(ts.size()) < n) {
        const double t = ut(rng);
        const double th = uth(rng);
        if (std::abs(t - std::numbers::ln2) < 2e-3) continue;
        ts.push_back(t);
        ths.push_back(th);
    }
    std::vector<double> e1(n), e2(n);
    parallel_for(n, [&](std::size_t i) {
        const cplx zeta = std::polar(1.0, -ths[i]);
        const cplx target = zeta * zeta * support::two_term_psi(zeta, ts[i]);
        const double hs[] = {1e-3, 5e-4};
        auto v = dilatation_fd_multi(map, ts[i], ths[i], hs);
        e1[i] = std::abs(v[0] - target);
        e2[i] = std::abs(v[1] - target);
    });
    double worst = 0.0;
    int good = 0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, e1[i]);
        const double ratio = e1[i] / e2[i];
        if (ratio >= 3.0 && ratio <= 5.0) ++good;
    }
    const double frac = static_cast<double>(good) / n;
    report(3, worst <= 1e-4 && frac >= 0.9,
           "dilatation max err = " + fmt(worst) + ", ratio in [3,5] at " + fmt(100 * frac) + "% of 500 points");
}

void infinitesimal_case() {
    auto two_term = infinitesimal_defect(MuSource::from_spec(support::two_term_spec()), 16);
    auto anti = infinitesimal_defect(MuSource::angular_mode(0.2, -2), 16);
    const double d = std::abs(anti.values[2] - 0.1 * std::numbers::pi);
    report(4, two_term.max <= 1e-8 && d <= 1e-6,
           "two-term defect = " + fmt(two_term.max) + ", control n=2 off 0.1 pi by " + fmt(d));
}

void membership_case() {
    auto mu = sampler(support::two_term_spec());
    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0}) worst = std::max(worst, analyticity_defect(slice_fourier(mu, t, 256)));
    auto anti = MuSource::angular_mode(0.2, -2);
    auto s = slice_fourier(anti.mu, 1.0, 256);
    const double d = std::abs(analyticity_defect(s) - 0.2);
    const double at4 = std::abs(std::abs(s.c(-4)) - 0.2);
    report(5, worst <= 1e-10 && d <= 1e-10 && at4 <= 1e-10,
           "two-term defect = " + fmt(worst) + ", control mode -4 off 0.2 by " + fmt(at4));
}

void oracle_case() {
    const int n = 512;
    const double L = 2.0;
    auto t0 = Clock::now();
    auto cal = calibrate_oracle(n, L);
    double slowest = seconds_since(t0);
    const double thr = cal.threshold;
    bool ok = thr <= kOracleTarget && cal.res_outer <= thr && cal.interior_error <= thr;

    t0 = Clock::now();
    auto two_term = principal_solution(PlaneGrid::sample(sampler(support::two_term_spec()), n, L));
    slowest = std::max(slowest, seconds_since(t0));
    auto rp = triviality_residual(two_term);
    const double two_term_value = std::max(rp.res_outer, rp.res_boundary);
    ok = ok && two_term.converged && two_term_value <= thr;

    t0 = Clock::now();
    auto anti = principal_solution(PlaneGrid::sample(MuSource::angular_mode(0.2, -2).mu, n, L));
    slowest = std::max(slowest, seconds_since(t0));
    auto ra = triviality_residual(anti);
    ok = ok && ra.res_outer > 10.0 * thr && slowest < 60.0;
    report(6, ok,
           "threshold = " + fmt(thr) + " (constant outer " + fmt(cal.res_outer) + ", interior " +
               fmt(cal.interior_error) + "), two-term " + fmt(two_term_value) + ", control outer " +
               fmt(ra.res_outer) + ", slowest solve " + fmt(slowest) + " s");
}

void chain_case() {
    HerglotzFamily fam(support::two_term_spec());
    ChainEvaluator ev(fam);
    const double rate = (1.0 - fam.k()) / (1.0 + fam.k());
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.0, 1.0), ut(0.01, 6.0), uth(0.0, 2.0 * std::numbers::pi);
    const int n = 200;
    struct Sample {
        cplx z;
        double t, s;
    };
    std::vector<Sample> samples(n);
    for (auto& s : samples) {
        s.z = std::polar(std::sqrt(ur(rng)), uth(rng));
        s.t = ut(rng);
        s.s = s.t * ur(rng);
    }
    std::vector<int> schwarz(n), decay(n), mono(n), comp(n), fd(n);
    parallel_for(n, [&](std::size_t i) {
        const auto& s = samples[i];
        const cplx w = ev.omega(s.z, s.t);
        schwarz[i] = std::abs(w) <= std::abs(s.z) + 1e-12;
        const double b = std::abs(ev.omega_prime_zero(s.t));
        decay[i] = b <= std::exp(-s.t * rate) * (1.0 + 1e-12);
        mono[i] = std::abs(ev.omega_prime_zero(s.s)) >= b;
        const cplx two = ev.omega(ev.characteristic(s.z, s.t, s.s), s.s);
        comp[i] = std::abs(two - w) <= 1e-9 * std::abs(w) + 1e-14;
        const double h = 1e-5;
        const cplx d = (ev.omega({h, 0.0}, s.t) - ev.omega({-h, 0.0}, s.t)) / (2.0 * h);
        fd[i] = std::abs(d - ev.omega_prime_zero(s.t)) <= 1e-6;
    });
    auto all = [](const std::vector<int>& v) { return std::all_of(v.begin(), v.end(), [](int x) { return x != 0; }); };
    auto count = [](const std::vector<int>& v) { return std::to_string(std::count(v.begin(), v.end(), 1)); };
    report(7, all(schwarz) && all(decay) && all(mono) && all(comp) && all(fd),
           "of 200: schwarz " + count(schwarz) + ", decay " + count(decay) + ", monotone " + count(mono) +
               ", composition " + count(comp) + ", b fd " + count(fd));
}

void mesh_case() {
    auto mesh = Triangulation::concentric(32, 64);
    QCMap map{ChainEvaluator(HerglotzFamily(support::two_term_spec()))};
    auto rows = f_grid(map, mesh.vertices);
    auto rep = orientation_check(mesh, rows);
    bool exact = true;
    for (int v : mesh.boundary_vertices()) exact = exact && rows[v].fz == mesh.vertices[v];
    report(8, rep.triangles == 2048 && rep.all_positive() && exact && rep.max_boundary_displacement == 0.0,
           std::to_string(rep.triangles - rep.negative) + "/" + std::to_string(rep.triangles) +
               " image triangles positive (min area " + fmt(rep.min_signed_area) + "), boundary fixed " +
               (exact ? "exactly" : "NOT exactly"));
}

json strip_timing(json j) {
    if (j.is_object()) {
        j.erase("runtime_s");
        for (auto& [k, v] : j.items()) v = strip_timing(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_timing(v);
    }
    return j;
}

void reproducibility_case() {
    const fs::path dir = fs::temp_directory_path() / ("tb_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << json{{"spec", (support::spec_dir() / "two_term.json").string()},
                                               {"seed", 1234},
                                               {"output_dir", "out"}}
                                              .dump(2);
    std::string runs[2];
    bool ran = true;
    for (int k = 0; k < 2; ++k) {
        const std::string cmd =
            std::string(TB_CLI) + " suite " + (dir / "config.json").string() + " > " + (dir / "stdout.txt").string();
        const int rc = std::system(cmd.c_str());
        ran = ran && rc == 0;
        std::ifstream in(dir / "out" / "report.json");
        std::stringstream ss;
        ss << in.rdbuf();
        runs[k] = ss.str();
    }
    bool same = false;
    if (!runs[0].empty() && !runs[1].empty())
        same = strip_timing(json::parse(runs[0])).dump(2) == strip_timing(json::parse(runs[1])).dump(2);
    fs::remove_all(dir);
    report(9, ran && same, std::string("two suite runs ") + (ran ? "passed" : "did not pass") + ", reports " +
                               (same ? "identical" : "differ") + " without timing");
}

}  // namespace

int main(int argc, char** argv) {
    // optional argument: run a single criterion
    const std::pair<int, void (*)()> cases[] = {{1, identity_case},   {2, constant_case},     {3, dilatation_case},
                                                {4, infinitesimal_case}, {5, membership_case}, {6, oracle_case},
                                                {7, chain_case},      {8, mesh_case},         {9, reproducibility_case}};
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    for (const auto& [id, fn] : cases) {
        if (only != 0 && id != only) continue;
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, false, std::string("error: ") + e.what());
        }
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}

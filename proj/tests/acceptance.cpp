// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line with the measured quantity next to its threshold.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "ydvl/csv.hpp"
#include "ydvl/experiments.hpp"
#include "ydvl/recipes.hpp"
#include "ydvl/run.hpp"

using namespace ydvl;
namespace fs = std::filesystem;

namespace {

FluidState state_from_recipe(const std::string& preset, const Grid& g,
                             const StepControl& ctl) {
    const DatumRecipe r = preset_recipe(preset);
    return make_state(build_rho0(r, g), build_omega0(r, g), ctl);
}

void report(const char* id, const char* label, bool ok, const std::string& detail) {
    std::printf("ACCEPTANCE %s %-28s %s (%s)\n", id, label, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

TEST_CASE("criterion 1: operator exactness", "[c1]") {
    const auto start = std::chrono::steady_clock::now();
    const Grid g(64);

    auto w = ScalarField::sampled(g, [](double x, double) { return std::cos(x); });
    const double e_bs = tu::max_err(biot_savart(w), [](double, double) { return 0.0; },
                                    [](double x, double) { return std::sin(x); });

    auto f1 = ScalarField::sampled(g, [](double x, double) { return std::cos(x); });
    auto f2 = ScalarField::sampled(
        g, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y); });
    auto f3 = ScalarField::sampled(g, [](double, double y) { return 4.0 * std::cos(2 * y); });
    const double e_il = std::max(
        {tu::max_err(inverse_laplacian(f1), [](double x, double) { return std::cos(x); }),
         tu::max_err(inverse_laplacian(f2),
                     [](double x, double y) { return std::sin(x) * std::sin(y); }),
         tu::max_err(inverse_laplacian(f3), [](double, double y) { return std::cos(2 * y); })});

    auto f = ScalarField::sampled(
        g, [](double x, double y) { return std::sin(x) * std::sin(y); });
    const double e_curl = linf(sub(curl2d(perp_gradient(f)), laplacian(f))) / 2.0;

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double err = std::max({e_bs, e_il, e_curl});
    const bool ok = err <= 1e-10 && elapsed < 1.0;
    report("c01", "operator-exactness", ok,
           "max rel err " + num(err) + " <= 1e-10, " + num(elapsed) + " s < 1 s");
    REQUIRE(ok);
}

TEST_CASE("criterion 2: steady Taylor-Green", "[c2]") {
    const auto start = std::chrono::steady_clock::now();
    const Grid g(64);
    StepControl ctl;
    ctl.cfl = 0.5;
    FluidState s = state_from_recipe("taylor_green_homogeneous", g, ctl);
    const VectorField u0 = s.full_velocity();
    RunOptions opt;
    opt.t_final = 1.0;
    opt.diagnostics_every = 0;
    RunResult rr = run_simulation(s, ctl, opt);
    const double drift = lp_norm(sub(rr.final_state.full_velocity(), u0), inf_p);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = drift <= 1e-6 && elapsed < 30.0;
    report("c02", "steady-taylor-green", ok,
           "|u(1)-u0|_inf " + num(drift) + " <= 1e-06, " + num(elapsed) + " s < 30 s");
    REQUIRE(ok);
}

TEST_CASE("criterion 3: homogeneous Yudovich conservation", "[c3]") {
    const Grid g(128);
    StepControl ctl;
    FluidState s = state_from_recipe("multimode_homogeneous", g, ctl);
    RunOptions opt;
    opt.t_final = 1.0;
    opt.diagnostics_every = 10;
    RunResult rr = run_simulation(s, ctl, opt);
    double drift = 0.0;
    for (double p : {2.0, 4.0, inf_p}) {
        const double n0 = rr.series.front().lp_omega.at(p);
        for (const auto& rec : rr.series)
            drift = std::max(drift, std::fabs(rec.lp_omega.at(p) - n0) / n0);
    }
    const bool ok = drift <= 1e-4;
    report("c03", "vorticity-norm-conservation", ok,
           "max rel drift " + num(drift) + " <= 1e-04 for p in {2,4,inf}");
    REQUIRE(ok);
}

TEST_CASE("criterion 4: energy law", "[c4]") {
    const Grid g(128);
    StepControl ctl;
    ctl.pressure_tol = 1e-10;
    FluidState s = state_from_recipe("variable_density_smooth", g, ctl);  // contrast 3:1
    RunOptions opt;
    opt.t_final = 1.0;
    opt.diagnostics_every = 10;
    RunResult rr = run_simulation(s, ctl, opt);
    const double e0 = rr.series.front().energy;
    double drift = 0.0;
    for (const auto& rec : rr.series)
        drift = std::max(drift, std::fabs(rec.energy - e0) / e0);
    const bool ok = drift <= 1e-6;  // per unit time over T = 1
    report("c04", "energy-conservation", ok,
           "rel drift " + num(drift) + " <= 1e-06 per unit time");
    REQUIRE(ok);
}

TEST_CASE("criterion 5: density maximum principle", "[c5]") {
    const Grid g(128);
    StepControl ctl;  // filter off
    FluidState s = state_from_recipe("variable_density_smooth", g, ctl);
    const double mn0 = tu::range_min(s.rho), mx0 = tu::range_max(s.rho);
    double worst = 0.0;
    RunOptions opt;
    opt.t_final = 1.0;
    opt.diagnostics_every = 0;
    opt.on_step = [&](const FluidState& st, long) {
        worst = std::max({worst, std::fabs(tu::range_min(st.rho) - mn0),
                          std::fabs(tu::range_max(st.rho) - mx0)});
    };
    run_simulation(s, ctl, opt);
    const bool ok = worst <= 1e-6;
    report("c05", "density-range-preservation", ok,
           "range drift " + num(worst) + " <= 1e-06, filter off");
    REQUIRE(ok);
}

TEST_CASE("criterion 6: manufactured pressure solution", "[c6]") {
    const Grid g(64);
    auto rho = ScalarField::sampled(g, [](double x, double) { return 2.0 + std::sin(x); });
    auto rhs = ScalarField::sampled(g, [](double x, double y) {
        return std::sin(y) / (2.0 + std::sin(x));
    });
    auto rep = solve_pressure_rhs(rho, rhs, 1e-12);
    const double err = tu::max_err(rep.pi, [](double, double y) { return std::sin(y); });
    const bool ok = err <= 1e-10 && rep.iterations <= 100;
    report("c06", "manufactured-pressure", ok,
           "|pi - pi*|_inf " + num(err) + " <= 1e-10, " +
               std::to_string(rep.iterations) + " CG iterations <= 100");
    REQUIRE(ok);
}

TEST_CASE("criterion 7: companion identities", "[c7]") {
    StepControl ctl;
    double resid0 = 0.0;
    double res_eta[2] = {0.0, 0.0}, res_x[2] = {0.0, 0.0};
    int idx = 0;
    for (int n : {64, 128}) {
        const Grid g(n);
        FluidState s = state_from_recipe("variable_density_smooth", g, ctl);
        auto [e0, x0] = companion_residuals(s);
        resid0 = std::max({resid0, e0, x0});
        RunOptions opt;
        opt.t_final = 1.0;
        opt.diagnostics_every = 0;
        RunResult rr = run_simulation(s, ctl, opt);
        auto [e1, x1] = companion_residuals(rr.final_state);
        res_eta[idx] = e1;
        res_x[idx] = x1;
        ++idx;
    }
    // A residual already at the rounding floor on the finer grid has no
    // measurable convergence order; the X identity propagates exactly for
    // band-limited states, so only its floor is checked there.
    auto order_ok = [](double coarse, double fine) {
        return fine <= 1e-10 || coarse / fine >= 4.0;
    };
    const bool ok = resid0 <= 1e-12 && res_eta[1] <= 1e-4 && res_x[1] <= 1e-4 &&
                    order_ok(res_eta[0], res_eta[1]) && order_ok(res_x[0], res_x[1]);
    report("c07", "companion-identities", ok,
           "t=0 resid " + num(resid0) + " <= 1e-12; t=1 n=128 eta " + num(res_eta[1]) +
               ", X " + num(res_x[1]) + " <= 1e-04; refinement ratios " +
               num(res_eta[0] / res_eta[1]) + ", " + num(res_x[0] / res_x[1]) +
               " (>= 4 or at rounding floor)");
    REQUIRE(ok);
}

TEST_CASE("criterion 8: Gronwall bound chain", "[c8]") {
    const Grid g(128);
    StepControl ctl;
    FluidState s = state_from_recipe("variable_density_smooth", g, ctl);
    RunOptions opt;
    opt.t_final = 1.0;
    opt.diagnostics_every = 1;
    RunResult rr = run_simulation(s, ctl, opt);

    const BoundEntry grad =
        check_gronwall_gradrho(rr.series, rr.series.front().sup_grad_rho, 1e-3);
    const BoundEntry eta = check_eta_transport_bound(
        rr.series, rr.series.front().lp_eta.at(4.0), 4.0, 1e-2);
    const bool ok = grad.satisfied && eta.satisfied;
    report("c08", "gronwall-chain", ok,
           "grad-rho bound " + std::string(grad.satisfied ? "holds" : "fails") +
               " at tol 1e-3 (lhs " + num(grad.lhs) + ", rhs " + num(grad.rhs) +
               "); eta bound " + std::string(eta.satisfied ? "holds" : "fails") +
               " at tol 1e-2 (lhs " + num(eta.lhs) + ", rhs " + num(eta.rhs) + ")");
    REQUIRE(ok);
}

TEST_CASE("criterion 9: twin-run stability", "[c9]") {
    const Grid g(64);
    StepControl ctl;
    const DatumRecipe rec = preset_recipe("variable_density_smooth");
    auto rho0 = build_rho0(rec, g);
    auto omega0 = build_omega0(rec, g);

    TwinPerturbation zero;
    StabilityTrace base = twin_run(rho0, omega0, zero, ctl, 0.5, 0.5, 4.0);
    bool zero_ok = true;
    for (double e : base.energy) zero_ok = zero_ok && e == 0.0;

    // The closed form is checked at delta = 1e-3; for smaller amplitudes the
    // perturbed state's representation rounding (~1e-16/delta relative in the
    // recovered difference) dominates the comparison.
    bool monotone = true;
    double prev = inf_p;
    double e0_err = 0.0;
    for (double delta : {1e-3, 1e-4, 1e-5}) {
        TwinPerturbation pert;
        pert.delta = delta;
        StabilityTrace tr = twin_run(rho0, omega0, pert, ctl, 0.5, 0.5, 4.0);
        monotone = monotone && tr.sup_energy < prev;
        prev = tr.sup_energy;
        if (delta == 1e-3) {
            const double closed_form =
                delta * delta * 4.0 * std::numbers::pi * std::numbers::pi;
            e0_err = std::fabs(tr.energy.front() - closed_form) / closed_form;
        }
    }
    const bool ok = zero_ok && monotone && e0_err <= 1e-12;
    report("c09", "twin-run-stability", ok,
           std::string("E==0 bitwise for delta=0: ") + (zero_ok ? "yes" : "no") +
               "; sup E strictly decreasing: " + (monotone ? "yes" : "no") +
               "; E(0) rel err " + num(e0_err) + " <= 1e-12");
    REQUIRE(ok);
}

TEST_CASE("criterion 10: RK4 order", "[c10]") {
    const Grid g(64);
    StepControl ctl;
    FluidState s0 = state_from_recipe("variable_density_smooth", g, ctl);
    auto terminal_u = [&](double dt) {
        RunOptions opt;
        opt.t_final = 0.2;
        opt.diagnostics_every = 0;
        opt.fixed_dt = dt;
        return run_simulation(s0, ctl, opt).final_state.full_velocity();
    };
    const VectorField u_ref = terminal_u(0.005);
    const double e1 = l2(sub(terminal_u(0.02), u_ref));
    const double e2 = l2(sub(terminal_u(0.01), u_ref));
    const double ratio = e1 / e2;
    const bool ok = ratio >= 8.0 && ratio <= 32.0;
    report("c10", "rk4-order", ok,
           "self-convergence ratio " + num(ratio) + " in [8, 32]");
    REQUIRE(ok);
}

TEST_CASE("criterion 11: determinism", "[c11]") {
    const fs::path dir = fs::temp_directory_path() /
                         ("ydvl_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string cli = YDVL_CLI_PATH;

    auto run_once = [&](const std::string& tag, int threads) {
        const fs::path out = dir / tag;
        std::ofstream cfg(dir / (tag + ".cfg"));
        cfg << "grid_n = 64\nT_final = 0.1\nrecipe = variable_density_smooth\n"
            << "diagnostics_every = 1\nsnapshot_every = 0\n"
            << "output_dir = " << out.string() << "\n";
        cfg.close();
        const std::string cmd = "env YDVL_THREADS=" + std::to_string(threads) + " " +
                                cli + " run " + (dir / (tag + ".cfg")).string() +
                                " > /dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
        std::ifstream in(out / "diagnostics.csv", std::ios::binary);
        REQUIRE(in);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    const std::string a = run_once("a", 1);
    const std::string b = run_once("b", 1);
    const std::string c = run_once("c", 4);
    const bool ok = !a.empty() && a == b && a == c;
    report("c11", "bitwise-determinism", ok,
           "CSV identical across repeated runs and YDVL_THREADS in {1, 4}");
    fs::remove_all(dir);
    REQUIRE(ok);
}

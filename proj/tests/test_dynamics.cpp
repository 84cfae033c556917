#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "ydvl/recipes.hpp"
#include "ydvl/run.hpp"

using namespace ydvl;

namespace {

const Grid g64(64);

FluidState state_from_recipe(const std::string& preset, const Grid& g,
                             const StepControl& ctl) {
    const DatumRecipe r = preset_recipe(preset);
    return make_state(build_rho0(r, g), build_omega0(r, g), ctl);
}

}  // namespace

TEST_CASE("rest state has zero tendencies", "[dynamics]") {
    StepControl ctl;
    auto rho = ScalarField::sampled(g64, [](double x, double) { return 2.0 + 0.5 * std::sin(x); });
    FluidState s = make_state(rho, ScalarField::zeros(g64), ctl);
    Tendencies k = tendencies(s, ctl);
    CHECK(linf(k.drho) == 0.0);
    CHECK(lp_norm(k.du, inf_p) == 0.0);
    CHECK(k.du_mean[0] == 0.0);
    CHECK(k.du_mean[1] == 0.0);
    CHECK(linf(k.deta) == 0.0);
    CHECK(lp_norm(k.dx, inf_p) == 0.0);
}

TEST_CASE("steady Taylor-Green tendencies vanish", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("taylor_green_homogeneous", g64, ctl);
    Tendencies k = tendencies(s, ctl);
    CHECK(lp_norm(k.du, inf_p) < 1e-9);
    CHECK(linf(k.drho) == 0.0);  // uniform density is exactly preserved
}

TEST_CASE("uniform density reduces eta to pure vorticity transport", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("multimode_homogeneous", g64, ctl);
    // X = perp-grad(const) is exactly zero, so the geometric source vanishes.
    CHECK(linf(s.x_field.x()) == 0.0);
    CHECK(linf(s.x_field.y()) == 0.0);
    Tendencies k = tendencies(s, ctl);
    auto pure_transport = scaled(advect(s.full_velocity(), s.eta), -1.0);
    CHECK(linf(sub(k.deta, pure_transport)) == 0.0);
    CHECK(lp_norm(k.dx, inf_p) == 0.0);
}

TEST_CASE("cfl_dt formula", "[dynamics]") {
    StepControl ctl;
    ctl.cfl = 0.5;
    ctl.dt_max = 10.0;
    FluidState s = state_from_recipe("shear_homogeneous", g64, ctl);  // |u|_inf = 1
    CHECK(cfl_dt(s, ctl) == Catch::Approx(0.5 * g64.spacing()).epsilon(1e-12));

    StepControl rest_ctl;
    rest_ctl.dt_max = 0.07;
    FluidState r = make_state(ScalarField::constant(g64, 1.0), ScalarField::zeros(g64), rest_ctl);
    CHECK(cfl_dt(r, rest_ctl) == 0.07);

    const Grid g128(128);
    StepControl c3;
    c3.cfl = 0.25;
    c3.dt_max = 1.0;
    DatumRecipe rec = preset_recipe("shear_homogeneous");
    rec.omega_amp = 10.0;  // |u|_inf = 10
    FluidState s3 = make_state(build_rho0(rec, g128), build_omega0(rec, g128), c3);
    CHECK(cfl_dt(s3, c3) == Catch::Approx(0.25 * g128.spacing() / 10.0).epsilon(1e-12));
}

TEST_CASE("rest state is a fixed point of the stepper", "[dynamics]") {
    StepControl ctl;
    ctl.dt_max = 0.05;
    auto rho = ScalarField::sampled(g64, [](double x, double y) {
        return 2.0 + 0.5 * std::sin(x) * std::sin(y);
    });
    FluidState s = make_state(rho, ScalarField::zeros(g64), ctl);
    FluidState next = step_rk4(s, ctl);
    CHECK(next.t == Catch::Approx(0.05));
    CHECK(linf(sub(next.rho, s.rho)) == 0.0);
    CHECK(lp_norm(sub(next.u, s.u), inf_p) == 0.0);
    CHECK(linf(sub(next.eta, s.eta)) == 0.0);
}

TEST_CASE("one Taylor-Green step stays on the steady state", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("taylor_green_homogeneous", g64, ctl);
    FluidState next = step_rk4(s, ctl, 1e-3);
    CHECK(lp_norm(sub(next.u, s.u), inf_p) <= 1e-8);
}

TEST_CASE("stationary shear is preserved over many steps", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("shear_homogeneous", g64, ctl);
    const ScalarField omega0 = s.omega();
    for (int i = 0; i < 100; ++i) s = step_rk4(s, ctl, 1e-3);
    CHECK(linf(sub(s.omega(), omega0)) <= 1e-9);
}

TEST_CASE("companion residuals start at zero", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("variable_density_smooth", g64, ctl);
    auto [r_eta, r_x] = companion_residuals(s);
    CHECK(r_eta <= 1e-12);
    CHECK(r_x == 0.0);
}

TEST_CASE("homogeneous runs keep X identically zero", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("multimode_homogeneous", g64, ctl);
    for (int i = 0; i < 5; ++i) s = step_rk4(s, ctl);
    CHECK(linf(s.x_field.x()) == 0.0);
    CHECK(linf(s.x_field.y()) == 0.0);
    auto [r_eta, r_x] = companion_residuals(s);
    CHECK(r_x == 0.0);
    CHECK(r_eta < 1e-6);
}

TEST_CASE("companion residuals stay small on a variable-density run", "[dynamics]") {
    StepControl ctl;
    RunOptions opt;
    opt.t_final = 0.25;
    opt.diagnostics_every = 0;
    FluidState s = state_from_recipe("variable_density_smooth", g64, ctl);
    RunResult rr = run_simulation(s, ctl, opt);
    auto [r_eta, r_x] = companion_residuals(rr.final_state);
    CHECK(r_eta <= 1e-5);
    CHECK(r_x <= 1e-5);
}

TEST_CASE("transport maximum principle for the density", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("variable_density_smooth", g64, ctl);
    const double mn0 = tu::range_min(s.rho), mx0 = tu::range_max(s.rho);
    RunOptions opt;
    opt.t_final = 0.5;
    opt.diagnostics_every = 0;
    RunResult rr = run_simulation(s, ctl, opt);
    CHECK(std::fabs(tu::range_min(rr.final_state.rho) - mn0) <= 1e-6);
    CHECK(std::fabs(tu::range_max(rr.final_state.rho) - mx0) <= 1e-6);
}

TEST_CASE("kinetic energy is conserved", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("variable_density_smooth", g64, ctl);
    RunOptions opt;
    opt.t_final = 0.5;
    opt.diagnostics_every = 5;
    RunResult rr = run_simulation(s, ctl, opt);
    const double e0 = rr.series.front().energy;
    for (const auto& rec : rr.series)
        CHECK(std::fabs(rec.energy - e0) / e0 <= 1e-6 * std::max(rec.t, 0.1));
}

TEST_CASE("homogeneous vorticity norms are conserved", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("multimode_homogeneous", g64, ctl);
    RunOptions opt;
    opt.t_final = 0.5;
    opt.diagnostics_every = 10;
    RunResult rr = run_simulation(s, ctl, opt);
    for (double p : {2.0, 4.0, inf_p}) {
        const double n0 = rr.series.front().lp_omega.at(p);
        for (const auto& rec : rr.series)
            CHECK(std::fabs(rec.lp_omega.at(p) - n0) / n0 <= 1e-4);
    }
}

TEST_CASE("divergence stays at projection level after steps", "[dynamics]") {
    StepControl ctl;
    FluidState s = state_from_recipe("variable_density_smooth", g64, ctl);
    for (int i = 0; i < 10; ++i) s = step_rk4(s, ctl);
    CHECK(linf(divergence(s.u)) <= 1e-10);
}

TEST_CASE("time stepper converges at fourth order", "[dynamics]") {
    StepControl ctl;
    FluidState s0 = state_from_recipe("variable_density_smooth", g64, ctl);
    auto terminal_u = [&](double dt) {
        RunOptions opt;
        opt.t_final = 0.2;
        opt.diagnostics_every = 0;
        opt.fixed_dt = dt;
        return run_simulation(s0, ctl, opt).final_state.full_velocity();
    };
    const VectorField u_h = terminal_u(0.02);
    const VectorField u_h2 = terminal_u(0.01);
    const VectorField u_h4 = terminal_u(0.005);
    const double e1 = l2(sub(u_h, u_h4));
    const double e2 = l2(sub(u_h2, u_h4));
    const double ratio = e1 / e2;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("rough datum synthesis is deterministic and admissible", "[dynamics]") {
    StepControl ctl;
    ctl.filter_strength = 36.0;
    DatumRecipe rec = preset_recipe("rough_layer");
    rec.seed = 7;
    auto omega_a = build_omega0(rec, g64);
    auto omega_b = build_omega0(rec, g64);
    CHECK(tu::same_values(omega_a, omega_b));
    CHECK(std::fabs(omega_a.mean()) <= 1e-13 * linf(omega_a));
    CHECK(linf(omega_a) > 0.0);

    rec.seed = 8;
    CHECK(!tu::same_values(build_omega0(rec, g64), omega_a));

    auto rho = build_rho0(rec, g64);
    validate_datum(rho, omega_a, 0.5, 4.0);
    FluidState s = make_state(rho, omega_a, ctl);
    s = step_rk4(s, ctl);
    CHECK(linf(divergence(s.u)) <= 1e-10 * std::max(1.0, lp_norm(s.u, inf_p)));
}

TEST_CASE("blowup guard triggers on absurd velocities", "[dynamics]") {
    StepControl ctl;
    DatumRecipe rec = preset_recipe("shear_homogeneous");
    rec.omega_amp = 2e6;
    FluidState s = make_state(build_rho0(rec, g64), build_omega0(rec, g64), ctl);
    CHECK_THROWS_AS(step_rk4(s, ctl, 1e-9), BlowupDetected);
}

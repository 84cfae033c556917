#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "ydvl/pressure.hpp"

namespace ydvl {

// Time stepping parameters plus the pressure-solver handle shared by all
// tendency evaluations.
struct StepControl {
    double cfl = 0.5;
    double dt_max = 0.1;
    double filter_strength = 0.0;  // 0 disables the spectral filter
    double pressure_tol = 1e-10;
    int pressure_max_iterations = 500;
};

// Full solver state: primary unknowns (rho, u), companion fields (eta, X)
// evolved by their own transport equations, and the last pressure solve.
// The velocity field u holds the mean-free part; the spatial mean is carried
// in u_mean (the torus Biot-Savart law never produces a mean flow, but the
// pressure term drives one for variable density).
struct FluidState {
    double t = 0.0;
    ScalarField rho;
    VectorField u;
    std::array<double, 2> u_mean{0.0, 0.0};
    ScalarField eta;
    VectorField x_field;
    ScalarField pi;

    const Grid& grid() const { return rho.grid(); }

    VectorField full_velocity() const {
        return VectorField(shifted(u.x(), u_mean[0]), shifted(u.y(), u_mean[1]));
    }

    ScalarField omega() const { return curl2d(u); }

    VectorField momentum() const { return mul(rho, full_velocity()); }
};

struct Tendencies {
    ScalarField drho;
    VectorField du;
    std::array<double, 2> du_mean;
    ScalarField deta;
    VectorField dx;
    EllipticSolveReport pressure;
};

// State construction from an admissible datum (rho0 bounded away from zero,
// omega0 mean-free). Both inputs are truncated to the dealiased band so the
// evolution stays alias-free; eta and X are seeded from their defining
// identities eta = curl(rho u), X = perp-grad rho.
inline FluidState make_state(const ScalarField& rho0, const ScalarField& omega0,
                             const StepControl& ctl) {
    if (rho0.grid() != omega0.grid())
        throw GridMismatch("dynamics.make_state: rho0/omega0 grid mismatch");
    ScalarField rho = dealias(rho0);
    double mn = rho.values()[0];
    for (double v : rho.values()) mn = std::min(mn, v);
    if (mn <= 0.0)
        throw VacuumViolated("dynamics.make_state: dealiased density reaches zero");
    ScalarField omega = dealias(omega0);
    VectorField u = biot_savart(omega);
    ScalarField eta = dealias(curl2d(mul(rho, u)));
    VectorField x_field = perp_gradient(rho);

    FluidState s{0.0, rho, u, {0.0, 0.0}, eta, x_field, ScalarField::zeros(rho.grid())};
    EllipticSolveReport rep =
        solve_pressure(rho, u, ctl.pressure_tol, ctl.pressure_max_iterations);
    s.pi = rep.pi;
    return s;
}

// Right-hand sides of the coupled system at the given state:
//   d rho / dt = -u . grad rho
//   d u   / dt = -(u . grad) u - (1/rho) grad pi      (Leray-projected)
//   d eta / dt = -u . grad eta + (X . grad u) . u
//   d X   / dt = -(u . grad) X + X . grad u
// All advective and source products are dealiased pairwise. The mean-velocity
// tendency is the spatial mean of -(1/rho) grad pi.
inline Tendencies tendencies(const FluidState& s, const StepControl& ctl) {
    const VectorField uf = s.full_velocity();

    const ScalarField drho = scaled(advect(uf, s.rho), -1.0);

    const VectorField adv_u = advect(uf, s.u);
    EllipticSolveReport pr = solve_pressure_rhs(
        s.rho, divergence(adv_u), ctl.pressure_tol, ctl.pressure_max_iterations);

    const VectorField grad_pi = gradient(pr.pi);
    const ScalarField inv_rho = reciprocal(s.rho);
    const VectorField pg = mul(inv_rho, grad_pi);
    const std::array<double, 2> du_mean{-pg.x().mean(), -pg.y().mean()};
    const VectorField pgd = dealias(pg);

    VectorField du = leray_project(
        VectorField(scaled(add(adv_u.x(), pgd.x()), -1.0),
                    scaled(add(adv_u.y(), pgd.y()), -1.0)));
    // Mean handling: the fluctuation tendency is kept exactly mean-free; the
    // k = 0 part lives in du_mean.
    du = VectorField(shifted(du.x(), -du.x().mean()), shifted(du.y(), -du.y().mean()));

    // Geometric source X . grad u, shared by the eta and X equations.
    const VectorField dxu =
        VectorField(dealias(add(mul(s.x_field.x(), derivative(s.u.x(), 1)),
                                mul(s.x_field.y(), derivative(s.u.x(), 2)))),
                    dealias(add(mul(s.x_field.x(), derivative(s.u.y(), 1)),
                                mul(s.x_field.y(), derivative(s.u.y(), 2)))));

    const ScalarField eta_source = dealias(dot(dxu, uf));
    const ScalarField deta = add(scaled(advect(uf, s.eta), -1.0), eta_source);

    const VectorField dx = add(scaled(advect(uf, s.x_field), -1.0), dxu);

    return Tendencies{drho, du, du_mean, deta, dx, std::move(pr)};
}

// CFL time step: dt = min(dt_max, cfl * spacing / max(|u|_inf, 1e-8)).
inline double cfl_dt(const FluidState& s, const StepControl& ctl) {
    const double umax = std::max(lp_norm(s.full_velocity(), inf_p), 1e-8);
    return std::min(ctl.dt_max, ctl.cfl * s.grid().spacing() / umax);
}

namespace detail {

inline FluidState stage_state(const FluidState& base, double c, const Tendencies& k) {
    FluidState s{base.t + c,
                 axpy(base.rho, c, k.drho),
                 axpy(base.u, c, k.du),
                 {base.u_mean[0] + c * k.du_mean[0], base.u_mean[1] + c * k.du_mean[1]},
                 axpy(base.eta, c, k.deta),
                 axpy(base.x_field, c, k.dx),
                 base.pi};
    return s;
}

}  // namespace detail

// Classical four-stage Runge-Kutta advance. The combined velocity update is
// re-projected and kept mean-free; the optional spectral filter applies to
// rho, u, eta and X at the configured strength.
inline FluidState step_rk4(const FluidState& s, const StepControl& ctl,
                           double dt_override = -1.0) {
    const double dt = dt_override > 0.0 ? dt_override : cfl_dt(s, ctl);

    const Tendencies k1 = tendencies(s, ctl);
    const Tendencies k2 = tendencies(detail::stage_state(s, 0.5 * dt, k1), ctl);
    const Tendencies k3 = tendencies(detail::stage_state(s, 0.5 * dt, k2), ctl);
    const Tendencies k4 = tendencies(detail::stage_state(s, dt, k3), ctl);

    const double w = dt / 6.0;
    auto combine_s = [&](const ScalarField& y, const ScalarField& a,
                         const ScalarField& b, const ScalarField& c,
                         const ScalarField& d) {
        std::vector<double> out(y.values());
        const auto &va = a.values(), &vb = b.values(), &vc = c.values(), &vd = d.values();
        for (size_t i = 0; i < out.size(); ++i)
            out[i] += w * (va[i] + 2.0 * vb[i] + 2.0 * vc[i] + vd[i]);
        return ScalarField(y.grid(), std::move(out));
    };
    auto combine_v = [&](const VectorField& y, const VectorField& a,
                         const VectorField& b, const VectorField& c,
                         const VectorField& d) {
        return VectorField(combine_s(y.x(), a.x(), b.x(), c.x(), d.x()),
                           combine_s(y.y(), a.y(), b.y(), c.y(), d.y()));
    };

    FluidState out{s.t + dt,
                   combine_s(s.rho, k1.drho, k2.drho, k3.drho, k4.drho),
                   combine_v(s.u, k1.du, k2.du, k3.du, k4.du),
                   {s.u_mean[0] + w * (k1.du_mean[0] + 2 * k2.du_mean[0] +
                                       2 * k3.du_mean[0] + k4.du_mean[0]),
                    s.u_mean[1] + w * (k1.du_mean[1] + 2 * k2.du_mean[1] +
                                       2 * k3.du_mean[1] + k4.du_mean[1])},
                   combine_s(s.eta, k1.deta, k2.deta, k3.deta, k4.deta),
                   combine_v(s.x_field, k1.dx, k2.dx, k3.dx, k4.dx),
                   k4.pressure.pi};

    out.u = leray_project(out.u);
    out.u = VectorField(shifted(out.u.x(), -out.u.x().mean()),
                        shifted(out.u.y(), -out.u.y().mean()));

    if (ctl.filter_strength > 0.0) {
        out.rho = spectral_filter(out.rho, ctl.filter_strength);
        out.u = spectral_filter(out.u, ctl.filter_strength);
        out.eta = spectral_filter(out.eta, ctl.filter_strength);
        out.x_field = spectral_filter(out.x_field, ctl.filter_strength);
    }

    if (lp_norm(out.full_velocity(), inf_p) > 1e6)
        throw BlowupDetected("dynamics.step_rk4: |u|_inf exceeded 1e6");
    return out;
}

// Residuals of the companion identities: (|eta - rho omega - u . perp-grad
// rho|_inf, |X - perp-grad rho|_inf). Both vanish at t = 0 by construction;
// their growth measures the discretization error of the companion transport.
inline std::pair<double, double> companion_residuals(const FluidState& s) {
    const VectorField uf = s.full_velocity();
    const VectorField pg_rho = perp_gradient(s.rho);
    const ScalarField eta_ref = add(mul(s.rho, s.omega()), dot(uf, pg_rho));
    const double r_eta = linf(sub(s.eta, eta_ref));
    const double r_x = linf(sub(s.x_field, pg_rho));
    return {r_eta, r_x};
}

}  // namespace ydvl

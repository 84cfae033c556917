#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ydvl/dynamics.hpp"

namespace ydvl {

// Per-time measurement of every quantity the a priori estimate chain tracks.
// Lebesgue norms are tabulated on the fixed p-grid {2, p0, 2 p0, 8, inf}.
struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;  // integral of rho |u|^2
    std::map<double, double> lp_omega;
    std::map<double, double> lp_eta;
    std::map<double, double> lp_u;  // needed by the eta transport bound
    double sup_u = 0.0;
    double sup_grad_rho = 0.0;
    double dxu_sup = 0.0;        // |X . grad u|_inf
    double m_accum = 0.0;        // M(t) = time integral of dxu_sup
    double eta_identity_resid = 0.0;
    double x_identity_resid = 0.0;
    double pressure_l2 = 0.0;    // |grad pi|_2
    double div_u_sup = 0.0;
};

inline std::vector<double> diagnostics_p_grid(double p0) {
    std::vector<double> ps{2.0, p0, 2.0 * p0, 8.0, inf_p};
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

// Measures a state. m_accum advances from the previous record by the
// trapezoidal rule; pass nullptr at t = 0. The pressure norm comes from a
// fresh solve at the state itself, so the record is a pure function of the
// state.
inline DiagnosticsRecord measure(const FluidState& s, const StepControl& ctl,
                                 double p0,
                                 const DiagnosticsRecord* prev = nullptr) {
    DiagnosticsRecord r;
    r.t = s.t;

    const VectorField uf = s.full_velocity();
    {
        const auto& vr = s.rho.values();
        const auto& vx = uf.x().values();
        const auto& vy = uf.y().values();
        const double w = s.grid().spacing() * s.grid().spacing();
        double e = 0.0;
        for (size_t i = 0; i < vr.size(); ++i)
            e += vr[i] * (vx[i] * vx[i] + vy[i] * vy[i]);
        r.energy = w * e;
    }

    const ScalarField omega = s.omega();
    for (double p : diagnostics_p_grid(p0)) {
        r.lp_omega[p] = lp_norm(omega, p);
        r.lp_eta[p] = lp_norm(s.eta, p);
        r.lp_u[p] = lp_norm(uf, p);
    }
    r.sup_u = lp_norm(uf, inf_p);
    r.sup_grad_rho = lp_norm(gradient(s.rho), inf_p);
    r.dxu_sup = lp_norm(directional_derivative(s.x_field, s.u), inf_p);

    auto [r_eta, r_x] = companion_residuals(s);
    r.eta_identity_resid = r_eta;
    r.x_identity_resid = r_x;

    const EllipticSolveReport pr =
        solve_pressure(s.rho, s.u, ctl.pressure_tol, ctl.pressure_max_iterations);
    r.pressure_l2 = l2(gradient(pr.pi));
    r.div_u_sup = linf(divergence(s.u));

    if (prev) {
        r.m_accum = prev->m_accum +
                    0.5 * (r.t - prev->t) * (r.dxu_sup + prev->dxu_sup);
    }
    return r;
}

// Cross-check of the vorticity formulation: the curl of the computed
// velocity tendency must reproduce
//   d omega / dt = -u . grad omega + (1/rho^2) perp-grad rho . grad pi.
// Evolving (rho, u) makes this equation a pure diagnostic; the returned L2
// residual measures how well the primitive-variable step satisfies it.
inline double vorticity_equation_residual(const FluidState& s, const StepControl& ctl) {
    const Tendencies k = tendencies(s, ctl);
    const VectorField uf = s.full_velocity();
    const ScalarField omega = s.omega();
    const ScalarField advected = advect(uf, omega);
    const VectorField grad_pi = gradient(k.pressure.pi);
    const ScalarField source = dealias(mul(reciprocal(mul(s.rho, s.rho)),
                                           dot(perp_gradient(s.rho), grad_pi)));
    return l2(add(sub(curl2d(k.du), source), advected));
}

// One checked inequality of the bound chain: satisfied iff
// lhs <= rhs * (1 + tol).
struct BoundEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    bool satisfied = false;
};

using BoundChainReport = std::vector<BoundEntry>;

namespace detail {

inline BoundEntry worst_entry(const std::string& name, double tol,
                              const std::vector<std::pair<double, double>>& pairs) {
    BoundEntry e{name, 0.0, 0.0, tol, true};
    double worst = -inf_p;
    for (const auto& [lhs, rhs] : pairs) {
        const double margin = lhs - rhs * (1.0 + tol);
        if (margin > worst) {
            worst = margin;
            e.lhs = lhs;
            e.rhs = rhs;
        }
    }
    e.satisfied = worst <= 0.0;
    return e;
}

}  // namespace detail

// Transport bound for the density gradient:
//   |grad rho(t)|_inf <= |grad rho_0|_inf + M(t).
inline BoundEntry check_gronwall_gradrho(const std::vector<DiagnosticsRecord>& series,
                                         double grad_rho0_sup, double tol) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(series.size());
    for (const auto& r : series)
        pairs.emplace_back(r.sup_grad_rho, grad_rho0_sup + r.m_accum);
    return detail::worst_entry("gronwall_grad_rho", tol, pairs);
}

// Transport bound for the momentum vorticity:
//   |eta(t)|_q <= |eta_0|_q + integral of |dxu|_inf |u|_q,
// with the source history integrated by the trapezoidal rule.
inline BoundEntry check_eta_transport_bound(const std::vector<DiagnosticsRecord>& series,
                                            double eta0_norm_q, double q, double tol) {
    std::vector<std::pair<double, double>> pairs;
    double integral = 0.0;
    for (size_t i = 0; i < series.size(); ++i) {
        const auto& r = series[i];
        auto itq = r.lp_eta.find(q);
        auto itu = r.lp_u.find(q);
        if (itq == r.lp_eta.end() || itu == r.lp_u.end())
            throw OutOfRange("diagnostics.check_eta_transport_bound: q not on the p-grid");
        if (i > 0) {
            const auto& pr = series[i - 1];
            integral += 0.5 * (r.t - pr.t) *
                        (r.dxu_sup * itu->second +
                         pr.dxu_sup * pr.lp_u.at(q));
        }
        pairs.emplace_back(itq->second, eta0_norm_q + integral);
    }
    return detail::worst_entry("eta_transport", tol, pairs);
}

// Velocity sup bound |u|_inf <= C (1 + |eta|_{p0}) with a fitted-then-frozen
// constant.
inline BoundEntry check_velocity_linfty_bound(const DiagnosticsRecord& r,
                                             const ExponentSet& e, double C) {
    BoundEntry entry{"velocity_linfty", r.sup_u,
                     C * (1.0 + r.lp_eta.at(e.p0)), 0.0, false};
    entry.satisfied = entry.lhs <= entry.rhs;
    return entry;
}

// Calibration: the smallest C making the velocity bound hold on a series.
inline double fit_velocity_constant(const std::vector<DiagnosticsRecord>& series,
                                    const ExponentSet& e) {
    double c = 0.0;
    for (const auto& r : series)
        c = std::max(c, r.sup_u / (1.0 + r.lp_eta.at(e.p0)));
    return c;
}

}  // namespace ydvl

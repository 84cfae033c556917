#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ydvl/parallel.hpp"
#include "ydvl/run.hpp"

namespace ydvl {

// Frequency-cutoff regularisation scale. n_cut <= 0 means no cutoff.
struct MollifierScale {
    int n_cut = 0;
    double epsilon() const { return n_cut > 0 ? 1.0 / n_cut : 0.0; }
};

struct MollifyResult {
    ScalarField rho;
    ScalarField omega;
    double rho_inf_diff = 0.0;  // |rho0 - rho0_n|_inf
    double u_l2_diff = 0.0;     // |u0 - u0_n|_2
};

namespace detail {

// Sharp cutoff that is a projection in the strict sense: a field whose
// content above the cutoff is zero (up to the rounding noise the forward
// transform spreads over all modes, 1e-14 relative) is returned unchanged,
// same payload. Applying the mollifier twice is then bitwise equal to
// applying it once, since a truncated field's killed modes are exactly zero.
inline ScalarField truncate_projected(const ScalarField& f, int kcut) {
    const Grid& g = f.grid();
    const auto& spec = f.spectrum();
    const int n = g.n(), nk = g.nk();
    double killed = 0.0, total = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const int ky = g.wavenumber(iy);
        for (int ik = 0; ik < nk; ++ik) {
            const double mag = std::abs(spec[static_cast<long>(iy) * nk + ik]);
            total = std::max(total, mag);
            if (ik > kcut || std::abs(ky) > kcut) killed = std::max(killed, mag);
        }
    }
    if (killed <= 1e-14 * total) return f;
    return truncate_modes(f, kcut);
}

}  // namespace detail

// Regularisation of a datum by sharp spectral cutoff at |k|_inf <= n_cut.
// The density mean (k = 0 mode) passes through untouched and omega stays
// mean-free. Reported differences quantify items (i) and (iv) of the
// regularisation contract: the density bounds hold within rho_inf_diff and
// the induced velocities converge in L2.
inline MollifyResult mollify(const ScalarField& rho0, const ScalarField& omega0,
                             const MollifierScale& scale) {
    if (rho0.grid() != omega0.grid())
        throw GridMismatch("experiments.mollify: datum grid mismatch");
    if (scale.n_cut <= 0)
        return MollifyResult{rho0, omega0, 0.0, 0.0};

    MollifyResult out{detail::truncate_projected(rho0, scale.n_cut),
                      detail::truncate_projected(omega0, scale.n_cut), 0.0, 0.0};
    if (!out.rho.shares_payload(rho0))
        out.rho_inf_diff = linf(sub(rho0, out.rho));
    if (!out.omega.shares_payload(omega0))
        out.u_l2_diff = l2(sub(biot_savart(omega0), biot_savart(out.omega)));
    return out;
}

struct ScaleRunSummary {
    int n_cut = 0;
    double datum_rho_diff = 0.0;
    double datum_u_diff = 0.0;
    double m_final = 0.0;          // M_n(T)
    double sup_grad_rho = 0.0;     // sup_t |grad rho_n|_inf
    double sup_eta_p0 = 0.0;       // sup_t |eta_n|_{p0}
    double sup_u = 0.0;            // sup_t |u_n|_inf
    double dxu_l2_time = 0.0;      // L2-in-time norm of |dxu|_inf
    double dxu_linf_time = 0.0;    // sup-in-time of |dxu|_inf
};

struct SweepResult {
    std::vector<ScaleRunSummary> scales;
    std::vector<std::vector<DiagnosticsRecord>> series;  // per scale
    std::vector<double> cauchy_l2;  // sup_t |u_n - u_{n+1}|_2, consecutive scales
    std::vector<double> checkpoint_times;
    double shared_dt = 0.0;
};

// Runs the solver once per regularisation scale on a common grid with a
// common fixed step (the smallest initial CFL step over the scales), and
// reports the uniform-bound table together with the Cauchy differences of
// the velocities: the empirical probe of whether sup_n M_n(T) stays finite.
// A scale whose run fails (e.g. pressure breakdown) is reported with
// whatever series it produced; the sweep continues.
inline SweepResult regularization_sweep(const ScalarField& rho0,
                                        const ScalarField& omega0,
                                        const std::vector<MollifierScale>& scales,
                                        const StepControl& ctl, double t_final,
                                        double p0, int diag_every = 1) {
    const size_t m = scales.size();
    if (m == 0) throw ValidationError("experiments.regularization_sweep: no scales");

    std::vector<MollifyResult> data;
    data.reserve(m);
    std::vector<FluidState> states;
    states.reserve(m);
    double dt = inf_p;
    for (const auto& sc : scales) {
        data.push_back(mollify(rho0, omega0, sc));
        states.push_back(make_state(data.back().rho, data.back().omega, ctl));
        dt = std::min(dt, cfl_dt(states.back(), ctl));
    }

    const long total_steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
    const long checkpoint_stride = std::max<long>(1, total_steps / 16);

    SweepResult out;
    out.shared_dt = dt;
    out.scales.resize(m);
    out.series.resize(m);
    std::vector<std::vector<VectorField>> checkpoints(m);
    std::vector<std::vector<double>> checkpoint_times(m);

    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < m; ++i) {
        tasks.emplace_back([&, i] {
            RunOptions opt;
            opt.t_final = t_final;
            opt.diagnostics_every = diag_every;
            opt.p0 = p0;
            opt.fixed_dt = dt;
            checkpoints[i].push_back(states[i].full_velocity());
            checkpoint_times[i].push_back(0.0);
            opt.on_step = [&, i](const FluidState& s, long step) {
                if (step % checkpoint_stride == 0 || s.t >= t_final - 1e-12) {
                    checkpoints[i].push_back(s.full_velocity());
                    checkpoint_times[i].push_back(s.t);
                }
            };
            ScaleRunSummary& sum = out.scales[i];
            sum.n_cut = scales[i].n_cut;
            sum.datum_rho_diff = data[i].rho_inf_diff;
            sum.datum_u_diff = data[i].u_l2_diff;
            try {
                RunResult rr = run_simulation(states[i], ctl, opt);
                out.series[i] = std::move(rr.series);
            } catch (const Error&) {
                // keep partial results; summary reflects what completed
            }
            const auto& ser = out.series[i];
            double l2t = 0.0;
            for (size_t k = 0; k < ser.size(); ++k) {
                const auto& r = ser[k];
                sum.m_final = r.m_accum;
                sum.sup_grad_rho = std::max(sum.sup_grad_rho, r.sup_grad_rho);
                sum.sup_eta_p0 = std::max(sum.sup_eta_p0, r.lp_eta.at(p0));
                sum.sup_u = std::max(sum.sup_u, r.sup_u);
                sum.dxu_linf_time = std::max(sum.dxu_linf_time, r.dxu_sup);
                if (k > 0) {
                    const auto& pr = ser[k - 1];
                    l2t += 0.5 * (r.t - pr.t) *
                           (r.dxu_sup * r.dxu_sup + pr.dxu_sup * pr.dxu_sup);
                }
            }
            sum.dxu_l2_time = std::sqrt(l2t);
        });
    }
    parallel_tasks(std::move(tasks));

    out.checkpoint_times = checkpoint_times[0];
    for (size_t i = 0; i + 1 < m; ++i) {
        double sup = 0.0;
        const size_t common = std::min(checkpoints[i].size(), checkpoints[i + 1].size());
        for (size_t k = 0; k < common; ++k)
            sup = std::max(sup, l2(sub(checkpoints[i][k], checkpoints[i + 1][k])));
        out.cauchy_l2.push_back(sup);
    }
    return out;
}

// Stability-probe perturbation: a divergence-free single-mode velocity bump
// of amplitude delta (vorticity cos(k . x) through the Biot-Savart law) and
// optionally a density bump of amplitude rho_delta on the same mode.
struct TwinPerturbation {
    double delta = 0.0;
    int mode_kx = 1;
    int mode_ky = 0;
    double rho_delta = 0.0;
};

struct StabilityTrace {
    std::vector<double> times;
    std::vector<double> energy;  // E(t) = |sqrt(rho_1) du|_2^2 + |drho|_2^2
    double sup_energy = 0.0;
    double fitted_k = 0.0;
    std::vector<std::pair<double, bool>> envelope;  // (p, E <= (Kt)^p + E(0))
};

namespace detail {

inline double twin_energy(const FluidState& a, const FluidState& b) {
    const VectorField ua = a.full_velocity();
    const VectorField ub = b.full_velocity();
    const auto& ax = ua.x().values();
    const auto& ay = ua.y().values();
    const auto& bx = ub.x().values();
    const auto& by = ub.y().values();
    const auto& ra = a.rho.values();
    const auto& rb = b.rho.values();
    const double w = a.grid().spacing() * a.grid().spacing();
    double e = 0.0;
    for (size_t i = 0; i < ra.size(); ++i) {
        const double dx = bx[i] - ax[i];
        const double dy = by[i] - ay[i];
        const double dr = rb[i] - ra[i];
        e += ra[i] * (dx * dx + dy * dy) + dr * dr;
    }
    return w * e;
}

// Least-squares fit of a single K against the envelope family (Kt)^p over
// the given exponents, restricted once to t <= min(T, 1/(2K)) and refitted,
// mirroring the T1 = min(T0, 1/(2K)) restriction of the energy argument.
inline double fit_envelope_k(const std::vector<double>& t,
                             const std::vector<double>& e,
                             const std::vector<double>& ps, double t_final) {
    auto fit_upto = [&](double t_max) {
        double sum_p = 0.0, sum_p2 = 0.0;
        for (double p : ps) {
            sum_p += p;
            sum_p2 += p * p;
        }
        double acc = 0.0;
        long count = 0;
        for (size_t i = 0; i < t.size(); ++i) {
            if (t[i] <= 0.0 || t[i] > t_max || e[i] <= 0.0) continue;
            for (double p : ps) acc += p * (std::log(e[i]) - p * std::log(t[i]));
            ++count;
        }
        if (count == 0) return 0.0;
        const double log_k = acc / (static_cast<double>(count) * sum_p2);
        return std::exp(log_k);
    };
    double k = fit_upto(t_final);
    if (k > 0.0) k = fit_upto(std::min(t_final, 1.0 / (2.0 * k)));
    return k;
}

}  // namespace detail

// Evolves two states in lockstep, the second replaying the first's step
// sizes, and records E(t). Fit and envelope flags are filled afterwards.
inline StabilityTrace lockstep_trace(FluidState s1, FluidState s2,
                                     const StepControl& ctl, double t_final) {
    if (s1.grid() != s2.grid())
        throw GridMismatch("experiments.lockstep_trace: grid mismatch");
    StabilityTrace trace;
    trace.times.push_back(0.0);
    trace.energy.push_back(detail::twin_energy(s1, s2));

    double dt = cfl_dt(s1, ctl);
    long step = 0;
    while (s1.t < t_final - 1e-12 * std::max(1.0, t_final)) {
        if (step > 0 && step % 10 == 0) dt = std::min(dt, cfl_dt(s1, ctl));
        double dt_step = dt;
        if (s1.t + dt_step > t_final) dt_step = t_final - s1.t;
        FluidState n1 = step_rk4(s1, ctl, dt_step);
        FluidState n2 = step_rk4(s2, ctl, dt_step);
        s1 = std::move(n1);
        s2 = std::move(n2);
        ++step;
        trace.times.push_back(s1.t);
        trace.energy.push_back(detail::twin_energy(s1, s2));
    }
    for (double e : trace.energy) trace.sup_energy = std::max(trace.sup_energy, e);
    return trace;
}

inline void fit_stability_envelope(StabilityTrace& trace, double t_final) {
    const std::vector<double> ps{4.0, 8.0, 16.0};
    trace.fitted_k = detail::fit_envelope_k(trace.times, trace.energy, ps, t_final);
    const double e0 = trace.energy.front();
    trace.envelope.clear();
    for (double p : ps) {
        bool ok = true;
        for (size_t i = 0; i < trace.times.size(); ++i) {
            const double bound = std::pow(trace.fitted_k * trace.times[i], p) + e0;
            if (trace.energy[i] > bound) {
                ok = false;
                break;
            }
        }
        trace.envelope.emplace_back(p, ok);
    }
}

// Evolves the datum and its perturbed twin in lockstep and records the
// stability energy functional. delta = rho_delta = 0 short-circuits to
// literally identical trajectories, so E vanishes identically, bitwise.
inline StabilityTrace twin_run(const ScalarField& rho0, const ScalarField& omega0,
                               const TwinPerturbation& pert, const StepControl& ctl,
                               double t_final, double rho_star, double rho_upper) {
    const Grid& g = rho0.grid();
    FluidState s1 = make_state(rho0, omega0, ctl);

    FluidState s2 = s1;
    if (pert.delta != 0.0 || pert.rho_delta != 0.0) {
        const ScalarField bump = ScalarField::sampled(g, [&](double x, double y) {
            return std::cos(pert.mode_kx * x + pert.mode_ky * y);
        });
        ScalarField rho2 = axpy(rho0, pert.rho_delta, bump);
        double mn = rho2.values()[0], mx = rho2.values()[0];
        for (double v : rho2.values()) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (mn < rho_star || mx > rho_upper)
            throw ValidationError(
                "experiments.twin_run: perturbed density leaves [rho_star, rho_upper]");
        s2 = make_state(rho2, axpy(omega0, pert.delta, bump), ctl);
    }

    StabilityTrace trace = lockstep_trace(std::move(s1), std::move(s2), ctl, t_final);
    fit_stability_envelope(trace, t_final);
    return trace;
}

}  // namespace ydvl

#pragma once

#include <functional>
#include <vector>

#include "ydvl/diagnostics.hpp"

namespace ydvl {

// Time-loop policy. The default schedule fixes dt at t = 0 and re-evaluates
// the CFL bound every 10 steps, shrink-only, so a run's step sequence is a
// deterministic function of its configuration. A fixed dt or a prerecorded
// schedule (twin runs share the unperturbed trajectory's steps) overrides it.
struct RunOptions {
    double t_final = 1.0;
    int diagnostics_every = 10;               // 0 disables the series
    double p0 = 4.0;
    double fixed_dt = 0.0;                    // > 0: constant step
    const std::vector<double>* dt_schedule = nullptr;
    std::function<void(const FluidState&, long step)> on_step;  // after each step
};

struct RunResult {
    FluidState final_state;
    std::vector<DiagnosticsRecord> series;
    std::vector<double> dt_history;
    long steps = 0;
};

inline RunResult run_simulation(FluidState s, const StepControl& ctl,
                                const RunOptions& opt) {
    RunResult out{s, {}, {}, 0};
    const bool with_diag = opt.diagnostics_every > 0;
    if (with_diag) out.series.push_back(measure(s, ctl, opt.p0));

    double dt = opt.fixed_dt > 0.0 ? opt.fixed_dt : cfl_dt(s, ctl);
    long step = 0;
    const double t_end = opt.t_final;
    while (s.t < t_end - 1e-12 * std::max(1.0, t_end)) {
        if (opt.dt_schedule) {
            if (step >= static_cast<long>(opt.dt_schedule->size())) break;
            dt = (*opt.dt_schedule)[step];
        } else if (opt.fixed_dt <= 0.0 && step > 0 && step % 10 == 0) {
            dt = std::min(dt, cfl_dt(s, ctl));  // shrink-only re-evaluation
        }
        double dt_step = dt;
        if (s.t + dt_step > t_end) dt_step = t_end - s.t;

        s = step_rk4(s, ctl, dt_step);
        ++step;
        out.dt_history.push_back(dt_step);

        if (with_diag &&
            (step % opt.diagnostics_every == 0 || s.t >= t_end - 1e-12)) {
            out.series.push_back(measure(s, ctl, opt.p0, &out.series.back()));
        }
        if (opt.on_step) opt.on_step(s, step);
    }
    out.final_state = s;
    out.steps = step;
    return out;
}

}  // namespace ydvl

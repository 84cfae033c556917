// Command-line front end: run simulations, post-process snapshots, and drive
// the regularisation-sweep / twin-run experiments described in the README.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ydvl/config.hpp"
#include "ydvl/csv.hpp"
#include "ydvl/experiments.hpp"
#include "ydvl/run.hpp"
#include "ydvl/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

struct Datum {
    ydvl::ScalarField rho;
    ydvl::ScalarField omega;
};

Datum build_datum(const ydvl::RunConfig& cfg) {
    const ydvl::Grid grid(cfg.grid_n);
    const ydvl::DatumRecipe recipe = cfg.datum_recipe();
    ydvl::ScalarField rho0 = ydvl::build_rho0(recipe, grid);
    ydvl::ScalarField omega0 = ydvl::build_omega0(recipe, grid);
    ydvl::validate_datum(rho0, omega0, cfg.rho_star, cfg.rho_upper);
    if (cfg.n_cut > 0) {
        const auto m = ydvl::mollify(rho0, omega0, ydvl::MollifierScale{cfg.n_cut});
        return {m.rho, m.omega};
    }
    return {rho0, omega0};
}

int cmd_run(const std::string& config_path) {
    const ydvl::RunConfig cfg = ydvl::load_config(config_path);
    const Datum d = build_datum(cfg);
    const ydvl::StepControl ctl = cfg.step_control();
    ydvl::FluidState state = ydvl::make_state(d.rho, d.omega, ctl);

    fs::create_directories(cfg.output_dir);

    ydvl::RunOptions opt;
    opt.t_final = cfg.t_final;
    opt.diagnostics_every = cfg.diagnostics_every;
    opt.p0 = cfg.p0;
    if (cfg.snapshot_every > 0) {
        write_snapshot(state, cfg.output_dir + "/snap_000000.bin");
        opt.on_step = [&](const ydvl::FluidState& s, long step) {
            if (step % cfg.snapshot_every == 0 || s.t >= cfg.t_final - 1e-12) {
                char name[64];
                std::snprintf(name, sizeof name, "snap_%06ld.bin", step);
                write_snapshot(s, cfg.output_dir + "/" + name);
            }
        };
    }

    const ydvl::RunResult result = ydvl::run_simulation(state, ctl, opt);
    if (!result.series.empty())
        ydvl::emit_diagnostics_csv(result.series, cfg.p0,
                                   cfg.output_dir + "/diagnostics.csv");
    std::printf("run: %ld steps to t = %.6g, diagnostics in %s\n", result.steps,
                result.final_state.t, cfg.output_dir.c_str());
    return 0;
}

int cmd_diagnose(const std::vector<std::string>& snapshots) {
    ydvl::StepControl ctl;
    std::vector<ydvl::DiagnosticsRecord> series;
    std::optional<ydvl::Grid> grid;
    for (const auto& path : snapshots) {
        const ydvl::FluidState s =
            ydvl::read_snapshot(path, grid ? &*grid : nullptr);
        if (!grid) grid = s.grid();
        series.push_back(ydvl::measure(s, ctl, 4.0,
                                       series.empty() ? nullptr : &series.back()));
    }
    std::fputs(ydvl::diagnostics_csv(series, 4.0).c_str(), stdout);
    return 0;
}

int cmd_sweep(const std::string& config_path) {
    const ydvl::RunConfig cfg = ydvl::load_config(config_path);
    const ydvl::Grid grid(cfg.grid_n);
    const ydvl::DatumRecipe recipe = cfg.datum_recipe();
    ydvl::ScalarField rho0 = ydvl::build_rho0(recipe, grid);
    ydvl::ScalarField omega0 = ydvl::build_omega0(recipe, grid);
    ydvl::validate_datum(rho0, omega0, cfg.rho_star, cfg.rho_upper);

    std::vector<ydvl::MollifierScale> scales;
    for (int k : cfg.mollify_scales) scales.push_back({k});
    const ydvl::SweepResult result = ydvl::regularization_sweep(
        rho0, omega0, scales, cfg.step_control(), cfg.t_final, cfg.p0,
        std::max(1, cfg.diagnostics_every));

    fs::create_directories(cfg.output_dir);
    std::string summary =
        "n_cut,datum_rho_diff,datum_u_diff,M_T,sup_grad_rho,sup_eta_p0,sup_u,"
        "dxu_l2_time,dxu_linf_time,cauchy_next\n";
    for (size_t i = 0; i < result.scales.size(); ++i) {
        const auto& s = result.scales[i];
        using ydvl::csv_detail::fmt;
        summary += std::to_string(s.n_cut) + ',' + fmt(s.datum_rho_diff) + ',' +
                   fmt(s.datum_u_diff) + ',' + fmt(s.m_final) + ',' +
                   fmt(s.sup_grad_rho) + ',' + fmt(s.sup_eta_p0) + ',' +
                   fmt(s.sup_u) + ',' + fmt(s.dxu_l2_time) + ',' +
                   fmt(s.dxu_linf_time) + ',' +
                   (i < result.cauchy_l2.size() ? fmt(result.cauchy_l2[i]) : "") +
                   '\n';
        ydvl::emit_diagnostics_csv(
            result.series[i], cfg.p0,
            cfg.output_dir + "/sweep_ncut" + std::to_string(s.n_cut) + ".csv");
    }
    const std::string path = cfg.output_dir + "/sweep_summary.csv";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ydvl::IoError("sweep: cannot open '" + path + "'");
    os << summary;
    std::fputs(summary.c_str(), stdout);
    return 0;
}

int cmd_twin(const std::string& config_path, std::vector<double> deltas) {
    const ydvl::RunConfig cfg = ydvl::load_config(config_path);
    if (deltas.empty()) deltas = cfg.twin_delta;
    const ydvl::Grid grid(cfg.grid_n);
    const ydvl::DatumRecipe recipe = cfg.datum_recipe();
    ydvl::ScalarField rho0 = ydvl::build_rho0(recipe, grid);
    ydvl::ScalarField omega0 = ydvl::build_omega0(recipe, grid);
    ydvl::validate_datum(rho0, omega0, cfg.rho_star, cfg.rho_upper);

    fs::create_directories(cfg.output_dir);
    std::printf("delta,E0,sup_E,fitted_K,envelope_p4,envelope_p8,envelope_p16\n");
    std::vector<ydvl::StabilityTrace> traces(deltas.size());
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < deltas.size(); ++i) {
        tasks.emplace_back([&, i] {
            ydvl::TwinPerturbation pert;
            pert.delta = deltas[i];
            pert.mode_kx = cfg.twin_mode_kx;
            pert.mode_ky = cfg.twin_mode_ky;
            pert.rho_delta = cfg.twin_rho_delta;
            traces[i] = ydvl::twin_run(rho0, omega0, pert, cfg.step_control(),
                                       cfg.t_final, cfg.rho_star, cfg.rho_upper);
        });
    }
    ydvl::parallel_tasks(std::move(tasks));

    for (size_t i = 0; i < deltas.size(); ++i) {
        const auto& tr = traces[i];
        using ydvl::csv_detail::fmt;
        std::printf("%s,%s,%s,%s,%d,%d,%d\n", fmt(deltas[i]).c_str(),
                    fmt(tr.energy.front()).c_str(), fmt(tr.sup_energy).c_str(),
                    fmt(tr.fitted_k).c_str(), tr.envelope[0].second ? 1 : 0,
                    tr.envelope[1].second ? 1 : 0, tr.envelope[2].second ? 1 : 0);
        std::string body = "t,E\n";
        for (size_t k = 0; k < tr.times.size(); ++k)
            body += fmt(tr.times[k]) + ',' + fmt(tr.energy[k]) + '\n';
        char name[64];
        std::snprintf(name, sizeof name, "twin_delta_%zu.csv", i);
        std::ofstream os(cfg.output_dir + "/" + name, std::ios::binary);
        if (!os) throw ydvl::IoError("twin: cannot write trace file");
        os << body;
    }
    return 0;
}

int cmd_mollify(const std::string& config_path, int n_cut) {
    const ydvl::RunConfig cfg = ydvl::load_config(config_path);
    const ydvl::Grid grid(cfg.grid_n);
    const ydvl::DatumRecipe recipe = cfg.datum_recipe();
    ydvl::ScalarField rho0 = ydvl::build_rho0(recipe, grid);
    ydvl::ScalarField omega0 = ydvl::build_omega0(recipe, grid);
    ydvl::validate_datum(rho0, omega0, cfg.rho_star, cfg.rho_upper);

    const auto m = ydvl::mollify(rho0, omega0, ydvl::MollifierScale{n_cut});
    std::printf("n_cut = %d, epsilon = %.6g\n", n_cut,
                ydvl::MollifierScale{n_cut}.epsilon());
    std::printf("|rho0 - rho0_n|_inf = %.12g\n", m.rho_inf_diff);
    std::printf("|u0 - u0_n|_2      = %.12g\n", m.u_l2_diff);

    fs::create_directories(cfg.output_dir);
    ydvl::FluidState s = ydvl::make_state(m.rho, m.omega, cfg.step_control());
    const std::string path =
        cfg.output_dir + "/mollified_ncut" + std::to_string(n_cut) + ".bin";
    ydvl::write_snapshot(s, path);
    std::printf("mollified state written to %s\n", path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral solver for the density-dependent "
                 "incompressible Euler equations on the 2D torus"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> snapshot_paths;
    std::vector<double> deltas;
    int n_cut = 0;

    CLI::App* run = app.add_subcommand("run", "advance a configured simulation");
    run->add_option("config", config_path, "configuration file")->required();

    CLI::App* diagnose =
        app.add_subcommand("diagnose", "measure snapshots, CSV to stdout");
    diagnose->add_option("snapshots", snapshot_paths, "snapshot files")->required();

    CLI::App* sweep =
        app.add_subcommand("sweep", "regularisation sweep over mollify_scales");
    sweep->add_option("config", config_path, "configuration file")->required();

    CLI::App* twin = app.add_subcommand("twin", "twin-run stability probe");
    twin->add_option("config", config_path, "configuration file")->required();
    twin->add_option("--delta", deltas, "perturbation amplitudes")->delimiter(',');

    CLI::App* mollify =
        app.add_subcommand("mollify", "mollify the configured datum");
    mollify->add_option("config", config_path, "configuration file")->required();
    mollify->add_option("--ncut", n_cut, "frequency cutoff")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (diagnose->parsed()) return cmd_diagnose(snapshot_paths);
        if (sweep->parsed()) return cmd_sweep(config_path);
        if (twin->parsed()) return cmd_twin(config_path, deltas);
        if (mollify->parsed()) return cmd_mollify(config_path, n_cut);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
